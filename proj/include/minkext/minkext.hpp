#pragma once

#include "minkext/exactcore.hpp"
#include "minkext/polyhedron.hpp"
#include "minkext/semigroup.hpp"
#include "minkext/etaspace.hpp"
#include "minkext/extension.hpp"
#include "minkext/minkowski.hpp"
