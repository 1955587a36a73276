// Shared fixtures for the extension / minkowski / acceptance suites.
#pragma once

#include "minkext/extension.hpp"
#include "minkext/minkowski.hpp"

namespace fixtures {

using namespace minkext;

inline QVec qv(std::initializer_list<long> xs) {
    QVec v;
    for (long x : xs) v.push_back(Rat(x));
    return v;
}

inline RationalPolyhedron interval(const Rat& a, const Rat& b) {
    return RationalPolyhedron::from_vrep(1, {QVec{a}, QVec{b}}, {});
}

inline RationalPolyhedron hexagon() {
    return RationalPolyhedron::from_vrep(
        2, {qv({0, 0}), qv({1, 0}), qv({2, 1}), qv({2, 2}), qv({1, 2}), qv({0, 1})}, {});
}

inline RationalPolyhedron cube3() {
    std::vector<QVec> vs;
    for (long x = 0; x <= 1; ++x)
        for (long y = 0; y <= 1; ++y)
            for (long z = 0; z <= 1; ++z) vs.push_back(qv({x, y, z}));
    return RationalPolyhedron::from_vrep(3, vs, {});
}

inline RationalPolyhedron unit_square() {
    return RationalPolyhedron::from_vrep(2, {qv({0, 0}), qv({1, 0}), qv({0, 1}), qv({1, 1})}, {});
}

// The co-Cartesian extension that a Minkowski decomposition induces: the
// Cayley cone's dual pair over (N, cone_Z(P)^dual).
inline ExtensionDiagram cayley_extension_diagram(const RelationOracle& oracle,
                                                 const std::vector<RationalPolyhedron>& parts) {
    size_t d = oracle.eta().polyhedron().dim;
    size_t m1 = parts.size();
    ConeZ cay = cayley_cone(parts);
    auto s2 = semigroup_of_cone(dual_cone(cay));
    std::vector<IVec> t2gens;
    for (size_t i = 0; i < m1; ++i) {
        IVec e(d + m1, 0);
        e[d + i] = 1;
        t2gens.push_back(std::move(e));
    }
    auto upper = SemigroupPair::make(AffineSemigroup::from_generators(d + m1, t2gens), s2);
    auto s = AffineSemigroup::from_generators(d + 1, oracle.hilbert_basis_full());
    IVec r(d + 1, 0);
    r[d] = 1;
    auto lower = SemigroupPair::make(AffineSemigroup::from_generators(d + 1, {r}), s);
    IMat pi(d + 1, d + m1);
    for (size_t i = 0; i < d; ++i) pi[i][i] = 1;
    for (size_t i = 0; i < m1; ++i) pi[d][d + i] = 1;
    ExtensionDiagram dia{upper, lower, pi};
    dia.validate();
    return dia;
}

// locate a functional among the T~ generators
inline size_t gen_index(const UpperPair& up, const Functional& f) {
    for (size_t i = 0; i < up.t_gens.size(); ++i)
        if (up.t_gens[i] == f) return i;
    throw std::runtime_error("generator not found");
}

}  // namespace fixtures
