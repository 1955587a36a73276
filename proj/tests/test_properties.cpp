// Randomized battery: small random rational polytopes run through the whole
// stack.  The generator is a fixed LCG, so failures reproduce.

#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace minkext;
using namespace fixtures;

namespace {

struct Lcg {
    uint64_t s;
    explicit Lcg(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s = s * 6364136223846793005ull + 1442695040888963407ull;
        return s >> 11;
    }
    Rat rat() {
        // tame numerators/denominators keep the dual cones at desk scale
        long num = long(next() % 9) - 4;
        long den = long(next() % 2) + 1;
        return Rat(num, den);
    }
};

std::optional<RationalPolyhedron> random_polytope(Lcg& rng, size_t dim) {
    size_t n = 2 + rng.next() % 4;
    std::vector<QVec> vs;
    for (size_t i = 0; i < n; ++i) {
        QVec v(dim);
        for (size_t k = 0; k < dim; ++k) v[k] = rng.rat();
        vs.push_back(std::move(v));
    }
    std::sort(vs.begin(), vs.end(), lex_less);
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    try {
        return RationalPolyhedron::from_vrep(dim, vs, {});
    } catch (const Error&) {
        return std::nullopt;  // degenerate sample
    }
}

}  // namespace

TEST_CASE("random polytopes survive the whole stack") {
    Lcg rng(0x5eed);
    int built = 0;
    for (int trial = 0; trial < 60 && built < 14; ++trial) {
        size_t dim = 1 + rng.next() % 3;
        auto maybe = random_polytope(rng, dim);
        if (!maybe) continue;
        ++built;
        const auto& p = *maybe;
        CAPTURE(trial, dim, p.vertices.size());

        // dual representations agree
        REQUIRE(RationalPolyhedron::from_hrep(p.dim, p.facets, p.affine_hull()) == p);
        // oriented cycles close (validated internally)
        auto cycles = p.face_cycles();
        for (const auto& cyc : cycles) {
            QVec sum = qvec_zero(p.dim);
            for (size_t e = 0; e < p.compact_edges().size(); ++e)
                if (cyc.signs[e] != 0)
                    sum = add(sum, scale(Rat(cyc.signs[e]), p.compact_edges()[e].dir));
            REQUIRE(is_zero(sum));
        }

        EtaOracle eta(p);
        REQUIRE(in_tplus(eta.tspace(), eta.tspace().oneone));
        REQUIRE(eta.tlattice().member(eta.tspace().oneone));
        auto grid = tail_dual_grid(eta, 2);
        for (const auto& c : grid) {
            REQUIRE(eta.pi(eta.eta_tilde(c)) == eta.eta(c));
            REQUIRE(eta.pi(eta.eta_tilde_Z(c)) == Rat(eta.eta_Z(c)));
            REQUIRE(eta.dual_lattice_member(eta.eta_tilde_Z(c)));
            REQUIRE(eta.eta_tilde(c, std::nullopt, 0) == eta.eta_tilde(c, std::nullopt, 1));
        }
        // kappa inverts psi on the B slice; full catalogs only at small sizes
        auto b_set = lattice_friendly_b_set(eta);
        for (const auto& xi : b_set) {
            auto q = psi_summand(eta, make_xi(eta, xi)).summand;
            REQUIRE(kodaira_spencer(eta.polyhedron(), q).flat() == xi);
        }
        if (b_set.size() <= 12) {
            auto cat = enumerate_lattice_friendly(eta);
            for (const auto& rep : cat.reports) {
                REQUIRE(rep.lattice_friendly);
                REQUIRE(rep.verdicts_agree);
            }
        }

        // relation calculus and the universal extension, kept at desk scale
        if (dim <= 2) {
            RelationOracle oracle(eta);
            for (const auto& c1 : grid)
                for (const auto& c2 : grid) {
                    std::vector<QVec> pr{c1, c2};
                    REQUIRE((oracle.eta_Z_relation(pr) == 0) ==
                            oracle.eta_tilde_Z_relation(pr).is_zero_functional());
                }
            if (oracle.dual_pointed() && oracle.k() <= 6) {
                auto deps = minimal_dependents(oracle, 3, 4);
                if (deps.complete) {
                    auto up = upper_generators(oracle, deps);
                    auto rep = check_cocartesian(upper_pair_diagram(oracle, up), 2);
                    REQUIRE(rep.c1.pass);
                    REQUIRE(rep.c2.pass);
                    REQUIRE(rep.c3.pass);
                }
            }
        }
    }
    REQUIRE(built >= 10);
}

TEST_CASE("random segments satisfy the lattice characterization") {
    // for P = [v,w]: d(P) t - {v} s_v + {w} s_w lies in the dual lattice
    Lcg rng(0xabcd);
    for (int trial = 0; trial < 40; ++trial) {
        Rat v = rng.rat(), w = rng.rat();
        if (v == w) continue;
        if (v > w) std::swap(v, w);
        EtaOracle eta(interval(v, w));
        // the oracle may have translated P to put a lattice vertex at zero
        Rat v2 = eta.polyhedron().vertices[0][0], w2 = eta.polyhedron().vertices[1][0];
        QVec raw{w2 - v2, -frac_up(v2), frac_up(w2)};
        REQUIRE(eta.dual_lattice_member(eta.functional_from_raw(raw)));
    }
}

TEST_CASE("lattice polytopes with primitive edges have the t-integral lattice") {
    EtaOracle eta(unit_square());
    // all s vanish; membership is integrality of the edge dilations
    REQUIRE(eta.tlattice().member(eta.tspace().oneone));
    REQUIRE_FALSE(eta.tlattice().member(scale(Rat(1, 2), eta.tspace().oneone)));
    // a basis vector of V(P) with integral t is in, its half is not
    for (const auto& b : eta.tspace().basis) {
        REQUIRE(eta.tlattice().member(b));
        REQUIRE(is_integral(b));
        REQUIRE_FALSE(eta.tlattice().member(scale(Rat(1, 2), b)));
    }
}
