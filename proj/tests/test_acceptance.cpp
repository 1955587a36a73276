// The acceptance suite: one test case per criterion, each ending in a single
// PASS line.  Tolerances are exact everywhere; all expected values are pinned
// in code.

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>

#include "fixtures.hpp"

using namespace minkext;
using namespace fixtures;

namespace {

QVec raw3(const Rat& t, const Rat& s1, const Rat& s2) { return QVec{t, s1, s2}; }

IVec iv(std::initializer_list<long> xs) {
    IVec v;
    for (long x : xs) v.push_back(Int(x));
    return v;
}

void pass_line(const char* name) { std::printf("[ACCEPTANCE] %s: PASS\n", name); }

struct PinkhamSetup {
    EtaOracle eta;
    RelationOracle oracle;
    DependencySet deps;
    UpperPair up;
    PinkhamSetup()
        : eta(interval(Rat(-1, 2), Rat(1, 2))),
          oracle(eta),
          deps(minimal_dependents(oracle, 4, 6)),
          up(upper_generators(oracle, deps)) {}
};

const PinkhamSetup& pinkham() {
    static PinkhamSetup s;
    return s;
}

}  // namespace

TEST_CASE("criterion 1: hilbert basis of the interval cone") {
    auto c = ConeZ::from_rays(2, {qv({-2, 1}), qv({2, 1})});
    REQUIRE(hilbert_basis(c) == std::vector<IVec>{iv({-2, 1}), iv({-1, 1}), iv({0, 1}),
                                                  iv({1, 1}), iv({2, 1})});
    pass_line("1 hilbert basis");
}

TEST_CASE("criterion 2: eta tables") {
    const auto& o = pinkham().eta;
    REQUIRE(o.eta(qv({1})) == Rat(1, 2));
    REQUIRE(o.eta(qv({-1})) == Rat(1, 2));
    REQUIRE(o.eta_Z(qv({1})) == 1);
    REQUIRE(o.eta_Z(qv({-1})) == 1);
    REQUIRE(o.eta(qv({2})) == 1);
    REQUIRE(o.eta(qv({-2})) == 1);
    REQUIRE(o.eta_Z(qv({2})) == 1);
    REQUIRE(o.eta_Z(qv({-2})) == 1);
    REQUIRE(o.eta(qv({0})) == 0);
    REQUIRE(o.eta_Z(qv({0})) == 0);
    pass_line("2 eta tables");
}

TEST_CASE("criterion 3: eta~ tables") {
    const auto& s = pinkham();
    const auto& o = s.eta;
    auto F = [&](const QVec& raw) { return o.functional_from_raw(raw); };
    // the five single values, both columns
    REQUIRE(o.eta_tilde(qv({-2})) == F(raw3(2, -1, 0)));
    REQUIRE(o.eta_tilde(qv({-1})) == F(raw3(1, Rat(-1, 2), 0)));
    REQUIRE(o.eta_tilde(qv({0})) == F(raw3(0, 0, 0)));
    REQUIRE(o.eta_tilde(qv({1})) == F(raw3(0, Rat(1, 2), 0)));
    REQUIRE(o.eta_tilde(qv({2})) == F(raw3(0, 1, 0)));
    REQUIRE(o.eta_tilde_Z(qv({-2})) == F(raw3(2, -1, 0)));
    REQUIRE(o.eta_tilde_Z(qv({-1})) == F(raw3(1, Rat(-1, 2), Rat(1, 2))));
    REQUIRE(o.eta_tilde_Z(qv({0})) == F(raw3(0, 0, 0)));
    REQUIRE(o.eta_tilde_Z(qv({1})) == F(raw3(0, 1, 0)));
    REQUIRE(o.eta_tilde_Z(qv({2})) == F(raw3(0, 1, 0)));
    // the six pairwise values
    auto rel = [&](long a, long b) {
        return s.oracle.eta_tilde_Z_relation(std::vector<QVec>{qv({a}), qv({b})});
    };
    REQUIRE(rel(1, 1) == F(raw3(0, 1, 0)));
    REQUIRE(rel(-1, -1) == F(raw3(0, 0, 1)));
    REQUIRE(rel(-1, 1) == F(raw3(1, Rat(1, 2), Rat(1, 2))));
    REQUIRE(rel(-2, 2) == F(raw3(2, 0, 0)));
    REQUIRE(rel(-1, 2) == F(raw3(1, Rat(-1, 2), Rat(1, 2))));
    REQUIRE(rel(-2, 1) == F(raw3(1, Rat(1, 2), Rat(-1, 2))));
    pass_line("3 eta~ tables");
}

TEST_CASE("criterion 4: universal extension generators and ranks") {
    const auto& s = pinkham();
    std::set<QVec> got;
    for (const auto& g : s.up.t_gens) got.insert(g.coords);
    std::set<QVec> expect{
        s.eta.functional_from_raw(raw3(0, 1, 0)).coords,
        s.eta.functional_from_raw(raw3(0, 0, 1)).coords,
        s.eta.functional_from_raw(raw3(1, Rat(1, 2), Rat(-1, 2))).coords,
        s.eta.functional_from_raw(raw3(1, Rat(-1, 2), Rat(1, 2))).coords,
    };
    REQUIRE(got == expect);
    std::vector<IVec> rows;
    for (const auto& g : s.up.t_gens) rows.push_back(to_ivec(g.coords));
    REQUIRE(group_basis(rows).size() == 3);
    auto dia = upper_pair_diagram(s.oracle, s.up);
    REQUIRE(dia.upper.s.rank == 4);
    REQUIRE(group_basis(dia.upper.s.generators).size() == 4);
    pass_line("4 universal extension");
}

TEST_CASE("criterion 5: the two dual Kodaira-Spencer matrices") {
    const auto& s = pinkham();
    size_t i_s1 = gen_index(s.up, s.eta.functional_from_raw(raw3(0, 1, 0)));
    size_t i_s2 = gen_index(s.up, s.eta.functional_from_raw(raw3(0, 0, 1)));
    size_t i_a = gen_index(s.up, s.eta.functional_from_raw(raw3(1, Rat(1, 2), Rat(-1, 2))));
    size_t i_b = gen_index(s.up, s.eta.functional_from_raw(raw3(1, Rat(-1, 2), Rat(1, 2))));
    auto as_matrix = [&](const std::vector<IVec>& rows) {
        std::vector<std::vector<Int>> m(2, std::vector<Int>(4));
        for (size_t r = 0; r < 2; ++r) {
            m[r][0] = rows[r][i_s1];
            m[r][1] = rows[r][i_s2];
            m[r][2] = rows[r][i_a];
            m[r][3] = rows[r][i_b];
        }
        return m;
    };
    using M = std::vector<std::vector<Int>>;
    M artin{{1, 0, 1, 0}, {0, 1, 0, 1}};
    M qg{{1, 1, 0, 0}, {0, 0, 1, 1}};
    // route one: the pairing matrices
    REQUIRE(as_matrix(kodaira_dual_map(s.eta, s.up,
                                       {raw3(Rat(1, 2), 1, 0), raw3(Rat(1, 2), 0, 1)})) == artin);
    REQUIRE(as_matrix(kodaira_dual_map(s.eta, s.up, {raw3(0, 1, 1), raw3(1, 0, 0)})) == qg);
    // route two: the forced morphism into the Cayley extensions
    auto images_matrix = [&](const std::vector<RationalPolyhedron>& parts) {
        auto target = cayley_extension_diagram(s.oracle, parts);
        InitialMorphism ell(s.oracle, target, 3, 10);
        auto data = ell.morphism(s.up, 4);
        REQUIRE(data.well_defined);
        std::vector<IVec> rows(2, IVec(4, 0));
        std::vector<size_t> order{i_s1, i_s2, i_a, i_b};
        for (size_t col = 0; col < 4; ++col) {
            REQUIRE(data.gen_images[order[col]][0] == 0);
            rows[0][col] = data.gen_images[order[col]][1];
            rows[1][col] = data.gen_images[order[col]][2];
        }
        M m(2, std::vector<Int>(4));
        for (size_t r = 0; r < 2; ++r)
            for (size_t c = 0; c < 4; ++c) m[r][c] = rows[r][c];
        return m;
    };
    REQUIRE(images_matrix({interval(Rat(-1, 2), Rat(0)), interval(Rat(0), Rat(1, 2))}) == artin);
    REQUIRE(images_matrix({interval(Rat(-1, 2), Rat(-1, 2)), interval(Rat(0), Rat(1))}) == qg);
    pass_line("5 dual matrices");
}

TEST_CASE("criterion 6: hexagon summand cone") {
    auto sc = summand_cone(hexagon());
    REQUIRE(sc.dim == 4);
    REQUIRE(sc.extreme_rays.size() == 5);
    pass_line("6 hexagon");
}

TEST_CASE("criterion 7: negative-s pathology") {
    EtaOracle eta(interval(Rat(-1, 3), Rat(1, 4)));
    Xi xi = make_xi(eta, raw3(Rat(1, 7), 1, -1));
    REQUIRE(xi.in_t_lattice);
    auto res = psi_summand(eta, xi);
    REQUIRE(res.summand == interval(Rat(-1, 3), Rat(-1, 4)));
    Xi xi2 = make_xi(eta, raw3(Rat(6, 7), 0, 2));
    auto res2 = psi_summand(eta, xi2);
    auto rep = is_lattice_friendly(eta, {res.summand, res2.summand});
    REQUIRE_FALSE(rep.lattice_friendly);
    REQUIRE(rep.verdicts_agree);
    pass_line("7 negative-s pathology");
}

TEST_CASE("criterion 8: kappa non-additivity") {
    auto p = interval(Rat(1, 2), Rat(3, 4));
    EtaOracle eta(p);
    REQUIRE(kodaira_spencer(p, p).flat() == raw3(1, 1, 1));
    auto k0 = kodaira_spencer(p, interval(Rat(0), Rat(1, 4)));
    auto k1 = kodaira_spencer(p, interval(Rat(1, 2), Rat(1, 2)));
    REQUIRE(k0.flat() == raw3(1, 0, 1));
    REQUIRE(k1.flat() == raw3(0, 1, 1));
    REQUIRE_FALSE(in_tspace(eta.tspace(), k0.flat()));
    REQUIRE_FALSE(in_tspace(eta.tspace(), k1.flat()));
    pass_line("8 kappa non-additivity");
}

TEST_CASE("criterion 9: relative boundaries and the freeness witness") {
    auto s = AffineSemigroup::from_generators(
        2, {iv({-2, 1}), iv({-1, 1}), iv({0, 1}), iv({1, 1}), iv({2, 1})});
    // closed forms of the boundaries up to height 3
    auto closed_t0 = [](int maxb) {
        std::vector<IVec> out{iv({0, 0})};
        for (long b = 1; b <= maxb; ++b) {
            out.push_back(IVec{Int(2 * b), Int(b)});
            out.push_back(IVec{Int(-2 * b), Int(b)});
            out.push_back(IVec{Int(2 * b - 1), Int(b)});
            out.push_back(IVec{Int(-(2 * b - 1)), Int(b)});
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto closed_t1 = [](int maxb) {
        std::vector<IVec> out{iv({0, 0})};
        for (long b = 1; b <= maxb; ++b) {
            out.push_back(IVec{Int(2 * b), Int(b)});
            out.push_back(IVec{Int(-2 * b), Int(b)});
            out.push_back(IVec{Int(-2 * b + 1), Int(b)});
            out.push_back(IVec{Int(-2 * b + 2), Int(b)});
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto t0 = SemigroupPair::make(AffineSemigroup::from_generators(2, {iv({0, 1})}), s);
    REQUIRE(relative_boundary(t0, 3) == closed_t0(3));
    auto t1 = SemigroupPair::make(AffineSemigroup::from_generators(2, {iv({1, 1})}), s);
    REQUIRE(relative_boundary(t1, 3) == closed_t1(3));
    // the non-freeness witness of the cone example
    auto pair = SemigroupPair::make(
        AffineSemigroup::from_generators(2, {iv({-1, 1}), iv({1, 1})}), s);
    REQUIRE_FALSE(is_free(pair, 4).free_within_bound);
    auto dec = all_decompositions(pair, iv({4, 4}), 4);
    REQUIRE(std::find(dec.begin(), dec.end(), std::pair(iv({0, 0}), iv({4, 4}))) != dec.end());
    REQUIRE(std::find(dec.begin(), dec.end(), std::pair(iv({4, 2}), iv({0, 2}))) != dec.end());
    pass_line("9 relative boundaries");
}

TEST_CASE("criterion 10a: independence equivalence on the full grid") {
    std::vector<RationalPolyhedron> polys{
        interval(Rat(-1, 2), Rat(1, 2)),
        interval(Rat(1, 2), Rat(3, 4)),
        RationalPolyhedron::from_vrep(2, {QVec{Rat(-1, 6), Rat(1, 2)}, QVec{Rat(2, 3), Rat(1, 2)}},
                                      {}),
        RationalPolyhedron::from_vrep(2, {QVec{Rat(-1, 2), Rat(1, 2)}, QVec{Rat(1, 3), Rat(1, 2)}},
                                      {}),
    };
    for (const auto& p : polys) {
        EtaOracle eta(p);
        RelationOracle oracle(eta);
        auto grid = tail_dual_grid(eta, 4);
        for (const auto& c1 : grid)
            for (const auto& c2 : grid) {
                std::vector<QVec> pr{c1, c2};
                bool z = oracle.eta_Z_relation(pr) == 0;
                bool tz = oracle.eta_tilde_Z_relation(pr).is_zero_functional();
                REQUIRE(z == tz);
            }
    }
    pass_line("10a independence equivalence");
}

TEST_CASE("criterion 10b: path and v(c) independence") {
    auto run = [&](const RationalPolyhedron& p, int bound) {
        EtaOracle eta(p);
        for (const auto& c : tail_dual_grid(eta, bound)) {
            REQUIRE(eta.eta_tilde(c, std::nullopt, 0) == eta.eta_tilde(c, std::nullopt, 1));
            REQUIRE(eta.eta_tilde_Z(c, std::nullopt, 0) == eta.eta_tilde_Z(c, std::nullopt, 1));
            // all minimizing vertices give the same liftings
            Rat best = -eta.eta(c);
            for (size_t v = 0; v < eta.polyhedron().vertices.size(); ++v) {
                if (dot(eta.polyhedron().vertices[v], c) != best) continue;
                REQUIRE(eta.eta_tilde_Z(c, v) == eta.eta_tilde_Z(c));
            }
        }
    };
    run(hexagon(), 3);
    run(cube3(), 2);
    pass_line("10b path and vertex independence");
}

TEST_CASE("criterion 10c: psi additivity and the kappa/psi inverse on B") {
    for (auto poly : {interval(Rat(-1, 2), Rat(1, 2)), interval(Rat(0), Rat(2))}) {
        EtaOracle eta(poly);
        auto cat = enumerate_lattice_friendly(eta);
        for (const auto& x1 : cat.b_set) {
            auto q1 = psi_summand(eta, make_xi(eta, x1)).summand;
            REQUIRE(kodaira_spencer(eta.polyhedron(), q1).flat() == x1);
            REQUIRE(psi_summand(eta, make_xi(eta, kodaira_spencer(eta.polyhedron(), q1).flat()))
                        .summand == q1);
            for (const auto& x2 : cat.b_set) {
                auto q2 = psi_summand(eta, make_xi(eta, x2)).summand;
                REQUIRE(minkowski_sum(q1, q2) ==
                        psi_summand(eta, make_xi(eta, add(x1, x2))).summand);
            }
        }
    }
    pass_line("10c psi additivity and inverse");
}

TEST_CASE("criterion 10d: the boundary of the universal pair") {
    const auto& s = pinkham();
    auto rep = verify_upper_pair(s.oracle, s.up, 3);
    REQUIRE(rep.boundary_forward);
    REQUIRE(rep.boundary_backward);
    REQUIRE(rep.kernel_trivial);
    REQUIRE(rep.boundary_bijection);
    pass_line("10d universal boundary");
}

TEST_CASE("criterion 10e: C1 => C2 => C3 over twenty diagrams") {
    std::vector<std::pair<ExtensionDiagram, int>> diagrams;
    // 1. numerical semigroup counterexample: C2 holds, C1 fails
    diagrams.push_back({{SemigroupPair::make(AffineSemigroup::from_generators(1, {}),
                                             AffineSemigroup::from_generators(1, {iv({2}), iv({3})})),
                         SemigroupPair::make(AffineSemigroup::from_generators(1, {}),
                                             AffineSemigroup::from_generators(1, {iv({1})})),
                         identity_imat(1)},
                        6});
    // 2. diagonal counterexample: C3 holds, C2 fails
    diagrams.push_back({{SemigroupPair::make(AffineSemigroup::from_generators(1, {}),
                                             AffineSemigroup::from_generators(1, {iv({1})})),
                         SemigroupPair::make(AffineSemigroup::from_generators(2, {iv({1, 1})}),
                                             AffineSemigroup::from_generators(
                                                 2, {iv({1, 0}), iv({0, 1})})),
                         IMat(std::vector<IVec>{iv({1}), iv({1})})},
                        5});
    auto pinkham_s = AffineSemigroup::from_generators(
        2, {iv({-2, 1}), iv({-1, 1}), iv({0, 1}), iv({1, 1}), iv({2, 1})});
    auto pinkham_pair =
        SemigroupPair::make(AffineSemigroup::from_generators(2, {iv({0, 1})}), pinkham_s);
    // 3-4. identity diagrams
    diagrams.push_back({{pinkham_pair, pinkham_pair, identity_imat(2)}, 3});
    {
        auto diag_pair = SemigroupPair::make(
            AffineSemigroup::from_generators(2, {iv({1, 1})}),
            AffineSemigroup::from_generators(2, {iv({1, 0}), iv({0, 1})}));
        diagrams.push_back({{diag_pair, diag_pair, identity_imat(2)}, 4});
    }
    // 5-6. the two Cayley extensions of the interval
    const auto& pk = pinkham();
    diagrams.push_back({cayley_extension_diagram(
                            pk.oracle, {interval(Rat(-1, 2), Rat(0)), interval(Rat(0), Rat(1, 2))}),
                        3});
    diagrams.push_back({cayley_extension_diagram(pk.oracle, {interval(Rat(-1, 2), Rat(-1, 2)),
                                                             interval(Rat(0), Rat(1))}),
                        3});
    // 7-12. universal extensions of assorted polyhedra
    auto universal = [&](const RationalPolyhedron& p, int cap, int verify) {
        static std::vector<std::unique_ptr<EtaOracle>> etas;
        static std::vector<std::unique_ptr<RelationOracle>> oracles;
        etas.push_back(std::make_unique<EtaOracle>(p));
        oracles.push_back(std::make_unique<RelationOracle>(*etas.back()));
        auto& oracle = *oracles.back();
        auto up = upper_generators(oracle, minimal_dependents(oracle, cap, verify));
        return upper_pair_diagram(oracle, up);
    };
    diagrams.push_back({universal(interval(Rat(-1, 2), Rat(1, 2)), 4, 6), 3});
    diagrams.push_back({universal(interval(Rat(0), Rat(1)), 4, 6), 3});
    diagrams.push_back({universal(unit_square(), 4, 5), 2});
    diagrams.push_back({universal(interval(Rat(1, 2), Rat(3, 4)), 4, 5), 3});
    diagrams.push_back({universal(interval(Rat(0), Rat(2)), 4, 5), 3});
    diagrams.push_back({universal(interval(Rat(-1, 3), Rat(1, 4)), 4, 5), 3});
    // 13. Cayley extension of [0,2] = [0,1] + [0,1]
    {
        EtaOracle eta02(interval(Rat(0), Rat(2)));
        RelationOracle o02(eta02);
        diagrams.push_back({cayley_extension_diagram(
                                o02, {interval(Rat(0), Rat(1)), interval(Rat(0), Rat(1))}),
                            3});
    }
    // 14. single-part Cayley: the pair over itself in disguise
    diagrams.push_back({cayley_extension_diagram(pk.oracle, {interval(Rat(-1, 2), Rat(1, 2))}), 3});
    // 15. product extension S x N with the section into T
    {
        std::vector<IVec> sgens;
        for (const auto& g : pinkham_s.generators) {
            IVec h = g;
            h.push_back(0);
            sgens.push_back(h);
        }
        sgens.push_back(iv({0, 0, 1}));
        auto upper = SemigroupPair::make(
            AffineSemigroup::from_generators(3, {iv({0, 1, 0}), iv({0, 0, 1})}),
            AffineSemigroup::from_generators(3, sgens));
        diagrams.push_back(
            {{upper, pinkham_pair, IMat(std::vector<IVec>{iv({1, 0, 0}), iv({0, 1, 1})})}, 3});
    }
    // 16-17. pushouts of the universal extension
    {
        auto dia = universal(interval(Rat(-1, 2), Rat(1, 2)), 4, 6);
        diagrams.push_back({pushout(dia, {dia.upper.t, identity_imat(4), dia.pi}, 3), 3});
        diagrams.push_back({pushout(dia, {dia.lower.t, dia.pi, identity_imat(2)}, 3), 3});
    }
    // 18. the trivial pair
    {
        auto trivial = SemigroupPair::make(AffineSemigroup::from_generators(1, {}),
                                           AffineSemigroup::from_generators(1, {}));
        diagrams.push_back({{trivial, trivial, identity_imat(1)}, 3});
    }
    // 19. scaling N over N
    diagrams.push_back({{SemigroupPair::make(AffineSemigroup::from_generators(1, {iv({1})}),
                                             AffineSemigroup::from_generators(1, {iv({1})})),
                         SemigroupPair::make(AffineSemigroup::from_generators(1, {iv({1})}),
                                             AffineSemigroup::from_generators(1, {iv({1})})),
                         IMat(std::vector<IVec>{iv({2})})},
                        4});
    // 20. the hexagon's universal extension
    diagrams.push_back({universal(hexagon(), 4, 5), 2});

    REQUIRE(diagrams.size() == 20);
    std::vector<CocartesianReport> reports;
    for (auto& [dia, bound] : diagrams) {
        dia.validate();
        reports.push_back(check_cocartesian(dia, bound));
    }
    for (const auto& rep : reports) {
        if (rep.c1.pass) REQUIRE(rep.c2.pass);   // C1 => C2
        if (rep.c2.pass) REQUIRE(rep.c3.pass);   // C2 => C3
    }
    // both counterexample shapes really occur
    REQUIRE_FALSE(reports[0].c1.pass);
    REQUIRE(reports[0].c2.pass);
    REQUIRE(reports[1].c3.pass);
    REQUIRE_FALSE(reports[1].c2.pass);
    pass_line("10e C1 => C2 => C3 on twenty diagrams");
}

TEST_CASE("criterion 10f: morphism well-definedness on both components") {
    const auto& s = pinkham();
    for (auto parts : {std::vector<RationalPolyhedron>{interval(Rat(-1, 2), Rat(0)),
                                                       interval(Rat(0), Rat(1, 2))},
                       std::vector<RationalPolyhedron>{interval(Rat(-1, 2), Rat(-1, 2)),
                                                       interval(Rat(0), Rat(1))}}) {
        auto target = cayley_extension_diagram(s.oracle, parts);
        InitialMorphism ell(s.oracle, target, 3, 10);
        auto data = ell.morphism(s.up, 4);
        REQUIRE(data.well_defined);
        REQUIRE_FALSE(data.failure.has_value());
    }
    pass_line("10f morphism well-definedness");
}

TEST_CASE("criterion 10g: the lattice-friendly catalog of the interval") {
    EtaOracle eta(interval(Rat(-1, 2), Rat(1, 2)));
    auto cat = enumerate_lattice_friendly(eta);
    REQUIRE(cat.b_set.size() == 6);
    std::vector<std::vector<QVec>> nontrivial;
    for (const auto& dec : cat.decompositions)
        if (dec.size() >= 2) nontrivial.push_back(dec);
    REQUIRE(nontrivial.size() == 2);
    for (auto& dec : nontrivial) std::sort(dec.begin(), dec.end(), lex_less);
    std::sort(nontrivial.begin(), nontrivial.end());
    std::vector<std::vector<QVec>> expect{
        {raw3(0, 1, 1), raw3(1, 0, 0)},
        {raw3(Rat(1, 2), 0, 1), raw3(Rat(1, 2), 1, 0)},
    };
    std::sort(expect.begin(), expect.end());
    REQUIRE(nontrivial == expect);
    for (const auto& rep : cat.reports) REQUIRE(rep.lattice_friendly);
    pass_line("10g lattice-friendly catalog");
}
