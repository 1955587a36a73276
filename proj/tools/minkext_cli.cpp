// minkext: exact Minkowski-summand and semigroup-extension calculator.
//
// Subcommands: analyze | extension | decompose | summand | morphism | check.
// Polyhedra, semigroups and diagrams travel as JSON; human summaries go to
// stdout and the machine-readable report to --out.  Exit codes: 0 all good,
// 1 failed checks, 2 parse errors, 3 violated invariants.

#include "minkext/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace minkext;

namespace {

Json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::ParseError, std::string("invalid JSON: ") + e.what());
    }
}

void emit(const Json& report, const std::string& out_path) {
    if (out_path.empty()) return;
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
}

unsigned long seed_from_env() {
    const char* s = std::getenv("MINKEXT_SEED");
    return s ? std::strtoul(s, nullptr, 10) : 0;
}

// deterministic sample order; a seed only permutes the processing order
std::vector<size_t> sample_order(size_t n) {
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    unsigned long seed = seed_from_env();
    if (seed != 0) {
        unsigned long state = seed;
        for (size_t i = n; i > 1; --i) {
            state = state * 6364136223846793005ull + 1442695040888963407ull;
            std::swap(idx[i - 1], idx[(state >> 16) % i]);
        }
    }
    return idx;
}

struct CheckLedger {
    Json entries = Json::array();
    bool all_pass = true;

    void run(const std::string& name, const std::function<bool(std::string&)>& fn) {
        std::string detail;
        bool ok = false;
        try {
            ok = fn(detail);
        } catch (const std::exception& e) {
            detail = e.what();
        }
        entries.push_back(Json{{"name", name}, {"status", ok ? "pass" : "fail"},
                               {"detail", detail}});
        std::cout << (ok ? "  [pass] " : "  [FAIL] ") << name
                  << (detail.empty() ? "" : "  (" + detail + ")") << "\n";
        if (!ok) all_pass = false;
    }
};

Json edge_data_json(const EtaOracle& eta) {
    Json arr = Json::array();
    const auto& edges = eta.polyhedron().compact_edges();
    auto smooth = smooth_in_codim_two(eta.polyhedron());
    for (const auto& d : eta.edge_data()) {
        arr.push_back(Json{{"edge", d.edge},
                           {"endpoints", Json::array({edges[d.edge].i, edges[d.edge].j})},
                           {"g", d.g.str()},
                           {"short_forward", d.short_forward},
                           {"short_backward", d.short_backward},
                           {"lattice_disjoint", d.lattice_disjoint},
                           {"smooth_in_codim_two", smooth[d.edge]}});
    }
    return arr;
}

Json eta_table_json(const EtaOracle& eta, int cgrid) {
    Json arr = Json::array();
    for (const auto& c : tail_dual_grid(eta, cgrid)) {
        Json row;
        row["c"] = qvec_to_json(c);
        row["eta"] = rat_to_string(eta.eta(c));
        row["eta_Z"] = eta.eta_Z(c).str();
        row["v"] = eta.v_of(c);
        row["eta_tilde"] = functional_to_json(eta.eta_tilde(c));
        row["eta_tilde_Z"] = functional_to_json(eta.eta_tilde_Z(c));
        arr.push_back(std::move(row));
    }
    return arr;
}

Json tspace_json(const EtaOracle& eta) {
    const auto& ts = eta.tspace();
    Json j;
    j["r"] = ts.r;
    j["m"] = ts.m;
    j["dim"] = ts.dim();
    Json perp = Json::array();
    for (const auto& row : ts.perp) perp.push_back(qvec_to_json(row));
    j["perp_generators"] = perp;
    Json basis = Json::array();
    for (const auto& row : ts.basis) basis.push_back(qvec_to_json(row));
    j["basis"] = basis;
    j["oneone"] = qvec_to_json(ts.oneone);
    Json tplus = Json::array();
    for (const auto& h : tplus_hrep(ts))
        tplus.push_back(Json{{"a", qvec_to_json(h.a)}, {"b", rat_to_string(h.b)}});
    j["tplus_hrep"] = tplus;
    return j;
}

Json extension_json(const RelationOracle& oracle, const UpperPair& up, int cap, int verify,
                    int bound) {
    Json j;
    Json hb = Json::array();
    for (const auto& h : oracle.hilbert_basis_full()) hb.push_back(ivec_to_json(h));
    j["hilbert_basis"] = hb;
    j["dual_pointed"] = oracle.dual_pointed();
    Json tg = Json::array();
    for (size_t g = 0; g < up.t_gens.size(); ++g) {
        Json e = functional_to_json(up.t_gens[g]);
        e["witness_multiset"] = up.t_gen_multisets[g];
        tg.push_back(std::move(e));
    }
    j["t_tilde_generators"] = tg;
    Json sg = Json::array();
    for (const auto& [a, f] : up.s_gens)
        sg.push_back(Json::array({qvec_to_json(a), functional_to_json(f)}));
    j["s_tilde_generators"] = sg;
    j["dependency_cap"] = cap;
    j["verified_to_degree"] = verify;
    Json deps = Json::array();
    for (const auto& m : up.deps.minimal) deps.push_back(m);
    j["minimal_dependents"] = deps;
    auto rep = verify_upper_pair(oracle, up, bound);
    Json checks;
    checks["bound"] = bound;
    checks["boundary_forward"] = rep.boundary_forward;
    checks["boundary_backward"] = rep.boundary_backward;
    checks["kernel_trivial"] = rep.kernel_trivial;
    checks["boundary_bijection"] = rep.boundary_bijection;
    Json sw = Json::array();
    for (const auto& [v, pair] : rep.s_witnesses)
        sw.push_back(Json{{"vertex", v},
                          {"c1", qvec_to_json(pair.first)},
                          {"c2", qvec_to_json(pair.second)}});
    checks["s_witnesses"] = sw;
    Json tm = Json::array();
    for (const auto& [e, a] : rep.t_multiples) tm.push_back(Json{{"edge", e}, {"multiple", a.str()}});
    checks["t_multiples"] = tm;
    checks["failures"] = rep.failures;
    j["checks"] = checks;
    return j;
}

Json decomposition_catalog_json(const EtaOracle& eta) {
    auto cat = enumerate_lattice_friendly(eta);
    Json j;
    Json b = Json::array();
    for (const auto& xi : cat.b_set) b.push_back(qvec_to_json(xi));
    j["b_set"] = b;
    j["b_count"] = cat.b_set.size();
    Json decs = Json::array();
    for (size_t i = 0; i < cat.decompositions.size(); ++i) {
        Json d;
        Json xis = Json::array();
        Json summands = Json::array();
        for (const auto& xi : cat.decompositions[i]) {
            xis.push_back(qvec_to_json(xi));
            summands.push_back(polyhedron_to_json(psi_summand(eta, make_xi(eta, xi)).summand));
        }
        d["xi_list"] = xis;
        d["summands"] = summands;
        const auto& rep = cat.reports[i];
        d["lattice_friendly"] = rep.lattice_friendly;
        d["verdicts_agree"] = rep.verdicts_agree;
        Json ks = Json::array();
        for (const auto& k : rep.ks) ks.push_back(qvec_to_json(k.flat()));
        d["kappa"] = ks;
        Json mus = Json::array();
        for (const auto& mu : rep.exception_index)
            mus.push_back(mu ? Json(*mu) : Json(nullptr));
        d["exception_index"] = mus;
        Json corr = Json::array();
        for (const auto& table : rep.correspondences) {
            Json t = Json::array();
            for (const auto& w : table) t.push_back(qvec_to_json(w));
            corr.push_back(std::move(t));
        }
        d["vertex_correspondences"] = corr;
        decs.push_back(std::move(d));
    }
    j["decompositions"] = decs;
    return j;
}

Json check_suite(const RationalPolyhedron& input, const std::string& suite, int bound,
                 CheckLedger& ledger) {
    EtaOracle eta(input);
    bool want_poly = suite == "all" || suite == "polyhedron";
    bool want_eta = suite == "all" || suite == "eta";
    bool want_ext = suite == "all" || suite == "extension";
    bool want_mink = suite == "all" || suite == "minkowski";
    int ext_bound = std::min(bound, 3);

    if (want_poly) {
        ledger.run("vrep_hrep_round_trip", [&](std::string&) {
            return RationalPolyhedron::from_hrep(eta.polyhedron().dim, eta.polyhedron().facets,
                                                 eta.polyhedron().affine_hull()) ==
                   eta.polyhedron();
        });
        ledger.run("face_cycles_close", [&](std::string& d) {
            d = std::to_string(eta.polyhedron().face_cycles().size()) + " cycles";
            return true;  // cycle construction validates closure internally
        });
    }
    if (want_eta) {
        ledger.run("oneone_in_tplus_and_lattice", [&](std::string&) {
            return in_tplus(eta.tspace(), eta.tspace().oneone) &&
                   eta.tlattice().member(eta.tspace().oneone);
        });
        ledger.run("pi_projects_liftings (|c| <= " + std::to_string(bound) + ")",
                   [&](std::string&) {
                       for (const auto& c : tail_dual_grid(eta, bound)) {
                           if (eta.pi(eta.eta_tilde(c)) != eta.eta(c)) return false;
                           if (eta.pi(eta.eta_tilde_Z(c)) != Rat(eta.eta_Z(c))) return false;
                       }
                       return true;
                   });
        ledger.run("eta_tilde_path_independence", [&](std::string&) {
            for (const auto& c : tail_dual_grid(eta, bound))
                if (eta.eta_tilde(c, std::nullopt, 0) != eta.eta_tilde(c, std::nullopt, 1))
                    return false;
            return true;
        });
        ledger.run("eta_tilde_Z_in_dual_lattice", [&](std::string&) {
            for (const auto& c : tail_dual_grid(eta, bound))
                if (!eta.dual_lattice_member(eta.eta_tilde_Z(c))) return false;
            return true;
        });
    }
    if (want_ext) {
        RelationOracle oracle(eta);
        ledger.run("independence_equivalence (|c| <= " + std::to_string(bound) + ")",
                   [&](std::string&) {
                       auto grid = tail_dual_grid(eta, bound);
                       auto order = sample_order(grid.size());
                       for (size_t i : order)
                           for (size_t j : order) {
                               std::vector<QVec> pair{grid[i], grid[j]};
                               bool z = oracle.eta_Z_relation(pair) == 0;
                               bool tz = oracle.eta_tilde_Z_relation(pair).is_zero_functional();
                               if (z != tz) return false;
                           }
                       return true;
                   });
        if (oracle.dual_pointed()) {
            auto deps = minimal_dependents(oracle, 4, 6);
            auto up = upper_generators(oracle, deps);
            ledger.run("dependency_certificate (cap 4, verify 6)",
                       [&](std::string&) { return deps.complete; });
            ledger.run("upper_pair_boundary (bound " + std::to_string(ext_bound) + ")",
                       [&](std::string& d) {
                           auto rep = verify_upper_pair(oracle, up, ext_bound);
                           if (!rep.failures.empty()) d = rep.failures.front();
                           return rep.ok();
                       });
            ledger.run("upper_diagram_cocartesian (bound " + std::to_string(ext_bound) + ")",
                       [&](std::string& d) {
                           auto rep = check_cocartesian(upper_pair_diagram(oracle, up), ext_bound);
                           if (!rep.all())
                               d = !rep.c1.pass ? rep.c1.witness
                                                : (!rep.c2.pass ? rep.c2.witness : rep.c3.witness);
                           return rep.all();
                       });
        }
    }
    if (want_mink) {
        auto cat = enumerate_lattice_friendly(eta);
        ledger.run("psi_additivity_on_B", [&](std::string&) {
            for (const auto& x1 : cat.b_set)
                for (const auto& x2 : cat.b_set) {
                    auto p1 = psi_summand(eta, make_xi(eta, x1)).summand;
                    auto p2 = psi_summand(eta, make_xi(eta, x2)).summand;
                    if (minkowski_sum(p1, p2) !=
                        psi_summand(eta, make_xi(eta, add(x1, x2))).summand)
                        return false;
                }
            return true;
        });
        ledger.run("kappa_psi_inverse_on_B", [&](std::string&) {
            for (const auto& xi : cat.b_set) {
                auto q = psi_summand(eta, make_xi(eta, xi)).summand;
                if (kodaira_spencer(eta.polyhedron(), q).flat() != xi) return false;
            }
            return true;
        });
        ledger.run("lattice_friendly_verdicts_agree", [&](std::string&) {
            for (const auto& rep : cat.reports)
                if (!rep.verdicts_agree || !rep.lattice_friendly) return false;
            return true;
        });
        ledger.run("fiber_product_on_decompositions", [&](std::string&) {
            for (const auto& dec : cat.decompositions)
                if (!dec.empty() && !check_fiber_product(eta, dec)) return false;
            return true;
        });
    }
    Json j;
    j["suite"] = suite;
    j["bound"] = bound;
    j["seed"] = seed_from_env();
    j["checks"] = ledger.entries;
    j["all_pass"] = ledger.all_pass;
    return j;
}

int wrapped_main(int argc, char** argv) {
    CLI::App app{"exact Minkowski summand / semigroup extension calculator"};
    app.require_subcommand(1);

    std::string input_path, out_path, xi_text, target_path, suite = "all";
    int cgrid = 3, cap = 4, verify = 6, bound = 6, morphism_degree = 4;
    bool strict = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("input", input_path, "polyhedron JSON")->required();
        cmd->add_option("--out", out_path, "write the JSON report here");
    };

    auto* c_analyze = app.add_subcommand("analyze", "full report for a polyhedron");
    add_common(c_analyze);
    c_analyze->add_option("--cgrid", cgrid, "max |c|_inf for the eta tables");

    auto* c_ext = app.add_subcommand("extension", "the universal extension (T~, S~)");
    add_common(c_ext);
    c_ext->add_option("--cap", cap, "total degree cap for minimal dependents");
    c_ext->add_option("--verify", verify, "completeness certificate degree");

    auto* c_dec = app.add_subcommand("decompose", "all lattice-friendly decompositions");
    add_common(c_dec);

    auto* c_sum = app.add_subcommand("summand", "the Minkowski summand P_xi");
    add_common(c_sum);
    c_sum->add_option("--xi", xi_text, "coordinates, e.g. \"1/7,1,-1\"")->required();
    c_sum->add_flag("--strict", strict, "reject xi outside T+(P)");

    auto* c_mor = app.add_subcommand("morphism", "the forced map into a target extension");
    add_common(c_mor);
    c_mor->add_option("--target", target_path, "target diagram JSON")->required();
    c_mor->add_option("--bound", bound, "verification bound");
    c_mor->add_option("--degree", morphism_degree, "well-definedness multiset degree");

    auto* c_chk = app.add_subcommand("check", "run the invariant suites");
    add_common(c_chk);
    c_chk->add_option("--suite", suite, "all|polyhedron|eta|extension|minkowski");
    c_chk->add_option("--bound", bound, "grid bound for the brute-force checks");

    CLI11_PARSE(app, argc, argv);

    if (*c_analyze) {
        auto input = polyhedron_from_json(read_json(input_path));
        EtaOracle eta(input);
        RelationOracle oracle(eta);
        Json rep;
        rep["input"] = polyhedron_to_json(eta.polyhedron());
        rep["bounds"] = Json{{"cgrid", cgrid}, {"dependency_cap", cap}, {"verify_degree", verify}};
        rep["normalization"] = Json{{"applied_shift", qvec_to_json(eta.applied_shift())},
                                    {"reference_vertex", eta.vstar()}};
        Json structure;
        structure["vertices"] = eta.polyhedron().vertices.size();
        structure["compact_edges"] = eta.polyhedron().compact_edges().size();
        structure["compact_two_faces"] = eta.polyhedron().compact_two_faces().size();
        structure["tail_rays"] = eta.polyhedron().tail_rays.size();
        rep["structure"] = structure;
        rep["edge_data"] = edge_data_json(eta);
        Json hb = Json::array();
        for (const auto& h : oracle.hilbert_basis_full()) hb.push_back(ivec_to_json(h));
        rep["sigma_dual_hilbert_basis"] = hb;
        rep["eta_table"] = eta_table_json(eta, cgrid);
        rep["tspace"] = tspace_json(eta);
        auto sc = summand_cone(eta.polyhedron());
        Json scj;
        scj["dim_v"] = sc.dim;
        Json rays = Json::array();
        for (const auto& r : sc.extreme_rays) rays.push_back(qvec_to_json(r));
        scj["extreme_rays"] = rays;
        rep["summand_cone"] = scj;
        if (oracle.dual_pointed()) {
            auto deps = minimal_dependents(oracle, cap, verify);
            auto up = upper_generators(oracle, deps);
            rep["extension"] = extension_json(oracle, up, cap, verify, std::min(bound, 3));
        } else {
            rep["extension"] = Json{{"dual_pointed", false}};
        }
        rep["decompositions"] = decomposition_catalog_json(eta);
        CheckLedger ledger;
        std::cout << "analyze: running checks\n";
        rep["checks"] = check_suite(eta.polyhedron(), "all", std::min(bound, 3), ledger);
        emit(rep, out_path);
        std::cout << "vertices " << eta.polyhedron().vertices.size() << ", edges "
                  << eta.polyhedron().compact_edges().size() << ", dim T(P) "
                  << eta.tspace().dim() << ", dim V(P) " << sc.dim << "\n";
        return ledger.all_pass ? 0 : 1;
    }
    if (*c_ext) {
        auto input = polyhedron_from_json(read_json(input_path));
        EtaOracle eta(input);
        RelationOracle oracle(eta);
        Json rep;
        rep["input"] = polyhedron_to_json(eta.polyhedron());
        if (!oracle.dual_pointed()) {
            rep["dual_pointed"] = false;
            rep["t_tilde_generators"] = Json::array();
            emit(rep, out_path);
            std::cout << "dual cone not pointed (P is lower-dimensional); T~ is empty\n";
            return 0;
        }
        auto deps = minimal_dependents(oracle, cap, verify);
        auto up = upper_generators(oracle, deps);
        rep.update(extension_json(oracle, up, cap, verify, 3));
        emit(rep, out_path);
        std::cout << "T~ has " << up.t_gens.size() << " minimal generators; "
                  << up.deps.minimal.size() << " minimal dependent multisets (cap " << cap
                  << ", verified to " << verify << ")\n";
        return 0;
    }
    if (*c_dec) {
        auto input = polyhedron_from_json(read_json(input_path));
        EtaOracle eta(input);
        Json rep;
        rep["input"] = polyhedron_to_json(eta.polyhedron());
        rep.update(decomposition_catalog_json(eta));
        emit(rep, out_path);
        size_t nontrivial = 0;
        for (const auto& d : rep["decompositions"])
            if (d["xi_list"].size() >= 2) ++nontrivial;
        std::cout << "|B| = " << rep["b_count"] << ", " << rep["decompositions"].size()
                  << " decompositions (" << nontrivial << " nontrivial)\n";
        return 0;
    }
    if (*c_sum) {
        auto input = polyhedron_from_json(read_json(input_path));
        EtaOracle eta(input);
        QVec coords;
        {
            std::string tok;
            std::stringstream ss(xi_text);
            while (std::getline(ss, tok, ',')) coords.push_back(rat_from_string(tok));
        }
        if (coords.size() != eta.r() + eta.m())
            throw Error(ErrorKind::ParseError, "--xi needs r+m coordinates");
        Xi xi = make_xi(eta, coords);
        auto res = psi_summand(eta, xi, strict);
        Json rep;
        rep["input"] = polyhedron_to_json(eta.polyhedron());
        rep["xi"] = qvec_to_json(coords);
        rep["flags"] = Json{{"in_t_plus", xi.in_t_plus}, {"in_t_lattice", xi.in_t_lattice}};
        rep["warning_negative_coordinates"] = res.negative_coordinates;
        rep["summand"] = polyhedron_to_json(res.summand);
        Json imgs = Json::array();
        for (const auto& w : res.vertex_images) imgs.push_back(qvec_to_json(w));
        rep["vertex_images"] = imgs;
        emit(rep, out_path);
        std::cout << "P_xi = " << rep["summand"].dump()
                  << (res.negative_coordinates ? "  [warning: xi outside T+(P)]" : "") << "\n";
        return 0;
    }
    if (*c_mor) {
        auto input = polyhedron_from_json(read_json(input_path));
        EtaOracle eta(input);
        RelationOracle oracle(eta);
        auto deps = minimal_dependents(oracle, cap, verify);
        auto up = upper_generators(oracle, deps);
        Json tj = read_json(target_path);
        ExtensionDiagram target =
            tj.contains("summands")
                ? [&] {
                      std::vector<RationalPolyhedron> parts;
                      for (const auto& pjson : tj["summands"])
                          parts.push_back(polyhedron_from_json(pjson));
                      ConeZ cay = cayley_cone(parts);
                      auto s2 = semigroup_of_cone(dual_cone(cay));
                      size_t d = eta.polyhedron().dim, m1 = parts.size();
                      std::vector<IVec> t2;
                      for (size_t i = 0; i < m1; ++i) {
                          IVec e(d + m1, 0);
                          e[d + i] = 1;
                          t2.push_back(std::move(e));
                      }
                      auto upper = SemigroupPair::make(
                          AffineSemigroup::from_generators(d + m1, t2), s2);
                      auto s = AffineSemigroup::from_generators(d + 1, oracle.hilbert_basis_full());
                      IVec r(d + 1, 0);
                      r[d] = 1;
                      auto lower = SemigroupPair::make(
                          AffineSemigroup::from_generators(d + 1, {r}), s);
                      IMat pi(d + 1, d + m1);
                      for (size_t i = 0; i < d; ++i) pi[i][i] = 1;
                      for (size_t i = 0; i < m1; ++i) pi[d][d + i] = 1;
                      ExtensionDiagram dia{upper, lower, pi};
                      dia.validate();
                      return dia;
                  }()
                : diagram_from_json(tj);
        InitialMorphism ell(oracle, target, bound, 10);
        auto data = ell.morphism(up, morphism_degree);
        Json rep;
        rep["input"] = polyhedron_to_json(eta.polyhedron());
        Json imgs = Json::array();
        for (size_t g = 0; g < data.gen_images.size(); ++g) {
            imgs.push_back(Json{{"generator", functional_to_json(up.t_gens[g])},
                                {"image", ivec_to_json(data.gen_images[g])}});
        }
        rep["generator_images"] = imgs;
        rep["well_defined"] = data.well_defined;
        rep["degree"] = morphism_degree;
        emit(rep, out_path);
        std::cout << data.gen_images.size() << " generator images computed; well-defined: "
                  << (data.well_defined ? "yes" : "NO") << "\n";
        return data.well_defined ? 0 : 1;
    }
    if (*c_chk) {
        auto input = polyhedron_from_json(read_json(input_path));
        if (suite != "all" && suite != "polyhedron" && suite != "eta" && suite != "extension" &&
            suite != "minkowski")
            throw Error(ErrorKind::ParseError, "unknown suite '" + suite + "'");
        CheckLedger ledger;
        std::cout << "check suite '" << suite << "' (bound " << bound << ")\n";
        Json rep = check_suite(input, suite, bound, ledger);
        rep["input"] = polyhedron_to_json(input);
        emit(rep, out_path);
        std::cout << (ledger.all_pass ? "all checks passed" : "CHECK FAILURES") << "\n";
        return ledger.all_pass ? 0 : 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return wrapped_main(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error [" << error_kind_name(e.kind) << "]: " << e.what() << "\n";
        return e.kind == ErrorKind::ParseError ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
