// The independence calculus on Hilbert-basis directions, the universal
// extension (T~, S~) generated by the relation functionals eta~_Z(c_1,c_2),
// bounded verification of its boundary and co-Cartesian structure, the forced
// morphism into any other co-Cartesian extension, parameter recovery inside
// targets, and the dual Kodaira-Spencer matrices.

#pragma once

#include "minkext/etaspace.hpp"
#include "minkext/semigroup.hpp"

#include <functional>

namespace minkext {

// ---------------------------------------------------------------------------

class RelationOracle {
public:
    explicit RelationOracle(const EtaOracle& eta) : eta_(eta) {
        ConeZ sigma = cone_over(eta.polyhedron());
        ConeZ dual = dual_cone(sigma);
        dual_pointed_ = dual.pointed;
        // When P does not span N_R, the dual cone has lineality and the
        // discrete pair leaves the pointedness assumptions; the direction set
        // stays empty then (a point polyhedron has no relations anyway).
        if (dual_pointed_) hb_full_ = hilbert_basis(dual);
        size_t d = eta.polyhedron().dim;
        for (const auto& h : hb_full_) {
            QVec a(d);
            bool zero = true;
            for (size_t i = 0; i < d; ++i) {
                a[i] = Rat(h[i]);
                if (h[i] != 0) zero = false;
            }
            if (!zero) dirs_.push_back(std::move(a));
        }
        std::sort(dirs_.begin(), dirs_.end(), lex_less);
    }

    bool dual_pointed() const { return dual_pointed_; }

    const EtaOracle& eta() const { return eta_; }
    const std::vector<IVec>& hilbert_basis_full() const { return hb_full_; }
    // the non-[0,1] Hilbert basis directions a_1 < ... < a_k
    const std::vector<QVec>& directions() const { return dirs_; }
    size_t k() const { return dirs_.size(); }

    Int eta_Z_relation(const std::vector<QVec>& cs) const {
        if (cs.size() < 2)
            throw Error(ErrorKind::InvariantViolation, "relations need at least two arguments");
        QVec total = qvec_zero(eta_.polyhedron().dim);
        Int val = 0;
        for (const auto& c : cs) {
            val += eta_.eta_Z(c);
            total = add(total, c);
        }
        return val - eta_.eta_Z(total);
    }

    bool is_independent(const std::vector<QVec>& cs) const {
        if (cs.size() <= 1) return true;
        return eta_Z_relation(cs) == 0;
    }

    Functional eta_tilde_Z_relation(const std::vector<QVec>& cs) const {
        if (cs.size() < 2)
            throw Error(ErrorKind::InvariantViolation, "relations need at least two arguments");
        QVec total = qvec_zero(eta_.polyhedron().dim);
        Functional f = eta_.zero_functional();
        for (const auto& c : cs) {
            f = f + eta_.eta_tilde_Z(c);
            total = add(total, c);
        }
        return f - eta_.eta_tilde_Z(total);
    }

    std::vector<QVec> multiset_args(const std::vector<int>& m) const {
        std::vector<QVec> out;
        for (size_t i = 0; i < m.size(); ++i)
            for (int j = 0; j < m[i]; ++j) out.push_back(dirs_[i]);
        return out;
    }

    Int eta_Z_relation(const std::vector<int>& m) const { return eta_Z_relation(multiset_args(m)); }
    Functional eta_tilde_Z_relation(const std::vector<int>& m) const {
        return eta_tilde_Z_relation(multiset_args(m));
    }

private:
    const EtaOracle& eta_;
    bool dual_pointed_ = true;
    std::vector<IVec> hb_full_;
    std::vector<QVec> dirs_;
};

// ---------------------------------------------------------------------------
// Minimally dependent multisets

struct DependencySet {
    std::vector<std::vector<int>> minimal;  // sorted; multisets over the k directions
    int cap = 0;
    int verify_degree = 0;
    bool complete = true;
    std::optional<std::vector<int>> offending;
};

namespace detail {

inline void for_each_multiset(size_t k, int degree, std::vector<int>& cur, size_t idx,
                              const std::function<void(const std::vector<int>&)>& fn) {
    if (idx + 1 == k) {
        cur[idx] = degree;
        fn(cur);
        cur[idx] = 0;
        return;
    }
    for (int take = 0; take <= degree; ++take) {
        cur[idx] = take;
        for_each_multiset(k, degree - take, cur, idx + 1, fn);
    }
    cur[idx] = 0;
}

inline void for_each_multiset(size_t k, int degree, const std::function<void(const std::vector<int>&)>& fn) {
    if (k == 0) return;
    std::vector<int> cur(k, 0);
    for_each_multiset(k, degree, cur, 0, fn);
}

inline bool dominates(const std::vector<int>& m, const std::vector<int>& lower) {
    for (size_t i = 0; i < m.size(); ++i)
        if (m[i] < lower[i]) return false;
    return true;
}

}  // namespace detail

// Breadth-first walk of the independence downset by total degree.  Minimal
// dependent multisets are recorded; the certificate re-checks every multiset
// up to verify_degree for domination by a recorded element.
inline DependencySet minimal_dependents(const RelationOracle& oracle, int cap, int verify_degree) {
    DependencySet out;
    out.cap = cap;
    out.verify_degree = verify_degree;
    size_t k = oracle.k();
    if (k == 0) return out;
    std::set<std::vector<int>> independent_prev;  // independent multisets of the previous layer
    // degree-1 layer: singletons are independent by convention
    detail::for_each_multiset(k, 1, [&](const std::vector<int>& m) { independent_prev.insert(m); });
    for (int d = 2; d <= cap; ++d) {
        std::set<std::vector<int>> independent_cur;
        detail::for_each_multiset(k, d, [&](const std::vector<int>& m) {
            // all one-step-down submultisets must be independent
            for (size_t j = 0; j < k; ++j) {
                if (m[j] == 0) continue;
                std::vector<int> sub = m;
                sub[j] -= 1;
                if (!independent_prev.count(sub)) return;
            }
            if (oracle.eta_Z_relation(m) > 0) out.minimal.push_back(m);
            else independent_cur.insert(m);
        });
        independent_prev = std::move(independent_cur);
    }
    std::sort(out.minimal.begin(), out.minimal.end());
    // completeness certificate
    for (int d = 2; d <= verify_degree && out.complete; ++d) {
        detail::for_each_multiset(k, d, [&](const std::vector<int>& m) {
            if (!out.complete) return;
            if (oracle.eta_Z_relation(m) == 0) return;
            for (const auto& lower : out.minimal)
                if (detail::dominates(m, lower)) return;
            out.complete = false;
            out.offending = m;
        });
    }
    return out;
}

// ---------------------------------------------------------------------------
// The upper pair (T~, S~)

struct UpperPair {
    std::vector<QVec> directions;                    // the a_i
    std::vector<Functional> t_gens;                  // minimal generator set of T~
    std::vector<std::vector<int>> t_gen_multisets;   // a witnessing multiset per generator
    std::vector<std::pair<QVec, Functional>> s_gens; // boundary lifts (a_i, eta~_Z(a_i))
    DependencySet deps;
};

inline UpperPair upper_generators(const RelationOracle& oracle, const DependencySet& deps) {
    if (!deps.complete)
        throw Error(ErrorKind::IncompleteDependencySet,
                    "dependency set failed its completeness certificate");
    UpperPair up;
    up.directions = oracle.directions();
    up.deps = deps;
    const auto& eta = oracle.eta();
    // collect candidate generators with their witnesses, dedup by coordinates
    std::map<QVec, std::vector<int>> seen;
    for (const auto& m : deps.minimal) {
        Functional f = oracle.eta_tilde_Z_relation(m);
        if (f.is_zero_functional() || eta.pi(f) <= 0)
            throw Error(ErrorKind::InvariantViolation, "dependent multiset lifted to zero");
        seen.emplace(f.coords, m);
    }
    std::vector<std::pair<QVec, std::vector<int>>> cand(seen.begin(), seen.end());
    // greedy minimalization, dropping generators that are N-combinations of
    // the others; order by pi-value, then lexicographically
    std::sort(cand.begin(), cand.end(), [&](const auto& x, const auto& y) {
        Rat px = eta.pi(Functional{x.first, std::nullopt});
        Rat py = eta.pi(Functional{y.first, std::nullopt});
        if (px != py) return px > py;  // try to eliminate large pi-values first
        return lex_less(y.first, x.first);
    });
    std::vector<std::pair<QVec, std::vector<int>>> kept = cand;
    for (const auto& [coords, witness] : cand) {
        std::vector<IVec> others;
        for (const auto& [c2, w2] : kept)
            if (c2 != coords) others.push_back(to_ivec(c2));
        if (others.empty()) continue;
        auto sg = AffineSemigroup::from_generators(coords.size(), others);
        if (sg.member(to_ivec(coords)))
            kept.erase(std::remove_if(kept.begin(), kept.end(),
                                      [&](const auto& e) { return e.first == coords; }),
                       kept.end());
    }
    std::sort(kept.begin(), kept.end());
    for (const auto& [coords, witness] : kept) {
        up.t_gens.push_back(Functional{coords, std::nullopt});
        up.t_gen_multisets.push_back(witness);
    }
    for (const auto& a : oracle.directions()) up.s_gens.push_back({a, eta.eta_tilde_Z(a)});
    return up;
}

// The upper pair as a concrete extension diagram over (N, cone_Z(P)^dual).
// Upper ambient: Z^d x Z^{dim T(P)} (M-part, then T_Z-basis values).
inline ExtensionDiagram upper_pair_diagram(const RelationOracle& oracle, const UpperPair& up) {
    const auto& eta = oracle.eta();
    size_t d = eta.polyhedron().dim;
    size_t dt = eta.tspace().dim();
    auto embed = [&](const QVec& c, const QVec& coords) {
        IVec x(d + dt, 0);
        for (size_t i = 0; i < d; ++i) x[i] = rat_num(c[i]);
        for (size_t i = 0; i < dt; ++i) {
            if (!rat_is_int(coords[i]))
                throw Error(ErrorKind::NonIntegralEntry, "functional escapes the dual lattice");
            x[d + i] = rat_num(coords[i]);
        }
        return x;
    };
    std::vector<IVec> tg, sg;
    for (const auto& g : up.t_gens) {
        tg.push_back(embed(qvec_zero(d), g.coords));
        sg.push_back(tg.back());
    }
    for (const auto& [a, f] : up.s_gens) sg.push_back(embed(a, f.coords));
    auto upper = SemigroupPair::make(AffineSemigroup::from_generators(d + dt, tg),
                                     AffineSemigroup::from_generators(d + dt, sg));
    ConeZ dual = dual_cone(cone_over(eta.polyhedron()));
    auto s = AffineSemigroup::from_generators(d + 1, oracle.hilbert_basis_full());
    IVec r(d + 1, 0);
    r[d] = 1;
    auto lower = SemigroupPair::make(AffineSemigroup::from_generators(d + 1, {r}), s);
    // pi: identity on the M-part, evaluation at [P] on the functional part
    auto onec = coords_in_basis(eta.tspace().basis, eta.tspace().oneone);
    IMat pi(d + 1, d + dt);
    for (size_t i = 0; i < d; ++i) pi[i][i] = 1;
    for (size_t i = 0; i < dt; ++i) pi[d][d + i] = rat_num((*onec)[i]);
    ExtensionDiagram dia{upper, lower, pi};
    dia.validate();
    return dia;
}

// All integral c in tail(P)^dual with |c|_inf <= bound, lex sorted.
inline std::vector<QVec> tail_dual_grid(const EtaOracle& eta, int bound) {
    size_t d = eta.polyhedron().dim;
    std::vector<QVec> out;
    std::vector<long> cur(d, -bound);
    while (true) {
        QVec c(d);
        for (size_t i = 0; i < d; ++i) c[i] = Rat(cur[i]);
        if (eta.in_tail_dual(c)) out.push_back(c);
        size_t i = 0;
        while (i < d && cur[i] == bound) cur[i++] = -bound;
        if (i == d) break;
        ++cur[i];
    }
    return out;
}

struct UpperPairReport {
    bool boundary_forward = true;   // (c, eta~_Z(c)) is relatively boundary
    bool boundary_backward = true;  // every enumerated boundary element has that shape
    bool kernel_trivial = true;
    bool boundary_bijection = true;
    std::vector<std::pair<size_t, std::pair<QVec, QVec>>> s_witnesses;  // vertex -> (c1,c2)
    std::vector<std::pair<size_t, Int>> t_multiples;                    // edge -> a with a t_e in T~
    std::vector<std::string> failures;
    bool ok() const {
        return boundary_forward && boundary_backward && kernel_trivial && boundary_bijection;
    }
};

inline UpperPairReport verify_upper_pair(const RelationOracle& oracle, const UpperPair& up,
                                         int bound) {
    UpperPairReport rep;
    const auto& eta = oracle.eta();
    if (bound <= 0) return rep;  // vacuous
    auto dia = upper_pair_diagram(oracle, up);
    size_t d = eta.polyhedron().dim;
    size_t dt = eta.tspace().dim();
    auto grid = tail_dual_grid(eta, bound);
    // (a) forward: boundary elements are exactly the lifted boundary
    for (const auto& c : grid) {
        Functional f = eta.eta_tilde_Z(c);
        IVec el(d + dt, 0);
        for (size_t i = 0; i < d; ++i) el[i] = rat_num(c[i]);
        for (size_t i = 0; i < dt; ++i) el[d + i] = rat_num(f.coords[i]);
        if (!dia.upper.s.member(el)) {
            rep.boundary_forward = false;
            rep.failures.push_back("lifted boundary element escapes S~");
            continue;
        }
        if (!is_boundary_element(dia.upper, el, bound)) {
            rep.boundary_forward = false;
            rep.failures.push_back("lifted boundary element is decomposable");
        }
        // (c) the projection hits (c, eta_Z(c))
        IVec img = dia.project(el);
        if (img[d] != eta.eta_Z(c)) {
            rep.boundary_bijection = false;
            rep.failures.push_back("projection misses eta_Z");
        }
    }
    // (a backward) enumerated boundary elements have the lifted form
    for (const auto& b : relative_boundary(dia.upper, bound)) {
        QVec c(d);
        for (size_t i = 0; i < d; ++i) c[i] = Rat(b[i]);
        bool in_range = true;
        for (size_t i = 0; i < d; ++i)
            if (b[i] > bound || b[i] < -bound) in_range = false;
        if (!in_range) continue;
        Functional f = eta.eta_tilde_Z(c);
        for (size_t i = 0; i < dt; ++i) {
            if (Rat(b[d + i]) != f.coords[i]) {
                rep.boundary_backward = false;
                rep.failures.push_back("boundary element " + detail::ivec_str(b) +
                                       " is not a lifted eta~_Z");
                break;
            }
        }
    }
    // (b) trivial kernel on enumerated elements
    for (const auto& [e, deg] : dia.upper.s.elements(bound)) {
        if (deg == 0) continue;
        IVec img = dia.project(e);
        bool zero = true;
        for (const auto& x : img)
            if (x != 0) zero = false;
        if (zero) {
            rep.kernel_trivial = false;
            rep.failures.push_back("kernel of pi contains " + detail::ivec_str(e));
        }
    }
    // (d) s_v in T~ and positive multiples of t_e in T~, with witnesses
    const auto& p = eta.polyhedron();
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        if (is_integral(p.vertices[v])) continue;
        Functional target = eta.functional_s(v);
        bool found = false;
        for (const auto& c1 : grid) {
            for (const auto& c2 : grid) {
                if (oracle.eta_tilde_Z_relation(std::vector<QVec>{c1, c2}) == target) {
                    rep.s_witnesses.push_back({v, {c1, c2}});
                    found = true;
                    break;
                }
            }
            if (found) break;
        }
        if (!found) rep.failures.push_back("no witness pair for s_" + std::to_string(v));
    }
    for (size_t e = 0; e < p.compact_edges().size(); ++e) {
        Functional te = eta.functional_t(e);
        if (te.is_zero_functional()) continue;
        std::optional<Int> best;
        for (const auto& c1 : grid) {
            for (const auto& c2 : grid) {
                Functional f = oracle.eta_tilde_Z_relation(std::vector<QVec>{c1, c2});
                if (f.is_zero_functional()) continue;
                // proportional to t_e with a positive integer factor?
                std::optional<Rat> ratio;
                bool prop = true;
                for (size_t i = 0; i < f.coords.size() && prop; ++i) {
                    if (te.coords[i] == 0) {
                        if (f.coords[i] != 0) prop = false;
                    } else {
                        Rat q = f.coords[i] / te.coords[i];
                        if (!ratio) ratio = q;
                        else if (*ratio != q) prop = false;
                    }
                }
                if (!prop || !ratio || *ratio <= 0 || !rat_is_int(*ratio)) continue;
                Int a = rat_num(*ratio);
                if (!best || a < *best) best = a;
            }
        }
        if (best) rep.t_multiples.push_back({e, *best});
        else rep.failures.push_back("no multiple of t_" + std::to_string(e) + " found in T~");
    }
    return rep;
}

// ---------------------------------------------------------------------------
// The forced morphism into another co-Cartesian extension

struct MorphismData {
    std::vector<IVec> gen_images;  // image of each T~ generator in the target upper ambient
    bool well_defined = true;
    std::optional<std::pair<std::vector<int>, std::vector<int>>> failure;
};

class InitialMorphism {
public:
    InitialMorphism(const RelationOracle& oracle, const ExtensionDiagram& target, int bound,
                    int search_depth = 12)
        : oracle_(oracle), target_(target), bound_(bound) {
        auto rep = check_cocartesian(target, bound);
        if (!rep.all())
            throw Error(ErrorKind::TargetNotCocartesian,
                        "initial morphism needs a co-Cartesian target: " +
                            (rep.c1.pass ? (rep.c2.pass ? rep.c3.witness : rep.c2.witness)
                                         : rep.c1.witness));
        elements_ = target.upper.s.elements(search_depth);
    }

    // the forced boundary section: the unique boundary preimage of [c, eta_Z(c)]
    IVec ell_boundary(const QVec& c) const {
        IVec key = to_ivec(c);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const auto& eta = oracle_.eta();
        size_t d = eta.polyhedron().dim;
        IVec want(d + 1);
        for (size_t i = 0; i < d; ++i) want[i] = key[i];
        want[d] = eta.eta_Z(c);
        std::optional<IVec> found;
        for (const auto& [e, deg] : elements_) {
            if (target_.project(e) != want) continue;
            if (!is_boundary_element(target_.upper, e, bound_)) continue;
            if (found)
                throw Error(ErrorKind::TargetNotCocartesian,
                            "two boundary preimages over " + detail::ivec_str(want));
            found = e;
        }
        if (!found)
            throw Error(ErrorKind::TargetNotCocartesian,
                        "no boundary preimage of " + detail::ivec_str(want) + " within bound");
        cache_.emplace(key, *found);
        return *found;
    }

    // ell(c_1,...,c_l) = sum ell_boundary(c_i) - ell_boundary(sum c_i)
    IVec ell_relation(const std::vector<QVec>& cs) const {
        size_t n = target_.upper.s.rank;
        IVec out(n, 0);
        QVec total = qvec_zero(oracle_.eta().polyhedron().dim);
        for (const auto& c : cs) {
            IVec b = ell_boundary(c);
            for (size_t i = 0; i < n; ++i) out[i] += b[i];
            total = add(total, c);
        }
        IVec b = ell_boundary(total);
        for (size_t i = 0; i < n; ++i) out[i] -= b[i];
        return out;
    }

    IVec ell_multiset(const std::vector<int>& m) const {
        return ell_relation(oracle_.multiset_args(m));
    }

    // images of the T~ generators; fails loudly if an image escapes T
    MorphismData morphism(const UpperPair& up, int degree_bound) const {
        MorphismData data;
        for (size_t g = 0; g < up.t_gens.size(); ++g) {
            IVec img = ell_multiset(up.t_gen_multisets[g]);
            if (!target_.upper.t.member(img))
                throw Error(ErrorKind::TargetNotCocartesian,
                            "generator image " + detail::ivec_str(img) + " escapes T");
            data.gen_images.push_back(img);
        }
        // well-definedness: equal functionals map to equal images
        std::map<QVec, std::pair<std::vector<int>, IVec>> seen;
        for (int deg = 2; deg <= degree_bound && data.well_defined; ++deg) {
            detail::for_each_multiset(oracle_.k(), deg, [&](const std::vector<int>& m) {
                if (!data.well_defined) return;
                Functional f = oracle_.eta_tilde_Z_relation(m);
                IVec img = ell_multiset(m);
                auto [it, fresh] = seen.emplace(f.coords, std::make_pair(m, img));
                if (!fresh && it->second.second != img) {
                    data.well_defined = false;
                    data.failure = {it->second.first, m};
                }
            });
        }
        return data;
    }

    const ExtensionDiagram& target() const { return target_; }

private:
    const RelationOracle& oracle_;
    ExtensionDiagram target_;
    int bound_;
    std::map<IVec, int> elements_;
    mutable std::map<IVec, IVec> cache_;
};

// ---------------------------------------------------------------------------
// Parameter recovery inside a target extension

struct RecoveredParameters {
    std::vector<std::optional<IVec>> ell_s;  // per vertex, in the target upper ambient
    std::vector<std::optional<QVec>> ell_t;  // per edge: rational vector in the target ambient
    std::vector<std::string> notes;
    bool lattice_disjoint_ok = true;
    bool short_edge_ok = true;
    bool closing_ok = true;
    bool ok() const { return lattice_disjoint_ok && short_edge_ok && closing_ok; }
};

namespace detail {

// lattice points of the normal cone of vertex v scaled to |c|_inf <= bound,
// over the given sublattice of M
inline std::vector<QVec> normal_cone_points(const RationalPolyhedron& p, size_t v,
                                            const IntLattice& sublattice, int bound) {
    size_t d = p.dim;
    std::vector<HalfSpace> hs;
    for (size_t w = 0; w < p.vertices.size(); ++w) {
        if (w == v) continue;
        hs.push_back({sub(p.vertices[w], p.vertices[v]), Rat(0)});
    }
    for (const auto& rho : p.tail_rays) hs.push_back({rho, Rat(0)});
    for (size_t i = 0; i < d; ++i) {
        QVec e = qvec_zero(d);
        e[i] = 1;
        hs.push_back({e, Rat(-bound)});
        hs.push_back({neg(e), Rat(-bound)});
    }
    return enumerate_lattice_points(hs, sublattice);
}

}  // namespace detail

inline RecoveredParameters recover_parameters(const RelationOracle& oracle,
                                              const InitialMorphism& ell, int bound) {
    RecoveredParameters out;
    const auto& eta = oracle.eta();
    const auto& p = eta.polyhedron();
    size_t d = p.dim;
    size_t n = ell.target().upper.s.rank;

    // --- ell_s(v) = n ell(c) - ell(nc) for a c with fractional eta
    IntLattice mfull = standard_lattice(d);
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        std::optional<IVec> got;
        for (const auto& c : detail::normal_cone_points(p, v, mfull, bound)) {
            if (is_zero(c)) continue;
            Rat frac = frac_up(eta.eta(c));
            if (frac == 0) continue;
            Int nmin = rat_ceil(Rat(1) / frac);
            IVec a = ell.ell_boundary(c);
            IVec b = ell.ell_boundary(scale(Rat(nmin), c));
            IVec res(n, 0);
            for (size_t i = 0; i < n; ++i) res[i] = nmin * a[i] - b[i];
            got = res;
            break;
        }
        if (!got) {
            if (is_integral(p.vertices[v])) {
                got = IVec(n, 0);
                out.notes.push_back("vertex " + std::to_string(v) +
                                    ": NoSuitableC (lattice vertex), ell_s = 0");
            } else {
                out.notes.push_back("vertex " + std::to_string(v) + ": NoSuitableC");
            }
        }
        out.ell_s.push_back(got);
    }

    // --- ell_t(e) from super-integral pairs
    // M^sup: integral forms with integral values on all vertices
    std::vector<QVec> cons;
    for (size_t i = 0; i < d; ++i) {
        QVec e = qvec_zero(d);
        e[i] = 1;
        cons.push_back(std::move(e));
    }
    for (const auto& v : p.vertices) cons.push_back(v);
    IntLattice msup = preimage_lattice(QMat(cons), standard_lattice(d).basis);
    for (size_t e = 0; e < p.compact_edges().size(); ++e) {
        const auto& edge = p.compact_edges()[e];
        auto pts1 = detail::normal_cone_points(p, edge.i, msup, bound);
        auto pts2 = detail::normal_cone_points(p, edge.j, msup, bound);
        std::optional<QVec> got;
        for (const auto& c1 : pts1) {
            for (const auto& c2 : pts2) {
                Rat a1 = dot(edge.dir, c1), a2 = -dot(edge.dir, c2);
                Rat a = std::min(a1, a2);
                if (a <= 0) continue;
                QVec sum = add(c1, c2);
                // c1 + c2 must stay in one of the two normal cones
                if (dot(p.vertices[edge.i], sum) != p.support_min(sum) &&
                    dot(p.vertices[edge.j], sum) != p.support_min(sum))
                    continue;
                IVec rel = ell.ell_relation({c1, c2});
                QVec col = qvec_zero(n);
                for (size_t i = 0; i < n; ++i) col[i] = Rat(rel[i]) / a;
                got = col;
                break;
            }
            if (got) break;
        }
        if (!got) out.notes.push_back("edge " + std::to_string(e) + ": no super-integral pair");
        out.ell_t.push_back(got);
    }

    // --- the relations among the recovered parameters
    const auto& ed = eta.edge_data();
    for (size_t e = 0; e < p.compact_edges().size(); ++e) {
        const auto& edge = p.compact_edges()[e];
        if (ed[e].lattice_disjoint && out.ell_s[edge.i] && out.ell_s[edge.j]) {
            if (*out.ell_s[edge.i] != *out.ell_s[edge.j]) out.lattice_disjoint_ok = false;
        }
        auto check_short = [&](size_t vtx) {
            if (!out.ell_t[e] || !out.ell_s[vtx]) return;
            const QVec& t = *out.ell_t[e];
            for (size_t i = 0; i < n; ++i)
                if (t[i] != Rat((*out.ell_s[vtx])[i])) out.short_edge_ok = false;
        };
        if (ed[e].short_forward) check_short(edge.i);
        if (ed[e].short_backward) check_short(edge.j);
    }
    for (const auto& cyc : p.face_cycles()) {
        // sum of ell_t(e) (x) e over the oriented cycle must vanish
        std::vector<QVec> acc(n, qvec_zero(d));
        bool have_all = true;
        for (size_t e = 0; e < p.compact_edges().size(); ++e) {
            if (cyc.signs[e] == 0) continue;
            if (!out.ell_t[e]) { have_all = false; break; }
            const QVec& t = *out.ell_t[e];
            for (size_t i = 0; i < n; ++i)
                acc[i] = add(acc[i], scale(Rat(cyc.signs[e]) * t[i], p.compact_edges()[e].dir));
        }
        if (!have_all) continue;
        for (const auto& row : acc)
            if (!is_zero(row)) out.closing_ok = false;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dual Kodaira-Spencer matrices

// Rows are indexed by the decomposition parts xi_i, columns by the T~
// generators; the entry is the pairing <generator, xi_i>.
inline std::vector<IVec> kodaira_dual_map(const EtaOracle& eta, const UpperPair& up,
                                          const std::vector<QVec>& xi_list) {
    QVec total = qvec_zero(eta.r() + eta.m());
    for (const auto& xi : xi_list) total = add(total, xi);
    if (total != eta.tspace().oneone)
        throw Error(ErrorKind::InvariantViolation, "decomposition must sum to [P]");
    std::vector<IVec> rows;
    for (const auto& xi : xi_list) {
        auto mu = coords_in_basis(eta.tspace().basis, xi);
        if (!mu) throw Error(ErrorKind::InvariantViolation, "xi is not in T(P)");
        IVec row;
        for (const auto& g : up.t_gens) {
            Rat val = dot(*mu, g.coords);
            if (!rat_is_int(val))
                throw Error(ErrorKind::NonIntegralEntry,
                            "pairing <" + rat_to_string(val) + "> is not integral");
            if (val < 0)
                throw Error(ErrorKind::NonIntegralEntry, "pairing is negative");
            row.push_back(rat_num(val));
        }
        rows.push_back(std::move(row));
    }
    // column sums recover the pi-values
    for (size_t gcol = 0; gcol < up.t_gens.size(); ++gcol) {
        Int sum = 0;
        for (const auto& row : rows) sum += row[gcol];
        if (Rat(sum) != eta.pi(up.t_gens[gcol]))
            throw Error(ErrorKind::InvariantViolation, "column sums must equal pi-values");
    }
    return rows;
}

}  // namespace minkext
