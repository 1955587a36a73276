// Minkowski-summand machinery: the vertex map psi and the summands P_xi, the
// classical summand cone, the tautological cone over T+(P), Cayley cones with
// the fiber-product check, the Kodaira-Spencer evaluation, lattice-friendly
// detection along two independent routes, and the enumeration of all
// lattice-friendly decompositions of [P].

#pragma once

#include "minkext/etaspace.hpp"
#include "minkext/semigroup.hpp"

namespace minkext {

// ---------------------------------------------------------------------------

struct Xi {
    QVec coords;  // in R^{r+m}
    bool in_t = false;
    bool in_t_plus = false;
    bool in_t_lattice = false;
};

inline Xi make_xi(const EtaOracle& eta, const QVec& coords) {
    Xi xi;
    xi.coords = coords;
    xi.in_t = in_tspace(eta.tspace(), coords);
    xi.in_t_plus = xi.in_t && in_tplus(eta.tspace(), coords);
    xi.in_t_lattice = xi.in_t && eta.tlattice().member(coords);
    return xi;
}

struct SummandResult {
    RationalPolyhedron summand;
    std::vector<QVec> vertex_images;  // psi(xi, v) for every vertex of P
    bool negative_coordinates = false;
};

// psi(xi, v) for all vertices, by walking the spanning tree from v*.
inline std::vector<QVec> psi_images(const EtaOracle& eta, const QVec& xi) {
    const auto& p = eta.polyhedron();
    size_t r = eta.r();
    std::vector<QVec> img(p.vertices.size());
    QVec base = scale(xi[r + eta.vstar()], p.vertices[eta.vstar()]);
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        QVec x = base;
        for (const auto& step : eta.tree_path(v)) {
            QVec dir = sub(p.vertices[step.to], p.vertices[step.from]);
            x = add(x, scale(xi[step.edge], dir));
        }
        img[v] = x;
    }
    return img;
}

// The Minkowski summand P_xi.  Strict mode insists on xi in T+(P); otherwise
// negative coordinates are merely flagged (they reproduce the paper's
// pathology) while xi in T(P) is always required for path independence.
inline SummandResult psi_summand(const EtaOracle& eta, const Xi& xi, bool strict = false) {
    if (!xi.in_t)
        throw Error(ErrorKind::NotInTP, "xi violates the closing/identification conditions");
    if (strict && !xi.in_t_plus)
        throw Error(ErrorKind::NotInTP, "xi has negative coordinates (strict mode)");
    SummandResult res;
    res.negative_coordinates = !xi.in_t_plus;
    res.vertex_images = psi_images(eta, xi.coords);
    res.summand = RationalPolyhedron::from_vrep(eta.polyhedron().dim, res.vertex_images,
                                                eta.polyhedron().tail_rays);
    return res;
}

// ---------------------------------------------------------------------------
// The classical summand cone C(P) = V(P) cap R^r_{>=0}

struct SummandCone {
    size_t r = 0;
    std::vector<QVec> closing;       // rows of the closing conditions in R^r
    size_t dim = 0;                  // dim V(P)
    std::vector<QVec> extreme_rays;  // of C(P), primitive
};

inline SummandCone summand_cone(const RationalPolyhedron& p) {
    SummandCone sc;
    sc.r = p.compact_edges().size();
    for (const auto& cyc : p.face_cycles()) {
        for (size_t k = 0; k < p.dim; ++k) {
            QVec row = qvec_zero(sc.r);
            for (size_t e = 0; e < sc.r; ++e)
                if (cyc.signs[e] != 0) row[e] = Rat(cyc.signs[e]) * p.compact_edges()[e].dir[k];
            sc.closing.push_back(std::move(row));
        }
    }
    sc.dim = sc.closing.empty() ? sc.r : sc.r - mat_rank(QMat(sc.closing));
    std::vector<QVec> ineqs;
    for (size_t i = 0; i < sc.r; ++i) {
        QVec e = qvec_zero(sc.r);
        e[i] = 1;
        ineqs.push_back(std::move(e));
    }
    for (const auto& row : sc.closing) {
        ineqs.push_back(row);
        ineqs.push_back(neg(row));
    }
    RayBasis rb = dd_rays(sc.r, ineqs);
    sc.extreme_rays = rb.rays;
    return sc;
}

// reported dimension of the infinitesimal-deformation space in the fixed degree
inline size_t t1_dimension(const EtaOracle& eta) { return eta.tspace().dim() - 1; }

// ---------------------------------------------------------------------------
// The tautological cone over T+(P)

// H-rep in the (xi, w) coordinates of R^{r+m} x N_R.
struct TautologicalCone {
    size_t nxi = 0, d = 0;
    std::vector<QVec> ineqs;  // a . (xi,w) >= 0
    std::vector<QVec> eqs;
};

inline TautologicalCone tautological_cone(const EtaOracle& eta) {
    const auto& p = eta.polyhedron();
    TautologicalCone tc;
    tc.nxi = eta.r() + eta.m();
    tc.d = p.dim;
    for (const auto& row : eta.tspace().perp) {
        QVec full = row;
        full.resize(tc.nxi + tc.d, Rat(0));
        tc.eqs.push_back(std::move(full));
    }
    for (size_t i = 0; i < tc.nxi; ++i) {
        QVec e = qvec_zero(tc.nxi + tc.d);
        e[i] = 1;
        tc.ineqs.push_back(std::move(e));
    }
    // per facet a of P: <w, a> >= <psi(xi, v(a)), a>, linear in xi
    for (const auto& f : p.facets) {
        size_t v = p.argmin_vertex(f.a);
        QVec row = qvec_zero(tc.nxi + tc.d);
        // -a^T Psi_v on the xi part
        row[eta.r() + eta.vstar()] -= dot(p.vertices[eta.vstar()], f.a);
        for (const auto& step : eta.tree_path(v)) {
            QVec dir = sub(p.vertices[step.to], p.vertices[step.from]);
            row[step.edge] -= dot(dir, f.a);
        }
        for (size_t k = 0; k < tc.d; ++k) row[tc.nxi + k] = f.a[k];
        tc.ineqs.push_back(std::move(row));
    }
    return tc;
}

// fiber of the tautological cone over a fixed xi, as a polyhedron in N_R
inline RationalPolyhedron tautological_fiber(const TautologicalCone& tc, const QVec& xi) {
    for (const auto& e : tc.eqs) {
        QVec exi(e.begin(), e.begin() + tc.nxi);
        if (dot(exi, xi) != 0)
            throw Error(ErrorKind::NotInTP, "fiber point violates the cone equations");
    }
    std::vector<Facet> facets;
    for (const auto& row : tc.ineqs) {
        QVec a(row.begin() + tc.nxi, row.end());
        if (is_zero(a)) continue;  // pure xi constraint: checked below
        QVec rxi(row.begin(), row.begin() + tc.nxi);
        facets.push_back({a, -dot(rxi, xi)});
    }
    for (const auto& row : tc.ineqs) {
        QVec a(row.begin() + tc.nxi, row.end());
        QVec rxi(row.begin(), row.begin() + tc.nxi);
        if (is_zero(a) && dot(rxi, xi) < 0)
            throw Error(ErrorKind::NotInTP, "fiber base point outside T+(P)");
    }
    return RationalPolyhedron::from_hrep(tc.d, facets);
}

// ---------------------------------------------------------------------------
// Cayley cones and the fiber-product identity

inline ConeZ cayley_cone(const std::vector<RationalPolyhedron>& parts) {
    if (parts.empty()) throw Error(ErrorKind::InvariantViolation, "empty Cayley product");
    size_t d = parts[0].dim, m1 = parts.size();
    for (const auto& q : parts)
        if (q.tail_rays != parts[0].tail_rays)
            throw Error(ErrorKind::TailMismatch, "Cayley parts must share the tail cone");
    std::vector<QVec> gens;
    for (size_t i = 0; i < m1; ++i) {
        for (const auto& v : parts[i].vertices) {
            QVec h = v;
            h.resize(d + m1, Rat(0));
            h[d + i] = 1;
            gens.push_back(primitive(h));
        }
    }
    for (const auto& rho : parts[0].tail_rays) {
        QVec h = rho;
        h.resize(d + m1, Rat(0));
        gens.push_back(primitive(h));
    }
    return ConeZ::from_rays(d + m1, gens);
}

// Pulling the universal family back along e^i -> xi_i must reproduce the
// Cayley cone of the summands P_{xi_i}.
inline bool check_fiber_product(const EtaOracle& eta, const std::vector<QVec>& xi_list) {
    const auto& p = eta.polyhedron();
    size_t d = p.dim, m1 = xi_list.size();
    std::vector<RationalPolyhedron> parts;
    std::vector<std::vector<QVec>> images;
    for (const auto& xi : xi_list) {
        auto res = psi_summand(eta, make_xi(eta, xi));
        parts.push_back(res.summand);
        images.push_back(res.vertex_images);
    }
    ConeZ direct = cayley_cone(parts);
    // pullback H-rep in (w, y) coordinates
    std::vector<QVec> ineqs;
    for (size_t i = 0; i < m1; ++i) {
        QVec e = qvec_zero(d + m1);
        e[d + i] = 1;
        ineqs.push_back(std::move(e));
    }
    for (const auto& f : p.facets) {
        size_t v = p.argmin_vertex(f.a);
        QVec row = qvec_zero(d + m1);
        for (size_t k = 0; k < d; ++k) row[k] = f.a[k];
        for (size_t i = 0; i < m1; ++i) row[d + i] = -dot(images[i][v], f.a);
        ineqs.push_back(std::move(row));
    }
    ConeZ pullback = ConeZ::from_hrep(d + m1, ineqs);
    return pullback == direct;
}

// ---------------------------------------------------------------------------
// Kodaira-Spencer evaluation

struct KSVector {
    QVec t;  // dilation factor per compact edge of P
    QVec s;  // 0/1 per vertex of P

    QVec flat() const {
        QVec out = t;
        out.insert(out.end(), s.begin(), s.end());
        return out;
    }
};

// vertex correspondence v -> v(Q): the vertex of Q carrying the whole normal
// cone of v; fails when the normal fan of Q does not coarsen that of P
inline std::vector<QVec> summand_vertex_correspondence(const RationalPolyhedron& p,
                                                       const RationalPolyhedron& q) {
    if (q.tail_rays != p.tail_rays)
        throw Error(ErrorKind::NotASummand, "summand must share the tail cone");
    std::vector<QVec> out;
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        QVec c = qvec_zero(p.dim);
        for (const auto& f : p.facets)
            if (dot(f.a, p.vertices[v]) == f.b) c = add(c, f.a);
        auto face = face_at(q, c);
        if (face.vertices.size() != 1 || !face.tail_rays.empty())
            throw Error(ErrorKind::NotASummand, "normal fan does not refine the summand's");
        QVec w = face.vertices[0];
        // the whole normal cone of v must stay normal to w
        for (const auto& f : p.facets)
            if (dot(f.a, p.vertices[v]) == f.b && dot(w, f.a) != q.support_min(f.a))
                throw Error(ErrorKind::NotASummand, "normal fan does not refine the summand's");
        out.push_back(w);
    }
    return out;
}

inline KSVector kodaira_spencer(const RationalPolyhedron& p, const RationalPolyhedron& q) {
    auto corr = summand_vertex_correspondence(p, q);
    KSVector ks;
    ks.t = qvec_zero(p.compact_edges().size());
    ks.s = qvec_zero(p.vertices.size());
    for (size_t e = 0; e < p.compact_edges().size(); ++e) {
        const auto& edge = p.compact_edges()[e];
        QVec dq = sub(corr[edge.j], corr[edge.i]);
        // dq = t * dir for a scalar t in [0,1]
        Rat t(0);
        for (size_t k = 0; k < p.dim; ++k) {
            if (edge.dir[k] == 0) continue;
            t = dq[k] / edge.dir[k];
            break;
        }
        if (sub(dq, scale(t, edge.dir)) != qvec_zero(p.dim) || t < 0 || t > 1)
            throw Error(ErrorKind::NotASummand, "edge image is not a dilation");
        ks.t[e] = t;
    }
    for (size_t v = 0; v < p.vertices.size(); ++v) ks.s[v] = is_integral(corr[v]) ? 0 : 1;
    return ks;
}

// ---------------------------------------------------------------------------
// Lattice-friendly detection

struct DecompositionReport {
    bool sum_matches = true;
    std::vector<KSVector> ks;                            // per summand
    std::vector<std::vector<QVec>> correspondences;      // per summand: v -> v(Q_i)
    std::vector<std::optional<size_t>> exception_index;  // per vertex of P
    bool direct_verdict = true;   // at most one non-lattice vertex per direction
    bool ks_additive = true;      // sum of KS vectors equals [P]
    std::vector<bool> ks_in_t_lattice;
    bool kappa_verdict = true;    // additive and all KS vectors in T_Z(P)
    bool verdicts_agree = true;
    bool lattice_friendly = false;
};

// Informational flag per compact edge: is the cone over (v^i,1), (v^j,1)
// Z-isomorphic to the plane quadrant?  Not wired into any other check.
inline std::vector<bool> smooth_in_codim_two(const RationalPolyhedron& p) {
    std::vector<bool> out;
    for (const auto& edge : p.compact_edges()) {
        QVec a = p.vertices[edge.i];
        a.push_back(Rat(1));
        QVec b = p.vertices[edge.j];
        b.push_back(Rat(1));
        a = primitive(a);
        b = primitive(b);
        // saturated lattice of the span
        std::vector<QVec> frows = mat_kernel(QMat(std::vector<QVec>{a, b}));
        std::vector<QVec> span_basis;
        if (frows.empty()) {
            span_basis = standard_lattice(p.dim + 1).basis;
        } else {
            IMat fint(frows.size(), p.dim + 1);
            for (size_t i = 0; i < frows.size(); ++i) {
                QVec pr = primitive(frows[i]);
                for (size_t j = 0; j < p.dim + 1; ++j) fint[i][j] = rat_num(pr[j]);
            }
            for (const auto& row : integer_kernel(fint)) span_basis.push_back(to_qvec(row));
        }
        auto ca = coords_in_basis(span_basis, a);
        auto cb = coords_in_basis(span_basis, b);
        Rat det = (*ca)[0] * (*cb)[1] - (*ca)[1] * (*cb)[0];
        out.push_back(det == 1 || det == -1);
    }
    return out;
}

inline DecompositionReport is_lattice_friendly(const EtaOracle& eta,
                                               const std::vector<RationalPolyhedron>& summands) {
    const auto& p = eta.polyhedron();
    DecompositionReport rep;
    // support equality of P and the sum, on all participating facet normals
    std::vector<QVec> directions;
    auto add_normals = [&](const RationalPolyhedron& q) {
        for (const auto& f : q.facets) directions.push_back(f.a);
        for (const auto& a : q.aff_eqs_a) {
            directions.push_back(a);
            directions.push_back(neg(a));
        }
    };
    add_normals(p);
    for (const auto& q : summands) add_normals(q);
    for (const auto& c : directions) {
        Rat total(0);
        bool ok = true;
        for (const auto& q : summands) {
            if (!q.bounded_below(c)) { ok = false; break; }
            total += q.support_min(c);
        }
        if (!ok || !p.bounded_below(c) || total != p.support_min(c)) {
            rep.sum_matches = false;
            throw Error(ErrorKind::SumMismatch, "summands do not add up to P");
        }
    }
    std::vector<std::vector<QVec>> corr;
    for (const auto& q : summands) {
        corr.push_back(summand_vertex_correspondence(p, q));
        rep.ks.push_back(kodaira_spencer(p, q));
    }
    rep.correspondences = corr;
    // direct route: at most one non-lattice corresponding vertex
    for (size_t v = 0; v < p.vertices.size(); ++v) {
        std::optional<size_t> mu;
        for (size_t i = 0; i < summands.size(); ++i) {
            if (!is_integral(corr[i][v])) {
                if (mu) {
                    rep.direct_verdict = false;
                    mu = std::nullopt;
                    break;
                }
                mu = i;
            }
        }
        rep.exception_index.push_back(mu);
    }
    // Kodaira-Spencer route
    QVec total = qvec_zero(eta.r() + eta.m());
    for (const auto& ks : rep.ks) total = add(total, ks.flat());
    rep.ks_additive = (total == eta.tspace().oneone);
    for (const auto& ks : rep.ks) {
        bool member = in_tspace(eta.tspace(), ks.flat()) && eta.tlattice().member(ks.flat());
        rep.ks_in_t_lattice.push_back(member);
        if (!member) rep.kappa_verdict = false;
    }
    if (!rep.ks_additive) rep.kappa_verdict = false;
    rep.verdicts_agree = (rep.direct_verdict == rep.kappa_verdict);
    rep.lattice_friendly = rep.direct_verdict;
    return rep;
}

// ---------------------------------------------------------------------------
// Enumeration of all lattice-friendly decompositions of [P]

struct LatticeFriendlyCatalog {
    std::vector<QVec> b_set;  // B = T_Z cap {xi in T+ : [P]-xi in T+}
    std::vector<std::vector<QVec>> decompositions;  // multisets of xi summing to [P]
    std::vector<DecompositionReport> reports;       // certificates, aligned
};

// B = T_Z cap {xi in T+ : [P] - xi in T+}: the lattice points of the box
// slice under the distinguished element.
inline std::vector<QVec> lattice_friendly_b_set(const EtaOracle& eta) {
    const auto& ts = eta.tspace();
    size_t n = ts.r + ts.m;
    std::vector<HalfSpace> hs;
    for (const auto& row : ts.perp) {
        hs.push_back({row, Rat(0)});
        hs.push_back({neg(row), Rat(0)});
    }
    for (size_t i = 0; i < n; ++i) {
        QVec e = qvec_zero(n);
        e[i] = 1;
        hs.push_back({e, Rat(0)});
        hs.push_back({neg(e), -ts.oneone[i]});
    }
    return enumerate_lattice_points(hs, eta.tlattice());
}

inline LatticeFriendlyCatalog enumerate_lattice_friendly(const EtaOracle& eta) {
    LatticeFriendlyCatalog cat;
    const auto& ts = eta.tspace();
    size_t n = ts.r + ts.m;
    cat.b_set = lattice_friendly_b_set(eta);
    std::vector<QVec> parts;
    for (const auto& b : cat.b_set)
        if (!is_zero(b)) parts.push_back(b);
    // multiset partitions of [P] into nonzero parts of B
    std::vector<QVec> current;
    std::function<void(size_t, QVec)> walk = [&](size_t start, QVec remaining) {
        if (is_zero(remaining)) {
            cat.decompositions.push_back(current);
            return;
        }
        for (size_t i = start; i < parts.size(); ++i) {
            bool fits = true;
            for (size_t k = 0; k < n; ++k)
                if (parts[i][k] > remaining[k]) { fits = false; break; }
            if (!fits) continue;
            current.push_back(parts[i]);
            walk(i, sub(remaining, parts[i]));
            current.pop_back();
        }
    };
    walk(0, ts.oneone);
    for (const auto& dec : cat.decompositions) {
        std::vector<RationalPolyhedron> summands;
        for (const auto& xi : dec) summands.push_back(psi_summand(eta, make_xi(eta, xi)).summand);
        cat.reports.push_back(is_lattice_friendly(eta, summands));
    }
    return cat;
}

// ---------------------------------------------------------------------------
// Positive fibers and Minkowski linearity of general cone maps

struct ConeMap {
    ConeZ source;
    QMat pr;  // source ambient -> target ambient
};

inline ConeZ cone_map_image(const ConeMap& cm) {
    std::vector<QVec> gens;
    for (const auto& r : cm.source.rays) gens.push_back(mat_apply(cm.pr, r));
    std::vector<QVec> lin;
    for (const auto& l : cm.source.lineality) lin.push_back(mat_apply(cm.pr, l));
    return ConeZ::from_rays(cm.pr.rows, gens, lin);
}

inline std::optional<RationalPolyhedron> positive_fiber(const ConeMap& cm, const QVec& xi) {
    std::vector<Facet> facets;
    for (const auto& a : cm.source.hrep) facets.push_back({a, Rat(0)});
    for (const auto& e : cm.source.eqs) {
        facets.push_back({e, Rat(0)});
        facets.push_back({neg(e), Rat(0)});
    }
    for (size_t i = 0; i < cm.pr.rows; ++i) {
        facets.push_back({cm.pr[i], xi[i]});
        facets.push_back({neg(cm.pr[i]), -xi[i]});
    }
    try {
        return RationalPolyhedron::from_hrep(cm.source.rank, facets);
    } catch (const Error&) {
        return std::nullopt;  // empty fiber
    }
}

struct LinearityReport {
    bool surjective_on_samples = true;
    bool minkowski_linear = true;
    bool faces_onto_faces = true;
};

inline LinearityReport minkowski_linearity_check(const ConeMap& cm,
                                                 const std::vector<QVec>& samples) {
    LinearityReport rep;
    std::map<QVec, RationalPolyhedron> fibers;
    for (const auto& xi : samples) {
        auto f = positive_fiber(cm, xi);
        if (!f) {
            rep.surjective_on_samples = false;
            continue;
        }
        fibers.emplace(xi, *f);
    }
    if (!rep.surjective_on_samples)
        throw Error(ErrorKind::NotSurjective, "a sampled point has an empty positive fiber");
    for (const auto& [x1, f1] : fibers) {
        for (const auto& [x2, f2] : fibers) {
            QVec sum = add(x1, x2);
            auto fs = positive_fiber(cm, sum);
            if (!fs) continue;
            if (f1.tail_rays != f2.tail_rays) continue;
            if (minkowski_sum(f1, f2) != *fs) rep.minkowski_linear = false;
        }
    }
    // face-onto-face check
    ConeZ target = cone_map_image(cm);
    auto target_faces = cone_faces(target);
    std::set<std::vector<QVec>> target_face_rays;
    for (const auto& f : target_faces) {
        std::vector<QVec> gens;
        for (size_t r : f) gens.push_back(target.rays[r]);
        target_face_rays.insert(ConeZ::from_rays(target.rank, gens, target.lineality).rays);
    }
    for (const auto& f : cone_faces(cm.source)) {
        std::vector<QVec> gens;
        for (size_t r : f) gens.push_back(mat_apply(cm.pr, cm.source.rays[r]));
        std::vector<QVec> lin;
        for (const auto& l : cm.source.lineality) lin.push_back(mat_apply(cm.pr, l));
        auto image = ConeZ::from_rays(cm.pr.rows, gens, lin);
        if (!target_face_rays.count(image.rays)) rep.faces_onto_faces = false;
    }
    return rep;
}

}  // namespace minkext
