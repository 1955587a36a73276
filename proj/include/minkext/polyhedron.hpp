// Rational polyhedra with at least one vertex: dual representations kept in
// sync by double conversion, face structure, oriented cycles along compact
// 2-faces, normal cones, Minkowski sums and the cone-over-P construction.

#pragma once

#include "minkext/exactcore.hpp"

#include <map>
#include <numeric>

namespace minkext {

// ---------------------------------------------------------------------------
// Polyhedral cones with integer ray generators

struct ConeZ {
    size_t rank = 0;                // ambient dimension
    std::vector<QVec> rays;         // extreme rays, primitive, lex sorted
    std::vector<QVec> lineality;    // basis of the lineality space
    std::vector<QVec> hrep;         // rows a with a.x >= 0
    std::vector<QVec> eqs;          // rows a with a.x = 0
    bool pointed = true;

    static ConeZ from_rays(size_t dim, const std::vector<QVec>& gens,
                           const std::vector<QVec>& lin = {}) {
        ConeZ c;
        c.rank = dim;
        RayBasis dual = dual_cone_rays(dim, gens, lin);
        c.hrep = dual.rays;
        c.eqs = dual.lineality;
        std::vector<QVec> back = c.hrep;
        for (const auto& e : c.eqs) {
            back.push_back(e);
            back.push_back(neg(e));
        }
        RayBasis rb = dd_rays(dim, back);
        c.rays = rb.rays;
        c.lineality = rb.lineality;
        c.pointed = c.lineality.empty();
        return c;
    }

    static ConeZ from_hrep(size_t dim, const std::vector<QVec>& ineqs,
                           const std::vector<QVec>& eqns = {}) {
        std::vector<QVec> all = ineqs;
        for (const auto& e : eqns) {
            all.push_back(e);
            all.push_back(neg(e));
        }
        RayBasis rb = dd_rays(dim, all);
        return from_rays(dim, rb.rays, rb.lineality);
    }

    bool contains(const QVec& x) const {
        for (const auto& a : hrep)
            if (dot(a, x) < 0) return false;
        for (const auto& e : eqs)
            if (dot(e, x) != 0) return false;
        return true;
    }

    size_t dim() const {
        std::vector<QVec> gens = rays;
        for (const auto& l : lineality) gens.push_back(l);
        if (gens.empty()) return 0;
        return mat_rank(QMat(gens));
    }

    bool is_trivial() const { return rays.empty() && lineality.empty(); }

    bool operator==(const ConeZ& o) const {
        return rank == o.rank && rays == o.rays && lineality == o.lineality;
    }
};

inline ConeZ dual_cone(const ConeZ& c) {
    RayBasis d = dual_cone_rays(c.rank, c.rays, c.lineality);
    return ConeZ::from_rays(c.rank, d.rays, d.lineality);
}

// All faces of a pointed cone, as sorted index sets into `rays`.  The cone
// itself and the apex {0} are included.
inline std::vector<std::vector<size_t>> cone_faces(const ConeZ& c) {
    std::set<std::vector<size_t>> seen;
    std::vector<size_t> full(c.rays.size());
    std::iota(full.begin(), full.end(), size_t(0));
    std::vector<std::vector<size_t>> queue{full};
    seen.insert(full);
    std::vector<std::vector<size_t>> facet_inc;
    for (const auto& a : c.hrep) {
        std::vector<size_t> inc;
        for (size_t r = 0; r < c.rays.size(); ++r)
            if (dot(a, c.rays[r]) == 0) inc.push_back(r);
        facet_inc.push_back(std::move(inc));
    }
    while (!queue.empty()) {
        auto f = queue.back();
        queue.pop_back();
        for (const auto& inc : facet_inc) {
            std::vector<size_t> g;
            std::set_intersection(f.begin(), f.end(), inc.begin(), inc.end(), std::back_inserter(g));
            if (seen.insert(g).second) queue.push_back(g);
        }
    }
    return std::vector<std::vector<size_t>>(seen.begin(), seen.end());
}

// ---------------------------------------------------------------------------
// Rational polyhedra

struct Facet {
    QVec a;  // primitive integer normal
    Rat b;   // a . x >= b
};

struct CompactEdge {
    size_t i, j;  // vertex indices, i < j
    QVec dir;     // v^j - v^i
};

struct PolyFace {
    std::vector<size_t> verts;  // sorted vertex indices
    std::vector<size_t> rays;   // sorted tail-ray indices
    size_t dim = 0;
};

struct OrientedFaceCycle {
    size_t face;             // index into compact 2-face list
    std::vector<int> signs;  // one entry per compact edge, in {-1,0,+1}
};

class RationalPolyhedron {
public:
    size_t dim = 0;
    std::vector<QVec> vertices;   // lex sorted
    std::vector<QVec> tail_rays;  // primitive, lex sorted
    std::vector<Facet> facets;    // irredundant
    std::vector<QVec> aff_eqs_a;  // affine hull equations a.x = b
    std::vector<Rat> aff_eqs_b;

    RationalPolyhedron() = default;

    static RationalPolyhedron from_vrep(size_t d, std::vector<QVec> verts,
                                        std::vector<QVec> rays) {
        if (verts.empty())
            throw Error(ErrorKind::InvariantViolation, "polyhedron needs at least one vertex");
        std::vector<QVec> gens;
        for (auto& v : verts) {
            QVec h = v;
            h.push_back(Rat(1));
            gens.push_back(std::move(h));
        }
        for (auto& r : rays) {
            if (is_zero(r)) continue;
            QVec h = primitive(r);
            h.push_back(Rat(0));
            gens.push_back(std::move(h));
        }
        return from_homogenization(d, gens);
    }

    static RationalPolyhedron from_hrep(size_t d, const std::vector<Facet>& hs,
                                        const std::vector<Facet>& eqns = {}) {
        std::vector<QVec> ineqs;
        for (const auto& h : hs) {
            QVec row = h.a;
            row.push_back(-h.b);
            ineqs.push_back(std::move(row));
        }
        for (const auto& e : eqns) {
            QVec row = e.a;
            row.push_back(-e.b);
            ineqs.push_back(row);
            ineqs.push_back(neg(row));
        }
        QVec height = qvec_zero(d + 1);
        height[d] = 1;
        ineqs.push_back(std::move(height));
        RayBasis rb = dd_rays(d + 1, ineqs);
        if (!rb.lineality.empty())
            throw Error(ErrorKind::InvariantViolation, "H-rep region has no vertex");
        std::vector<QVec> gens = rb.rays;
        if (gens.empty())
            throw Error(ErrorKind::InvariantViolation, "H-rep region is empty");
        return from_homogenization(d, gens);
    }

    bool operator==(const RationalPolyhedron& o) const {
        return dim == o.dim && vertices == o.vertices && tail_rays == o.tail_rays;
    }
    bool operator!=(const RationalPolyhedron& o) const { return !(*this == o); }

    // the affine hull equations as facet-style pairs, for H-rep round trips
    std::vector<Facet> affine_hull() const {
        std::vector<Facet> out;
        for (size_t i = 0; i < aff_eqs_a.size(); ++i) out.push_back({aff_eqs_a[i], aff_eqs_b[i]});
        return out;
    }

    bool contains(const QVec& x) const {
        for (const auto& f : facets)
            if (dot(f.a, x) < f.b) return false;
        for (size_t i = 0; i < aff_eqs_a.size(); ++i)
            if (dot(aff_eqs_a[i], x) != aff_eqs_b[i]) return false;
        return true;
    }

    bool is_polytope() const { return tail_rays.empty(); }

    // c bounded below on P?
    bool bounded_below(const QVec& c) const {
        for (const auto& r : tail_rays)
            if (dot(r, c) < 0) return false;
        return true;
    }

    Rat support_min(const QVec& c) const {
        if (!bounded_below(c))
            throw Error(ErrorKind::UnboundedDirection, "direction unbounded below on polyhedron");
        Rat best = dot(vertices[0], c);
        for (const auto& v : vertices) {
            Rat d = dot(v, c);
            if (d < best) best = d;
        }
        return best;
    }

    // lexicographically smallest vertex attaining the minimum of c
    size_t argmin_vertex(const QVec& c) const {
        if (!bounded_below(c))
            throw Error(ErrorKind::UnboundedDirection, "direction unbounded below on polyhedron");
        size_t best = 0;
        for (size_t i = 1; i < vertices.size(); ++i)
            if (dot(vertices[i], c) < dot(vertices[best], c)) best = i;
        return best;  // vertices are lex sorted, so first minimizer is lex-min
    }

    RationalPolyhedron translated(const QVec& w) const {
        std::vector<QVec> vs;
        for (const auto& v : vertices) vs.push_back(add(v, w));
        return from_vrep(dim, vs, tail_rays);
    }

    // --- face structure (built at construction; no lazy mutation) -----------

    const std::vector<PolyFace>& faces() const { return faces_; }

    const std::vector<CompactEdge>& compact_edges() const { return edges_; }

    const std::vector<PolyFace>& compact_two_faces() const { return two_faces_; }

    // Oriented boundary cycles, one per compact 2-face.  The lowest-index
    // edge of each face gets the sign +1.
    std::vector<OrientedFaceCycle> face_cycles() const {
        std::vector<OrientedFaceCycle> out;
        for (size_t f = 0; f < two_faces_.size(); ++f) {
            const auto& face = two_faces_[f];
            std::vector<size_t> fedges;
            for (size_t e = 0; e < edges_.size(); ++e) {
                if (std::binary_search(face.verts.begin(), face.verts.end(), edges_[e].i) &&
                    std::binary_search(face.verts.begin(), face.verts.end(), edges_[e].j))
                    fedges.push_back(e);
            }
            std::map<size_t, std::vector<size_t>> at_vertex;
            for (size_t e : fedges) {
                at_vertex[edges_[e].i].push_back(e);
                at_vertex[edges_[e].j].push_back(e);
            }
            for (auto& [v, es] : at_vertex)
                if (es.size() != 2)
                    throw Error(ErrorKind::InvariantViolation, "2-face boundary is not a cycle");
            OrientedFaceCycle cyc{f, std::vector<int>(edges_.size(), 0)};
            size_t e0 = fedges.front();
            cyc.signs[e0] = 1;
            size_t start = edges_[e0].i;
            size_t cur = edges_[e0].j;
            size_t prev_edge = e0;
            while (cur != start) {
                const auto& es = at_vertex[cur];
                size_t nxt = (es[0] == prev_edge) ? es[1] : es[0];
                cyc.signs[nxt] = (edges_[nxt].i == cur) ? 1 : -1;
                cur = (edges_[nxt].i == cur) ? edges_[nxt].j : edges_[nxt].i;
                prev_edge = nxt;
            }
            QVec sum = qvec_zero(dim);
            for (size_t e = 0; e < edges_.size(); ++e)
                if (cyc.signs[e] != 0) sum = add(sum, scale(Rat(cyc.signs[e]), edges_[e].dir));
            if (!is_zero(sum))
                throw Error(ErrorKind::InvariantViolation, "2-face cycle does not close");
            out.push_back(std::move(cyc));
        }
        return out;
    }

private:
    std::vector<PolyFace> faces_;
    std::vector<CompactEdge> edges_;
    std::vector<PolyFace> two_faces_;

    static RationalPolyhedron from_homogenization(size_t d, const std::vector<QVec>& gens) {
        RationalPolyhedron p;
        p.dim = d;
        RayBasis dual = dual_cone_rays(d + 1, gens);
        std::vector<QVec> back;
        for (const auto& a : dual.rays) {
            QVec ax(a.begin(), a.begin() + d);
            if (is_zero(ax)) continue;  // the height facet carries no x-constraint
            auto [anorm, bnorm] = primitive_facet(ax, -a[d]);
            p.facets.push_back({anorm, bnorm});
            back.push_back(a);
        }
        for (const auto& e : dual.lineality) {
            QVec ax(e.begin(), e.begin() + d);
            if (is_zero(ax)) throw Error(ErrorKind::InvariantViolation, "degenerate homogenization");
            auto [anorm, bnorm] = primitive_facet(ax, -e[d]);
            p.aff_eqs_a.push_back(anorm);
            p.aff_eqs_b.push_back(bnorm);
            back.push_back(e);
            back.push_back(neg(e));
        }
        {
            QVec height = qvec_zero(d + 1);
            height[d] = 1;
            back.push_back(std::move(height));
        }
        RayBasis rb = dd_rays(d + 1, back);
        if (!rb.lineality.empty())
            throw Error(ErrorKind::InvariantViolation, "polyhedron has no vertex");
        for (const auto& r : rb.rays) {
            if (r[d] == 0) {
                QVec t(r.begin(), r.begin() + d);
                p.tail_rays.push_back(primitive(t));
            } else {
                QVec v(d);
                for (size_t i = 0; i < d; ++i) v[i] = r[i] / r[d];
                p.vertices.push_back(std::move(v));
            }
        }
        if (p.vertices.empty())
            throw Error(ErrorKind::InvariantViolation, "polyhedron is empty");
        std::sort(p.vertices.begin(), p.vertices.end(), lex_less);
        std::sort(p.tail_rays.begin(), p.tail_rays.end(), lex_less);
        std::sort(p.facets.begin(), p.facets.end(), [](const Facet& x, const Facet& y) {
            return x.b == y.b ? lex_less(x.a, y.a) : x.b < y.b;
        });
        p.build_faces();
        return p;
    }

    static std::pair<QVec, Rat> primitive_facet(const QVec& a, const Rat& b) {
        QVec full = a;
        full.push_back(b);
        QVec prim = primitive(full);
        QVec ax(prim.begin(), prim.end() - 1);
        return {ax, prim.back()};
    }

    void build_faces() {
        size_t nv = vertices.size(), nr = tail_rays.size();
        auto incidence = [&](const Facet& f) {
            std::pair<std::vector<size_t>, std::vector<size_t>> inc;
            for (size_t i = 0; i < nv; ++i)
                if (dot(f.a, vertices[i]) == f.b) inc.first.push_back(i);
            for (size_t i = 0; i < nr; ++i)
                if (dot(f.a, tail_rays[i]) == 0) inc.second.push_back(i);
            return inc;
        };
        std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> fincs;
        for (const auto& f : facets) fincs.push_back(incidence(f));
        std::set<std::pair<std::vector<size_t>, std::vector<size_t>>> seen;
        std::vector<size_t> allv(nv), allr(nr);
        std::iota(allv.begin(), allv.end(), size_t(0));
        std::iota(allr.begin(), allr.end(), size_t(0));
        std::vector<std::pair<std::vector<size_t>, std::vector<size_t>>> queue{{allv, allr}};
        seen.insert(queue[0]);
        while (!queue.empty()) {
            auto f = queue.back();
            queue.pop_back();
            for (const auto& g : fincs) {
                std::pair<std::vector<size_t>, std::vector<size_t>> h;
                std::set_intersection(f.first.begin(), f.first.end(), g.first.begin(), g.first.end(),
                                      std::back_inserter(h.first));
                std::set_intersection(f.second.begin(), f.second.end(), g.second.begin(), g.second.end(),
                                      std::back_inserter(h.second));
                if (h.first.empty()) continue;  // faces of a pointed polyhedron contain a vertex
                if (seen.insert(h).second) queue.push_back(h);
            }
        }
        for (const auto& [vs, rs] : seen) {
            PolyFace f{vs, rs, 0};
            QMat m(0, dim);
            for (size_t i = 1; i < vs.size(); ++i) {
                m.a.push_back(sub(vertices[vs[i]], vertices[vs[0]]));
                m.rows++;
            }
            for (size_t r : rs) {
                m.a.push_back(tail_rays[r]);
                m.rows++;
            }
            f.dim = m.rows == 0 ? 0 : mat_rank(m);
            faces_.push_back(std::move(f));
        }
        std::sort(faces_.begin(), faces_.end(), [](const PolyFace& x, const PolyFace& y) {
            if (x.dim != y.dim) return x.dim < y.dim;
            if (x.verts != y.verts) return x.verts < y.verts;
            return x.rays < y.rays;
        });
        for (const auto& f : faces_) {
            if (f.dim == 1 && f.rays.empty() && f.verts.size() == 2) {
                edges_.push_back({f.verts[0], f.verts[1], sub(vertices[f.verts[1]], vertices[f.verts[0]])});
            }
            if (f.dim == 2 && f.rays.empty()) two_faces_.push_back(f);
        }
        std::sort(edges_.begin(), edges_.end(), [](const CompactEdge& x, const CompactEdge& y) {
            return std::pair(x.i, x.j) < std::pair(y.i, y.j);
        });
    }
};

// ---------------------------------------------------------------------------
// Operations

inline ConeZ cone_over(const RationalPolyhedron& p) {
    std::vector<QVec> gens;
    for (const auto& v : p.vertices) {
        QVec h = v;
        h.push_back(Rat(1));
        gens.push_back(primitive(h));
    }
    for (const auto& r : p.tail_rays) {
        QVec h = r;
        h.push_back(Rat(0));
        gens.push_back(primitive(h));
    }
    return ConeZ::from_rays(p.dim + 1, gens);
}

inline ConeZ tail_cone(const RationalPolyhedron& p) {
    return ConeZ::from_rays(p.dim, p.tail_rays);
}

// The face of P on which c attains its minimum, as a sub-polyhedron.
inline RationalPolyhedron face_at(const RationalPolyhedron& p, const QVec& c) {
    if (!p.bounded_below(c))
        throw Error(ErrorKind::UnboundedDirection, "face_at: c is unbounded below on P");
    Rat m = p.support_min(c);
    std::vector<QVec> vs, rs;
    for (const auto& v : p.vertices)
        if (dot(v, c) == m) vs.push_back(v);
    for (const auto& r : p.tail_rays)
        if (dot(r, c) == 0) rs.push_back(r);
    return RationalPolyhedron::from_vrep(p.dim, vs, rs);
}

// Locate a sub-polyhedron among the faces of P.
inline PolyFace find_face(const RationalPolyhedron& p, const RationalPolyhedron& f) {
    for (const auto& face : p.faces()) {
        std::vector<QVec> vs;
        for (size_t i : face.verts) vs.push_back(p.vertices[i]);
        std::sort(vs.begin(), vs.end(), lex_less);
        std::vector<QVec> rs;
        for (size_t i : face.rays) rs.push_back(p.tail_rays[i]);
        std::sort(rs.begin(), rs.end(), lex_less);
        if (vs == f.vertices && rs == f.tail_rays) return face;
    }
    throw Error(ErrorKind::NotAFace, "sub-polyhedron is not a face");
}

// Normal cone of a face: spanned by the facet normals active on it.
inline ConeZ normal_cone(const RationalPolyhedron& p, const PolyFace& face) {
    std::vector<QVec> gens;
    for (const auto& f : p.facets) {
        bool active = true;
        for (size_t i : face.verts)
            if (dot(f.a, p.vertices[i]) != f.b) { active = false; break; }
        for (size_t r : face.rays)
            if (active && dot(f.a, p.tail_rays[r]) != 0) active = false;
        if (active) gens.push_back(f.a);
    }
    return ConeZ::from_rays(p.dim, gens);
}

inline ConeZ normal_cone(const RationalPolyhedron& p, const RationalPolyhedron& face) {
    return normal_cone(p, find_face(p, face));
}

inline RationalPolyhedron minkowski_sum(const RationalPolyhedron& a, const RationalPolyhedron& b) {
    if (a.tail_rays != b.tail_rays)
        throw Error(ErrorKind::TailMismatch, "summands must share the tail cone");
    std::vector<QVec> vs;
    for (const auto& x : a.vertices)
        for (const auto& y : b.vertices) vs.push_back(add(x, y));
    return RationalPolyhedron::from_vrep(a.dim, vs, a.tail_rays);
}

}  // namespace minkext
