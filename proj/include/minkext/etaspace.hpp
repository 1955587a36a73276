// The eta family of a rational polyhedron and its parameter spaces: eta,
// eta_Z and the minimizing vertex v(c); per-edge lattice data (the integer g,
// short half-open edges, lattice-disjoint edges); the subspace T(P) with its
// cone T+(P) and lattice T_Z(P); and the liftings eta~ / eta~_Z into the dual
// space T*(P), represented by their values on the fixed T_Z(P) basis.

#pragma once

#include "minkext/polyhedron.hpp"

namespace minkext {

// ---------------------------------------------------------------------------
// Segment/lattice helpers

// Does the affine line through p and q meet the lattice Z^d?
inline bool affine_line_hits_lattice(const QVec& p, const QVec& q) {
    size_t d = p.size();
    QVec dir = sub(q, p);
    if (is_zero(dir)) return is_integral(p);
    auto quot = mat_kernel(QMat(std::vector<QVec>{dir}));  // functionals vanishing on dir
    if (quot.empty()) return true;  // d = 1: the line is everything
    std::vector<QVec> img_gens;
    for (size_t j = 0; j < d; ++j) {
        QVec col(quot.size());
        for (size_t i = 0; i < quot.size(); ++i) col[i] = quot[i][j];
        img_gens.push_back(std::move(col));
    }
    IntLattice img = lattice_from_generators(quot.size(), img_gens);
    QVec fp(quot.size());
    for (size_t i = 0; i < quot.size(); ++i) fp[i] = dot(quot[i], p);
    return img.member(fp);
}

// Lattice points on the closed segment [p, q], lex sorted.
inline std::vector<QVec> segment_lattice_points(const QVec& p, const QVec& q) {
    size_t d = p.size();
    QVec dir = sub(q, p);
    if (is_zero(dir)) {
        if (is_integral(p)) return {p};
        return {};
    }
    std::vector<HalfSpace> hs;
    auto quot = mat_kernel(QMat(std::vector<QVec>{dir}));
    for (const auto& f : quot) {
        hs.push_back({f, dot(f, p)});
        hs.push_back({neg(f), -dot(f, p)});
    }
    Rat lo = dot(dir, p), hi = dot(dir, q);
    if (lo > hi) std::swap(lo, hi);
    hs.push_back({dir, lo});
    hs.push_back({neg(dir), -hi});
    return enumerate_lattice_points(hs, standard_lattice(d));
}

// ---------------------------------------------------------------------------
// Per-edge lattice data

struct EdgeData {
    size_t edge = 0;          // index into compact_edges()
    Int g = 1;                // minimal g with lattice points on the line through g*edge
    bool short_forward = false;   // [v^i, v^j) is short
    bool short_backward = false;  // [v^j, v^i) is short
    bool lattice_disjoint = false;
};

// ---------------------------------------------------------------------------
// The parameter space

struct TSpace {
    size_t r = 0, m = 0;            // #compact edges, #vertices
    std::vector<QVec> perp;         // generators of T(P)^perp in R^{r+m}
    std::vector<QVec> basis;        // basis of T(P): the T_Z(P) basis
    QVec oneone;                    // the distinguished element [P]
    size_t dim() const { return basis.size(); }
};

struct TLattice {
    IntLattice lattice;  // T_Z(P) inside R^{r+m}
};

// A functional on T(P), canonically the vector of its values on the fixed
// T_Z(P) basis.  Raw lifts in R^{r+m} are kept when available.
struct Functional {
    QVec coords;
    std::optional<QVec> raw;

    bool operator==(const Functional& o) const { return coords == o.coords; }
    bool operator!=(const Functional& o) const { return coords != o.coords; }
    bool operator<(const Functional& o) const { return lex_less(coords, o.coords); }
    bool is_zero_functional() const { return minkext::is_zero(coords); }
};

inline Functional operator+(const Functional& a, const Functional& b) {
    Functional f{add(a.coords, b.coords), std::nullopt};
    if (a.raw && b.raw) f.raw = add(*a.raw, *b.raw);
    return f;
}

inline Functional operator-(const Functional& a, const Functional& b) {
    Functional f{sub(a.coords, b.coords), std::nullopt};
    if (a.raw && b.raw) f.raw = sub(*a.raw, *b.raw);
    return f;
}

inline Functional operator*(const Rat& c, const Functional& a) {
    Functional f{scale(c, a.coords), std::nullopt};
    if (a.raw) f.raw = scale(c, *a.raw);
    return f;
}

// ---------------------------------------------------------------------------

// The central facade of the module.  Construction normalizes the polyhedron
// per the reference-vertex convention: when lattice vertices exist, the
// lex-smallest one is translated to the origin and becomes v*; otherwise v*
// is the lex-smallest vertex.  With this convention P_[P] = P.
class EtaOracle {
public:
    // The optional override fixes the reference vertex (index after the
    // normalizing shift); it exists so reference-vertex independence is
    // observable in tests.
    explicit EtaOracle(const RationalPolyhedron& input,
                       std::optional<size_t> vstar_override = std::nullopt) {
        QVec shift = qvec_zero(input.dim);
        for (const auto& v : input.vertices) {
            if (is_integral(v)) { shift = neg(v); break; }  // vertices are lex sorted
        }
        shift_ = shift;
        p_ = is_zero(shift) ? input : input.translated(shift);
        vstar_ = 0;
        for (size_t i = 0; i < p_.vertices.size(); ++i)
            if (is_zero(p_.vertices[i])) vstar_ = i;
        if (vstar_override) vstar_ = *vstar_override;
        build_edge_data();
        build_tspace();
        build_paths();
    }

    const RationalPolyhedron& polyhedron() const { return p_; }
    const QVec& applied_shift() const { return shift_; }
    size_t vstar() const { return vstar_; }
    const std::vector<EdgeData>& edge_data() const { return edges_; }
    const TSpace& tspace() const { return tspace_; }
    const IntLattice& tlattice() const { return tlat_; }
    size_t r() const { return tspace_.r; }
    size_t m() const { return tspace_.m; }

    bool in_tail_dual(const QVec& c) const { return p_.bounded_below(c); }

    Rat eta(const QVec& c) const { return -p_.support_min(c); }

    Int eta_Z(const QVec& c) const { return rat_ceil(eta(c)); }

    size_t v_of(const QVec& c) const { return p_.argmin_vertex(c); }

    bool is_super_integral(const QVec& c) const {
        if (!is_integral(c)) return false;
        for (const auto& v : p_.vertices)
            if (!rat_is_int(dot(v, c))) return false;
        return true;
    }

    // --- functionals --------------------------------------------------------

    Functional functional_from_raw(const QVec& raw) const {
        Functional f;
        f.raw = raw;
        f.coords = QVec(tspace_.basis.size());
        for (size_t i = 0; i < tspace_.basis.size(); ++i) f.coords[i] = dot(raw, tspace_.basis[i]);
        return f;
    }

    Functional zero_functional() const { return functional_from_raw(qvec_zero(tspace_.r + tspace_.m)); }

    Functional functional_t(size_t edge) const {
        QVec raw = qvec_zero(tspace_.r + tspace_.m);
        raw[edge] = 1;
        return functional_from_raw(raw);
    }

    Functional functional_s(size_t vertex) const {
        QVec raw = qvec_zero(tspace_.r + tspace_.m);
        raw[tspace_.r + vertex] = 1;
        return functional_from_raw(raw);
    }

    // L_ij(c) = <v^i - v^j, c> t_ij + <v^j, c> s_j - <v^i, c> s_i
    Functional functional_L(size_t edge, const QVec& c) const {
        const auto& e = p_.compact_edges()[edge];
        QVec raw = qvec_zero(tspace_.r + tspace_.m);
        raw[edge] = dot(sub(p_.vertices[e.i], p_.vertices[e.j]), c);
        raw[tspace_.r + e.j] += dot(p_.vertices[e.j], c);
        raw[tspace_.r + e.i] -= dot(p_.vertices[e.i], c);
        return functional_from_raw(raw);
    }

    // pi : T*(P) -> R sends t_e, s_{v not in N} to 1 and s_{v in N} to 0,
    // i.e. evaluates at the distinguished element.
    Rat pi(const Functional& f) const { return dot(f.coords, oneone_coords_); }

    bool dual_lattice_member(const Functional& f) const { return is_integral(f.coords); }

    // --- liftings ------------------------------------------------------------

    // eta~(c) along an edge path from v* to v(c); rational c allowed.
    // path_variant switches to a second, independently built spanning tree so
    // that path independence is observable.
    Functional eta_tilde(const QVec& c, std::optional<size_t> v_override = std::nullopt,
                         int path_variant = 0) const {
        size_t target = v_override ? *v_override : v_of(c);
        if (v_override && dot(p_.vertices[*v_override], c) != -eta(c))
            throw Error(ErrorKind::InvariantViolation, "override vertex does not minimize c");
        QVec raw = qvec_zero(tspace_.r + tspace_.m);
        raw[tspace_.r + vstar_] = -dot(p_.vertices[vstar_], c);
        const auto& parent = path_variant == 0 ? parent_ : parent_alt_;
        const auto& parent_edge = path_variant == 0 ? parent_edge_ : parent_edge_alt_;
        size_t cur = target;
        while (cur != vstar_) {
            size_t up = parent[cur];
            size_t e = parent_edge[cur];
            // walking up->cur contributes -<cur - up, c> on t_e
            raw[e] -= dot(sub(p_.vertices[cur], p_.vertices[up]), c);
            cur = up;
        }
        return functional_from_raw(raw);
    }

    struct PathStep {
        size_t edge;
        size_t from;  // closer to v*
        size_t to;
    };

    // walk along the spanning tree from v* to v, in root-to-leaf order
    std::vector<PathStep> tree_path(size_t v) const {
        std::vector<PathStep> steps;
        size_t cur = v;
        while (cur != vstar_) {
            steps.push_back({parent_edge_[cur], parent_[cur], cur});
            cur = parent_[cur];
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    }

    // eta~_Z(c) = eta~(c) + {eta(c)} s_{v(c)}, in T*_Z(P) for integral c.
    Functional eta_tilde_Z(const QVec& c, std::optional<size_t> v_override = std::nullopt,
                           int path_variant = 0) const {
        if (!is_integral(c))
            throw Error(ErrorKind::InvariantViolation, "eta~_Z needs an integral direction");
        size_t v = v_override ? *v_override : v_of(c);
        Functional f = eta_tilde(c, v_override, path_variant);
        Rat frac = frac_up(eta(c));
        if (frac != 0) f = f + frac * functional_s(v);
        return f;
    }

private:
    RationalPolyhedron p_;
    QVec shift_;
    size_t vstar_ = 0;
    std::vector<EdgeData> edges_;
    TSpace tspace_;
    IntLattice tlat_;
    QVec oneone_coords_;
    std::vector<size_t> parent_, parent_edge_, parent_alt_, parent_edge_alt_;

    void build_edge_data() {
        const auto& ce = p_.compact_edges();
        for (size_t e = 0; e < ce.size(); ++e) {
            EdgeData d;
            d.edge = e;
            const QVec& vi = p_.vertices[ce[e].i];
            const QVec& vj = p_.vertices[ce[e].j];
            Int den = 1;
            for (const auto& x : vi) den = boost::multiprecision::lcm(den, rat_den(x));
            for (const auto& x : vj) den = boost::multiprecision::lcm(den, rat_den(x));
            for (Int g = 1; g <= den; ++g) {
                if (affine_line_hits_lattice(scale(Rat(g), vi), scale(Rat(g), vj))) {
                    d.g = g;
                    break;
                }
            }
            auto count_half_open = [&](const QVec& from, const QVec& to) {
                auto pts = segment_lattice_points(scale(Rat(d.g), from), scale(Rat(d.g), to));
                long n = long(pts.size());
                QVec endpoint = scale(Rat(d.g), to);
                for (const auto& q : pts)
                    if (q == endpoint) --n;
                return n;
            };
            d.short_forward = count_half_open(vi, vj) <= long(d.g) - 1;
            d.short_backward = count_half_open(vj, vi) <= long(d.g) - 1;
            d.lattice_disjoint = segment_lattice_points(vi, vj).empty();
            edges_.push_back(std::move(d));
        }
    }

    void build_tspace() {
        size_t r = p_.compact_edges().size();
        size_t m = p_.vertices.size();
        tspace_.r = r;
        tspace_.m = m;
        // (1) closing conditions, one row per ambient coordinate of each cycle
        for (const auto& cyc : p_.face_cycles()) {
            for (size_t k = 0; k < p_.dim; ++k) {
                QVec row = qvec_zero(r + m);
                for (size_t e = 0; e < r; ++e)
                    if (cyc.signs[e] != 0) row[e] = Rat(cyc.signs[e]) * p_.compact_edges()[e].dir[k];
                tspace_.perp.push_back(std::move(row));
            }
        }
        // (2) s_i = 0 for lattice vertices
        for (size_t i = 0; i < m; ++i) {
            if (is_integral(p_.vertices[i])) {
                QVec row = qvec_zero(r + m);
                row[r + i] = 1;
                tspace_.perp.push_back(std::move(row));
            }
        }
        // (3) s_i = s_j on lattice-disjoint edges, (4) t = s on short half-open edges
        for (size_t e = 0; e < r; ++e) {
            const auto& edge = p_.compact_edges()[e];
            if (edges_[e].lattice_disjoint) {
                QVec row = qvec_zero(r + m);
                row[r + edge.i] = 1;
                row[r + edge.j] = -1;
                tspace_.perp.push_back(std::move(row));
            }
            if (edges_[e].short_forward) {
                QVec row = qvec_zero(r + m);
                row[e] = 1;
                row[r + edge.i] = -1;
                tspace_.perp.push_back(std::move(row));
            }
            if (edges_[e].short_backward) {
                QVec row = qvec_zero(r + m);
                row[e] = 1;
                row[r + edge.j] = -1;
                tspace_.perp.push_back(std::move(row));
            }
        }
        std::vector<QVec> tbasis =
            tspace_.perp.empty() ? standard_lattice(r + m).basis : mat_kernel(QMat(tspace_.perp));
        // the lattice T_Z(P): s integral and L_ij integral on N
        std::vector<QVec> cons;
        for (size_t i = 0; i < m; ++i) {
            QVec row = qvec_zero(r + m);
            row[r + i] = 1;
            cons.push_back(std::move(row));
        }
        for (size_t e = 0; e < r; ++e) {
            const auto& edge = p_.compact_edges()[e];
            for (size_t k = 0; k < p_.dim; ++k) {
                QVec row = qvec_zero(r + m);
                row[e] = p_.vertices[edge.i][k] - p_.vertices[edge.j][k];
                row[r + edge.i] -= p_.vertices[edge.i][k];
                row[r + edge.j] += p_.vertices[edge.j][k];
                cons.push_back(std::move(row));
            }
        }
        tlat_ = preimage_lattice(QMat(cons), tbasis);
        tspace_.basis = tlat_.basis;
        // the distinguished element
        tspace_.oneone = qvec_zero(r + m);
        for (size_t e = 0; e < r; ++e) tspace_.oneone[e] = 1;
        for (size_t i = 0; i < m; ++i)
            if (!is_integral(p_.vertices[i])) tspace_.oneone[r + i] = 1;
        auto cc = coords_in_basis(tspace_.basis, tspace_.oneone);
        if (!cc || !is_integral(*cc))
            throw Error(ErrorKind::InvariantViolation, "[P] escapes the lattice T_Z(P)");
        oneone_coords_ = *cc;
    }

    void build_paths() {
        size_t m = p_.vertices.size();
        parent_.assign(m, size_t(-1));
        parent_edge_.assign(m, size_t(-1));
        parent_alt_.assign(m, size_t(-1));
        parent_edge_alt_.assign(m, size_t(-1));
        auto bfs = [&](bool reversed, std::vector<size_t>& par, std::vector<size_t>& pedge) {
            std::vector<char> seen(m, 0);
            seen[vstar_] = 1;
            std::vector<size_t> frontier{vstar_};
            const auto& ce = p_.compact_edges();
            while (!frontier.empty()) {
                std::vector<size_t> next;
                for (size_t v : frontier) {
                    for (size_t k = 0; k < ce.size(); ++k) {
                        size_t e = reversed ? ce.size() - 1 - k : k;
                        size_t other;
                        if (ce[e].i == v) other = ce[e].j;
                        else if (ce[e].j == v) other = ce[e].i;
                        else continue;
                        if (seen[other]) continue;
                        seen[other] = 1;
                        par[other] = v;
                        pedge[other] = e;
                        next.push_back(other);
                    }
                }
                frontier = std::move(next);
            }
            for (size_t v = 0; v < m; ++v)
                if (!seen[v])
                    throw Error(ErrorKind::InvariantViolation, "compact edge graph is disconnected");
        };
        bfs(false, parent_, parent_edge_);
        bfs(true, parent_alt_, parent_edge_alt_);
    }
};

// T+(P) as an H-rep in R^{r+m}: the perp equations plus nonnegativity.
inline std::vector<HalfSpace> tplus_hrep(const TSpace& ts) {
    std::vector<HalfSpace> hs;
    for (const auto& row : ts.perp) {
        hs.push_back({row, Rat(0)});
        hs.push_back({neg(row), Rat(0)});
    }
    for (size_t i = 0; i < ts.r + ts.m; ++i) {
        QVec e = qvec_zero(ts.r + ts.m);
        e[i] = 1;
        hs.push_back({e, Rat(0)});
    }
    return hs;
}

inline bool in_tspace(const TSpace& ts, const QVec& xi) {
    for (const auto& row : ts.perp)
        if (dot(row, xi) != 0) return false;
    return true;
}

inline bool in_tplus(const TSpace& ts, const QVec& xi) {
    if (!in_tspace(ts, xi)) return false;
    for (const auto& x : xi)
        if (x < 0) return false;
    return true;
}

}  // namespace minkext
