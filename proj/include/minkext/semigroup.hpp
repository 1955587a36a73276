// Finitely generated pointed affine semigroups in Z^n: exact membership,
// bounded element enumeration, Hilbert bases, relative boundaries, freeness,
// the decomposition operators, quotient groups, extension diagrams with the
// three co-Cartesian conditions, and pushouts along maps of the small
// semigroup.

#pragma once

#include "minkext/polyhedron.hpp"

#include <memory>
#include <mutex>
#include <variant>

namespace minkext {

// ---------------------------------------------------------------------------

class AffineSemigroup {
public:
    size_t rank = 0;
    std::vector<IVec> generators;  // nonzero, lex sorted, deduped

    AffineSemigroup() = default;

    static AffineSemigroup from_generators(size_t rank, std::vector<IVec> gens) {
        AffineSemigroup s;
        s.rank = rank;
        for (auto& g : gens) {
            bool zero = true;
            for (const auto& x : g)
                if (x != 0) zero = false;
            if (!zero) s.generators.push_back(g);
        }
        std::sort(s.generators.begin(), s.generators.end());
        s.generators.erase(std::unique(s.generators.begin(), s.generators.end()),
                           s.generators.end());
        s.init();
        return s;
    }

    bool operator==(const AffineSemigroup& o) const {
        return rank == o.rank && generators == o.generators;
    }

    const IVec& weight_functional() const { return weight_; }

    Int weight(const IVec& s) const {
        Int w = 0;
        for (size_t i = 0; i < rank; ++i) w += weight_[i] * s[i];
        return w;
    }

    bool in_cone(const IVec& s) const {
        QVec q = to_qvec(s);
        for (const auto& r : dual_rays_)
            if (dot(r, q) < 0) return false;
        for (const auto& l : dual_lin_)
            if (dot(l, q) != 0) return false;
        return true;
    }

    // Exact membership: complete search over generator multiplicities, bounded
    // by the strictly positive weight functional.
    bool member(const IVec& s) const {
        bool zero = true;
        for (const auto& x : s)
            if (x != 0) zero = false;
        if (zero) return true;
        if (generators.empty()) return false;
        if (!in_cone(s)) return false;
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            auto it = cache_->map.find(s);
            if (it != cache_->map.end()) return it->second;
        }
        bool ok = member_rec(s, 0);
        {
            std::lock_guard<std::mutex> lock(cache_->mu);
            cache_->map.emplace(s, ok);
        }
        return ok;
    }

    // Elements of degree (minimal number of generator summands) at most
    // `bound`, with their degrees.
    std::map<IVec, int> elements(int bound) const {
        std::map<IVec, int> out;
        out[IVec(rank, 0)] = 0;
        std::vector<IVec> frontier{IVec(rank, 0)};
        for (int d = 1; d <= bound; ++d) {
            std::vector<IVec> next;
            for (const auto& e : frontier) {
                for (const auto& g : generators) {
                    IVec s(rank);
                    for (size_t i = 0; i < rank; ++i) s[i] = e[i] + g[i];
                    if (out.emplace(s, d).second) next.push_back(s);
                }
            }
            frontier = std::move(next);
        }
        return out;
    }

private:
    // copies of the same semigroup may share the memoized memberships;
    // the guard keeps concurrent use safe and the results are value-determined
    struct MemberCache {
        std::mutex mu;
        std::map<IVec, bool> map;
    };

    IVec weight_;
    std::vector<QVec> dual_rays_, dual_lin_;
    std::shared_ptr<MemberCache> cache_ = std::make_shared<MemberCache>();

    void init() {
        if (generators.empty()) {
            weight_.assign(rank, 0);
            return;
        }
        std::vector<QVec> gq;
        for (const auto& g : generators) gq.push_back(to_qvec(g));
        RayBasis dual = dd_rays(rank, gq);
        dual_rays_ = dual.rays;
        dual_lin_ = dual.lineality;
        QVec w = qvec_zero(rank);
        for (const auto& r : dual.rays) w = add(w, r);
        for (const auto& g : gq)
            if (dot(w, g) <= 0)
                throw Error(ErrorKind::NotPointed, "semigroup is not pointed");
        weight_ = to_ivec(primitive(w));
    }

    bool member_rec(const IVec& s, size_t idx) const {
        bool zero = true;
        for (const auto& x : s)
            if (x != 0) zero = false;
        if (zero) return true;
        if (idx == generators.size()) return false;
        if (!in_cone(s)) return false;
        Int ws = weight(s);
        if (ws < 0) return false;
        Int wg = weight(generators[idx]);
        Int kmax = ws / wg;
        IVec cur = s;
        for (Int k = 0; k <= kmax; ++k) {
            if (k > 0)
                for (size_t i = 0; i < rank; ++i) cur[i] -= generators[idx][i];
            if (member_rec(cur, idx + 1)) return true;
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Hilbert bases

namespace detail {

// pulling triangulation of a polytope's face, as vertex index sets
inline void pull_triangulate(const RationalPolyhedron& q, const PolyFace& face,
                             std::vector<std::vector<size_t>>& out) {
    if (face.verts.size() == face.dim + 1) {
        out.push_back(face.verts);
        return;
    }
    size_t v0 = face.verts.front();
    for (const auto& g : q.faces()) {
        if (g.dim + 1 != face.dim) continue;
        if (!std::includes(face.verts.begin(), face.verts.end(), g.verts.begin(), g.verts.end()))
            continue;
        if (std::binary_search(g.verts.begin(), g.verts.end(), v0)) continue;
        std::vector<std::vector<size_t>> sub;
        pull_triangulate(q, g, sub);
        for (auto& s : sub) {
            s.push_back(v0);
            std::sort(s.begin(), s.end());
            out.push_back(std::move(s));
        }
    }
}

// lattice points of the half-open parallelepiped sum of [0,1) multiples of
// the rows of `rays` (a full-rank integer square matrix), via the Smith form
inline std::vector<IVec> parallelepiped_points(const std::vector<IVec>& rays) {
    size_t k = rays.size();
    SmithResult snf = smith_normal_form(IMat(rays));
    if (snf.diag.size() != k)
        throw Error(ErrorKind::InvariantViolation, "parallelepiped rays are dependent");
    // lambda-coordinates of the class representatives: rows of V^{-1} R^{-1}
    QMat rq(k, k);
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j) rq[i][j] = Rat(rays[i][j]);
    QMat rinv(k, k);
    for (size_t col = 0; col < k; ++col) {
        QVec e = qvec_zero(k);
        e[col] = 1;
        auto sol = mat_solve(rq, e);
        for (size_t i = 0; i < k; ++i) rinv[i][col] = (*sol)[i];
    }
    // step[i] = lambda-increment when z_i advances by one
    std::vector<QVec> step(k, qvec_zero(k));
    for (size_t i = 0; i < k; ++i)
        for (size_t j = 0; j < k; ++j)
            for (size_t l = 0; l < k; ++l) step[i][j] += Rat(snf.vinv[i][l]) * rinv[l][j];
    std::vector<IVec> out;
    std::vector<Int> z(k, 0);
    QVec lambda = qvec_zero(k);
    while (true) {
        QVec frac = lambda;
        for (size_t j = 0; j < k; ++j) frac[j] -= Rat(rat_floor(frac[j]));
        IVec x(k, 0);
        bool zero = true;
        for (size_t i = 0; i < k; ++i) {
            Rat acc(0);
            for (size_t j = 0; j < k; ++j) acc += frac[j] * rq[j][i];
            x[i] = rat_num(acc);
            if (x[i] != 0) zero = false;
        }
        if (!zero) out.push_back(std::move(x));
        size_t j = 0;
        while (j < k && z[j] + 1 == snf.diag[j]) {
            for (size_t l = 0; l < k; ++l) lambda[l] -= Rat(snf.diag[j] - 1) * step[j][l];
            z[j++] = 0;
        }
        if (j == k) break;
        ++z[j];
        for (size_t l = 0; l < k; ++l) lambda[l] += step[j][l];
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace detail

// Minimal generating set of C intersected with `lattice`, normaliz-style:
// express the cone in lattice coordinates, saturate to its linear span,
// triangulate by pulling the first crosscut vertex, collect the half-open
// fundamental parallelepiped points of every simplicial piece together with
// the primitive rays, and keep the irreducible candidates.
inline std::vector<IVec> hilbert_basis(const ConeZ& c, const IntLattice& lattice) {
    // work in lattice coordinates
    size_t m = lattice.rank();
    std::vector<QVec> ineqs;
    for (const auto& a : c.hrep) {
        QVec row(m);
        for (size_t j = 0; j < m; ++j) row[j] = dot(a, lattice.basis[j]);
        ineqs.push_back(std::move(row));
    }
    for (const auto& e : c.eqs) {
        QVec row(m);
        for (size_t j = 0; j < m; ++j) row[j] = dot(e, lattice.basis[j]);
        ineqs.push_back(row);
        ineqs.push_back(neg(row));
    }
    RayBasis rb = dd_rays(m, ineqs);
    if (!rb.lineality.empty())
        throw Error(ErrorKind::NotPointed, "hilbert_basis: cone is not pointed on the lattice");
    if (rb.rays.empty()) return {};

    // restrict to the saturated lattice of the cone's linear span
    std::vector<QVec> urays = rb.rays;
    std::vector<QVec> span_basis;  // rows: basis of Z^m cap span(rays)
    {
        QMat raymat(urays);
        size_t k = mat_rank(raymat);
        if (k < m) {
            // functionals vanishing on the span
            std::vector<QVec> frows = mat_kernel(raymat);
            IMat fint(frows.size(), m);
            for (size_t i = 0; i < frows.size(); ++i) {
                QVec p = primitive(frows[i]);
                for (size_t j = 0; j < m; ++j) fint[i][j] = rat_num(p[j]);
            }
            for (const auto& row : integer_kernel(fint)) span_basis.push_back(to_qvec(row));
        } else {
            for (size_t i = 0; i < m; ++i) {
                QVec e = qvec_zero(m);
                e[i] = 1;
                span_basis.push_back(std::move(e));
            }
        }
    }
    size_t k = span_basis.size();
    std::vector<IVec> krays;  // primitive rays in span coordinates
    for (const auto& r : urays) {
        auto cc = coords_in_basis(span_basis, r);
        krays.push_back(to_ivec(primitive(*cc)));
    }
    // crosscut polytope and its pulling triangulation
    QVec w = qvec_zero(k);
    {
        std::vector<QVec> kq;
        for (const auto& r : krays) kq.push_back(to_qvec(r));
        RayBasis dual = dual_cone_rays(k, kq);
        for (const auto& d : dual.rays) w = add(w, d);
    }
    std::vector<QVec> cross;
    for (const auto& r : krays) {
        QVec rq = to_qvec(r);
        cross.push_back(scale(Rat(1) / dot(w, rq), rq));
    }
    auto q = RationalPolyhedron::from_vrep(k, cross, {});
    // map crosscut vertices back to ray indices
    std::vector<size_t> vert_ray(q.vertices.size());
    for (size_t v = 0; v < q.vertices.size(); ++v) {
        QVec prim = primitive(q.vertices[v]);
        auto it = std::find_if(krays.begin(), krays.end(),
                               [&](const IVec& r) { return to_qvec(r) == prim; });
        if (it == krays.end())
            throw Error(ErrorKind::InvariantViolation, "crosscut vertex is not a ray");
        vert_ray[v] = size_t(it - krays.begin());
    }
    PolyFace top;
    top.verts.resize(q.vertices.size());
    std::iota(top.verts.begin(), top.verts.end(), size_t(0));
    top.dim = k - 1;
    std::vector<std::vector<size_t>> simplices;
    if (q.vertices.size() == 1) simplices.push_back({0});
    else detail::pull_triangulate(q, top, simplices);
    // candidates: primitive rays plus all parallelepiped points
    std::set<IVec> cand_set;
    for (const auto& r : krays) cand_set.insert(r);
    for (const auto& simplex : simplices) {
        std::vector<IVec> srays;
        for (size_t v : simplex) srays.push_back(krays[vert_ray[v]]);
        for (auto& p : detail::parallelepiped_points(srays)) cand_set.insert(std::move(p));
    }
    // reduction: x is kept iff no other candidate descends inside the cone
    std::vector<QVec> kineqs;  // cone H-rep in span coordinates
    {
        std::vector<QVec> kq;
        for (const auto& r : krays) kq.push_back(to_qvec(r));
        kineqs = dual_cone_rays(k, kq).rays;
    }
    auto in_cone = [&](const QVec& x) {
        for (const auto& a : kineqs)
            if (dot(a, x) < 0) return false;
        return true;
    };
    std::vector<IVec> cand(cand_set.begin(), cand_set.end());
    std::vector<IVec> basis;
    for (const auto& x : cand) {
        bool reducible = false;
        QVec xq = to_qvec(x);
        for (const auto& y : cand) {
            if (y == x) continue;
            QVec z = sub(xq, to_qvec(y));
            if (is_zero(z)) continue;
            if (in_cone(z)) { reducible = true; break; }
        }
        if (!reducible) {
            // back through span coordinates, then through the lattice basis
            QVec u = qvec_zero(m);
            for (size_t j = 0; j < k; ++j) u = add(u, scale(Rat(x[j]), span_basis[j]));
            basis.push_back(to_ivec(lattice.from_coords(u)));
        }
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

inline std::vector<IVec> hilbert_basis(const ConeZ& c) {
    return hilbert_basis(c, standard_lattice(c.rank));
}

inline AffineSemigroup semigroup_of_cone(const ConeZ& c) {
    return AffineSemigroup::from_generators(c.rank, hilbert_basis(c));
}

// ---------------------------------------------------------------------------
// Pairs, boundaries, freeness

struct SemigroupPair {
    AffineSemigroup t, s;

    static SemigroupPair make(AffineSemigroup t, AffineSemigroup s) {
        if (t.rank != s.rank)
            throw Error(ErrorKind::InvariantViolation, "pair ambient ranks differ");
        for (const auto& g : t.generators)
            if (!s.member(g))
                throw Error(ErrorKind::InvariantViolation, "subsemigroup generator escapes S");
        return {std::move(t), std::move(s)};
    }
};

// s is boundary iff no nonzero t of degree <= bound descends: s - t stays
// outside S.  Membership of the difference is exact.
inline bool is_boundary_element(const SemigroupPair& pair, const IVec& s, int bound) {
    for (const auto& [t, d] : pair.t.elements(bound)) {
        if (d == 0) continue;
        IVec diff(pair.s.rank);
        for (size_t i = 0; i < pair.s.rank; ++i) diff[i] = s[i] - t[i];
        if (pair.s.member(diff)) return false;
    }
    return true;
}

inline std::vector<IVec> relative_boundary(const SemigroupPair& pair, int bound) {
    std::vector<IVec> out;
    for (const auto& [s, d] : pair.s.elements(bound))
        if (is_boundary_element(pair, s, bound)) out.push_back(s);
    std::sort(out.begin(), out.end());
    return out;
}

struct FreeWitness {
    IVec b1, t1, b2, t2;  // b1 + t1 = b2 + t2, distinct decompositions
};

struct FreeResult {
    bool free_within_bound = true;
    std::optional<FreeWitness> witness;
};

inline FreeResult is_free(const SemigroupPair& pair, int bound) {
    auto boundary = relative_boundary(pair, bound);
    auto telems = pair.t.elements(bound);
    std::map<IVec, std::pair<IVec, IVec>> seen;  // sum -> (b, t)
    for (const auto& b : boundary) {
        for (const auto& [t, d] : telems) {
            IVec sum(pair.s.rank);
            for (size_t i = 0; i < pair.s.rank; ++i) sum[i] = b[i] + t[i];
            auto [it, fresh] = seen.emplace(sum, std::make_pair(b, t));
            if (!fresh && (it->second.first != b || it->second.second != t))
                return {false, FreeWitness{it->second.first, it->second.second, b, t}};
        }
    }
    return {true, std::nullopt};
}

// All decompositions s = b + t with t of degree <= bound and b boundary.
inline std::vector<std::pair<IVec, IVec>> all_decompositions(const SemigroupPair& pair,
                                                             const IVec& s, int bound) {
    std::vector<std::pair<IVec, IVec>> out;
    for (const auto& [t, d] : pair.t.elements(bound)) {
        IVec b(pair.s.rank);
        for (size_t i = 0; i < pair.s.rank; ++i) b[i] = s[i] - t[i];
        if (!pair.s.member(b)) continue;
        if (is_boundary_element(pair, b, bound)) out.push_back({b, t});
    }
    std::sort(out.begin(), out.end());
    return out;
}

// The retractions of a free pair: s = bound_part + t_part.
inline std::pair<IVec, IVec> decompose(const SemigroupPair& pair, const IVec& s, int bound) {
    if (!pair.s.member(s))
        throw Error(ErrorKind::InvariantViolation, "decompose: s is not in S");
    auto all = all_decompositions(pair, s, bound);
    if (all.size() > 1)
        throw Error(ErrorKind::NotFreePair, "decompose: two decompositions found");
    if (all.empty())
        throw Error(ErrorKind::NotFreePair, "decompose: no decomposition within bound");
    return all[0];
}

// ---------------------------------------------------------------------------
// Quotient groups Q = (S-S)/(T-T)

struct QuotientGroup {
    std::vector<IVec> h_basis;    // basis of the group generated by S
    size_t free_rank = 0;
    std::vector<Int> torsion;     // invariant factors > 1
    // data for the quotient map
    IMat v;                       // from the Smith form of K in H-coordinates
    std::vector<Int> full_diag;   // r diagonal entries (1s kept)

    // image of x in Z^free_rank + torsion residues (appended)
    std::optional<QVec> apply(const IVec& x) const {
        auto y = coords_in_basis(qrows(h_basis), to_qvec(x));
        if (!y || !is_integral(*y)) return std::nullopt;
        size_t h = h_basis.size();
        QVec z = qvec_zero(h);
        for (size_t j = 0; j < h; ++j)
            for (size_t i = 0; i < h; ++i) z[j] += (*y)[i] * Rat(v[i][j]);
        QVec out;
        size_t r = full_diag.size();
        for (size_t j = r; j < h; ++j) out.push_back(z[j]);
        for (size_t j = 0; j < r; ++j) {
            if (full_diag[j] == 1) continue;
            Int zz = rat_num(z[j]);
            Int m = zz % full_diag[j];
            if (m < 0) m += full_diag[j];
            out.push_back(Rat(m));
        }
        return out;
    }

private:
    static std::vector<QVec> qrows(const std::vector<IVec>& rows) {
        std::vector<QVec> out;
        for (const auto& r : rows) out.push_back(to_qvec(r));
        return out;
    }
};

inline std::vector<IVec> group_basis(const std::vector<IVec>& gens) {
    if (gens.empty()) return {};
    IMat m(gens);
    auto h = hermite_normal_form(m);
    std::vector<IVec> basis;
    for (size_t i = 0; i < h.pivot_cols.size(); ++i) basis.push_back(h.h[i]);
    return basis;
}

inline QuotientGroup quotient_group(const SemigroupPair& pair) {
    QuotientGroup q;
    q.h_basis = group_basis(pair.s.generators);
    size_t h = q.h_basis.size();
    std::vector<IVec> krows;
    for (const auto& g : pair.t.generators) {
        auto y = coords_in_basis([&] {
            std::vector<QVec> rows;
            for (const auto& r : q.h_basis) rows.push_back(to_qvec(r));
            return rows;
        }(), to_qvec(g));
        if (!y || !is_integral(*y))
            throw Error(ErrorKind::InvariantViolation, "T does not sit inside the S-group");
        krows.push_back(to_ivec(*y));
    }
    if (krows.empty()) {
        q.free_rank = h;
        q.v = identity_imat(h);
        return q;
    }
    SmithResult snf = smith_normal_form(IMat(krows));
    q.v = snf.v;
    q.full_diag = snf.diag;
    q.free_rank = h - snf.diag.size();
    for (const auto& d : snf.diag)
        if (d > 1) q.torsion.push_back(d);
    return q;
}

// ---------------------------------------------------------------------------
// Extension diagrams and the conditions C1-C3

struct ExtensionDiagram {
    SemigroupPair upper;  // (T~, S~)
    SemigroupPair lower;  // (T, S)
    IMat pi;              // lower.rank x upper.rank

    IVec project(const IVec& x) const {
        IVec out(lower.s.rank, 0);
        for (size_t i = 0; i < pi.rows; ++i)
            for (size_t j = 0; j < pi.cols; ++j) out[i] += pi[i][j] * x[j];
        return out;
    }

    // trivial kernel + commutation, verified on generators and on elements of
    // bounded degree
    void validate(int bound = 3) const {
        for (const auto& g : upper.t.generators)
            if (!lower.t.member(project(g)))
                throw Error(ErrorKind::InvariantViolation, "pi(T~ generator) escapes T");
        for (const auto& g : upper.s.generators)
            if (!lower.s.member(project(g)))
                throw Error(ErrorKind::InvariantViolation, "pi(S~ generator) escapes S");
        for (const auto& [e, d] : upper.s.elements(bound)) {
            if (d == 0) continue;
            IVec p = project(e);
            bool zero = true;
            for (const auto& x : p)
                if (x != 0) zero = false;
            if (zero) throw Error(ErrorKind::InvariantViolation, "pi has nontrivial kernel");
        }
    }
};

struct ConditionResult {
    bool pass = true;
    std::string witness;  // empty when passing
};

struct CocartesianReport {
    ConditionResult c1, c2, c3;
    bool all() const { return c1.pass && c2.pass && c3.pass; }
};

namespace detail {

inline std::string ivec_str(const IVec& v) {
    std::string s = "[";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + "]";
}

}  // namespace detail

inline CocartesianReport check_cocartesian(const ExtensionDiagram& dia, int bound) {
    CocartesianReport rep;
    auto up_boundary = relative_boundary(dia.upper, bound);
    auto dn_boundary = relative_boundary(dia.lower, bound);

    // --- C1: pi restricts to a bijection on the relative boundaries
    std::map<IVec, IVec> image;  // pi(b~) -> b~
    for (const auto& b : up_boundary) {
        IVec p = dia.project(b);
        if (!is_boundary_element(dia.lower, p, bound)) {
            rep.c1 = {false, "pi(" + detail::ivec_str(b) + ") leaves the boundary"};
            break;
        }
        auto [it, fresh] = image.emplace(p, b);
        if (!fresh) {
            rep.c1 = {false, "boundary elements " + detail::ivec_str(it->second) + " and " +
                                 detail::ivec_str(b) + " collide"};
            break;
        }
    }
    if (rep.c1.pass) {
        auto up_elems = dia.upper.s.elements(bound);
        for (const auto& b : dn_boundary) {
            bool found = false;
            for (const auto& [e, d] : up_elems) {
                if (dia.project(e) == b && is_boundary_element(dia.upper, e, bound)) {
                    found = true;
                    break;
                }
            }
            if (!found) {
                rep.c1 = {false, "no boundary preimage of " + detail::ivec_str(b)};
                break;
            }
        }
    }

    // --- C2: upper pair free and the quotient map an isomorphism
    auto fr = is_free(dia.upper, bound);
    if (!fr.free_within_bound) {
        rep.c2 = {false, "upper pair is not free: " + detail::ivec_str(fr.witness->b1) + "+" +
                             detail::ivec_str(fr.witness->t1) + " = " +
                             detail::ivec_str(fr.witness->b2) + "+" + detail::ivec_str(fr.witness->t2)};
    } else {
        QuotientGroup qu = quotient_group(dia.upper);
        QuotientGroup ql = quotient_group(dia.lower);
        if (qu.free_rank != ql.free_rank || qu.torsion != ql.torsion) {
            rep.c2 = {false, "quotient invariants differ"};
        } else {
            // surjectivity: images of the upper S-group together with T-group
            // span the lower S-group
            std::vector<IVec> gens;
            for (const auto& g : dia.upper.s.generators) gens.push_back(dia.project(g));
            for (const auto& g : dia.lower.t.generators) gens.push_back(g);
            auto span = group_basis(gens);
            IntLattice lat;
            lat.ambient_dim = dia.lower.s.rank;
            for (const auto& b : span) lat.basis.push_back(to_qvec(b));
            for (const auto& g : dia.lower.s.generators) {
                if (!lat.member(to_qvec(g))) {
                    rep.c2 = {false, "quotient map not surjective at " + detail::ivec_str(g)};
                    break;
                }
            }
        }
    }

    // --- C3: fibers of pi merge after subtracting T~ elements
    {
        auto up_elems = dia.upper.s.elements(bound);
        auto telems = dia.upper.t.elements(bound);
        std::map<IVec, std::vector<IVec>> fibers;
        for (const auto& [e, d] : up_elems) fibers[dia.project(e)].push_back(e);
        for (const auto& [p, elems] : fibers) {
            for (size_t i = 0; i < elems.size() && rep.c3.pass; ++i) {
                for (size_t j = i + 1; j < elems.size() && rep.c3.pass; ++j) {
                    bool ok = false;
                    for (const auto& [t1, d1] : telems) {
                        IVec diff(dia.upper.s.rank);
                        for (size_t k = 0; k < diff.size(); ++k) diff[k] = elems[i][k] - t1[k];
                        // need t2 with diff = elems[j] - t2 in S~; t2 = elems[j] - diff
                        IVec t2(diff.size());
                        for (size_t k = 0; k < diff.size(); ++k) t2[k] = elems[j][k] - diff[k];
                        if (dia.upper.s.member(diff) && dia.upper.t.member(t2)) {
                            ok = true;
                            break;
                        }
                    }
                    if (!ok)
                        rep.c3 = {false, detail::ivec_str(elems[i]) + " and " + detail::ivec_str(elems[j]) +
                                             " share a pi-image but never merge"};
                }
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Pushout along a semigroup map f : T~ -> T'' over T

struct PushoutInput {
    AffineSemigroup t2;  // T''
    IMat f;              // upper T-ambient -> T''-ambient
    IMat pi_t2;          // T''-ambient -> lower ambient
};

inline ExtensionDiagram pushout(const ExtensionDiagram& dia, const PushoutInput& in, int bound) {
    auto rep = check_cocartesian(dia, bound);
    if (!rep.all())
        throw Error(ErrorKind::NotCocartesian, "pushout requires a co-Cartesian diagram");
    auto apply = [](const IMat& m, const IVec& x) {
        IVec out(m.rows, 0);
        for (size_t i = 0; i < m.rows; ++i)
            for (size_t j = 0; j < m.cols; ++j) out[i] += m[i][j] * x[j];
        return out;
    };
    // f must be a map over T
    for (const auto& g : dia.upper.t.generators) {
        IVec fg = apply(in.f, g);
        if (!in.t2.member(fg))
            throw Error(ErrorKind::InvariantViolation, "f(T~ generator) escapes T''");
        if (apply(in.pi_t2, fg) != dia.project(g))
            throw Error(ErrorKind::InvariantViolation, "f is not a map over T");
    }
    size_t ns = dia.upper.s.rank, nt = in.t2.rank;
    // ambient pushout group: H = <S~ gens + T'' gens> inside Z^{ns+nt},
    // modulo L = <(t~, -f(t~))>
    std::vector<IVec> hgens;
    for (const auto& g : dia.upper.s.generators) {
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < ns; ++i) x[i] = g[i];
        hgens.push_back(std::move(x));
    }
    for (const auto& g : in.t2.generators) {
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < nt; ++i) x[ns + i] = g[i];
        hgens.push_back(std::move(x));
    }
    auto hbasis = group_basis(hgens);
    std::vector<QVec> hbq;
    for (const auto& b : hbasis) hbq.push_back(to_qvec(b));
    std::vector<IVec> lrows;
    for (const auto& g : dia.upper.t.generators) {
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < ns; ++i) x[i] = g[i];
        IVec fg = apply(in.f, g);
        for (size_t i = 0; i < nt; ++i) x[ns + i] = -fg[i];
        auto y = coords_in_basis(hbq, to_qvec(x));
        if (!y || !is_integral(*y))
            throw Error(ErrorKind::InvariantViolation, "pushout relation escapes the group");
        lrows.push_back(to_ivec(*y));
    }
    size_t h = hbasis.size();
    IMat v = identity_imat(h);
    std::vector<Int> diag;
    if (!lrows.empty()) {
        SmithResult snf = smith_normal_form(IMat(lrows));
        v = snf.v;
        diag = snf.diag;
        for (const auto& d : diag)
            if (d != 1)
                throw Error(ErrorKind::InvariantViolation, "pushout group has torsion");
    }
    size_t r = diag.size();
    size_t qrank = h - r;
    auto project_quotient = [&](const IVec& x) {
        auto y = coords_in_basis(hbq, to_qvec(x));
        if (!y || !is_integral(*y))
            throw Error(ErrorKind::InvariantViolation, "pushout element escapes the group");
        IVec yi = to_ivec(*y);
        IVec out(qrank, 0);
        for (size_t j = r; j < h; ++j) {
            Int z = 0;
            for (size_t i = 0; i < h; ++i) z += yi[i] * v[i][j];
            out[j - r] = z;
        }
        return out;
    };
    std::vector<IVec> s2gens, t2gens;
    for (const auto& g : dia.upper.s.generators) {
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < ns; ++i) x[i] = g[i];
        s2gens.push_back(project_quotient(x));
    }
    for (const auto& g : in.t2.generators) {
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < nt; ++i) x[ns + i] = g[i];
        IVec q = project_quotient(x);
        t2gens.push_back(q);
        s2gens.push_back(q);
    }
    // pi'' on the quotient: section z -> y = z V^{-1} (zeros in the first r
    // slots), then x = sum y_i h_i, then [pi | pi_t2] x
    IMat vinv = unimodular_inverse(v);
    IMat pi2(dia.lower.s.rank, qrank);
    for (size_t col = 0; col < qrank; ++col) {
        IVec z(h, 0);
        z[r + col] = 1;
        IVec y(h, 0);
        for (size_t j = 0; j < h; ++j) {
            Int acc = 0;
            for (size_t i = 0; i < h; ++i) acc += z[i] * vinv[i][j];
            y[j] = acc;
        }
        IVec x(ns + nt, 0);
        for (size_t i = 0; i < h; ++i)
            for (size_t j = 0; j < ns + nt; ++j) x[j] += y[i] * hbasis[i][j];
        IVec xs(ns), xt(nt);
        for (size_t i = 0; i < ns; ++i) xs[i] = x[i];
        for (size_t i = 0; i < nt; ++i) xt[i] = x[ns + i];
        IVec img = dia.project(xs);
        IVec img2 = apply(in.pi_t2, xt);
        for (size_t i = 0; i < img.size(); ++i) pi2[i][col] = img[i] + img2[i];
    }
    ExtensionDiagram out{
        SemigroupPair::make(AffineSemigroup::from_generators(qrank, t2gens),
                            AffineSemigroup::from_generators(qrank, s2gens)),
        dia.lower, pi2};
    out.validate();
    auto rep2 = check_cocartesian(out, bound);
    if (!rep2.all())
        throw Error(ErrorKind::NotCocartesian, "pushout result failed the co-Cartesian check");
    return out;
}

}  // namespace minkext
