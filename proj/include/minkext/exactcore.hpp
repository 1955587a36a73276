// Exact rational scalars, vectors and matrices, together with the integer
// machinery built on top of them: kernels, Hermite normal forms, lattices
// inside Q^n, preimage lattices for integrality constraints, the double
// description method for polyhedral cones, and bounded lattice-point
// enumeration.
//
// Everything here is exact; no floating point is used anywhere.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace minkext {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

// ---------------------------------------------------------------------------
// Errors

enum class ErrorKind {
    UnboundedRegion,
    UnboundedDirection,
    TailMismatch,
    NotAFace,
    NotPointed,
    NotFreePair,
    NotCocartesian,
    TargetNotCocartesian,
    WellDefinednessFailure,
    IncompleteDependencySet,
    NonIntegralEntry,
    NotASummand,
    SumMismatch,
    NotSurjective,
    NotInTP,
    NoSuitableC,
    InvariantViolation,
    ParseError,
};

struct Error : std::runtime_error {
    ErrorKind kind;
    Error(ErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::UnboundedRegion: return "UnboundedRegion";
    case ErrorKind::UnboundedDirection: return "UnboundedDirection";
    case ErrorKind::TailMismatch: return "TailMismatch";
    case ErrorKind::NotAFace: return "NotAFace";
    case ErrorKind::NotPointed: return "NotPointed";
    case ErrorKind::NotFreePair: return "NotFreePair";
    case ErrorKind::NotCocartesian: return "NotCocartesian";
    case ErrorKind::TargetNotCocartesian: return "TargetNotCocartesian";
    case ErrorKind::WellDefinednessFailure: return "WellDefinednessFailure";
    case ErrorKind::IncompleteDependencySet: return "IncompleteDependencySet";
    case ErrorKind::NonIntegralEntry: return "NonIntegralEntry";
    case ErrorKind::NotASummand: return "NotASummand";
    case ErrorKind::SumMismatch: return "SumMismatch";
    case ErrorKind::NotSurjective: return "NotSurjective";
    case ErrorKind::NotInTP: return "NotInTP";
    case ErrorKind::NoSuitableC: return "NoSuitableC";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Error";
}

// ---------------------------------------------------------------------------
// Rational scalar helpers

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Int floor_div(const Int& a, const Int& b) {
    // b > 0 assumed
    Int q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

inline Int rat_floor(const Rat& r) { return floor_div(rat_num(r), rat_den(r)); }
inline Int rat_ceil(const Rat& r) { return -rat_floor(-r); }
inline bool rat_is_int(const Rat& r) { return rat_den(r) == 1; }

// frac_up(z) = ceil(z) - z, lies in [0,1)
inline Rat frac_up(const Rat& r) { return Rat(rat_ceil(r)) - r; }

// "p/q" with "/q" omitted when q = 1
inline std::string rat_to_string(const Rat& r) {
    std::string s = rat_num(r).str();
    if (rat_den(r) != 1) s += "/" + rat_den(r).str();
    return s;
}

inline Rat rat_from_string(const std::string& s) {
    auto bad = [&]() { throw Error(ErrorKind::ParseError, "bad rational literal '" + s + "'"); };
    if (s.empty()) bad();
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) bad();
        return Rat(num, den);
    } catch (const std::exception&) {
        bad();
    }
    return Rat(0);
}

// ---------------------------------------------------------------------------
// Vector helpers

inline QVec qvec_zero(size_t n) { return QVec(n, Rat(0)); }

inline bool is_zero(const QVec& v) {
    for (const auto& x : v)
        if (x != 0) return false;
    return true;
}

inline QVec add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline QVec sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline QVec scale(const Rat& c, const QVec& a) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

inline Rat dot(const QVec& a, const QVec& b) {
    Rat r(0);
    for (size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
    return r;
}

inline QVec neg(const QVec& a) { return scale(Rat(-1), a); }

inline bool lex_less(const QVec& a, const QVec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        if (a[i] != b[i]) return a[i] < b[i];
    }
    return a.size() < b.size();
}

inline bool is_integral(const QVec& v) {
    for (const auto& x : v)
        if (!rat_is_int(x)) return false;
    return true;
}

inline IVec to_ivec(const QVec& v) {
    IVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (!rat_is_int(v[i])) throw Error(ErrorKind::NonIntegralEntry, "vector entry not integral");
        r[i] = rat_num(v[i]);
    }
    return r;
}

inline QVec to_qvec(const IVec& v) {
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = Rat(v[i]);
    return r;
}

// Scale a nonzero rational vector to its primitive integer representative
// (positive multiple, integer entries with gcd 1).
inline QVec primitive(const QVec& v) {
    Int l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, rat_den(x));
    Int g = 0;
    QVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        Int n = rat_num(v[i]) * (l / rat_den(v[i]));
        r[i] = Rat(n);
        g = boost::multiprecision::gcd(g, n < 0 ? Int(-n) : n);
    }
    if (g > 1)
        for (auto& x : r) x = Rat(rat_num(x) / g);
    return r;
}

// ---------------------------------------------------------------------------
// Rational matrices

struct QMat {
    size_t rows = 0, cols = 0;
    std::vector<QVec> a;

    QMat() = default;
    QMat(size_t r, size_t c) : rows(r), cols(c), a(r, qvec_zero(c)) {}
    explicit QMat(std::vector<QVec> rws) : rows(rws.size()), cols(rws.empty() ? 0 : rws[0].size()), a(std::move(rws)) {}

    QVec& operator[](size_t i) { return a[i]; }
    const QVec& operator[](size_t i) const { return a[i]; }
};

inline QMat transpose(const QMat& m) {
    QMat t(m.cols, m.rows);
    for (size_t i = 0; i < m.rows; ++i)
        for (size_t j = 0; j < m.cols; ++j) t[j][i] = m[i][j];
    return t;
}

inline QVec mat_apply(const QMat& m, const QVec& x) {
    QVec r(m.rows, Rat(0));
    for (size_t i = 0; i < m.rows; ++i) r[i] = dot(m[i], x);
    return r;
}

// Reduced row echelon form in place; returns the pivot columns.
inline std::vector<size_t> rref(QMat& m) {
    std::vector<size_t> pivots;
    size_t row = 0;
    for (size_t col = 0; col < m.cols && row < m.rows; ++col) {
        size_t sel = row;
        while (sel < m.rows && m[sel][col] == 0) ++sel;
        if (sel == m.rows) continue;
        std::swap(m.a[sel], m.a[row]);
        Rat inv = Rat(1) / m[row][col];
        for (auto& x : m[row]) x *= inv;
        for (size_t i = 0; i < m.rows; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col];
            for (size_t j = 0; j < m.cols; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline size_t mat_rank(QMat m) { return rref(m).size(); }

// Basis of the null space of A, one vector per free column.
inline std::vector<QVec> mat_kernel(const QMat& a0) {
    QMat m = a0;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(m.cols, false);
    for (size_t c : pivots) is_pivot[c] = true;
    std::vector<QVec> basis;
    for (size_t col = 0; col < m.cols; ++col) {
        if (is_pivot[col]) continue;
        QVec v = qvec_zero(m.cols);
        v[col] = Rat(1);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][col];
        basis.push_back(std::move(v));
    }
    return basis;
}

// One particular solution of A x = b, or nullopt when inconsistent.
inline std::optional<QVec> mat_solve(const QMat& a, const QVec& b) {
    QMat m(a.rows, a.cols + 1);
    for (size_t i = 0; i < a.rows; ++i) {
        for (size_t j = 0; j < a.cols; ++j) m[i][j] = a[i][j];
        m[i][a.cols] = b[i];
    }
    auto pivots = rref(m);
    if (!pivots.empty() && pivots.back() == a.cols) return std::nullopt;
    QVec x = qvec_zero(a.cols);
    for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][a.cols];
    return x;
}

// Coordinates of x in the row span of `basis` (rows linearly independent);
// nullopt when x lies outside the span.
inline std::optional<QVec> coords_in_basis(const std::vector<QVec>& basis, const QVec& x) {
    if (basis.empty()) return is_zero(x) ? std::optional<QVec>(QVec{}) : std::nullopt;
    QMat bt(basis[0].size(), basis.size());
    for (size_t i = 0; i < basis.size(); ++i)
        for (size_t j = 0; j < basis[i].size(); ++j) bt[j][i] = basis[i][j];
    return mat_solve(bt, x);
}

// ---------------------------------------------------------------------------
// Integer matrices and Hermite normal form

struct IMat {
    size_t rows = 0, cols = 0;
    std::vector<IVec> a;

    IMat() = default;
    IMat(size_t r, size_t c) : rows(r), cols(c), a(r, IVec(c, 0)) {}
    explicit IMat(std::vector<IVec> rws) : rows(rws.size()), cols(rws.empty() ? 0 : rws[0].size()), a(std::move(rws)) {}

    IVec& operator[](size_t i) { return a[i]; }
    const IVec& operator[](size_t i) const { return a[i]; }
};

inline IMat identity_imat(size_t n) {
    IMat m(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

struct HnfResult {
    IMat h;  // row echelon, positive pivots, zeros below each pivot
    IMat u;  // unimodular with u * a = h
    std::vector<size_t> pivot_cols;
};

// Row-style Hermite normal form via extended-gcd row operations: U A = H with
// det(U) = +-1. H is in echelon shape with positive pivots; entries above a
// pivot are reduced into [0, pivot) only when `reduce_above` is set.
inline HnfResult hermite_normal_form(const IMat& a0, bool reduce_above = false) {
    HnfResult res;
    res.h = a0;
    res.u = identity_imat(a0.rows);
    IMat& h = res.h;
    IMat& u = res.u;
    size_t row = 0;
    for (size_t col = 0; col < h.cols && row < h.rows; ++col) {
        // eliminate every entry of this column below `row` into the pivot
        for (size_t i = row + 1; i < h.rows; ++i) {
            if (h[i][col] == 0) continue;
            if (h[row][col] == 0) {
                std::swap(h.a[row], h.a[i]);
                std::swap(u.a[row], u.a[i]);
                // swap changes det sign; flip one row to keep |det| = 1 bookkeeping simple
                continue;
            }
            Int x = h[row][col], y = h[i][col];
            // extended gcd g = p*x + q*y
            Int g, p, q;
            {
                Int old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
                while (r != 0) {
                    Int quot = old_r / r;
                    Int tmp = old_r - quot * r; old_r = r; r = tmp;
                    tmp = old_s - quot * s; old_s = s; s = tmp;
                    tmp = old_t - quot * t; old_t = t; t = tmp;
                }
                g = old_r; p = old_s; q = old_t;
                if (g < 0) { g = -g; p = -p; q = -q; }
            }
            Int xg = x / g, yg = y / g;
            for (size_t j = 0; j < h.cols; ++j) {
                Int hr = h[row][j], hi = h[i][j];
                h[row][j] = p * hr + q * hi;
                h[i][j] = xg * hi - yg * hr;
            }
            for (size_t j = 0; j < u.cols; ++j) {
                Int ur = u[row][j], ui = u[i][j];
                u[row][j] = p * ur + q * ui;
                u[i][j] = xg * ui - yg * ur;
            }
        }
        if (h[row][col] == 0) continue;
        if (h[row][col] < 0) {
            for (auto& x : h[row]) x = -x;
            for (auto& x : u[row]) x = -x;
        }
        res.pivot_cols.push_back(col);
        ++row;
    }
    if (reduce_above) {
        for (size_t r = 0; r < res.pivot_cols.size(); ++r) {
            size_t c = res.pivot_cols[r];
            for (size_t i = 0; i < r; ++i) {
                Int q = floor_div(h[i][c], h[r][c]);
                if (q == 0) continue;
                for (size_t j = 0; j < h.cols; ++j) h[i][j] -= q * h[r][j];
                for (size_t j = 0; j < u.cols; ++j) u[i][j] -= q * u[r][j];
            }
        }
    }
    return res;
}

// Basis of the saturated lattice {x in Z^m : x A = 0}; rows of U matching the
// zero rows of H in U A = H.
inline std::vector<IVec> integer_left_kernel(const IMat& a) {
    HnfResult r = hermite_normal_form(a);
    std::vector<IVec> out;
    for (size_t i = r.pivot_cols.size(); i < a.rows; ++i) out.push_back(r.u[i]);
    return out;
}

// Basis of {x in Z^n : A x = 0}.
inline std::vector<IVec> integer_kernel(const IMat& a) {
    IMat t(a.cols, a.rows);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) t[j][i] = a[i][j];
    return integer_left_kernel(t);
}

inline IMat imat_mul(const IMat& a, const IMat& b) {
    IMat c(a.rows, b.cols);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t k = 0; k < a.cols; ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < b.cols; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

inline IMat imat_transpose(const IMat& a) {
    IMat t(a.cols, a.rows);
    for (size_t i = 0; i < a.rows; ++i)
        for (size_t j = 0; j < a.cols; ++j) t[j][i] = a[i][j];
    return t;
}

// Exact inverse of a unimodular integer matrix.
inline IMat unimodular_inverse(const IMat& u) {
    QMat q(u.rows, u.cols);
    for (size_t i = 0; i < u.rows; ++i)
        for (size_t j = 0; j < u.cols; ++j) q[i][j] = Rat(u[i][j]);
    IMat inv(u.rows, u.cols);
    for (size_t j = 0; j < u.cols; ++j) {
        QVec e = qvec_zero(u.rows);
        e[j] = 1;
        auto col = mat_solve(q, e);
        if (!col) throw Error(ErrorKind::InvariantViolation, "matrix not invertible");
        for (size_t i = 0; i < u.rows; ++i) {
            if (!rat_is_int((*col)[i]))
                throw Error(ErrorKind::InvariantViolation, "matrix not unimodular");
            inv[i][j] = rat_num((*col)[i]);
        }
    }
    return inv;
}

struct SmithResult {
    std::vector<Int> diag;  // d_1 | d_2 | ... (positive entries only)
    IMat v;                 // column transform: rowspan(A) * V has rows d_i e_i
    IMat vinv;
};

// Diagonalization U A V = D with divisibility d_1 | d_2 | ... via alternating
// row and column Hermite reductions.  Only the column transform is tracked;
// it is what quotient-group coordinates need.
inline SmithResult smith_normal_form(const IMat& a0) {
    IMat a = a0;
    size_t n = a.cols;
    IMat v = identity_imat(n);
    auto diagonal = [&]() {
        for (size_t i = 0; i < a.rows; ++i)
            for (size_t j = 0; j < a.cols; ++j)
                if (i != j && a[i][j] != 0) return false;
        return true;
    };
    auto column_step = [&]() {
        HnfResult col = hermite_normal_form(imat_transpose(a), true);
        a = imat_transpose(col.h);
        v = imat_mul(v, imat_transpose(col.u));
    };
    for (int iter = 0; iter < 200; ++iter) {
        a = hermite_normal_form(a, true).h;
        column_step();
        if (!diagonal()) continue;
        // enforce the divisibility chain
        bool fixed = true;
        size_t m = std::min(a.rows, a.cols);
        for (size_t i = 0; i + 1 < m; ++i) {
            Int di = a[i][i], dj = a[i + 1][i + 1];
            if (di != 0 && dj % di != 0) {
                for (size_t j = 0; j < a.cols; ++j) a[i][j] += a[i + 1][j];
                column_step();
                fixed = false;
                break;
            }
            if (di == 0 && dj != 0) {  // move zero behind
                std::swap(a.a[i], a.a[i + 1]);
                for (size_t r = 0; r < a.rows; ++r) std::swap(a[r][i], a[r][i + 1]);
                for (size_t r = 0; r < n; ++r) std::swap(v[r][i], v[r][i + 1]);
                fixed = false;
                break;
            }
        }
        if (fixed) break;
    }
    if (!diagonal()) throw Error(ErrorKind::InvariantViolation, "smith form did not converge");
    SmithResult res;
    res.v = v;
    res.vinv = unimodular_inverse(v);
    for (size_t i = 0; i < std::min(a.rows, a.cols); ++i)
        if (a[i][i] != 0) res.diag.push_back(a[i][i] < 0 ? Int(-a[i][i]) : a[i][i]);
    return res;
}

// ---------------------------------------------------------------------------
// Lattices inside Q^n

// A full-rank-in-its-span lattice given by a basis of (possibly rational)
// vectors.  Membership is decided by solving for the coordinates and testing
// integrality.  Lattices arising as constraint preimages additionally carry
// the defining data (span + integrality constraints): when the constraints
// vanish on part of the span the member set is not discrete in those
// directions, and only the constraint test decides membership faithfully.
struct IntLattice {
    size_t ambient_dim = 0;
    std::vector<QVec> basis;  // linearly independent rows

    std::vector<QVec> span;    // defining subspace, when constraint-defined
    std::vector<QVec> constraints;  // rows c with c . x required integral

    size_t rank() const { return basis.size(); }

    std::optional<QVec> coords(const QVec& x) const {
        if (x.size() != ambient_dim) return std::nullopt;
        return coords_in_basis(basis, x);
    }

    bool member(const QVec& x) const {
        if (x.size() != ambient_dim) return false;
        if (!constraints.empty() || !span.empty()) {
            if (!coords_in_basis(span, x)) return false;
            for (const auto& c : constraints)
                if (!rat_is_int(dot(c, x))) return false;
            return true;
        }
        auto c = coords(x);
        return c && is_integral(*c);
    }

    QVec from_coords(const QVec& y) const {
        QVec x = qvec_zero(ambient_dim);
        for (size_t i = 0; i < basis.size(); ++i) x = add(x, scale(y[i], basis[i]));
        return x;
    }
};

inline IntLattice standard_lattice(size_t n) {
    IntLattice l;
    l.ambient_dim = n;
    for (size_t i = 0; i < n; ++i) {
        QVec e = qvec_zero(n);
        e[i] = 1;
        l.basis.push_back(std::move(e));
    }
    return l;
}

// Lattice generated by (possibly dependent, possibly rational) vectors:
// scale to integers, reduce by HNF, scale back.
inline IntLattice lattice_from_generators(size_t n, const std::vector<QVec>& gens) {
    IntLattice out;
    out.ambient_dim = n;
    if (gens.empty()) return out;
    Int den = 1;
    for (const auto& g : gens)
        for (const auto& x : g) den = boost::multiprecision::lcm(den, rat_den(x));
    IMat m(gens.size(), n);
    for (size_t i = 0; i < gens.size(); ++i)
        for (size_t j = 0; j < n; ++j) m[i][j] = rat_num(gens[i][j]) * (den / rat_den(gens[i][j]));
    auto h = hermite_normal_form(m);
    for (size_t i = 0; i < h.pivot_cols.size(); ++i) {
        QVec row(n);
        for (size_t j = 0; j < n; ++j) row[j] = Rat(h.h[i][j], den);
        out.basis.push_back(std::move(row));
    }
    return out;
}

// The lattice {x in span(V) : C x in Z^k}.  When the constraints vanish on a
// subspace of span(V) the member set is continuous in those directions; the
// returned basis then spans that kernel part too, and membership is decided
// by the stored constraints.
inline IntLattice preimage_lattice(const QMat& c, const std::vector<QVec>& v_in) {
    size_t n = v_in.empty() ? c.cols : v_in[0].size();
    IntLattice out;
    out.ambient_dim = n;
    out.span = v_in;
    for (size_t i = 0; i < c.rows; ++i) out.constraints.push_back(c[i]);
    if (v_in.empty()) return out;

    // split span(V) into ker(C) and a complement W; the basis of the result
    // is (preimage lattice in W) + (kernel basis)
    std::vector<QVec> v;  // complement part
    std::vector<QVec> kpart;
    {
        size_t mm = v_in.size();
        QMat d0(c.rows, mm);
        for (size_t i = 0; i < c.rows; ++i)
            for (size_t j = 0; j < mm; ++j) d0[i][j] = dot(c[i], v_in[j]);
        auto ker = mat_kernel(d0);  // coefficient vectors u with C (V^T u) = 0
        for (const auto& u : ker) {
            QVec x = qvec_zero(n);
            for (size_t j = 0; j < mm; ++j) x = add(x, scale(u[j], v_in[j]));
            kpart.push_back(primitive(x));
        }
        // greedily extend kernel to a basis of span(V)
        QMat acc(0, n);
        for (const auto& k : kpart) {
            acc.a.push_back(k);
            acc.rows++;
        }
        size_t rank = mat_rank(acc);
        for (const auto& cand : v_in) {
            if (rank == mm) break;
            QMat trial = acc;
            trial.a.push_back(cand);
            trial.rows++;
            if (mat_rank(trial) > rank) {
                acc = std::move(trial);
                v.push_back(cand);
                ++rank;
            }
        }
    }
    size_t m = v.size();
    if (m == 0) {
        out.basis = kpart;
        return out;
    }
    // D = C * V^T maps complement coordinates to the constraint values
    QMat d(c.rows, m);
    for (size_t i = 0; i < c.rows; ++i)
        for (size_t j = 0; j < m; ++j) d[i][j] = dot(c[i], v[j]);
    // q D integral
    Int q = 1;
    for (size_t i = 0; i < d.rows; ++i)
        for (size_t j = 0; j < m; ++j) q = boost::multiprecision::lcm(q, rat_den(d[i][j]));
    IMat e(d.rows, m);
    for (size_t i = 0; i < d.rows; ++i)
        for (size_t j = 0; j < m; ++j) e[i][j] = rat_num(d[i][j]) * (q / rat_den(d[i][j]));
    // W = Z^k  intersected with  im(E): the integer points of the column span.
    // im(E) = ker(A) for A = basis of the left kernel of E over Q.
    QMat eq(d.rows, m);
    for (size_t i = 0; i < d.rows; ++i)
        for (size_t j = 0; j < m; ++j) eq[i][j] = Rat(e[i][j]);
    auto leftker = mat_kernel(transpose(eq));  // vectors y with y^T E = 0
    std::vector<IVec> wbasis;
    if (leftker.empty()) {
        // E has full row span; every z in Z^k qualifies
        for (size_t i = 0; i < d.rows; ++i) {
            IVec z(d.rows, 0);
            z[i] = 1;
            wbasis.push_back(std::move(z));
        }
    } else {
        IMat a(leftker.size(), d.rows);
        for (size_t i = 0; i < leftker.size(); ++i) {
            QVec p = primitive(leftker[i]);
            for (size_t j = 0; j < d.rows; ++j) a[i][j] = rat_num(p[j]);
        }
        wbasis = integer_kernel(a);
    }
    // solve E u = q w for each basis vector w
    for (const auto& w : wbasis) {
        QVec rhs(d.rows);
        for (size_t i = 0; i < d.rows; ++i) rhs[i] = Rat(q * w[i]);
        auto u = mat_solve(eq, rhs);
        if (!u) continue;  // w outside im(E); cannot happen by construction
        QVec x = qvec_zero(n);
        for (size_t j = 0; j < m; ++j) x = add(x, scale((*u)[j], v[j]));
        out.basis.push_back(std::move(x));
    }
    if (out.basis.size() != m)
        throw Error(ErrorKind::InvariantViolation, "preimage_lattice: rank defect");
    for (const auto& k : kpart) out.basis.push_back(k);
    return out;
}

// ---------------------------------------------------------------------------
// Double description: rays of {x : a_i . x >= 0 for all i}

struct RayBasis {
    std::vector<QVec> rays;      // primitive, lex sorted
    std::vector<QVec> lineality; // basis of the lineality space
};

namespace detail {

inline bool zero_subset(const std::vector<char>& a, const std::vector<char>& b) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] && !b[i]) return false;
    return true;
}

// Pointed double description: rays of {u in R^m : c_i . u >= 0}, assuming the
// constraint matrix has rank m.  Incremental insertion with the combinatorial
// adjacency test.
inline std::vector<QVec> dd_pointed(size_t m, const std::vector<QVec>& cons) {
    if (m == 0) return {};
    // initial simplicial cone from m independent constraints
    std::vector<size_t> init;
    {
        QMat probe(0, m);
        for (size_t i = 0; i < cons.size() && init.size() < m; ++i) {
            QMat trial = probe;
            trial.a.push_back(cons[i]);
            trial.rows++;
            if (mat_rank(trial) > probe.rows) {
                probe = std::move(trial);
                init.push_back(i);
            }
        }
        if (init.size() < m)
            throw Error(ErrorKind::InvariantViolation, "dd_pointed: rank defect");
    }
    std::vector<size_t> order = init;
    for (size_t i = 0; i < cons.size(); ++i)
        if (std::find(init.begin(), init.end(), i) == init.end()) order.push_back(i);

    QMat b(m, m);
    for (size_t i = 0; i < m; ++i) b[i] = cons[init[i]];
    std::vector<QVec> rays;
    for (size_t i = 0; i < m; ++i) {
        QVec e = qvec_zero(m);
        e[i] = 1;
        auto col = mat_solve(b, e);  // B r = e_i
        rays.push_back(primitive(*col));
    }
    auto tight = [&](const QVec& r, size_t upto) {
        std::vector<char> z(upto, false);
        for (size_t j = 0; j < upto; ++j) z[j] = (dot(cons[order[j]], r) == 0);
        return z;
    };
    std::vector<std::vector<char>> zero;
    for (const auto& r : rays) zero.push_back(tight(r, m));

    for (size_t k = m; k < order.size(); ++k) {
        const QVec& a = cons[order[k]];
        std::vector<size_t> pos, nil, negs;
        std::vector<Rat> val(rays.size());
        for (size_t r = 0; r < rays.size(); ++r) {
            val[r] = dot(a, rays[r]);
            if (val[r] > 0) pos.push_back(r);
            else if (val[r] == 0) nil.push_back(r);
            else negs.push_back(r);
        }
        if (negs.empty()) {
            for (size_t r = 0; r < rays.size(); ++r) zero[r].push_back(val[r] == 0);
            continue;
        }
        std::vector<QVec> nrays;
        std::vector<std::vector<char>> nzero;
        for (size_t r : pos) {
            nrays.push_back(rays[r]);
            nzero.push_back(zero[r]);
            nzero.back().push_back(false);
        }
        for (size_t r : nil) {
            nrays.push_back(rays[r]);
            nzero.push_back(zero[r]);
            nzero.back().push_back(true);
        }
        for (size_t p : pos) {
            for (size_t q : negs) {
                std::vector<char> common(k, false);
                for (size_t j = 0; j < k; ++j) common[j] = zero[p][j] && zero[q][j];
                bool adjacent = true;
                for (size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == q) continue;
                    if (zero_subset(common, zero[r])) adjacent = false;
                }
                if (!adjacent) continue;
                QVec comb = primitive(sub(scale(val[p], rays[q]), scale(val[q], rays[p])));
                nrays.push_back(comb);
                nzero.push_back(tight(comb, k + 1));
            }
        }
        rays = std::move(nrays);
        zero = std::move(nzero);
    }
    std::sort(rays.begin(), rays.end(), lex_less);
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
    return rays;
}

}  // namespace detail

// Rays and lineality of {x in R^dim : a . x >= 0 for every a in ineqs}.  The
// lineality space is split off first (it is the kernel of the constraint
// matrix), so the pointed double description runs in a complement.
inline RayBasis dd_rays(size_t dim, const std::vector<QVec>& ineqs_in) {
    std::vector<QVec> ineqs;
    for (const auto& a : ineqs_in)
        if (!is_zero(a)) ineqs.push_back(a);
    RayBasis out;
    if (ineqs.empty()) {
        for (size_t i = 0; i < dim; ++i) {
            QVec e = qvec_zero(dim);
            e[i] = 1;
            out.lineality.push_back(std::move(e));
        }
        return out;
    }
    QMat a(ineqs);
    std::vector<QVec> kernel = mat_kernel(a);
    out.lineality = kernel;
    // complement basis: standard vectors extending the kernel to all of R^dim
    std::vector<QVec> wbasis;
    {
        QMat span(0, dim);
        for (const auto& k : kernel) {
            span.a.push_back(k);
            span.rows++;
        }
        size_t rank = mat_rank(span);
        for (size_t i = 0; i < dim && rank < dim; ++i) {
            QVec e = qvec_zero(dim);
            e[i] = 1;
            QMat trial = span;
            trial.a.push_back(e);
            trial.rows++;
            if (mat_rank(trial) > rank) {
                span = std::move(trial);
                wbasis.push_back(std::move(e));
                ++rank;
            }
        }
    }
    size_t m = wbasis.size();
    if (m == 0) return out;  // all of space is lineality
    std::vector<QVec> cons;
    for (const auto& row : ineqs) {
        QVec c(m);
        for (size_t j = 0; j < m; ++j) c[j] = dot(row, wbasis[j]);
        cons.push_back(std::move(c));
    }
    auto urays = detail::dd_pointed(m, cons);
    for (const auto& u : urays) {
        QVec x = qvec_zero(dim);
        for (size_t j = 0; j < m; ++j) x = add(x, scale(u[j], wbasis[j]));
        out.rays.push_back(primitive(x));
    }
    std::sort(out.rays.begin(), out.rays.end(), lex_less);
    return out;
}

// Rays + lineality of the dual cone of cone(rays, lineality).
inline RayBasis dual_cone_rays(size_t dim, const std::vector<QVec>& rays,
                               const std::vector<QVec>& lineality = {}) {
    std::vector<QVec> ineqs = rays;
    for (const auto& l : lineality) {
        ineqs.push_back(l);
        ineqs.push_back(neg(l));
    }
    return dd_rays(dim, ineqs);
}

// ---------------------------------------------------------------------------
// Bounded lattice-point enumeration

struct HalfSpace {
    QVec a;
    Rat b;  // a . x >= b
};

// All points of `lattice` satisfying every constraint, sorted lex.  The
// feasible directions within the lattice's span must form the trivial cone;
// otherwise UnboundedRegion is thrown.  Completeness comes from scanning the
// integer box hull of the region's vertices in lattice coordinates.
inline std::vector<QVec> enumerate_lattice_points(const std::vector<HalfSpace>& hrep,
                                                  const IntLattice& lattice) {
    size_t m = lattice.rank();
    if (m == 0) {
        QVec origin = qvec_zero(lattice.ambient_dim);
        for (const auto& h : hrep)
            if (dot(h.a, origin) < h.b) return {};
        return {origin};
    }
    // constraints in lattice coordinates: (A B^T) u >= b
    std::vector<QVec> cu;
    std::vector<Rat> cb;
    for (const auto& h : hrep) {
        QVec row(m);
        for (size_t j = 0; j < m; ++j) row[j] = dot(h.a, lattice.basis[j]);
        cu.push_back(std::move(row));
        cb.push_back(h.b);
    }
    // recession cone within the span must be trivial
    RayBasis rec = dd_rays(m, cu);
    if (!rec.rays.empty() || !rec.lineality.empty())
        throw Error(ErrorKind::UnboundedRegion, "enumerate_lattice_points: region is unbounded");
    // vertices of the region via homogenization (u, t), t >= 0
    std::vector<QVec> hom;
    for (size_t i = 0; i < cu.size(); ++i) {
        QVec row = cu[i];
        row.push_back(-cb[i]);
        hom.push_back(std::move(row));
    }
    {
        QVec t = qvec_zero(m + 1);
        t[m] = 1;
        hom.push_back(std::move(t));
    }
    RayBasis rb = dd_rays(m + 1, hom);
    std::vector<QVec> verts;
    for (const auto& r : rb.rays) {
        if (r[m] == 0) continue;  // cannot happen: recession is trivial
        QVec v(m);
        for (size_t j = 0; j < m; ++j) v[j] = r[j] / r[m];
        verts.push_back(std::move(v));
    }
    if (verts.empty()) return {};
    std::vector<Int> lo(m), hi(m);
    for (size_t j = 0; j < m; ++j) {
        Rat mn = verts[0][j], mx = verts[0][j];
        for (const auto& v : verts) {
            if (v[j] < mn) mn = v[j];
            if (v[j] > mx) mx = v[j];
        }
        lo[j] = rat_ceil(mn);
        hi[j] = rat_floor(mx);
        if (lo[j] > hi[j]) return {};
    }
    std::vector<QVec> out;
    QVec u(m);
    std::vector<Int> cur(m);
    // odometer scan over the box
    for (size_t j = 0; j < m; ++j) cur[j] = lo[j];
    while (true) {
        for (size_t j = 0; j < m; ++j) u[j] = Rat(cur[j]);
        bool ok = true;
        for (size_t i = 0; i < cu.size() && ok; ++i)
            if (dot(cu[i], u) < cb[i]) ok = false;
        if (ok) out.push_back(lattice.from_coords(u));
        size_t j = 0;
        while (j < m) {
            if (cur[j] < hi[j]) { ++cur[j]; break; }
            cur[j] = lo[j];
            ++j;
        }
        if (j == m) break;
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

}  // namespace minkext
