#pragma once
// Matrices and polynomials over a FieldTower, plus the conjugacy-class
// classification that drives character evaluation: decide whether the
// characteristic polynomial is a power of a single irreducible, and if so
// extract (d, lambda, t) = (degree, eigenvalue in F_{q^d}, multiplicity).

#include "field_tower.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

namespace jacquetlab {

// ---------------------------------------------------------------- matrices

struct MatSub {
    std::uint32_t rows = 0, cols = 0;
    std::vector<elem> e;

    MatSub() = default;
    MatSub(std::uint32_t r, std::uint32_t c) : rows(r), cols(c), e(std::size_t(r) * c, 0) {}

    elem& at(std::uint32_t i, std::uint32_t j) { return e[std::size_t(i) * cols + j]; }
    elem at(std::uint32_t i, std::uint32_t j) const { return e[std::size_t(i) * cols + j]; }

    bool operator==(const MatSub& o) const {
        return rows == o.rows && cols == o.cols && e == o.e;
    }
    bool operator!=(const MatSub& o) const { return !(*this == o); }
    bool operator<(const MatSub& o) const {  // for use as map keys
        if (rows != o.rows) return rows < o.rows;
        if (cols != o.cols) return cols < o.cols;
        return e < o.e;
    }
};

inline MatSub mat_identity(const FieldTower& tw, std::uint32_t n) {
    MatSub I(n, n);
    for (std::uint32_t i = 0; i < n; ++i) I.at(i, i) = tw.one();
    return I;
}

inline MatSub mat_add(const FieldTower& tw, const MatSub& A, const MatSub& B) {
    MatSub R(A.rows, A.cols);
    for (std::size_t i = 0; i < A.e.size(); ++i) R.e[i] = tw.add(A.e[i], B.e[i]);
    return R;
}

inline MatSub mat_sub(const FieldTower& tw, const MatSub& A, const MatSub& B) {
    MatSub R(A.rows, A.cols);
    for (std::size_t i = 0; i < A.e.size(); ++i) R.e[i] = tw.sub(A.e[i], B.e[i]);
    return R;
}

inline MatSub mat_mul(const FieldTower& tw, const MatSub& A, const MatSub& B) {
    if (A.cols != B.rows) throw std::invalid_argument("mat_mul: shape mismatch");
    MatSub R(A.rows, B.cols);
    for (std::uint32_t i = 0; i < A.rows; ++i)
        for (std::uint32_t k = 0; k < A.cols; ++k) {
            elem aik = A.at(i, k);
            if (!aik) continue;
            for (std::uint32_t j = 0; j < B.cols; ++j)
                R.at(i, j) = tw.add(R.at(i, j), tw.mul(aik, B.at(k, j)));
        }
    return R;
}

inline MatSub mat_scale(const FieldTower& tw, elem c, const MatSub& A) {
    MatSub R(A.rows, A.cols);
    for (std::size_t i = 0; i < A.e.size(); ++i) R.e[i] = tw.mul(c, A.e[i]);
    return R;
}

inline elem mat_trace(const FieldTower& tw, const MatSub& A) {
    elem t = 0;
    for (std::uint32_t i = 0; i < A.rows; ++i) t = tw.add(t, A.at(i, i));
    return t;
}

// A - lambda*I
inline MatSub mat_shift_diag(const FieldTower& tw, const MatSub& A, elem lambda) {
    MatSub R = A;
    for (std::uint32_t i = 0; i < R.rows; ++i)
        R.at(i, i) = tw.sub(R.at(i, i), lambda);
    return R;
}

// Destroys A; the copying wrapper below is the common entry point.
inline std::uint32_t mat_rank_inplace(const FieldTower& tw, MatSub& A) {
    std::uint32_t r = 0;
    for (std::uint32_t c = 0; c < A.cols && r < A.rows; ++c) {
        std::uint32_t piv = r;
        while (piv < A.rows && A.at(piv, c) == 0) ++piv;
        if (piv == A.rows) continue;
        if (piv != r)
            for (std::uint32_t j = 0; j < A.cols; ++j) std::swap(A.at(piv, j), A.at(r, j));
        elem inv_p = tw.inv(A.at(r, c));
        for (std::uint32_t i = r + 1; i < A.rows; ++i) {
            elem f = A.at(i, c);
            if (!f) continue;
            f = tw.mul(f, inv_p);
            for (std::uint32_t j = c; j < A.cols; ++j)
                A.at(i, j) = tw.sub(A.at(i, j), tw.mul(f, A.at(r, j)));
        }
        ++r;
    }
    return r;
}

inline std::uint32_t mat_rank(const FieldTower& tw, MatSub A) { return mat_rank_inplace(tw, A); }

// Rank with the promise that every entry lies in F_{q^d}; the elimination is
// the same (rank is invariant under field extension), the precondition is
// checked.
inline std::uint32_t mat_rank_over(const FieldTower& tw, const MatSub& A, std::uint32_t d) {
    for (elem x : A.e)
        if (!tw.is_in_subfield(x, d))
            throw std::invalid_argument("mat_rank_over: entry outside subfield");
    return mat_rank(tw, A);
}

inline bool mat_invertible(const FieldTower& tw, const MatSub& A) {
    return A.rows == A.cols && mat_rank(tw, A) == A.rows;
}

inline MatSub mat_inverse(const FieldTower& tw, const MatSub& A) {
    if (A.rows != A.cols) throw std::invalid_argument("mat_inverse: not square");
    std::uint32_t n = A.rows;
    MatSub W(n, 2 * n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) W.at(i, j) = A.at(i, j);
        W.at(i, n + i) = tw.one();
    }
    for (std::uint32_t c = 0; c < n; ++c) {
        std::uint32_t piv = c;
        while (piv < n && W.at(piv, c) == 0) ++piv;
        if (piv == n) throw std::domain_error("mat_inverse: singular matrix");
        if (piv != c)
            for (std::uint32_t j = 0; j < 2 * n; ++j) std::swap(W.at(piv, j), W.at(c, j));
        elem inv_p = tw.inv(W.at(c, c));
        for (std::uint32_t j = 0; j < 2 * n; ++j) W.at(c, j) = tw.mul(W.at(c, j), inv_p);
        for (std::uint32_t i = 0; i < n; ++i) {
            if (i == c) continue;
            elem f = W.at(i, c);
            if (!f) continue;
            for (std::uint32_t j = c; j < 2 * n; ++j)
                W.at(i, j) = tw.sub(W.at(i, j), tw.mul(f, W.at(c, j)));
        }
    }
    MatSub R(n, n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) R.at(i, j) = W.at(i, n + j);
    return R;
}

// Rank of a bit-packed matrix over F_2 (row i in bits of rows[i]).  Used on
// the hot path when q = 2; must agree with mat_rank.
inline std::uint32_t rank_bits(const std::vector<std::uint64_t>& rows) {
    std::uint32_t r = 0;
    std::uint64_t pivots[64] = {0};
    for (std::uint64_t v : rows) {
        while (v) {
            int b = 63 - __builtin_clzll(v);
            if (pivots[b]) {
                v ^= pivots[b];
            } else {
                pivots[b] = v;
                ++r;
                break;
            }
        }
    }
    return r;
}

// ------------------------------------------------- polynomials over fields

// coeffs[i] multiplies x^i; no trailing zeros, zero poly = empty vector.
using FieldPoly = std::vector<elem>;

inline void fp_trim(FieldPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline long long fp_deg(const FieldPoly& f) {
    return static_cast<long long>(f.size()) - 1;
}
inline bool fp_is_zero(const FieldPoly& f) { return f.empty(); }

inline FieldPoly fp_add(const FieldTower& tw, const FieldPoly& a, const FieldPoly& b) {
    FieldPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = tw.add(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FieldPoly fp_sub(const FieldTower& tw, const FieldPoly& a, const FieldPoly& b) {
    FieldPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = tw.sub(r[i], b[i]);
    fp_trim(r);
    return r;
}

inline FieldPoly fp_mul(const FieldTower& tw, const FieldPoly& a, const FieldPoly& b) {
    if (a.empty() || b.empty()) return {};
    FieldPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = tw.add(r[i + j], tw.mul(a[i], b[j]));
    }
    fp_trim(r);
    return r;
}

inline FieldPoly fp_scale(const FieldTower& tw, elem c, const FieldPoly& a) {
    FieldPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = tw.mul(c, a[i]);
    fp_trim(r);
    return r;
}

inline FieldPoly fp_divmod(const FieldTower& tw, FieldPoly num, const FieldPoly& den,
                           FieldPoly& rem) {
    if (den.empty()) throw std::invalid_argument("fp_divmod by zero");
    elem lead_inv = tw.inv(den.back());
    FieldPoly q;
    if (num.size() >= den.size()) q.assign(num.size() - den.size() + 1, 0);
    while (num.size() >= den.size()) {
        elem c = tw.mul(num.back(), lead_inv);
        std::size_t sh = num.size() - den.size();
        q[sh] = c;
        if (c)
            for (std::size_t j = 0; j < den.size(); ++j)
                num[sh + j] = tw.sub(num[sh + j], tw.mul(c, den[j]));
        num.pop_back();
        fp_trim(num);
    }
    rem = std::move(num);
    fp_trim(q);
    return q;
}

inline FieldPoly fp_mod(const FieldTower& tw, FieldPoly num, const FieldPoly& den) {
    FieldPoly rem;
    fp_divmod(tw, std::move(num), den, rem);
    return rem;
}

inline FieldPoly fp_div_exact(const FieldTower& tw, FieldPoly num, const FieldPoly& den) {
    FieldPoly rem;
    FieldPoly q = fp_divmod(tw, std::move(num), den, rem);
    if (!rem.empty()) throw std::runtime_error("fp_div_exact: nonzero remainder");
    return q;
}

inline FieldPoly fp_monic(const FieldTower& tw, FieldPoly f) {
    fp_trim(f);
    if (f.empty() || f.back() == tw.one()) return f;
    return fp_scale(tw, tw.inv(f.back()), f);
}

inline FieldPoly fp_gcd(const FieldTower& tw, FieldPoly a, FieldPoly b) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FieldPoly r = fp_mod(tw, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(tw, std::move(a));
}

inline FieldPoly fp_derivative(const FieldTower& tw, const FieldPoly& f) {
    if (f.size() < 2) return {};
    FieldPoly r(f.size() - 1, 0);
    for (std::size_t i = 1; i < f.size(); ++i) r[i - 1] = tw.mul_int(f[i], i);
    fp_trim(r);
    return r;
}

inline elem fp_eval(const FieldTower& tw, const FieldPoly& f, elem x) {
    elem acc = 0;
    for (std::size_t i = f.size(); i-- > 0;) acc = tw.add(tw.mul(acc, x), f[i]);
    return acc;
}

inline FieldPoly fp_pow(const FieldTower& tw, FieldPoly b, std::uint64_t e) {
    FieldPoly r{tw.one()};
    while (e) {
        if (e & 1) r = fp_mul(tw, r, b);
        b = fp_mul(tw, b, b);
        e >>= 1;
    }
    return r;
}

inline FieldPoly fp_powmod(const FieldTower& tw, FieldPoly b, std::uint64_t e,
                           const FieldPoly& f) {
    FieldPoly r{tw.one()};
    b = fp_mod(tw, std::move(b), f);
    while (e) {
        if (e & 1) r = fp_mod(tw, fp_mul(tw, r, b), f);
        b = fp_mod(tw, fp_mul(tw, b, b), f);
        e >>= 1;
    }
    return r;
}

inline bool fp_in_subfield(const FieldTower& tw, const FieldPoly& f, std::uint32_t d) {
    for (elem c : f)
        if (!tw.is_in_subfield(c, d)) return false;
    return true;
}

// Rabin test over F_{q^d}: f (coeffs in F_{q^d}) of degree D is irreducible
// iff x^{Q0^D} = x mod f and gcd(x^{Q0^{D/r}} - x, f) = 1 for primes r | D,
// where Q0 = q^d.  The Q0-power map is iterated as a ring homomorphism.
inline bool fp_irreducible(const FieldTower& tw, const FieldPoly& f, std::uint32_t d) {
    if (!fp_in_subfield(tw, f, d))
        throw std::invalid_argument("fp_irreducible: coefficients outside subfield");
    long long D = fp_deg(f);
    if (D < 1) return false;
    if (D == 1) return true;
    std::uint64_t Q0 = tw.subfield_card(d);
    FieldPoly x{0, tw.one()};
    FieldPoly h = fp_mod(tw, x, f);
    std::vector<std::uint64_t> checkpoints;
    for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(D)))
        checkpoints.push_back(static_cast<std::uint64_t>(D) / r);
    std::map<std::uint64_t, FieldPoly> at;
    for (std::uint64_t k = 1; k <= static_cast<std::uint64_t>(D); ++k) {
        h = fp_powmod(tw, h, Q0, f);
        if (std::find(checkpoints.begin(), checkpoints.end(), k) != checkpoints.end())
            at[k] = h;
    }
    if (h != fp_mod(tw, x, f)) return false;
    for (std::uint64_t k : checkpoints) {
        FieldPoly diff = fp_sub(tw, at[k], x);
        FieldPoly g = fp_gcd(tw, f, diff);
        if (fp_deg(g) != 0) return false;
    }
    return true;
}

// Squarefree radical over F_{q^d}, correct in characteristic p: factors with
// multiplicity divisible by p hide inside gcd(f, f') as a p-th power, which
// is peeled off by a coefficientwise p-th root and recursion.
inline FieldPoly fp_radical(const FieldTower& tw, FieldPoly f, std::uint32_t d) {
    if (!fp_in_subfield(tw, f, d))
        throw std::invalid_argument("fp_radical: coefficients outside subfield");
    f = fp_monic(tw, std::move(f));
    if (fp_deg(f) <= 0) return FieldPoly{tw.one()};
    FieldPoly fd = fp_derivative(tw, f);
    FieldPoly g1 = fp_gcd(tw, f, fd);  // = f itself when f' = 0
    FieldPoly w = fp_div_exact(tw, f, g1);
    // strip the factors of w out of g1: what survives is the part of f
    // whose multiplicities are divisible by p
    FieldPoly y = std::move(g1);
    for (;;) {
        FieldPoly g = fp_gcd(tw, y, w);
        if (fp_deg(g) == 0) break;
        y = fp_div_exact(tw, y, g);
    }
    if (fp_deg(y) == 0) return w;
    // y = z^p with z_j = y_{jp}^{p^(ad-1)}
    std::uint32_t p = tw.p();
    std::uint64_t root_exp = upow(p, tw.a() * d - 1);
    FieldPoly z((y.size() - 1) / p + 1, 0);
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] == 0) continue;
        if (i % p != 0) throw std::logic_error("fp_radical: p-power part malformed");
        z[i / p] = tw.pow(y[i], static_cast<std::int64_t>(root_exp));
    }
    return fp_mul(tw, w, fp_radical(tw, z, d));
}

// char poly of A as det(xI - A): reduce to upper Hessenberg by a similarity
// transform, then run the principal-minor recurrence.
inline FieldPoly char_poly(const FieldTower& tw, MatSub A) {
    if (A.rows != A.cols) throw std::invalid_argument("char_poly: not square");
    const std::uint32_t n = A.rows;
    for (std::uint32_t j = 0; j + 2 < n; ++j) {
        std::uint32_t piv = j + 1;
        while (piv < n && A.at(piv, j) == 0) ++piv;
        if (piv == n) continue;
        if (piv != j + 1) {
            for (std::uint32_t c = 0; c < n; ++c) std::swap(A.at(j + 1, c), A.at(piv, c));
            for (std::uint32_t r = 0; r < n; ++r) std::swap(A.at(r, j + 1), A.at(r, piv));
        }
        elem inv_p = tw.inv(A.at(j + 1, j));
        for (std::uint32_t i = j + 2; i < n; ++i) {
            elem f = A.at(i, j);
            if (!f) continue;
            f = tw.mul(f, inv_p);
            for (std::uint32_t c = 0; c < n; ++c)
                A.at(i, c) = tw.sub(A.at(i, c), tw.mul(f, A.at(j + 1, c)));
            for (std::uint32_t r = 0; r < n; ++r)
                A.at(r, j + 1) = tw.add(A.at(r, j + 1), tw.mul(f, A.at(r, i)));
        }
    }
    // p_m = (x - a_{mm}) p_{m-1} - sum_k a_{km} (prod of subdiagonals) p_{k-1}
    std::vector<FieldPoly> pk(n + 1);
    pk[0] = FieldPoly{tw.one()};
    for (std::uint32_t m = 1; m <= n; ++m) {
        FieldPoly t{tw.neg(A.at(m - 1, m - 1)), tw.one()};
        FieldPoly acc = fp_mul(tw, t, pk[m - 1]);
        elem prod = tw.one();
        for (std::uint32_t k = m - 1; k >= 1; --k) {
            prod = tw.mul(prod, A.at(k, k - 1));
            if (prod == 0) break;
            elem coef = tw.mul(A.at(k - 1, m - 1), prod);
            if (coef) acc = fp_sub(tw, acc, fp_scale(tw, coef, pk[k - 1]));
        }
        pk[m] = std::move(acc);
    }
    return pk[n];
}

// --------------------------------------------------------- classification

// Outcome of testing whether char_poly(g) = r^{n/d} for one irreducible r of
// degree d.  When it is, g belongs to the "from the field" classes: lambda
// is the canonical root of r (least dlog in its Frobenius orbit) and
// t = n - rank(g - lambda I), the number of blocks.
struct GreenClassData {
    bool from_field = false;
    std::uint32_t d = 0;
    elem lambda = 0;
    std::uint32_t t = 0;
    FieldPoly charpoly;
};

inline GreenClassData classify(const FieldTower& tw, const MatSub& g) {
    GreenClassData out;
    out.charpoly = char_poly(tw, g);
    if (out.charpoly.empty() || out.charpoly[0] == 0)
        throw std::invalid_argument("classify: matrix is singular");
    const std::uint32_t n = g.rows;
    FieldPoly rad = fp_radical(tw, out.charpoly, 1);
    std::uint32_t d = static_cast<std::uint32_t>(fp_deg(rad));
    if (d == 0 || n % d != 0) return out;
    if (!fp_irreducible(tw, rad, 1)) return out;
    if (fp_pow(tw, rad, n / d) != out.charpoly) return out;
    if (!tw.valid_subdeg(d)) return out;  // needs d | m to host the eigenvalue
    elem lambda = 0;
    for (elem x : tw.subfield(d)) {
        if (x == 0) continue;  // classify is used on invertible g only
        if (fp_eval(tw, rad, x) == 0) {
            lambda = x;
            break;
        }
    }
    if (lambda == 0) throw std::logic_error("classify: irreducible factor with no subfield root");
    out.from_field = true;
    out.d = d;
    out.lambda = lambda;
    out.t = n - mat_rank(tw, mat_shift_diag(tw, g, lambda));
    return out;
}

// ------------------------------------------------- multiplication matrices

// Coordinates of F_{q^deg} relative to the basis {gen^0, ..., gen^(deg-1)},
// with digits indexing the subfield(1) element list.  Packing an element's
// digit vector base q gives a bijection onto [0, q^deg).
struct BasisCoords {
    const FieldTower* tw = nullptr;
    std::uint32_t deg = 0;
    elem gen = 0;
    std::vector<elem> fq;                  // subfield(1) list
    std::vector<std::uint32_t> packed_of;  // elem code -> packed coords
    std::vector<elem> elem_of;             // packed coords -> elem code
    std::vector<elem> gen_pows;            // gen^0 .. gen^(deg-1)

    static constexpr std::uint32_t NONE = UINT32_MAX;
};

inline BasisCoords make_basis_coords(const FieldTower& tw, std::uint32_t deg, elem gen) {
    if (tw.is_zero(gen) || tw.degree_over_base(gen) != deg)
        throw std::invalid_argument("make_basis_coords: gen does not generate F_{q^deg}");
    BasisCoords bc;
    bc.tw = &tw;
    bc.deg = deg;
    bc.gen = gen;
    bc.fq = tw.subfield(1);
    bc.gen_pows.resize(deg);
    for (std::uint32_t i = 0; i < deg; ++i)
        bc.gen_pows[i] = tw.pow(gen, static_cast<std::int64_t>(i));
    std::uint64_t count = upow(tw.q(), deg);
    bc.packed_of.assign(tw.card(), BasisCoords::NONE);
    bc.elem_of.assign(count, 0);
    std::uint64_t qv = tw.q();
    for (std::uint64_t packed = 0; packed < count; ++packed) {
        std::uint64_t rest = packed;
        elem v = 0;
        for (std::uint32_t i = 0; i < deg; ++i) {
            std::uint32_t digit = static_cast<std::uint32_t>(rest % qv);
            rest /= qv;
            if (digit) v = tw.add(v, tw.mul(bc.fq[digit], bc.gen_pows[i]));
        }
        if (bc.packed_of[v] != BasisCoords::NONE)
            throw std::logic_error("make_basis_coords: powers of gen are not a basis");
        bc.packed_of[v] = static_cast<std::uint32_t>(packed);
        bc.elem_of[packed] = v;
    }
    return bc;
}

inline BasisCoords make_basis_coords(const FieldTower& tw, std::uint32_t deg) {
    return make_basis_coords(tw, deg, tw.subfield_generator(deg));
}

// Matrix of y |-> x*y on F_{q^deg} viewed as F_q^deg in the given basis.
inline MatSub mult_matrix(const BasisCoords& bc, elem x) {
    const FieldTower& tw = *bc.tw;
    if (!tw.is_in_subfield(x, bc.deg))
        throw std::invalid_argument("mult_matrix: element outside subfield");
    MatSub M(bc.deg, bc.deg);
    std::uint64_t qv = tw.q();
    for (std::uint32_t j = 0; j < bc.deg; ++j) {
        elem y = tw.mul(x, bc.gen_pows[j]);
        std::uint64_t packed = bc.packed_of[y];
        for (std::uint32_t i = 0; i < bc.deg; ++i) {
            M.at(i, j) = bc.fq[packed % qv];
            packed /= qv;
        }
    }
    return M;
}

} // namespace jacquetlab
