#pragma once
// q-combinatorics: Pochhammer products, matrix rank counts over F_q, the
// block-triangular rank-sum identity, and the Moebius/necklace layer with
// the a_{k;n,d} polynomials.

#include "bigint.hpp"
#include "field_tower.hpp"
#include "int_poly.hpp"
#include "linalg.hpp"

#include <cstdint>
#include <vector>

namespace jacquetlab {

// (q;q)_j = prod_{i=1}^{j} (1 - q^i)
inline BigInt qpoch(const BigInt& q, std::uint64_t j) {
    BigInt r = 1, qi = 1;
    for (std::uint64_t i = 1; i <= j; ++i) {
        qi *= q;
        r *= (1 - qi);
    }
    return r;
}

// Incremental (q;q)_j table for hot loops.
struct QPochCache {
    BigInt q;
    std::vector<BigInt> table;

    explicit QPochCache(BigInt base) : q(std::move(base)), table{BigInt(1)} {}

    const BigInt& get(std::uint64_t j) {
        while (table.size() <= j) {
            std::uint64_t i = table.size();
            table.push_back(table.back() * (1 - bigpow(q, i)));
        }
        return table[j];
    }
};

// |GL_n(F_q)| = prod_{i=0}^{n-1} (q^n - q^i)
inline BigInt gl_order(const BigInt& q, std::uint32_t n) {
    BigInt qn = bigpow(q, n), r = 1, qi = 1;
    for (std::uint32_t i = 0; i < n; ++i) {
        r *= (qn - qi);
        qi *= q;
    }
    return r;
}

// Number of n x m matrices of rank r over F_q, via the manifestly integral
// product prod_{i<r} (q^n - q^i)(q^m - q^i)/(q^r - q^i).
inline BigInt rank_count(std::uint64_t q, std::uint32_t n, std::uint32_t m, std::uint32_t r) {
    if (r > n || r > m) return 0;
    if (r == 0) return 1;
    BigInt Q = q;
    BigInt num = 1, den = 1;
    BigInt qn = bigpow(Q, n), qm = bigpow(Q, m), qr = bigpow(Q, r), qi = 1;
    for (std::uint32_t i = 0; i < r; ++i) {
        num *= (qn - qi) * (qm - qi);
        den *= (qr - qi);
        qi *= Q;
    }
    if (num % den != 0) throw std::logic_error("rank_count: inexact division");
    return num / den;
}

// Landsberg's expression with negative q-powers, evaluated in exact
// rationals: (-1)^r (q^{-n};q)_r (q^{-m};q)_r q^{(n+m)r - C(r,2)} / (q;q)_r.
inline BigRat landsberg_rank_count(std::uint64_t q, std::uint32_t n, std::uint32_t m,
                                   std::uint32_t r) {
    BigRat Q(q);
    auto poch = [&](const BigRat& a, std::uint32_t len) {
        BigRat acc(1), qi(1);
        for (std::uint32_t i = 0; i < len; ++i) {
            acc *= (1 - a * qi);
            qi *= Q;
        }
        return acc;
    };
    BigRat qn_inv = BigRat(1) / BigRat(bigpow(BigInt(q), n));
    BigRat qm_inv = BigRat(1) / BigRat(bigpow(BigInt(q), m));
    BigRat val = poch(qn_inv, r) * poch(qm_inv, r);
    std::int64_t e = static_cast<std::int64_t>(n + m) * r -
                     static_cast<std::int64_t>(r) * (r - 1) / 2;
    BigInt qe = bigpow(BigInt(q), static_cast<std::uint64_t>(e < 0 ? -e : e));
    val *= (e < 0 ? BigRat(1, qe) : BigRat(qe));
    val /= poch(Q, r);
    if (r % 2) val = -val;
    return val;
}

inline BigInt rank_count_bruteforce(std::uint64_t q, std::uint32_t n, std::uint32_t m,
                                    std::uint32_t r, std::uint64_t guard = (1u << 24)) {
    if (n == 0 || m == 0) return (r == 0) ? 1 : 0;
    std::uint64_t p;
    std::uint32_t aa;
    factor_prime_power(q, p, aa);
    double bits = static_cast<double>(n) * m * std::uint64_t(64 - __builtin_clzll(q));
    if (bits > 62 || upow(q, n * m) > guard)
        throw guard_error("rank_count_bruteforce: enumeration too large");
    FieldTower tw(static_cast<std::uint32_t>(p), aa, 1);
    const std::vector<elem>& fq = tw.subfield(1);
    std::uint64_t total = upow(q, n * m);
    BigInt count = 0;
    MatSub A(n, m);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::uint64_t rest = code;
        for (std::size_t t = A.e.size(); t-- > 0;) {
            A.e[t] = fq[rest % q];
            rest /= q;
        }
        if (mat_rank(tw, A) == r) ++count;
    }
    return count;
}

// Both sides of the q-Chu-Vandermonde specialization
//   sum_r R_q(n,m,r) (q;q)_{a-r} = q^{nm} (q;q)_{a-n}(q;q)_{a-m}/(q;q)_{a-n-m}.
inline bool chu_check(std::uint64_t q, std::uint32_t n, std::uint32_t m, std::uint32_t a) {
    if (a < n + m) throw std::invalid_argument("chu_check: requires a >= n+m");
    BigInt Q = q;
    BigInt lhs = 0;
    for (std::uint32_t r = 0; r <= std::min(n, m); ++r)
        lhs += rank_count(q, n, m, r) * qpoch(Q, a - r);
    BigInt num = bigpow(Q, std::uint64_t(n) * m) * qpoch(Q, a - n) * qpoch(Q, a - m);
    BigInt den = qpoch(Q, a - n - m);
    if (num % den != 0) throw std::logic_error("chu_check: inexact division");
    return lhs == num / den;
}

// Smallest admissible a: max_i ( sum_{j<=i} n_j + sum_{j>=i} m_j ).
inline std::uint32_t fk_srange_min(const std::vector<std::uint32_t>& ns,
                                   const std::vector<std::uint32_t>& ms) {
    std::uint32_t best = 0;
    std::uint32_t k = static_cast<std::uint32_t>(ns.size());
    for (std::uint32_t i = 1; i <= k; ++i) {
        std::uint32_t s = 0;
        for (std::uint32_t j = 1; j <= i; ++j) s += ns[j - 1];
        for (std::uint32_t j = i; j <= k; ++j) s += ms[j - 1];
        best = std::max(best, s);
    }
    return best;
}

// f_{k,q}(a; n_1..n_k, m_1..m_k) closed form.
inline BigInt fk_closed(std::uint64_t q, const std::vector<std::uint32_t>& ns,
                        const std::vector<std::uint32_t>& ms, std::uint32_t a) {
    std::uint32_t k = static_cast<std::uint32_t>(ns.size());
    if (ms.size() != k || k == 0) throw std::invalid_argument("fk_closed: bad dims");
    if (a < fk_srange_min(ns, ms)) throw std::invalid_argument("fk_closed: a below srange");
    std::uint64_t E = 0;
    for (std::uint32_t i = 0; i < k; ++i)
        for (std::uint32_t j = i; j < k; ++j) E += std::uint64_t(ns[i]) * ms[j];
    BigInt Q = q;
    BigInt num = bigpow(Q, E), den = 1;
    // numerator i = 0..k: index a - sum_{j<=k-i} n_j - sum_{j>k-i} m_j
    for (std::uint32_t i = 0; i <= k; ++i) {
        std::uint32_t s = 0;
        for (std::uint32_t j = 1; j <= k - i; ++j) s += ns[j - 1];
        for (std::uint32_t j = k - i + 1; j <= k; ++j) s += ms[j - 1];
        num *= qpoch(Q, a - s);
    }
    // denominator i = 1..k: index a - sum_{j<=k-i+1} n_j - sum_{j>k-i} m_j
    for (std::uint32_t i = 1; i <= k; ++i) {
        std::uint32_t s = 0;
        for (std::uint32_t j = 1; j <= k - i + 1; ++j) s += ns[j - 1];
        for (std::uint32_t j = k - i + 1; j <= k; ++j) s += ms[j - 1];
        den *= qpoch(Q, a - s);
    }
    if (num % den != 0) throw std::logic_error("fk_closed: inexact division");
    return num / den;
}

// Rank distribution over the block upper-triangular shapes with row blocks
// ns and column blocks ms (free entries in blocks (i,j), i <= j).  Shared by
// all admissible a, so callers enumerate once per shape.
inline std::vector<std::int64_t> fk_rank_counts(std::uint64_t q,
                                                const std::vector<std::uint32_t>& ns,
                                                const std::vector<std::uint32_t>& ms,
                                                std::uint64_t guard = (1u << 24)) {
    std::uint32_t k = static_cast<std::uint32_t>(ns.size());
    if (ms.size() != k || k == 0) throw std::invalid_argument("fk_rank_counts: bad dims");
    std::uint32_t R = 0, C = 0;
    for (auto v : ns) R += v;
    for (auto v : ms) C += v;
    // free positions: block (i,j), i <= j
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pos;
    {
        std::uint32_t row0 = 0;
        for (std::uint32_t i = 0; i < k; ++i) {
            std::uint32_t col0 = 0;
            for (std::uint32_t j = 0; j < k; ++j) {
                if (j >= i)
                    for (std::uint32_t r = 0; r < ns[i]; ++r)
                        for (std::uint32_t c = 0; c < ms[j]; ++c)
                            pos.emplace_back(row0 + r, col0 + c);
                col0 += ms[j];
            }
            row0 += ns[i];
        }
    }
    const std::size_t E = pos.size();
    double bits = static_cast<double>(E) * (64 - __builtin_clzll(q));
    if (bits > 62 || (E > 0 && upow(q, static_cast<std::uint32_t>(E)) > guard))
        throw guard_error("fk_rank_counts: enumeration too large");
    std::uint64_t total = upow(q, static_cast<std::uint32_t>(E));

    std::uint64_t p64;
    std::uint32_t aa;
    factor_prime_power(q, p64, aa);
    FieldTower tw(static_cast<std::uint32_t>(p64), aa, 1);
    const std::vector<elem>& fq = tw.subfield(1);

    std::uint32_t maxr = std::min(R, C);
    std::vector<std::int64_t> cnt(maxr + 1, 0);
    if (R == 0 || C == 0) {
        cnt[0] = static_cast<std::int64_t>(total);
    } else if (q == 2) {
        // bit-packed rows
        std::vector<std::uint64_t> rows(R, 0);
        std::vector<std::uint8_t> digits(E, 0);
        for (std::uint64_t it = 0; it < total; ++it) {
            ++cnt[rank_bits(rows)];
            for (std::size_t t = E; t-- > 0;) {
                auto [r, c] = pos[t];
                rows[r] ^= std::uint64_t{1} << c;
                if (digits[t] == 0) {
                    digits[t] = 1;
                    break;
                }
                digits[t] = 0;
            }
        }
    } else {
        MatSub A(R, C), scratch(R, C);
        std::vector<std::uint8_t> digits(E, 0);
        for (std::uint64_t it = 0; it < total; ++it) {
            scratch.e = A.e;
            ++cnt[mat_rank_inplace(tw, scratch)];
            for (std::size_t t = E; t-- > 0;) {
                auto [r, c] = pos[t];
                if (digits[t] + 1u < q) {
                    ++digits[t];
                    A.at(r, c) = fq[digits[t]];
                    break;
                }
                digits[t] = 0;
                A.at(r, c) = fq[0];
            }
        }
    }
    return cnt;
}

// sum_r #{shape points of rank r} (q;q)_{a-r}, from a precomputed
// distribution.
inline BigInt fk_from_rank_counts(std::uint64_t q, const std::vector<std::int64_t>& cnt,
                                  std::uint32_t a) {
    BigInt Q = q, sum = 0;
    for (std::uint32_t r = 0; r < cnt.size(); ++r) {
        if (r > a) throw std::invalid_argument("fk_from_rank_counts: a below max rank");
        if (cnt[r] != 0) sum += BigInt(cnt[r]) * qpoch(Q, a - r);
    }
    return sum;
}

// Direct enumeration of the block upper-triangular shapes.
inline BigInt fk_bruteforce(std::uint64_t q, const std::vector<std::uint32_t>& ns,
                            const std::vector<std::uint32_t>& ms, std::uint32_t a,
                            std::uint64_t guard = (1u << 24)) {
    if (a < fk_srange_min(ns, ms)) throw std::invalid_argument("fk_bruteforce: a below srange");
    return fk_from_rank_counts(q, fk_rank_counts(q, ns, ms, guard), a);
}

// Necklace polynomial M_n(x) = (1/n) sum_{d|n} mu(d) x^{n/d}, kept as an
// exact numerator/denominator pair (the coefficients are not integral).
struct RatPoly {
    IntPoly num;
    BigInt den;
};

inline RatPoly necklace_poly(std::uint64_t n) {
    IntPoly num;
    for (std::uint64_t d : divisors(n))
        num = num + IntPoly::monomial(moebius(d), static_cast<std::size_t>(n / d));
    // integrality of values: the coefficient sum M_n(1) must be divisible by n
    BigInt at1 = num.eval(BigInt(1));
    if (at1 % BigInt(n) != 0) throw std::logic_error("necklace_poly: coefficient sum defect");
    return RatPoly{num, BigInt(n)};
}

// a_{k;n,d}(x): numerator (x^d - 1) * sum_{d|m|n} mu(m/d) (-1)^{k(n - n/m)}
// x^{(k-2)(n/2)(n/m - 1)}, divided exactly by x^n - 1.
inline IntPoly a_poly(std::uint32_t k, std::uint32_t n, std::uint32_t d) {
    if (k < 2 || d == 0 || n % d != 0) throw std::invalid_argument("a_poly: bad arguments");
    IntPoly sum;
    for (std::uint64_t m : divisors(n)) {
        if (m % d != 0) continue;
        std::uint64_t nm = n / m;
        std::uint64_t enumer = std::uint64_t(k - 2) * n * (nm - 1);
        if (enumer % 2 != 0) throw std::logic_error("a_poly: non-integral exponent");
        std::uint64_t ex = enumer / 2;
        int sgn = (std::uint64_t(k) * (n - nm)) % 2 == 0 ? 1 : -1;
        sum = sum + IntPoly::monomial(moebius(m / d) * sgn, static_cast<std::size_t>(ex));
    }
    IntPoly num = (xn_minus_1(d)) * sum;
    return divide_exact_monic(num, xn_minus_1(n));
}

inline BigInt a_value(std::uint32_t k, std::uint32_t n, std::uint32_t d, std::uint64_t q) {
    BigInt val = a_poly(k, n, d).eval(BigInt(q));
    // cross-check against direct rational evaluation of the defining formula
    BigRat Q(q);
    BigRat direct = 0;
    for (std::uint64_t m : divisors(n)) {
        if (m % d != 0) continue;
        std::uint64_t nm = n / m;
        std::uint64_t enumer = std::uint64_t(k - 2) * n * (nm - 1);
        BigRat term = BigRat(bigpow(BigInt(q), enumer / 2));
        if ((std::uint64_t(k) * (n - nm)) % 2) term = -term;
        direct += BigRat(moebius(m / d)) * term;
    }
    direct *= (BigRat(bigpow(BigInt(q), d)) - 1) / (BigRat(bigpow(BigInt(q), n)) - 1);
    if (BigRat(val) != direct) throw std::logic_error("a_value: polynomial route disagrees");
    return val;
}

} // namespace jacquetlab
