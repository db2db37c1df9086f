#pragma once
// Twisted Jacquet module characters for cuspidal representations of
// GL_{kn}(F_q), computed two independent ways:
//
//  * brute force: average Theta_theta(h_{g;U}) psi-bar(U) over the unipotent
//    radical N of the (n^k) block parabolic, where h_{g;U} has k copies of g
//    on the block diagonal and the strictly-upper blocks of U above it;
//  * closed form: the case formula through the eigenvalue data (d, lambda, t)
//    of g.
//
// Plus the companions needed to exercise them: the induced-from-subfield
// characters, the Steinberg character via flag counts, the Gauss-sum rank
// identity, and the psi-stabilizer sweep.

#include "green.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

namespace jacquetlab {

// ------------------------------------------------------------ configuration

struct JacquetConfig {
    const FieldTower* tw = nullptr;
    std::uint32_t n = 0, k = 0;
    MultChar theta;    // regular character of F_{q^{kn}}^*
    AdditiveChar psi;  // twist psi_b with b in F_q^*
    std::uint64_t budget = std::uint64_t{1} << 28;
    std::uint32_t threads = 1;
};

inline JacquetConfig make_jacquet_config(const FieldTower& tw, std::uint32_t n, std::uint32_t k,
                                         std::uint64_t theta_exp, elem twist,
                                         std::uint64_t budget = std::uint64_t{1} << 28,
                                         std::uint32_t threads = 1) {
    if (n == 0 || k == 0 || n * k != tw.m())
        throw std::invalid_argument("jacquet config: tower degree must equal k*n");
    JacquetConfig cfg;
    cfg.tw = &tw;
    cfg.n = n;
    cfg.k = k;
    cfg.theta = make_mult_char(tw, n * k, theta_exp);
    if (!is_regular(cfg.theta))
        throw std::invalid_argument("jacquet config: character exponent is not regular");
    cfg.psi = make_additive_char(tw, twist);
    cfg.budget = budget;
    cfg.threads = threads ? threads : 1;
    return cfg;
}

// --------------------------------------------------------- unipotent radical
//
// U = I + sum X_{i,j}, with X_{i,j} in M_n(F_q) placed at block row i, block
// column j+1 for 1 <= i <= j <= k-1.  A point of N is a digit vector over
// F_q: blocks ordered (1,1),(1,2),...,(1,k-1),(2,2),...,(k-1,k-1), entries
// row-major inside each block, and digit 0 is the most significant position
// of the linear index (the odometer increments the last digit first).

// One point of N as its digit vector; digit d names the entry UnipotentShape
// records at pos[d].
using UnipotentPoint = std::vector<std::uint8_t>;

struct UnipotentShape {
    std::uint32_t n = 0, k = 0, m = 0;
    std::uint64_t count = 1;  // |N| = q^{C(k,2) n^2}
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pos;  // digit -> (row, col)
    std::vector<std::uint8_t> on_trace;       // digit sits on the diagonal of some X_{i,i}
    std::vector<std::uint32_t> trace_digits;  // indices of those digits
    std::vector<std::uint32_t> diag_offset;   // first digit of X_{i,i}, i = 1..k-1
};

inline UnipotentShape make_unipotent_shape(const FieldTower& tw, std::uint32_t n,
                                           std::uint32_t k, std::uint64_t budget) {
    UnipotentShape sh;
    sh.n = n;
    sh.k = k;
    sh.m = n * k;
    for (std::uint32_t i = 1; i < k; ++i) {
        for (std::uint32_t j = i; j < k; ++j) {
            if (j == i) sh.diag_offset.push_back(static_cast<std::uint32_t>(sh.pos.size()));
            for (std::uint32_t r = 0; r < n; ++r)
                for (std::uint32_t c = 0; c < n; ++c) {
                    bool tr = (i == j && r == c);
                    if (tr) sh.trace_digits.push_back(static_cast<std::uint32_t>(sh.pos.size()));
                    sh.pos.emplace_back((i - 1) * n + r, j * n + c);
                    sh.on_trace.push_back(tr ? 1 : 0);
                }
        }
    }
    std::uint64_t q = tw.q();
    std::uint32_t E = static_cast<std::uint32_t>(sh.pos.size());
    double bits = static_cast<double>(E) * std::uint64_t(64 - __builtin_clzll(q));
    if (bits > 62) throw guard_error("unipotent radical exceeds 2^62 points");
    sh.count = upow(q, E);
    if (sh.count > budget) throw guard_error("unipotent radical exceeds the budget");
    return sh;
}

// h_{g;U}: copies of g on the block diagonal, the X blocks of U above it.
inline MatSub build_h(const FieldTower& tw, const UnipotentShape& sh, const MatSub& g,
                      const std::vector<std::uint8_t>& digits) {
    if (g.rows != sh.n || g.cols != sh.n) throw std::invalid_argument("build_h: bad block size");
    const std::vector<elem>& fq = tw.subfield(1);
    MatSub h(sh.m, sh.m);
    for (std::uint32_t b = 0; b < sh.k; ++b)
        for (std::uint32_t r = 0; r < sh.n; ++r)
            for (std::uint32_t c = 0; c < sh.n; ++c)
                h.at(b * sh.n + r, b * sh.n + c) = g.at(r, c);
    for (std::size_t t = 0; t < sh.pos.size(); ++t)
        h.at(sh.pos[t].first, sh.pos[t].second) = fq[digits[t]];
    return h;
}

inline MatSub build_unipotent(const FieldTower& tw, const UnipotentShape& sh,
                              const std::vector<std::uint8_t>& digits) {
    return build_h(tw, sh, mat_identity(tw, sh.n), digits);
}

// psi(U) exponent: trace of sum of the diagonal blocks X_{i,i}.
inline std::uint32_t unipotent_psi_exponent(const FieldTower& tw, const AdditiveChar& psi,
                                            const UnipotentShape& sh,
                                            const std::vector<std::uint8_t>& digits) {
    const std::vector<elem>& fq = tw.subfield(1);
    elem s = 0;
    for (std::uint32_t t : sh.trace_digits) s = tw.add(s, fq[digits[t]]);
    return psi_exponent(psi, s);
}

namespace detail {

inline void decode_digits(std::uint64_t index, std::uint64_t q, std::vector<std::uint8_t>& digits) {
    for (std::size_t t = digits.size(); t-- > 0;) {
        digits[t] = static_cast<std::uint8_t>(index % q);
        index /= q;
    }
}

// Count (t, psi-exponent) pairs over a contiguous index range, generic field.
// The matrix maintained is h_{g;U} - lambda*I; only the X entries change.
inline void count_range_generic(const JacquetConfig& cfg, const UnipotentShape& sh,
                                const MatSub& g, elem lambda, std::uint64_t lo,
                                std::uint64_t hi, std::vector<std::int64_t>& cnt) {
    const FieldTower& tw = *cfg.tw;
    const std::vector<elem>& fq = tw.subfield(1);
    const std::uint64_t q = tw.q();
    const std::uint32_t m = sh.m, p = tw.p();
    const std::size_t E = sh.pos.size();

    std::vector<std::uint8_t> digits(E);
    decode_digits(lo, q, digits);

    MatSub base(m, m);
    for (std::uint32_t b = 0; b < sh.k; ++b)
        for (std::uint32_t r = 0; r < sh.n; ++r)
            for (std::uint32_t c = 0; c < sh.n; ++c) {
                elem v = g.at(r, c);
                if (r == c) v = tw.sub(v, lambda);
                base.at(b * sh.n + r, b * sh.n + c) = v;
            }
    for (std::size_t t = 0; t < E; ++t)
        base.at(sh.pos[t].first, sh.pos[t].second) = fq[digits[t]];

    MatSub scratch(m, m);
    for (std::uint64_t it = lo; it < hi; ++it) {
        std::uint32_t e = unipotent_psi_exponent(tw, cfg.psi, sh, digits);
        scratch.e = base.e;
        std::uint32_t t = m - mat_rank_inplace(tw, scratch);
        ++cnt[std::size_t(t) * p + e];
        for (std::size_t tt = E; tt-- > 0;) {
            auto [r, c] = sh.pos[tt];
            if (digits[tt] + 1u < q) {
                ++digits[tt];
                base.at(r, c) = fq[digits[tt]];
                break;
            }
            digits[tt] = 0;
            base.at(r, c) = 0;
        }
    }
}

// Same, bit-packed for q = 2 (forces lambda = 1 and twist b = 1).
inline void count_range_bits(const JacquetConfig& cfg, const UnipotentShape& sh, const MatSub& g,
                             std::uint64_t lo, std::uint64_t hi,
                             std::vector<std::int64_t>& cnt) {
    const FieldTower& tw = *cfg.tw;
    const std::uint32_t m = sh.m;
    const std::size_t E = sh.pos.size();

    std::vector<std::uint8_t> digits(E);
    decode_digits(lo, 2, digits);

    std::vector<std::uint64_t> rows(m, 0);
    for (std::uint32_t b = 0; b < sh.k; ++b)
        for (std::uint32_t r = 0; r < sh.n; ++r)
            for (std::uint32_t c = 0; c < sh.n; ++c) {
                bool bit = (g.at(r, c) != 0) != (r == c);  // g - I over F_2
                if (bit) rows[b * sh.n + r] |= std::uint64_t{1} << (b * sh.n + c);
            }
    std::uint32_t cur_e = 0;
    for (std::size_t t = 0; t < E; ++t) {
        if (digits[t]) {
            rows[sh.pos[t].first] |= std::uint64_t{1} << sh.pos[t].second;
            cur_e ^= sh.on_trace[t];
        }
    }

    for (std::uint64_t it = lo; it < hi; ++it) {
        std::uint32_t t = m - rank_bits(rows);
        ++cnt[std::size_t(t) * 2 + cur_e];
        for (std::size_t tt = E; tt-- > 0;) {
            rows[sh.pos[tt].first] ^= std::uint64_t{1} << sh.pos[tt].second;
            cur_e ^= sh.on_trace[tt];
            if (digits[tt] == 0) {
                digits[tt] = 1;
                break;
            }
            digits[tt] = 0;
        }
    }
}

// counts[t*p + e] |-> sum of counts * (-1)^{m-1} (q^d;q^d)_{t-1}
//                     * [sum_a theta(lambda^{q^a})] * zeta_p^{-e}.
inline CycInt assemble_counts(const JacquetConfig& cfg, const GreenClassData& cls,
                              const std::vector<std::int64_t>& counts) {
    const FieldTower& tw = *cfg.tw;
    const std::uint64_t N = cyc_modulus(tw);
    const std::uint32_t m = cfg.n * cfg.k, p = tw.p();

    std::vector<std::uint64_t> orbit(cls.d);
    elem y = cls.lambda;
    for (std::uint32_t a = 0; a < cls.d; ++a) {
        orbit[a] = theta_root_exponent(cfg.theta, y);
        y = tw.frobenius(y, 1);
    }
    QPochCache poch(bigpow(BigInt(tw.q()), cls.d));
    const bool neg = ((m - 1) % 2) != 0;

    CycInt acc(N);
    for (std::uint32_t t = 1; t <= m; ++t) {
        for (std::uint32_t e = 0; e < p; ++e) {
            std::int64_t c = counts[std::size_t(t) * p + e];
            if (!c) continue;
            BigInt coef = BigInt(c) * poch.get(t - 1);
            if (neg) coef = -coef;
            std::uint64_t shift = std::uint64_t((p - e) % p) * tw.order();
            for (std::uint32_t a = 0; a < cls.d; ++a) acc.add_at(orbit[a] + shift, coef);
        }
    }
    acc.reduce();
    return acc;
}

}  // namespace detail

// Histogram of (t, psi exponent) pairs over the whole U enumeration, indexed
// t * p + e.  Independent of theta: one pass serves every character sharing
// (g, psi).  Worker partition is by contiguous index ranges; the merged
// counts are identical for any thread count.
inline std::vector<std::int64_t> jacquet_counts(const JacquetConfig& cfg, const MatSub& g,
                                                const GreenClassData& cls) {
    const FieldTower& tw = *cfg.tw;
    if (g.rows != cfg.n || g.cols != cfg.n)
        throw std::invalid_argument("jacquet_counts: matrix must be n x n");
    if (!cls.from_field)
        throw std::invalid_argument("jacquet_counts: class does not come from a field");
    UnipotentShape sh = make_unipotent_shape(tw, cfg.n, cfg.k, cfg.budget);

    const std::uint32_t m = sh.m, p = tw.p();
    const std::uint64_t total = sh.count;
    const bool use_bits = (tw.q() == 2 && cls.d == 1);

    std::uint64_t T64 = std::min<std::uint64_t>(std::max<std::uint32_t>(cfg.threads, 1), 1024);
    T64 = std::min(T64, total);
    const std::uint32_t T = static_cast<std::uint32_t>(T64);

    std::vector<std::int64_t> counts(std::size_t(m + 1) * p, 0);
    auto run = [&](std::uint64_t lo, std::uint64_t hi, std::vector<std::int64_t>& cnt) {
        if (use_bits)
            detail::count_range_bits(cfg, sh, g, lo, hi, cnt);
        else
            detail::count_range_generic(cfg, sh, g, cls.lambda, lo, hi, cnt);
    };

    if (T <= 1) {
        run(0, total, counts);
    } else {
        std::vector<std::vector<std::int64_t>> parts(T, counts);
        std::vector<std::thread> pool;
        pool.reserve(T);
        for (std::uint32_t w = 0; w < T; ++w) {
            std::uint64_t lo = total * w / T, hi = total * (w + 1) / T;
            pool.emplace_back([&, lo, hi, w] { run(lo, hi, parts[w]); });
        }
        for (auto& th : pool) th.join();
        for (const auto& part : parts)
            for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += part[i];
    }
    return counts;
}

// Assemble a histogram into the character value under cfg.theta and divide
// by |N|.
inline CycInt twisted_char_from_counts(const JacquetConfig& cfg, const GreenClassData& cls,
                                       const std::vector<std::int64_t>& counts) {
    std::uint64_t total =
        upow(cfg.tw->q(), std::uint32_t(cfg.k) * (cfg.k - 1) / 2 * cfg.n * cfg.n);
    return detail::assemble_counts(cfg, cls, counts).divide_exact(BigInt(total));
}

// Brute-force character value: (1/|N|) sum_U Theta_theta(h_{g;U}) psi-bar(U).
// The characteristic polynomial of h_{g;U} is char_poly(g)^k for every U, so
// g is classified once and only t = kn - rank(h - lambda I) and the psi
// exponent vary over the enumeration.
inline CycInt twisted_char_bruteforce(const JacquetConfig& cfg, const MatSub& g) {
    GreenClassData cls = classify(*cfg.tw, g);
    if (!cls.from_field) {
        make_unipotent_shape(*cfg.tw, cfg.n, cfg.k, cfg.budget);  // guards still apply
        return CycInt::zero(cyc_modulus(*cfg.tw));
    }
    return twisted_char_from_counts(cfg, cls, jacquet_counts(cfg, g, cls));
}

// Reference evaluation straight from the projection formula: full Green
// value of diag(g,...,g) * U for every U.  Exponential in everything; only
// for cross-checks on tiny groups.
inline CycInt twisted_char_via_products(const JacquetConfig& cfg, const MatSub& g,
                                        std::uint64_t guard = (std::uint64_t{1} << 16)) {
    const FieldTower& tw = *cfg.tw;
    UnipotentShape sh = make_unipotent_shape(tw, cfg.n, cfg.k, std::min(guard, cfg.budget));
    GreenEvaluator ev(tw, cfg.theta);
    const std::uint64_t q = tw.q();
    const std::uint32_t p = tw.p();

    MatSub dg(sh.m, sh.m);
    for (std::uint32_t b = 0; b < sh.k; ++b)
        for (std::uint32_t r = 0; r < sh.n; ++r)
            for (std::uint32_t c = 0; c < sh.n; ++c)
                dg.at(b * sh.n + r, b * sh.n + c) = g.at(r, c);

    std::vector<std::uint8_t> digits(sh.pos.size(), 0);
    CycInt acc(cyc_modulus(tw));
    for (std::uint64_t it = 0; it < sh.count; ++it) {
        MatSub hu = mat_mul(tw, dg, build_unipotent(tw, sh, digits));
        std::uint32_t e = unipotent_psi_exponent(tw, cfg.psi, sh, digits);
        acc += ev.value(hu).mul_root(std::uint64_t((p - e) % p) * tw.order());
        for (std::size_t tt = digits.size(); tt-- > 0;) {
            if (digits[tt] + 1u < q) {
                ++digits[tt];
                break;
            }
            digits[tt] = 0;
        }
    }
    return acc.divide_exact(BigInt(sh.count));
}

// Same sum after the change of variables that moves g into the psi argument:
// (1/|N|) sum_U Theta_theta(h_{g;U}) psi-bar(tr sum_i g^{-1} X_{i,i}).
inline CycInt twisted_char_via_shifted_psi(const JacquetConfig& cfg, const MatSub& g,
                                           std::uint64_t guard = (std::uint64_t{1} << 16)) {
    const FieldTower& tw = *cfg.tw;
    UnipotentShape sh = make_unipotent_shape(tw, cfg.n, cfg.k, std::min(guard, cfg.budget));
    GreenEvaluator ev(tw, cfg.theta);
    const std::uint64_t q = tw.q();
    const std::uint32_t p = tw.p(), n = sh.n;
    MatSub ginv = mat_inverse(tw, g);

    std::vector<std::uint8_t> digits(sh.pos.size(), 0);
    CycInt acc(cyc_modulus(tw));
    for (std::uint64_t it = 0; it < sh.count; ++it) {
        MatSub h = build_h(tw, sh, g, digits);
        elem s = 0;
        for (std::uint32_t i = 1; i < sh.k; ++i)  // tr(ginv * X_{i,i})
            for (std::uint32_t c = 0; c < n; ++c)
                for (std::uint32_t r = 0; r < n; ++r)
                    s = tw.add(s, tw.mul(ginv.at(c, r), h.at((i - 1) * n + r, i * n + c)));
        std::uint32_t e = psi_exponent(cfg.psi, s);
        acc += ev.value(h).mul_root(std::uint64_t((p - e) % p) * tw.order());
        for (std::size_t tt = digits.size(); tt-- > 0;) {
            if (digits[tt] + 1u < q) {
                ++digits[tt];
                break;
            }
            digits[tt] = 0;
        }
    }
    return acc.divide_exact(BigInt(sh.count));
}

// ------------------------------------------------------------- closed forms

// dim = q^{(k-2) n(n-1)/2} |GL_n(F_q)| / (q^n - 1).
inline BigInt jacquet_dim(std::uint64_t q, std::uint32_t n, std::uint32_t k) {
    if (k < 2) throw std::invalid_argument("jacquet_dim: requires k >= 2");
    BigInt Q = q;
    BigInt qn1 = bigpow(Q, n) - 1;
    BigInt go = gl_order(Q, n);
    if (go % qn1 != 0) throw std::logic_error("jacquet_dim: inexact division");
    return bigpow(Q, std::uint64_t(k - 2) * n * (n - 1) / 2) * (go / qn1);
}

inline BigInt jacquet_dim(const JacquetConfig& cfg) {
    return jacquet_dim(cfg.tw->q(), cfg.n, cfg.k);
}

// Case formula: 0 unless g is semisimple with char poly a power of a single
// irreducible of degree d; there the value is
// (-1)^{k(n-d')} q^{(k-2) n(d'-1)/2} [sum theta(lambda^{q^i})]
//   * |GL_{d'}(F_{q^d})| / (q^n - 1)   with d' = n/d.
inline CycInt twisted_char_closed(const JacquetConfig& cfg, const MatSub& g) {
    const FieldTower& tw = *cfg.tw;
    if (cfg.k < 2) throw std::invalid_argument("twisted_char_closed: requires k >= 2");
    if (g.rows != cfg.n || g.cols != cfg.n)
        throw std::invalid_argument("twisted_char_closed: matrix must be n x n");
    GreenClassData cls = classify(tw, g);
    const std::uint64_t N = cyc_modulus(tw);
    if (!cls.from_field) return CycInt::zero(N);
    const std::uint32_t dp = cfg.n / cls.d;
    if (cls.t < dp) return CycInt::zero(N);  // not semisimple

    std::uint64_t e2 = std::uint64_t(cfg.k - 2) * cfg.n * (dp - 1);
    if (e2 % 2) throw std::logic_error("twisted_char_closed: odd exponent");
    BigInt Q = tw.q();
    BigInt qn1 = bigpow(Q, cfg.n) - 1;
    BigInt fac = gl_order(bigpow(Q, cls.d), dp);
    if (fac % qn1 != 0) throw std::logic_error("twisted_char_closed: inexact division");
    fac = fac / qn1 * bigpow(Q, e2 / 2);
    if ((std::uint64_t(cfg.k) * (cfg.n - dp)) % 2) fac = -fac;
    return orbit_sum(cfg.theta, cls.lambda, cls.d).scaled(fac);
}

// ----------------------------------------------- induced from subfield tori

// All of GL_n(F_q) in ascending packed-code order (entry (0,0) is the most
// significant digit).
inline std::vector<MatSub> gl_enumerate(const FieldTower& tw, std::uint32_t n,
                                        std::uint64_t guard = 1000000) {
    BigInt sz = gl_order(BigInt(tw.q()), n);
    if (sz > guard) throw guard_error("gl_enumerate: group exceeds the guard");
    const std::uint64_t q = tw.q();
    const std::vector<elem>& fq = tw.subfield(1);
    std::uint64_t total = upow(q, n * n);
    std::vector<MatSub> out;
    out.reserve(static_cast<std::size_t>(sz));
    MatSub A(n, n);
    std::vector<std::uint8_t> digits(std::size_t(n) * n, 0);
    for (std::uint64_t it = 0; it < total; ++it) {
        if (mat_rank(tw, A) == n) out.push_back(A);
        for (std::size_t t = digits.size(); t-- > 0;) {
            if (digits[t] + 1u < q) {
                ++digits[t];
                A.e[t] = fq[digits[t]];
                break;
            }
            digits[t] = 0;
            A.e[t] = 0;
        }
    }
    return out;
}

// Character of the representation induced from the subfield torus
// F_{q^ell}^* (embedded via multiplication matrices on F_{q^n}) to
// GL_n(F_q), twisted by theta restricted to F_{q^ell}^*.  Closed form.
inline CycInt induced_char_closed(const FieldTower& tw, std::uint32_t n, std::uint32_t ell,
                                  const MultChar& theta, const MatSub& s) {
    if (ell == 0 || n % ell != 0 || theta.mprime % ell != 0)
        throw std::invalid_argument("induced_char_closed: bad subfield degree");
    GreenClassData cls = classify(tw, s);
    const std::uint64_t N = cyc_modulus(tw);
    if (!cls.from_field) return CycInt::zero(N);
    const std::uint32_t dp = n / cls.d;
    if (cls.t < dp) return CycInt::zero(N);      // not semisimple
    if (ell % cls.d != 0) return CycInt::zero(N);  // eigenvalue outside F_{q^ell}
    BigInt Q = tw.q();
    BigInt ql1 = bigpow(Q, ell) - 1;
    BigInt fac = gl_order(bigpow(Q, cls.d), dp);
    if (fac % ql1 != 0) throw std::logic_error("induced_char_closed: inexact division");
    return orbit_sum(theta, cls.lambda, cls.d).scaled(fac / ql1);
}

inline CycInt induced_char_closed(const JacquetConfig& cfg, std::uint32_t ell, const MatSub& s) {
    return induced_char_closed(*cfg.tw, cfg.n, ell, cfg.theta, s);
}

// Same by direct summation over the group: (1/(q^ell - 1)) *
// sum over x in GL_n with x^{-1} s x in the torus of theta(x^{-1} s x).
inline CycInt induced_char_bruteforce(const FieldTower& tw, std::uint32_t n, std::uint32_t ell,
                                      const MultChar& theta, const MatSub& s,
                                      const BasisCoords& bc, std::uint64_t guard = 1000000) {
    if (ell == 0 || n % ell != 0 || theta.mprime % ell != 0)
        throw std::invalid_argument("induced_char_bruteforce: bad subfield degree");
    if (bc.deg != n) throw std::invalid_argument("induced_char_bruteforce: basis degree mismatch");
    std::map<MatSub, elem> torus;
    for (elem a : tw.subfield(ell))
        if (a) torus.emplace(mult_matrix(bc, a), a);
    CycInt acc(cyc_modulus(tw));
    for (const MatSub& x : gl_enumerate(tw, n, guard)) {
        MatSub c = mat_mul(tw, mat_mul(tw, mat_inverse(tw, x), s), x);
        auto it = torus.find(c);
        if (it != torus.end()) acc.add_at(theta_root_exponent(theta, it->second), 1);
    }
    acc.reduce();
    return acc.divide_exact(bigpow(BigInt(tw.q()), ell) - 1);
}

inline CycInt induced_char_bruteforce(const JacquetConfig& cfg, std::uint32_t ell, const MatSub& s,
                                      const BasisCoords& bc, std::uint64_t guard = 1000000) {
    return induced_char_bruteforce(*cfg.tw, cfg.n, ell, cfg.theta, s, bc, guard);
}

// --------------------------------------------------------- class inventories

struct ClassRep {
    MatSub g;
    GreenClassData cls;
    std::uint64_t count = 0;  // group elements sharing the invariant key
};

namespace detail {

inline MatSub mat_poly_eval(const FieldTower& tw, const FieldPoly& f, const MatSub& g) {
    MatSub R(g.rows, g.cols);
    for (std::size_t i = f.size(); i-- > 0;) {
        R = mat_mul(tw, R, g);
        if (f[i])
            for (std::uint32_t j = 0; j < R.rows; ++j)
                R.at(j, j) = tw.add(R.at(j, j), f[i]);
    }
    return R;
}

}  // namespace detail

// One representative per value of the invariant key
// (char poly, rank profile of radical(char poly)(g)^j for j = 1..n),
// which separates conjugacy classes at the sizes used here.  Deterministic:
// the representative is the first matrix in ascending packed-code order.
inline std::vector<ClassRep> class_reps(const FieldTower& tw, std::uint32_t n,
                                        std::uint64_t guard = 1000000) {
    std::map<std::pair<FieldPoly, std::vector<std::uint32_t>>, std::size_t> index;
    std::vector<ClassRep> reps;
    for (const MatSub& g : gl_enumerate(tw, n, guard)) {
        GreenClassData cls = classify(tw, g);
        FieldPoly rad = fp_radical(tw, cls.charpoly, 1);
        MatSub rg = detail::mat_poly_eval(tw, rad, g);
        std::vector<std::uint32_t> profile;
        MatSub Mj = rg;
        for (std::uint32_t j = 1; j <= n; ++j) {
            profile.push_back(mat_rank(tw, Mj));
            if (j < n) Mj = mat_mul(tw, Mj, rg);
        }
        auto key = std::make_pair(cls.charpoly, std::move(profile));
        auto [it, fresh] = index.emplace(std::move(key), reps.size());
        if (fresh)
            reps.push_back(ClassRep{g, std::move(cls), 1});
        else
            ++reps[it->second].count;
    }
    return reps;
}

// ------------------------------------------------------- Steinberg character

namespace detail {

struct SubspaceInfo {
    std::vector<std::vector<elem>> basis;  // coordinate rows, length n
    std::vector<std::uint64_t> members;    // bitset over packed vector codes
};

// All g-invariant subspaces of F_q^n (column vectors, g acting on the left),
// grouped by dimension.  Subspaces are enumerated through reduced row-echelon
// bases so each arises exactly once.
inline std::vector<std::vector<SubspaceInfo>> invariant_subspaces(const FieldTower& tw,
                                                                  const MatSub& g) {
    const std::uint32_t n = g.rows;
    const std::uint64_t q = tw.q();
    const std::vector<elem>& fq = tw.subfield(1);
    std::vector<std::uint32_t> digit_of(tw.card(), UINT32_MAX);
    for (std::uint32_t i = 0; i < fq.size(); ++i) digit_of[fq[i]] = i;

    const std::uint64_t vecs = upow(q, n);
    const std::size_t words = static_cast<std::size_t>((vecs + 63) / 64);
    auto code_of = [&](const std::vector<elem>& v) {
        std::uint64_t code = 0;
        for (std::uint32_t i = n; i-- > 0;) code = code * q + digit_of[v[i]];
        return code;
    };

    std::vector<std::vector<SubspaceInfo>> levels(n + 1);
    {
        SubspaceInfo zero;
        zero.members.assign(words, 0);
        zero.members[0] = 1;  // code 0
        levels[0].push_back(std::move(zero));
    }

    std::vector<elem> gv(n);
    for (std::uint32_t r = 1; r <= n; ++r) {
        // pivot column sets, ascending bitmask order
        for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
            if (__builtin_popcount(mask) != r) continue;
            std::vector<std::uint32_t> piv;
            for (std::uint32_t c = 0; c < n; ++c)
                if (mask & (1u << c)) piv.push_back(c);
            // free positions: (row i, col c) with c > piv[i], c not a pivot
            std::vector<std::pair<std::uint32_t, std::uint32_t>> free_pos;
            for (std::uint32_t i = 0; i < r; ++i)
                for (std::uint32_t c = piv[i] + 1; c < n; ++c)
                    if (!(mask & (1u << c))) free_pos.emplace_back(i, c);
            std::vector<std::uint8_t> fd(free_pos.size(), 0);
            std::uint64_t combos = upow(q, static_cast<std::uint32_t>(free_pos.size()));
            for (std::uint64_t it = 0; it < combos; ++it) {
                SubspaceInfo sp;
                sp.basis.assign(r, std::vector<elem>(n, 0));
                for (std::uint32_t i = 0; i < r; ++i) sp.basis[i][piv[i]] = tw.one();
                for (std::size_t t = 0; t < free_pos.size(); ++t)
                    sp.basis[free_pos[t].first][free_pos[t].second] = fq[fd[t]];
                // span
                sp.members.assign(words, 0);
                std::vector<std::uint8_t> coef(r, 0);
                std::uint64_t span = upow(q, r);
                std::vector<elem> v(n);
                for (std::uint64_t s = 0; s < span; ++s) {
                    std::fill(v.begin(), v.end(), 0);
                    for (std::uint32_t i = 0; i < r; ++i) {
                        if (!coef[i]) continue;
                        elem ci = fq[coef[i]];
                        for (std::uint32_t j = 0; j < n; ++j)
                            v[j] = tw.add(v[j], tw.mul(ci, sp.basis[i][j]));
                    }
                    std::uint64_t code = code_of(v);
                    sp.members[code >> 6] |= std::uint64_t{1} << (code & 63);
                    for (std::uint32_t i = r; i-- > 0;) {
                        if (coef[i] + 1u < q) {
                            ++coef[i];
                            break;
                        }
                        coef[i] = 0;
                    }
                }
                // invariance
                bool stable = true;
                for (std::uint32_t i = 0; i < r && stable; ++i) {
                    for (std::uint32_t row = 0; row < n; ++row) {
                        elem acc = 0;
                        for (std::uint32_t j = 0; j < n; ++j)
                            acc = tw.add(acc, tw.mul(g.at(row, j), sp.basis[i][j]));
                        gv[row] = acc;
                    }
                    std::uint64_t code = code_of(gv);
                    if (!(sp.members[code >> 6] & (std::uint64_t{1} << (code & 63))))
                        stable = false;
                }
                if (stable) levels[r].push_back(std::move(sp));
                for (std::size_t t = fd.size(); t-- > 0;) {
                    if (fd[t] + 1u < q) {
                        ++fd[t];
                        break;
                    }
                    fd[t] = 0;
                }
            }
        }
    }
    return levels;
}

inline bool subspace_contains(const SubspaceInfo& big, const SubspaceInfo& small) {
    for (std::size_t w = 0; w < big.members.size(); ++w)
        if (small.members[w] & ~big.members[w]) return false;
    return true;
}

}  // namespace detail

// Steinberg character value via the alternating sum over flag types:
// sum over S subseteq {1..n-1} of (-1)^{(n-1)-|S|} * #{g-stable flags with
// subspace dimensions S}.
inline BigInt steinberg_via_flags(const FieldTower& tw, const MatSub& g,
                                  std::uint64_t guard = 1024) {
    const std::uint32_t n = g.rows;
    if (g.cols != n) throw std::invalid_argument("steinberg_via_flags: not square");
    if (upow(tw.q(), n) > guard) throw guard_error("steinberg_via_flags: space too large");
    auto levels = detail::invariant_subspaces(tw, g);

    BigInt st = 0;
    const std::uint32_t subsets = n >= 1 ? (1u << (n - 1)) : 1;
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        std::vector<std::uint32_t> dims;
        for (std::uint32_t d = 1; d < n; ++d)
            if (mask & (1u << (d - 1))) dims.push_back(d);
        BigInt chains;
        if (dims.empty()) {
            chains = 1;
        } else {
            std::vector<BigInt> cur(levels[dims[0]].size(), BigInt(1));
            for (std::size_t step = 1; step < dims.size(); ++step) {
                const auto& lo = levels[dims[step - 1]];
                const auto& hi = levels[dims[step]];
                std::vector<BigInt> nxt(hi.size(), BigInt(0));
                for (std::size_t w = 0; w < hi.size(); ++w)
                    for (std::size_t v = 0; v < lo.size(); ++v)
                        if (cur[v] != 0 && detail::subspace_contains(hi[w], lo[v]))
                            nxt[w] += cur[v];
                cur = std::move(nxt);
            }
            chains = 0;
            for (const BigInt& c : cur) chains += c;
        }
        bool neg = ((n - 1) - dims.size()) % 2;
        st += neg ? -chains : chains;
    }
    return st;
}

// Closed value at semisimple elements coming from a subfield:
// (-1)^{n-d'} q^{n(d'-1)/2}.
inline BigInt steinberg_closed(const FieldTower& tw, const MatSub& g) {
    GreenClassData cls = classify(tw, g);
    const std::uint32_t n = g.rows;
    if (!cls.from_field || cls.t != n / cls.d)
        throw std::invalid_argument("steinberg_closed: needs a semisimple element from a subfield");
    const std::uint32_t dp = n / cls.d;
    std::uint64_t e2 = std::uint64_t(n) * (dp - 1);
    if (e2 % 2) throw std::logic_error("steinberg_closed: odd exponent");
    BigInt v = bigpow(BigInt(tw.q()), e2 / 2);
    return ((n - dp) % 2) ? -v : v;
}

// ------------------------------------------------------ rank-sum identities

struct RankSumCheck {
    CycInt lhs;
    BigInt rhs;
    bool ok = false;
};

// sum over X in M_n(F_q) of psi-bar(tr X) (q;q)_{2n-1-rk X}
//   = (-1)^n q^{n^2} q^{n(n-1)/2} (q;q)_{n-1}.
inline RankSumCheck gauss_rank_sum_check(const FieldTower& tw, const AdditiveChar& psi,
                                         std::uint32_t n,
                                         std::uint64_t guard = (std::uint64_t{1} << 24)) {
    const std::uint64_t q = tw.q();
    const std::uint32_t p = tw.p();
    double bits = static_cast<double>(n) * n * std::uint64_t(64 - __builtin_clzll(q));
    if (bits > 62 || upow(q, n * n) > guard)
        throw guard_error("gauss_rank_sum_check: enumeration too large");
    const std::uint64_t total = upow(q, n * n);
    const std::vector<elem>& fq = tw.subfield(1);

    std::vector<std::int64_t> cnt(std::size_t(n + 1) * p, 0);
    MatSub A(n, n);
    std::vector<std::uint8_t> digits(std::size_t(n) * n, 0);
    for (std::uint64_t it = 0; it < total; ++it) {
        std::uint32_t e = psi_exponent(psi, mat_trace(tw, A));
        ++cnt[std::size_t(mat_rank(tw, A)) * p + e];
        for (std::size_t t = digits.size(); t-- > 0;) {
            if (digits[t] + 1u < q) {
                ++digits[t];
                A.e[t] = fq[digits[t]];
                break;
            }
            digits[t] = 0;
            A.e[t] = 0;
        }
    }

    RankSumCheck out;
    const std::uint64_t N = cyc_modulus(tw);
    QPochCache poch{BigInt(q)};
    CycInt acc(N);
    for (std::uint32_t r = 0; r <= n; ++r)
        for (std::uint32_t e = 0; e < p; ++e) {
            std::int64_t c = cnt[std::size_t(r) * p + e];
            if (!c) continue;
            acc.add_at(std::uint64_t((p - e) % p) * tw.order(), BigInt(c) * poch.get(2 * n - 1 - r));
        }
    acc.reduce();
    out.lhs = acc;
    out.rhs = bigpow(BigInt(q), std::uint64_t(n) * n + std::uint64_t(n) * (n - 1) / 2) *
              qpoch(BigInt(q), n - 1);
    if (n % 2) out.rhs = -out.rhs;
    out.ok = (out.lhs == CycInt::from_int(N, out.rhs));
    return out;
}

// ------------------------------------------------------------ psi stabilizer

// Verify that the tuples (B_1,...,B_k) in GL_n^k fixing psi under
// (B.psi)(U) = psi_0(tr sum_i B_i^{-1} X_{i,i} B_{i+1}) are exactly the
// diagonal ones (all B_i equal).  Tests the character equality on every U.
inline bool stabilizer_check(const FieldTower& tw, std::uint32_t n, std::uint32_t k,
                             const AdditiveChar& psi, std::uint64_t tuple_guard = 1000000,
                             std::uint64_t point_guard = (std::uint64_t{1} << 16)) {
    if (k < 2) throw std::invalid_argument("stabilizer_check: requires k >= 2");
    auto gl = gl_enumerate(tw, n, tuple_guard);
    const std::size_t G = gl.size();
    {
        BigInt tuples = 1;
        for (std::uint32_t i = 0; i < k; ++i) tuples *= G;
        if (tuples > tuple_guard) throw guard_error("stabilizer_check: tuple space too large");
    }
    UnipotentShape sh = make_unipotent_shape(tw, n, k, point_guard);
    const std::uint64_t q = tw.q();
    const std::vector<elem>& fq = tw.subfield(1);

    std::vector<MatSub> inv(G);
    for (std::size_t i = 0; i < G; ++i) inv[i] = mat_inverse(tw, gl[i]);

    std::vector<std::size_t> idx(k, 0);
    while (true) {
        // C_i = B_{i+1} B_i^{-1}; tr(B_i^{-1} X B_{i+1}) = tr(X C_i)
        std::vector<MatSub> C(k - 1);
        for (std::uint32_t i = 0; i + 1 < k; ++i)
            C[i] = mat_mul(tw, gl[idx[i + 1]], inv[idx[i]]);

        bool stab = true;
        std::vector<std::uint8_t> digits(sh.pos.size(), 0);
        for (std::uint64_t it = 0; it < sh.count && stab; ++it) {
            elem plain = 0, twisted = 0;
            for (std::uint32_t i = 0; i + 1 < k; ++i) {
                std::uint32_t off = sh.diag_offset[i];
                for (std::uint32_t r = 0; r < n; ++r)
                    for (std::uint32_t c = 0; c < n; ++c) {
                        elem x = fq[digits[off + r * n + c]];
                        if (!x) continue;
                        if (r == c) plain = tw.add(plain, x);
                        twisted = tw.add(twisted, tw.mul(x, C[i].at(c, r)));
                    }
            }
            if (psi_exponent(psi, plain) != psi_exponent(psi, twisted)) stab = false;
            for (std::size_t tt = digits.size(); tt-- > 0;) {
                if (digits[tt] + 1u < q) {
                    ++digits[tt];
                    break;
                }
                digits[tt] = 0;
            }
        }

        bool all_equal = true;
        for (std::uint32_t i = 1; i < k; ++i)
            if (idx[i] != idx[0]) all_equal = false;
        if (stab != all_equal) return false;

        std::uint32_t t = k;
        while (t-- > 0) {
            if (++idx[t] < G) break;
            idx[t] = 0;
            if (t == 0) return true;
        }
    }
}

} // namespace jacquetlab
