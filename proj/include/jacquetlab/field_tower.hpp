#pragma once
// A tower F_p <= F_q <= F_{q^m} realized inside one table-driven field of
// size Q = q^m.  Nonzero elements are stored as discrete logs against a
// fixed generator gamma: code 0 is the zero element, code j (1 <= j <= Q-1)
// is gamma^(j-1).  Addition goes through a Zech logarithm table, so all
// field ops are O(1) after construction.
//
// Determinism contract: the defining polynomial is the lexicographically
// smallest monic irreducible of degree a*m over F_p (coefficient tuple
// (c_0,...,c_{D-1}) compared left to right), and gamma is the element of
// multiplicative order Q-1 whose packed polynomial code sum(c_i p^i) is
// smallest.  Two towers built from the same (p,a,m) agree code-for-code.

#include "bigint.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace jacquetlab {

using elem = std::uint32_t;

namespace detail {

// Polynomials over F_p: coefficient of x^i at index i, no trailing zeros.
using PPoly = std::vector<std::uint32_t>;

inline void ptrim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline PPoly pmul(const PPoly& x, const PPoly& y, std::uint32_t p) {
    if (x.empty() || y.empty()) return {};
    std::vector<std::uint64_t> acc(x.size() + y.size() - 1, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!x[i]) continue;
        for (std::size_t j = 0; j < y.size(); ++j)
            acc[i + j] += static_cast<std::uint64_t>(x[i]) * y[j];
    }
    PPoly r(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint32_t>(acc[i] % p);
    ptrim(r);
    return r;
}

// Remainder of r modulo monic f.
inline PPoly pmod_monic(PPoly r, const PPoly& f, std::uint32_t p) {
    const std::size_t D = f.size() - 1;
    while (r.size() > D) {
        std::uint32_t c = r.back();
        std::size_t sh = r.size() - 1 - D;
        if (c) {
            for (std::size_t j = 0; j < D; ++j) {
                std::uint64_t sub = static_cast<std::uint64_t>(c) * f[j] % p;
                r[sh + j] = static_cast<std::uint32_t>((r[sh + j] + p - sub) % p);
            }
        }
        r.pop_back();
        ptrim(r);
    }
    return r;
}

// Remainder modulo an arbitrary nonzero divisor (needs a leading-coeff
// inverse, computed by Fermat).
inline PPoly pmod(PPoly r, PPoly g, std::uint32_t p) {
    ptrim(g);
    if (g.empty()) throw std::invalid_argument("pmod by zero");
    std::uint64_t lg_inv = powmod_u64(g.back(), p - 2, p);
    const std::size_t D = g.size() - 1;
    ptrim(r);
    while (r.size() > D) {
        std::uint32_t c = static_cast<std::uint32_t>(
            static_cast<std::uint64_t>(r.back()) * lg_inv % p);
        std::size_t sh = r.size() - 1 - D;
        if (c) {
            for (std::size_t j = 0; j + 1 < g.size(); ++j) {
                std::uint64_t sub = static_cast<std::uint64_t>(c) * g[j] % p;
                r[sh + j] = static_cast<std::uint32_t>((r[sh + j] + p - sub) % p);
            }
        }
        r.pop_back();
        ptrim(r);
    }
    return r;
}

inline PPoly pgcd(PPoly x, PPoly y, std::uint32_t p) {
    ptrim(x);
    ptrim(y);
    while (!y.empty()) {
        PPoly r = pmod(x, y, p);
        x = std::move(y);
        y = std::move(r);
    }
    return x;
}

inline PPoly ppowmod(PPoly b, std::uint64_t e, const PPoly& f, std::uint32_t p) {
    PPoly r{1};
    b = pmod_monic(std::move(b), f, p);
    while (e) {
        if (e & 1) r = pmod_monic(pmul(r, b, p), f, p);
        b = pmod_monic(pmul(b, b, p), f, p);
        e >>= 1;
    }
    return r;
}

// Rabin: monic f of degree D is irreducible over F_p iff x^{p^D} == x (mod f)
// and gcd(x^{p^{D/r}} - x, f) = 1 for each prime r | D.
inline bool irreducible_fp(const PPoly& f, std::uint32_t p) {
    const std::size_t D = f.size() - 1;
    if (D == 0) return false;
    PPoly x{0, 1};
    PPoly xq = ppowmod(x, upow(p, static_cast<std::uint32_t>(D)), f, p);
    if (xq != pmod_monic(x, f, p)) return false;
    for (std::uint64_t r : prime_factors(D)) {
        PPoly h = ppowmod(x, upow(p, static_cast<std::uint32_t>(D / r)), f, p);
        // h - x
        PPoly diff = h;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        ptrim(diff);
        PPoly g = pgcd(f, diff, p);
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace detail

class FieldTower {
public:
    FieldTower(std::uint32_t p, std::uint32_t a, std::uint32_t m,
               std::uint64_t max_card = (std::uint64_t{1} << 24))
        : p_(p), a_(a), m_(m) {
        if (!is_prime_u64(p)) throw std::invalid_argument("p is not prime");
        if (a == 0 || m == 0) throw std::invalid_argument("a and m must be positive");
        D_ = a_ * m_;
        Q_ = upow(p_, D_);
        if (Q_ > max_card) throw guard_error("field cardinality exceeds cap");
        q_ = upow(p_, a_);
        build();
        build_subfields();
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t a() const { return a_; }
    std::uint32_t m() const { return m_; }
    std::uint64_t q() const { return q_; }
    std::uint64_t card() const { return Q_; }
    std::uint64_t order() const { return Q_ - 1; }
    // Defining polynomial coefficients over F_p, constant term first,
    // including the leading 1.
    const std::vector<std::uint32_t>& defining_poly() const { return gen_poly_; }

    elem zero() const { return 0; }
    elem one() const { return 1; }
    elem generator() const { return Q_ > 2 ? 2 : 1; }

    bool is_zero(elem x) const { return x == 0; }
    elem from_exp(std::uint64_t e) const { return static_cast<elem>(e % (Q_ - 1)) + 1; }
    std::uint64_t exp_of(elem x) const {
        if (x == 0) throw std::domain_error("exp_of(0)");
        return x - 1;
    }

    elem add(elem x, elem y) const {
        if (x == 0) return y;
        if (y == 0) return x;
        // x + y = gamma^ex * (1 + gamma^(ey-ex))
        std::uint64_t ex = x - 1, ey = y - 1;
        std::uint64_t d = (ey + (Q_ - 1) - ex) % (Q_ - 1);
        elem z = zech_[d];
        if (z == 0) return 0;
        return from_exp(ex + (z - 1));
    }
    elem neg(elem x) const {
        if (x == 0 || p_ == 2) return x;
        return from_exp(x - 1 + neg_exp_);
    }
    elem sub(elem x, elem y) const { return add(x, neg(y)); }
    elem mul(elem x, elem y) const {
        if (x == 0 || y == 0) return 0;
        return from_exp(static_cast<std::uint64_t>(x - 1) + (y - 1));
    }
    elem inv(elem x) const {
        if (x == 0) throw std::domain_error("inv(0)");
        return from_exp(((Q_ - 1) - (x - 1)) % (Q_ - 1));
    }
    elem div(elem x, elem y) const { return mul(x, inv(y)); }

    elem pow(elem x, std::int64_t e) const {
        if (x == 0) {
            if (e < 0) throw std::domain_error("pow(0, negative)");
            return e == 0 ? one() : zero();
        }
        std::int64_t ord = static_cast<std::int64_t>(Q_ - 1);
        std::int64_t r = e % ord;
        if (r < 0) r += ord;
        return from_exp(mulmod_u64(x - 1, static_cast<std::uint64_t>(r), Q_ - 1));
    }

    // c*x in the prime field sense (c an ordinary integer).
    elem mul_int(elem x, std::uint64_t c) const { return mul(x, from_int(c)); }
    // The element c*1; constants pack to polynomial code c, so this is a
    // table lookup.
    elem from_int(std::uint64_t c) const { return code_of_[c % p_]; }
    // Inverse of from_int for elements of the prime field.
    std::uint32_t int_lift(elem x) const {
        if (x == 0) return 0;
        std::uint32_t pc = poly_of_[x - 1];
        if (pc >= p_) throw std::domain_error("int_lift: element not in prime field");
        return pc;
    }

    elem frobenius(elem x, std::uint32_t i = 1) const {  // x -> x^{q^i}
        if (x == 0) return 0;
        return from_exp(mulmod_u64(x - 1, powmod_u64(q_, i, Q_ - 1), Q_ - 1));
    }
    elem frobenius_p(elem x, std::uint32_t i = 1) const {  // x -> x^{p^i}
        if (x == 0) return 0;
        return from_exp(mulmod_u64(x - 1, powmod_u64(p_, i, Q_ - 1), Q_ - 1));
    }

    // ---- subfield structure (F_{q^d} for d | m) ----

    bool valid_subdeg(std::uint32_t d) const { return d >= 1 && d <= m_ && m_ % d == 0; }
    std::uint64_t subfield_card(std::uint32_t d) const {
        check_subdeg(d);
        return upow(q_, d);
    }
    std::uint64_t subfield_step(std::uint32_t d) const {
        check_subdeg(d);
        return (Q_ - 1) / (subfield_card(d) - 1);
    }
    elem subfield_generator(std::uint32_t d) const { return from_exp(subfield_step(d)); }
    bool is_in_subfield(elem x, std::uint32_t d) const {
        if (x == 0) return true;
        return (x - 1) % subfield_step(d) == 0;
    }
    std::uint64_t dlog_in_subfield(elem x, std::uint32_t d) const {
        if (x == 0) throw std::domain_error("dlog of 0");
        std::uint64_t step = subfield_step(d);
        if ((x - 1) % step != 0) throw std::domain_error("dlog: element outside subfield");
        return (x - 1) / step;
    }
    // [0, 1, g_d, g_d^2, ...]: zero first, then powers of the subfield
    // generator.  This ordering defines element enumeration everywhere.
    const std::vector<elem>& subfield(std::uint32_t d) const {
        check_subdeg(d);
        return subfields_.at(d);
    }
    // Smallest d | m with x in F_{q^d}.
    std::uint32_t degree_over_base(elem x) const {
        for (std::uint32_t d = 1; d <= m_; ++d)
            if (m_ % d == 0 && is_in_subfield(x, d)) return d;
        return m_;  // unreachable
    }

    // Tr_{F_{q^d}/F_q}(x) = sum of the d Frobenius conjugates.
    elem rel_trace(elem x, std::uint32_t d) const {
        if (!is_in_subfield(x, d)) throw std::domain_error("rel_trace: element outside subfield");
        elem acc = 0, y = x;
        for (std::uint32_t i = 0; i < d; ++i) {
            acc = add(acc, y);
            y = frobenius(y, 1);
        }
        return acc;
    }
    // Integer lift of Tr_{F_q/F_p}(x) for x in F_q.
    std::uint32_t trace_q_to_p(elem x) const {
        if (!is_in_subfield(x, 1)) throw std::domain_error("trace_q_to_p: element outside F_q");
        elem acc = 0, y = x;
        for (std::uint32_t i = 0; i < a_; ++i) {
            acc = add(acc, y);
            y = frobenius_p(y, 1);
        }
        return int_lift(acc);
    }

private:
    void check_subdeg(std::uint32_t d) const {
        if (!valid_subdeg(d)) throw std::invalid_argument("subfield degree must divide m");
    }

    detail::PPoly unpack(std::uint64_t code) const {
        detail::PPoly f;
        while (code) {
            f.push_back(static_cast<std::uint32_t>(code % p_));
            code /= p_;
        }
        return f;
    }
    std::uint32_t pack(const detail::PPoly& f) const {
        std::uint64_t code = 0;
        for (std::size_t i = f.size(); i-- > 0;) code = code * p_ + f[i];
        return static_cast<std::uint32_t>(code);
    }

    void build() {
        // Lexicographically smallest monic irreducible of degree D over F_p:
        // scan coefficient tuples (c_0,...,c_{D-1}) with c_0 most significant.
        detail::PPoly f;
        {
            std::uint64_t hi = upow(p_, D_);
            bool found = false;
            for (std::uint64_t t = 0; t < hi && !found; ++t) {
                f.assign(D_ + 1, 0);
                f[D_] = 1;
                std::uint64_t rest = t;
                for (std::uint32_t i = 0; i < D_; ++i) {  // c_0 first
                    f[i] = static_cast<std::uint32_t>(rest / upow(p_, D_ - 1 - i));
                    rest %= upow(p_, D_ - 1 - i);
                }
                if (detail::irreducible_fp(f, p_)) found = true;
            }
            if (!found) throw std::logic_error("no irreducible polynomial found");
        }
        gen_poly_.assign(f.begin(), f.end());

        // Generator: smallest packed code whose order is exactly Q-1.
        auto factors = prime_factors(Q_ - 1);
        detail::PPoly gam;
        for (std::uint64_t cand = 1; cand < Q_; ++cand) {
            detail::PPoly g = unpack(cand);
            bool ok = true;
            for (std::uint64_t r : factors) {
                detail::PPoly t = detail::ppowmod(g, (Q_ - 1) / r, f, p_);
                if (t.size() == 1 && t[0] == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                gam = g;
                break;
            }
        }
        if (gam.empty()) throw std::logic_error("no generator found");

        // Exponent tables: poly_of_[e] = packed code of gamma^e.
        poly_of_.assign(Q_ - 1, 0);
        code_of_.assign(Q_, 0);
        const bool gam_is_x = (gam.size() == 2 && gam[0] == 0 && gam[1] == 1);
        detail::PPoly cur{1};
        for (std::uint64_t e = 0; e < Q_ - 1; ++e) {
            std::uint32_t pc = pack(cur);
            if (code_of_[pc] != 0) throw std::logic_error("generator order defect");
            poly_of_[e] = pc;
            code_of_[pc] = static_cast<elem>(e + 1);
            if (gam_is_x) {
                cur.insert(cur.begin(), 0);
                cur = detail::pmod_monic(std::move(cur), f, p_);
            } else {
                cur = detail::pmod_monic(detail::pmul(cur, gam, p_), f, p_);
            }
        }
        if (!(cur.size() == 1 && cur[0] == 1))
            throw std::logic_error("generator order defect");

        // Zech table: zech_[e] = code of gamma^e + 1.
        zech_.assign(Q_ - 1, 0);
        for (std::uint64_t e = 0; e < Q_ - 1; ++e) {
            std::uint32_t pc = poly_of_[e];
            std::uint32_t c0 = pc % p_;
            zech_[e] = code_of_[pc - c0 + (c0 + 1) % p_];
        }

        neg_exp_ = (p_ == 2) ? 0 : (Q_ - 1) / 2;
        if (p_ != 2 && zech_[neg_exp_] != 0)
            throw std::logic_error("negation exponent defect");
    }

    void build_subfields() {
        for (std::uint32_t d = 1; d <= m_; ++d) {
            if (m_ % d != 0) continue;
            std::uint64_t sz = upow(q_, d);
            std::uint64_t step = (Q_ - 1) / (sz - 1);
            std::vector<elem> lst;
            lst.reserve(sz);
            lst.push_back(0);
            for (std::uint64_t j = 0; j < sz - 1; ++j)
                lst.push_back(from_exp(step * j));
            subfields_.emplace(d, std::move(lst));
        }
    }

    std::uint32_t p_, a_, m_, D_;
    std::uint64_t q_, Q_;
    std::uint64_t neg_exp_;
    std::vector<std::uint32_t> gen_poly_;
    std::vector<std::uint32_t> poly_of_;
    std::vector<elem> code_of_;
    std::vector<elem> zech_;
    std::map<std::uint32_t, std::vector<elem>> subfields_;
};

} // namespace jacquetlab
