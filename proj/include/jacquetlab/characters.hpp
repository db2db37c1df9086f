#pragma once
// Characters with exact values.  Everything is expressed through a single
// root of unity zeta_N with N = p * (Q - 1), which simultaneously hosts the
// p-th roots (additive side) and the (q^d - 1)-th roots (multiplicative
// side) for every subfield degree d.

#include "cyclotomic.hpp"
#include "field_tower.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

namespace jacquetlab {

inline std::uint64_t cyc_modulus(const FieldTower& tw) {
    return static_cast<std::uint64_t>(tw.p()) * tw.order();
}

// theta_c on F_{q^mprime}^*: gamma_d |-> zeta_{q^mprime - 1}^c where gamma_d
// is the subfield generator.  Stored as the pair (home degree, exponent).
struct MultChar {
    const FieldTower* tw = nullptr;
    std::uint32_t mprime = 0;
    std::uint64_t c = 0;

    std::uint64_t group_order() const { return tw->subfield_card(mprime) - 1; }
};

inline MultChar make_mult_char(const FieldTower& tw, std::uint32_t mprime, std::uint64_t c) {
    if (!tw.valid_subdeg(mprime)) throw std::invalid_argument("mult char: bad home degree");
    MultChar th{&tw, mprime, 0};
    th.c = c % th.group_order();
    return th;
}

// Exponent j with theta(x) = zeta_N^j.
inline std::uint64_t theta_root_exponent(const MultChar& th, elem x) {
    const FieldTower& tw = *th.tw;
    std::uint64_t dl = tw.dlog_in_subfield(x, th.mprime);
    std::uint64_t N = cyc_modulus(tw);
    // zeta_{q^mprime - 1} = zeta_N^{p * (Q-1)/(q^mprime - 1)}
    std::uint64_t base = static_cast<std::uint64_t>(tw.p()) * (tw.order() / th.group_order());
    return mulmod_u64(base % N, mulmod_u64(th.c, dl, N), N);
}

inline CycInt theta_value(const MultChar& th, elem x) {
    return CycInt::root(cyc_modulus(*th.tw), theta_root_exponent(th, x));
}

// Regular <=> the Galois orbit {c q^i mod (q^mprime - 1)} has full size
// mprime; it suffices to rule out fixing by q^d for proper divisors d.
inline bool is_regular(const MultChar& th) {
    std::uint64_t ord = th.group_order();
    for (std::uint32_t d = 1; d < th.mprime; ++d) {
        if (th.mprime % d != 0) continue;
        if (mulmod_u64(th.c, powmod_u64(th.tw->q(), d, ord), ord) == th.c) return false;
    }
    return true;
}

// Restriction to F_{q^l}^* is reduction of the exponent mod q^l - 1.
inline MultChar restrict_char(const MultChar& th, std::uint32_t l) {
    if (th.mprime % l != 0) throw std::invalid_argument("restrict_char: degree does not divide");
    return make_mult_char(*th.tw, l, th.c % (th.tw->subfield_card(l) - 1));
}

// All regular exponents on F_{q^mprime}^*, ascending.
inline std::vector<std::uint64_t> regular_exponents(const FieldTower& tw, std::uint32_t mprime) {
    std::vector<std::uint64_t> out;
    std::uint64_t ord = tw.subfield_card(mprime) - 1;
    for (std::uint64_t c = 0; c < ord; ++c)
        if (is_regular(make_mult_char(tw, mprime, c))) out.push_back(c);
    return out;
}

// One representative (the orbit minimum) per Galois orbit of regular
// exponents, ascending.
inline std::vector<std::uint64_t> regular_orbit_reps(const FieldTower& tw, std::uint32_t mprime) {
    std::set<std::uint64_t> reps;
    std::uint64_t ord = tw.subfield_card(mprime) - 1;
    for (std::uint64_t c : regular_exponents(tw, mprime)) {
        std::uint64_t mn = c, cur = c;
        for (std::uint32_t i = 1; i < mprime; ++i) {
            cur = mulmod_u64(cur, tw.q(), ord);
            mn = std::min(mn, cur);
        }
        reps.insert(mn);
    }
    return std::vector<std::uint64_t>(reps.begin(), reps.end());
}

// sum_{alpha < d} theta(lambda^{q^alpha}) for lambda generating F_{q^d}.
inline CycInt orbit_sum(const MultChar& th, elem lambda, std::uint32_t d) {
    const FieldTower& tw = *th.tw;
    if (tw.is_zero(lambda) || tw.degree_over_base(lambda) != d)
        throw std::invalid_argument("orbit_sum: lambda does not generate F_{q^d}");
    if (th.mprime % d != 0)
        throw std::invalid_argument("orbit_sum: d does not divide character degree");
    CycInt acc(cyc_modulus(tw));
    elem y = lambda;
    for (std::uint32_t alpha = 0; alpha < d; ++alpha) {
        acc.add_at(theta_root_exponent(th, y), 1);
        y = tw.frobenius(y, 1);
    }
    acc.reduce();
    return acc;
}

// psi_b(x) = zeta_p^{Tr_{F_q/F_p}(b x)} on the additive group of F_q.
struct AdditiveChar {
    const FieldTower* tw = nullptr;
    elem b = 0;
};

inline AdditiveChar make_additive_char(const FieldTower& tw, elem b) {
    if (tw.is_zero(b) || !tw.is_in_subfield(b, 1))
        throw std::invalid_argument("additive char: twist must lie in F_q^*");
    return AdditiveChar{&tw, b};
}

// Value exponent in Z/p.
inline std::uint32_t psi_exponent(const AdditiveChar& psi, elem x) {
    return psi.tw->trace_q_to_p(psi.tw->mul(psi.b, x));
}

// zeta_p = zeta_N^{Q-1}; returns the zeta_N exponent of psi(x).
inline std::uint64_t psi_root_exponent(const AdditiveChar& psi, elem x) {
    return psi.tw->order() * psi_exponent(psi, x);
}

inline CycInt psi_value(const AdditiveChar& psi, elem x) {
    return CycInt::root(cyc_modulus(*psi.tw), psi_root_exponent(psi, x));
}

} // namespace jacquetlab
