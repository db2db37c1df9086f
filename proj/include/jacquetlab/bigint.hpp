#pragma once
// Exact integer/rational arithmetic plus the handful of elementary
// number-theory routines everything else leans on.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace jacquetlab {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Thrown when an enumeration would exceed its configured size guard.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline BigInt bigpow(const BigInt& base, std::uint64_t e) {
    BigInt r = 1, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t upow(std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        if (base != 0 && r > UINT64_MAX / base)
            throw std::overflow_error("upow overflow");
        r *= base;
    }
    return r;
}

inline std::uint64_t mulmod_u64(std::uint64_t x, std::uint64_t y, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * y) % m);
}

inline std::uint64_t powmod_u64(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Distinct prime factors, ascending.
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> ps;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            ps.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

// All positive divisors, ascending.
inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
    std::vector<std::uint64_t> lo, hi;
    for (std::uint64_t d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            lo.push_back(d);
            if (d != n / d) hi.push_back(n / d);
        }
    }
    for (auto it = hi.rbegin(); it != hi.rend(); ++it) lo.push_back(*it);
    return lo;
}

inline int moebius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("moebius(0)");
    int mu = 1;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            n /= d;
            if (n % d == 0) return 0;
            mu = -mu;
        }
    }
    if (n > 1) mu = -mu;
    return mu;
}

inline std::uint64_t euler_phi(std::uint64_t n) {
    std::uint64_t r = n;
    for (std::uint64_t d : prime_factors(n)) r -= r / d;
    return r;
}

// Writes n = p^a with p prime; throws if n is not a prime power.
inline void factor_prime_power(std::uint64_t n, std::uint64_t& p, std::uint32_t& a) {
    if (n < 2) throw std::invalid_argument("not a prime power");
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            p = d;
            a = 0;
            while (n > 1) {
                if (n % d != 0) throw std::invalid_argument("not a prime power");
                n /= d;
                ++a;
            }
            return;
        }
    }
    p = n;
    a = 1;
}

inline std::string to_decimal(const BigInt& v) { return v.str(); }

} // namespace jacquetlab
