#pragma once
// Exact arithmetic in Z[zeta_N] via the power basis modulo the N-th
// cyclotomic polynomial.  Values are length-N coefficient vectors; the
// canonical form keeps every coordinate >= phi(N) at zero, so equality
// of canonical vectors is equality in the ring.

#include "bigint.hpp"
#include "int_poly.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <mutex>
#include <sstream>
#include <vector>

namespace jacquetlab {

// Phi_N as a monic IntPoly, computed by dividing x^N - 1 by the product of
// Phi_d over proper divisors d.  Memoized across the process.
inline const IntPoly& cyclotomic_poly(std::uint64_t N) {
    static std::map<std::uint64_t, IntPoly> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;

    // Iterative fill keeps recursion depth flat.
    for (std::uint64_t d : divisors(N)) {
        if (cache.count(d)) continue;
        IntPoly num = xn_minus_1(d);
        for (std::uint64_t e : divisors(d)) {
            if (e == d) continue;
            num = divide_exact_monic(num, cache.at(e));
        }
        cache.emplace(d, std::move(num));
    }
    return cache.at(N);
}

class CycInt {
public:
    CycInt() : N_(1), c_(1, BigInt(0)) {}
    explicit CycInt(std::uint64_t N) : N_(N), c_(N, BigInt(0)) {
        if (N == 0) throw std::invalid_argument("CycInt: N must be positive");
    }

    static CycInt zero(std::uint64_t N) { return CycInt(N); }
    static CycInt from_int(std::uint64_t N, const BigInt& v) {
        CycInt r(N);
        r.c_[0] = v;
        r.reduce();
        return r;
    }
    static CycInt one(std::uint64_t N) { return from_int(N, 1); }
    // zeta_N^j
    static CycInt root(std::uint64_t N, std::uint64_t j) {
        CycInt r(N);
        r.c_[j % N] = 1;
        r.reduce();
        return r;
    }

    std::uint64_t modulus() const { return N_; }
    const std::vector<BigInt>& coeffs() const { return c_; }

    // All arithmetic entry points return reduced values, so callers can
    // compare results with == directly.
    CycInt operator+(const CycInt& o) const {
        check_same(o);
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) r.c_[i] = c_[i] + o.c_[i];
        r.reduce();
        return r;
    }
    CycInt operator-(const CycInt& o) const {
        check_same(o);
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) r.c_[i] = c_[i] - o.c_[i];
        r.reduce();
        return r;
    }
    CycInt operator-() const {
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) r.c_[i] = -c_[i];
        return r;  // negation preserves reducedness
    }
    CycInt& operator+=(const CycInt& o) { return *this = *this + o; }
    CycInt& operator-=(const CycInt& o) { return *this = *this - o; }

    CycInt scaled(const BigInt& k) const {
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) r.c_[i] = c_[i] * k;
        return r;  // scaling preserves reducedness
    }

    // Multiplication by zeta_N^j: a cyclic index shift, then reduce.
    CycInt mul_root(std::uint64_t j) const {
        j %= N_;
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) r.c_[(i + j) % N_] = c_[i];
        r.reduce();
        return r;
    }

    CycInt operator*(const CycInt& o) const {
        check_same(o);
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) {
            if (c_[i] == 0) continue;
            for (std::uint64_t j = 0; j < N_; ++j) {
                if (o.c_[j] == 0) continue;
                r.c_[(i + j) % N_] += c_[i] * o.c_[j];
            }
        }
        r.reduce();
        return r;
    }

    bool operator==(const CycInt& o) const { return N_ == o.N_ && c_ == o.c_; }
    bool operator!=(const CycInt& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }
    bool is_integer() const {
        for (std::uint64_t i = 1; i < N_; ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    // Value as a rational integer; throws when the value has a nonzero
    // component off the zeta^0 axis.
    BigInt as_integer() const {
        if (!is_integer()) throw std::runtime_error("CycInt: value is not a rational integer");
        return c_[0];
    }

    // Coordinatewise exact division on the canonical basis; throws if any
    // coordinate is not divisible.
    CycInt divide_exact(const BigInt& d) const {
        if (d == 0) throw std::invalid_argument("divide_exact by zero");
        CycInt r(N_);
        for (std::uint64_t i = 0; i < N_; ++i) {
            if (c_[i] % d != 0) throw std::runtime_error("CycInt: inexact division");
            r.c_[i] = c_[i] / d;
        }
        return r;
    }

    // Direct coefficient injection for accumulation loops; caller must
    // reduce() once at the end.
    void add_at(std::uint64_t idx, const BigInt& v) { c_[idx % N_] += v; }

    void reduce() {
        const IntPoly& phi = cyclotomic_poly(N_);
        std::size_t deg = static_cast<std::size_t>(phi.degree());
        for (std::uint64_t i = N_; i-- > deg;) {
            if (c_[i] == 0) continue;
            BigInt lead = c_[i];
            c_[i] = 0;
            for (std::size_t j = 0; j < deg; ++j)
                c_[i - deg + j] -= lead * phi.coeffs[j];
        }
    }

    // Compact display: nonzero terms on the canonical basis.
    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (std::uint64_t i = 0; i < N_; ++i) {
            if (c_[i] == 0) continue;
            if (!first) os << " + ";
            os << c_[i].str();
            if (i > 0) os << "*z^" << i;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check_same(const CycInt& o) const {
        if (N_ != o.N_) throw std::invalid_argument("CycInt: mixed moduli");
    }

    std::uint64_t N_;
    std::vector<BigInt> c_;
};

// Numeric embedding zeta_N -> exp(2*pi*i/N).  Display/debug aid only; every
// verified identity in this library compares exact values.
inline std::complex<double> to_complex(const CycInt& x) {
    const double tau = 6.283185307179586476925286766559;
    std::complex<double> acc(0.0, 0.0);
    std::uint64_t N = x.modulus();
    for (std::uint64_t i = 0; i < N; ++i) {
        const BigInt& c = x.coeffs()[i];
        if (c == 0) continue;
        double arg = tau * double(i) / double(N);
        acc += c.convert_to<double>() * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return acc;
}

} // namespace jacquetlab
