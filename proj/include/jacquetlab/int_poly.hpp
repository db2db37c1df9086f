#pragma once
// Dense univariate polynomials over Z with exact coefficients.

#include "bigint.hpp"

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <vector>

namespace jacquetlab {

// coeffs[i] is the coefficient of x^i; no trailing zeros (zero poly = empty).
struct IntPoly {
    std::vector<BigInt> coeffs;

    IntPoly() = default;
    explicit IntPoly(std::vector<BigInt> c) : coeffs(std::move(c)) { normalize(); }

    static IntPoly constant(const BigInt& c) {
        IntPoly p;
        if (c != 0) p.coeffs.push_back(c);
        return p;
    }
    // c * x^e
    static IntPoly monomial(const BigInt& c, std::size_t e) {
        IntPoly p;
        if (c != 0) {
            p.coeffs.assign(e + 1, BigInt(0));
            p.coeffs[e] = c;
        }
        return p;
    }

    void normalize() {
        while (!coeffs.empty() && coeffs.back() == 0) coeffs.pop_back();
    }
    bool is_zero() const { return coeffs.empty(); }
    // degree of the zero polynomial is -1
    long long degree() const { return static_cast<long long>(coeffs.size()) - 1; }
    const BigInt& leading() const {
        static const BigInt z = 0;
        return coeffs.empty() ? z : coeffs.back();
    }
    BigInt coeff(std::size_t i) const {
        return i < coeffs.size() ? coeffs[i] : BigInt(0);
    }

    bool operator==(const IntPoly& o) const { return coeffs == o.coeffs; }
    bool operator!=(const IntPoly& o) const { return !(*this == o); }

    IntPoly operator+(const IntPoly& o) const {
        IntPoly r;
        r.coeffs.resize(std::max(coeffs.size(), o.coeffs.size()), BigInt(0));
        for (std::size_t i = 0; i < coeffs.size(); ++i) r.coeffs[i] = coeffs[i];
        for (std::size_t i = 0; i < o.coeffs.size(); ++i) r.coeffs[i] += o.coeffs[i];
        r.normalize();
        return r;
    }
    IntPoly operator-() const {
        IntPoly r = *this;
        for (auto& c : r.coeffs) c = -c;
        return r;
    }
    IntPoly operator-(const IntPoly& o) const { return *this + (-o); }
    IntPoly operator*(const IntPoly& o) const {
        if (is_zero() || o.is_zero()) return {};
        IntPoly r;
        r.coeffs.assign(coeffs.size() + o.coeffs.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            if (coeffs[i] == 0) continue;
            for (std::size_t j = 0; j < o.coeffs.size(); ++j)
                r.coeffs[i + j] += coeffs[i] * o.coeffs[j];
        }
        r.normalize();
        return r;
    }

    BigInt eval(const BigInt& x) const {
        BigInt acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    BigRat eval(const BigRat& x) const {
        BigRat acc = 0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = coeffs.size(); i-- > 0;) {
            const BigInt& c = coeffs[i];
            if (c == 0) continue;
            BigInt ab = c < 0 ? BigInt(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (i == 0 || ab != 1) os << ab.str();
            if (i > 0) {
                os << "x";
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }
};

// Division by a monic divisor stays in Z[x]; returns quotient, sets rem.
inline IntPoly divmod_monic(const IntPoly& num, const IntPoly& den, IntPoly& rem) {
    if (den.is_zero() || den.leading() != 1)
        throw std::invalid_argument("divmod_monic: divisor must be monic");
    IntPoly q;
    rem = num;
    long long dd = den.degree();
    while (rem.degree() >= dd) {
        std::size_t shift = static_cast<std::size_t>(rem.degree() - dd);
        BigInt c = rem.leading();
        IntPoly t = IntPoly::monomial(c, shift);
        q = q + t;
        rem = rem - t * den;
    }
    return q;
}

// Exact division; throws if the remainder is nonzero.
inline IntPoly divide_exact_monic(const IntPoly& num, const IntPoly& den) {
    IntPoly rem;
    IntPoly q = divmod_monic(num, den, rem);
    if (!rem.is_zero()) throw std::runtime_error("divide_exact_monic: nonzero remainder");
    return q;
}

// x^n - 1
inline IntPoly xn_minus_1(std::size_t n) {
    IntPoly p;
    p.coeffs.assign(n + 1, BigInt(0));
    p.coeffs[0] = -1;
    p.coeffs[n] = 1;
    return p;
}

} // namespace jacquetlab
