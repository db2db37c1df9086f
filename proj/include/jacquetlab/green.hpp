#pragma once
// Character values of the cuspidal representation attached to a regular
// character theta of F_{q^mprime}^*, evaluated on GL_mprime(F_q).  The value
// at g = su (s semisimple with eigenvalue lambda generating F_{q^d},
// u unipotent with t diagonal blocks) is
//   (-1)^{mprime-1} * [sum_{alpha<d} theta(lambda^{q^alpha})] * (q^d;q^d)_{t-1}
// and 0 when the characteristic polynomial is not a power of a single
// irreducible.

#include "characters.hpp"
#include "linalg.hpp"
#include "qcomb.hpp"

#include <cstdint>
#include <map>
#include <utility>

namespace jacquetlab {

// dim = (q;q-part) product prod_{i=1}^{mprime-1}(q^i - 1).
inline BigInt green_dim(const FieldTower& tw, std::uint32_t mprime) {
    BigInt r = 1, qi = 1, Q = tw.q();
    for (std::uint32_t i = 1; i < mprime; ++i) {
        qi *= Q;
        r *= (qi - 1);
    }
    return r;
}

// Value from precomputed class data; no caching.
inline CycInt green_value_from_class(const MultChar& th, const GreenClassData& cls,
                                     std::uint32_t mprime) {
    const FieldTower& tw = *th.tw;
    std::uint64_t N = cyc_modulus(tw);
    if (!cls.from_field) return CycInt::zero(N);
    BigInt poch = qpoch(bigpow(BigInt(tw.q()), cls.d), cls.t - 1);
    if ((mprime - 1) % 2) poch = -poch;
    return orbit_sum(th, cls.lambda, cls.d).scaled(poch);
}

inline CycInt green_value(const MultChar& th, const MatSub& g) {
    if (g.rows != g.cols || g.rows != th.mprime)
        throw std::invalid_argument("green_value: matrix size must match character degree");
    if (!is_regular(th)) throw std::invalid_argument("green_value: character is not regular");
    return green_value_from_class(th, classify(*th.tw, g), th.mprime);
}

// Memoizing evaluator: the value depends on g only through (lambda, t), so a
// small map plus per-degree Pochhammer caches amortizes whole-group sweeps.
// Not thread-safe; use one instance per worker.
class GreenEvaluator {
public:
    GreenEvaluator(const FieldTower& tw, MultChar theta)
        : tw_(tw), theta_(std::move(theta)) {
        if (theta_.tw != &tw) throw std::invalid_argument("GreenEvaluator: tower mismatch");
        if (!is_regular(theta_))
            throw std::invalid_argument("GreenEvaluator: character is not regular");
        zero_ = CycInt::zero(cyc_modulus(tw_));
    }

    const MultChar& theta() const { return theta_; }
    std::uint32_t mprime() const { return theta_.mprime; }

    const CycInt& value_from_class(const GreenClassData& cls) {
        if (!cls.from_field) return zero_;
        auto key = std::make_pair(cls.lambda, cls.t);
        auto it = memo_.find(key);
        if (it == memo_.end())
            it = memo_.emplace(key, green_value_from_class(theta_, cls, theta_.mprime)).first;
        return it->second;
    }

    const CycInt& value(const MatSub& g) {
        if (g.rows != g.cols || g.rows != theta_.mprime)
            throw std::invalid_argument("GreenEvaluator: matrix size must match degree");
        return value_from_class(classify(tw_, g));
    }

private:
    const FieldTower& tw_;
    MultChar theta_;
    CycInt zero_;
    std::map<std::pair<elem, std::uint32_t>, CycInt> memo_;
};

} // namespace jacquetlab
