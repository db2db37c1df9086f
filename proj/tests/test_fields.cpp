#include "jacquetlab/field_tower.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace jacquetlab;

TEST_CASE("F_4 tower basics") {
    FieldTower tw(2, 1, 2);
    REQUIRE(tw.p() == 2);
    REQUIRE(tw.q() == 2);
    REQUIRE(tw.m() == 2);
    REQUIRE(tw.card() == 4);
    // lexicographically smallest irreducible: x^2 + x + 1
    REQUIRE(tw.defining_poly() == std::vector<std::uint32_t>{1, 1, 1});

    elem g = tw.generator();
    REQUIRE(tw.pow(g, 3) == tw.one());
    REQUIRE(tw.pow(g, 1) != tw.one());
    // gamma + gamma^2 = 1 in F_4
    REQUIRE(tw.add(g, tw.mul(g, g)) == tw.one());
    REQUIRE(tw.add(tw.one(), tw.one()) == tw.zero());
}

TEST_CASE("exp/log round trips") {
    FieldTower tw(3, 1, 2);
    for (std::uint64_t e = 0; e < tw.order(); ++e) {
        elem x = tw.from_exp(e);
        REQUIRE(tw.exp_of(x) == e);
    }
    REQUIRE(tw.from_int(0) == tw.zero());
    REQUIRE(tw.from_int(1) == tw.one());
    REQUIRE(tw.int_lift(tw.from_int(2)) == 2);
    REQUIRE(tw.add(tw.from_int(2), tw.from_int(2)) == tw.from_int(1));
}

TEST_CASE("field axioms, exhaustive on small towers") {
    for (auto [p, a, m] : {std::tuple<int, int, int>{2, 1, 2}, {3, 1, 1}, {2, 2, 1}}) {
        FieldTower tw(p, a, m);
        std::uint64_t Q = tw.card();
        for (elem x = 0; x < Q; ++x) {
            REQUIRE(tw.add(x, tw.zero()) == x);
            REQUIRE(tw.mul(x, tw.one()) == x);
            REQUIRE(tw.add(x, tw.neg(x)) == tw.zero());
            if (x != 0) REQUIRE(tw.mul(x, tw.inv(x)) == tw.one());
            for (elem y = 0; y < Q; ++y) {
                REQUIRE(tw.add(x, y) == tw.add(y, x));
                REQUIRE(tw.mul(x, y) == tw.mul(y, x));
                for (elem z = 0; z < Q; ++z) {
                    REQUIRE(tw.add(tw.add(x, y), z) == tw.add(x, tw.add(y, z)));
                    REQUIRE(tw.mul(tw.mul(x, y), z) == tw.mul(x, tw.mul(y, z)));
                    REQUIRE(tw.mul(x, tw.add(y, z)) == tw.add(tw.mul(x, y), tw.mul(x, z)));
                }
            }
        }
    }
}

TEST_CASE("frobenius fixes exactly the subfields") {
    FieldTower tw(2, 1, 6);
    for (std::uint32_t d : {1u, 2u, 3u, 6u}) {
        REQUIRE(tw.valid_subdeg(d));
        std::uint64_t fixed = 0;
        for (elem x = 0; x < tw.card(); ++x) {
            if (tw.frobenius(x, d) == x) {
                ++fixed;
                REQUIRE(tw.is_in_subfield(x, d));
            } else {
                REQUIRE(!tw.is_in_subfield(x, d));
            }
        }
        REQUIRE(fixed == tw.subfield_card(d));
    }
    REQUIRE(!tw.valid_subdeg(4));
    REQUIRE(!tw.valid_subdeg(0));
}

TEST_CASE("subfield enumeration order") {
    FieldTower tw(2, 1, 4);
    const auto& f4 = tw.subfield(2);
    REQUIRE(f4.size() == 4);
    REQUIRE(f4[0] == tw.zero());
    REQUIRE(f4[1] == tw.one());
    elem g2 = tw.subfield_generator(2);
    REQUIRE(f4[2] == g2);
    REQUIRE(f4[3] == tw.mul(g2, g2));
    REQUIRE(tw.dlog_in_subfield(g2, 2) == 1);
    // prime field is {0, 1}
    REQUIRE(tw.subfield(1) == std::vector<elem>{tw.zero(), tw.one()});
}

TEST_CASE("relative trace") {
    // rel_trace(x, d) sums the d Frobenius conjugates: Tr_{F_{q^d}/F_q}
    FieldTower tw(2, 1, 2);
    elem g = tw.generator();
    // tr_{F_4/F_2}(gamma) = gamma + gamma^2 = 1, tr(1) = 1 + 1 = 0
    REQUIRE(tw.rel_trace(g, 2) == tw.one());
    REQUIRE(tw.rel_trace(tw.one(), 2) == tw.zero());
    REQUIRE(tw.rel_trace(tw.zero(), 2) == tw.zero());
    REQUIRE_THROWS_AS(tw.rel_trace(g, 1), std::domain_error);  // gamma not in F_2
    // trace_q_to_p lives on F_q only (a = 1 here, so it is the identity lift)
    REQUIRE(tw.trace_q_to_p(tw.one()) == 1);
    REQUIRE_THROWS_AS(tw.trace_q_to_p(g), std::domain_error);

    FieldTower big(2, 1, 6);
    std::uint32_t fiber[2] = {0, 0};
    for (elem x = 0; x < big.card(); ++x) {
        elem t = big.rel_trace(x, 6);
        REQUIRE(big.is_in_subfield(t, 1));
        ++fiber[big.int_lift(t)];
        elem y = big.frobenius(x);
        REQUIRE(big.rel_trace(y, 6) == t);  // trace is Frobenius-invariant
        REQUIRE(big.rel_trace(big.add(x, y), 6) == big.add(t, big.rel_trace(y, 6)));
    }
    REQUIRE(fiber[0] == 32);  // trace is onto with equal fibers
    REQUIRE(fiber[1] == 32);
    // restricted to F_4 inside F_64 it is the two-conjugate sum
    for (elem x : big.subfield(2))
        REQUIRE(big.rel_trace(x, 2) == big.add(x, big.frobenius(x)));
}

TEST_CASE("non-prime base field") {
    FieldTower tw(2, 2, 2);  // q = 4, card 16
    REQUIRE(tw.q() == 4);
    REQUIRE(tw.card() == 16);
    REQUIRE(tw.subfield(1).size() == 4);
    // trace to F_p needs the p-power Frobenius, not the q-power one
    std::uint32_t ones = 0;
    for (elem x : tw.subfield(1)) {
        std::uint32_t t = tw.trace_q_to_p(x);
        REQUIRE(t < 2);
        ones += t;
    }
    REQUIRE(ones == 2);  // Tr_{F_4/F_2} is onto, fibers of size 2
}

TEST_CASE("power edge cases") {
    FieldTower tw(3, 1, 2);
    elem g = tw.generator();
    REQUIRE(tw.pow(g, 0) == tw.one());
    REQUIRE(tw.pow(g, -1) == tw.inv(g));
    REQUIRE(tw.pow(tw.zero(), 5) == tw.zero());
    REQUIRE(tw.mul(tw.pow(g, 5), tw.pow(g, 3)) == tw.pow(g, 8));
}
