#include "jacquetlab/cyclotomic.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>

using namespace jacquetlab;

TEST_CASE("small cyclotomic polynomials") {
    REQUIRE(cyclotomic_poly(1).str() == "x - 1");
    REQUIRE(cyclotomic_poly(2).str() == "x + 1");
    IntPoly phi6;  // x^2 - x + 1
    phi6.coeffs = {BigInt(1), BigInt(-1), BigInt(1)};
    REQUIRE(cyclotomic_poly(6) == phi6);
    REQUIRE(cyclotomic_poly(8).degree() == 4);
    REQUIRE(cyclotomic_poly(105).coeff(7) == -2);  // first index with |coeff| > 1
}

TEST_CASE("product of cyclotomic polynomials over divisors") {
    for (std::uint64_t N = 1; N <= 64; ++N) {
        IntPoly prod = IntPoly::constant(1);
        for (std::uint64_t d = 1; d <= N; ++d)
            if (N % d == 0) prod = prod * cyclotomic_poly(d);
        REQUIRE(prod == xn_minus_1(N));
    }
}

TEST_CASE("root relations") {
    // zeta_6^3 = -1
    REQUIRE(CycInt::root(6, 3) == CycInt::from_int(6, -1));
    REQUIRE(CycInt::root(6, 6) == CycInt::one(6));
    // 1 + zeta_3 + zeta_3^2 = 0
    CycInt s = CycInt::root(3, 0) + CycInt::root(3, 1) + CycInt::root(3, 2);
    REQUIRE(s == CycInt::zero(3));
    // full vanishing sums for a few N
    for (std::uint64_t N : {4u, 5u, 12u}) {
        CycInt acc = CycInt::zero(N);
        for (std::uint64_t j = 0; j < N; ++j) acc = acc + CycInt::root(N, j);
        REQUIRE(acc == CycInt::zero(N));
    }
}

TEST_CASE("arithmetic and accumulation") {
    CycInt a = CycInt::root(12, 5).scaled(3) + CycInt::from_int(12, 7);
    CycInt b = CycInt::root(12, 11) - CycInt::one(12);
    REQUIRE(a * b == b * a);
    REQUIRE(a.mul_root(7) == a * CycInt::root(12, 7));
    REQUIRE((a - a) == CycInt::zero(12));
    REQUIRE(-a + a == CycInt::zero(12));

    // add_at + reduce matches operator chains
    CycInt acc = CycInt::zero(12);
    acc.add_at(5, 3);
    acc.add_at(0, 7);
    acc.reduce();
    REQUIRE(acc == a);
    REQUIRE(a.scaled(6).divide_exact(BigInt(6)) == a);
    REQUIRE_THROWS_AS(a.divide_exact(BigInt(0)), std::invalid_argument);
}

TEST_CASE("integer detection") {
    REQUIRE(CycInt::from_int(8, 42).is_integer());
    REQUIRE(CycInt::from_int(8, 42).as_integer() == 42);
    REQUIRE(!CycInt::root(8, 1).is_integer());
    REQUIRE_THROWS(CycInt::root(8, 1).as_integer());
    // zeta_6^3 reduces to the integer -1
    REQUIRE(CycInt::root(6, 3).as_integer() == -1);
}

TEST_CASE("mixed moduli rejected") {
    REQUIRE_THROWS_AS(CycInt::one(6) + CycInt::one(8), std::invalid_argument);
}

TEST_CASE("numeric embedding") {
    auto z = to_complex(CycInt::root(8, 1));
    REQUIRE(std::abs(z - std::complex<double>(0.7071067811865476, 0.7071067811865476)) < 1e-9);
    REQUIRE(std::abs(to_complex(CycInt::from_int(8, -3)) - std::complex<double>(-3.0, 0.0)) < 1e-12);
    auto w = to_complex(CycInt::root(3, 1) + CycInt::root(3, 2));
    REQUIRE(std::abs(w - std::complex<double>(-1.0, 0.0)) < 1e-9);
}
