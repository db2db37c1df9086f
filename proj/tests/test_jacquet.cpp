#include "jacquetlab/jacquet.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace jacquetlab;

TEST_CASE("module dimension") {
    REQUIRE(jacquet_dim(2, 2, 2) == 2);
    REQUIRE(jacquet_dim(2, 2, 3) == 4);
    REQUIRE(jacquet_dim(3, 2, 2) == 6);
    REQUIRE(jacquet_dim(2, 3, 2) == 24);
    REQUIRE(jacquet_dim(2, 1, 2) == 1);
    REQUIRE_THROWS_AS(jacquet_dim(2, 2, 1), std::invalid_argument);
}

TEST_CASE("config validation") {
    FieldTower tw(2, 1, 4);
    REQUIRE_NOTHROW(make_jacquet_config(tw, 2, 2, 1, tw.one()));
    REQUIRE_THROWS_AS(make_jacquet_config(tw, 2, 3, 1, tw.one()), std::invalid_argument);
    REQUIRE_THROWS_AS(make_jacquet_config(tw, 2, 2, 0, tw.one()), std::invalid_argument);
    REQUIRE_THROWS_AS(make_jacquet_config(tw, 2, 2, 5, tw.one()), std::invalid_argument);
    REQUIRE_THROWS_AS(make_jacquet_config(tw, 2, 2, 1, tw.zero()), std::invalid_argument);
    // budget guard fires at shape construction
    JacquetConfig tiny = make_jacquet_config(tw, 2, 2, 1, tw.one(), 8);
    REQUIRE_THROWS_AS(make_unipotent_shape(tw, 2, 2, tiny.budget), guard_error);
}

TEST_CASE("unipotent shape layout") {
    FieldTower tw(2, 1, 4);
    UnipotentShape sh = make_unipotent_shape(tw, 2, 2, 1 << 20);
    REQUIRE(sh.count == 16);
    REQUIRE(sh.pos.size() == 4);
    REQUIRE(sh.trace_digits == std::vector<std::uint32_t>{0, 3});
    REQUIRE(sh.diag_offset == std::vector<std::uint32_t>{0});
    REQUIRE(sh.pos[0] == std::make_pair(0u, 2u));  // X_{1,1} starts at block column 2

    FieldTower tw6(2, 1, 6);
    UnipotentShape sh3 = make_unipotent_shape(tw6, 2, 3, 1 << 20);
    REQUIRE(sh3.count == 4096);
    REQUIRE(sh3.pos.size() == 12);
    REQUIRE(sh3.trace_digits == std::vector<std::uint32_t>{0, 3, 8, 11});
    REQUIRE(sh3.diag_offset == std::vector<std::uint32_t>{0, 8});

    // h places the block diagonal and the X blocks
    MatSub g = mat_identity(tw, 2);
    g.at(0, 1) = tw.one();
    std::vector<std::uint8_t> digits{1, 0, 0, 1};
    MatSub h = build_h(tw, sh, g, digits);
    REQUIRE(h.at(0, 0) == tw.one());
    REQUIRE(h.at(0, 1) == tw.one());
    REQUIRE(h.at(2, 3) == tw.one());
    REQUIRE(h.at(0, 2) == tw.one());  // digit 0
    REQUIRE(h.at(0, 3) == tw.zero());
    REQUIRE(h.at(1, 3) == tw.one());  // digit 3
    REQUIRE(h.at(2, 0) == tw.zero());

    // psi exponent reads the trace digits
    AdditiveChar psi = make_additive_char(tw, tw.one());
    REQUIRE(unipotent_psi_exponent(tw, psi, sh, digits) == 0);  // 1 + 1 = 0
    REQUIRE(unipotent_psi_exponent(tw, psi, sh, {1, 0, 0, 0}) == 1);
    REQUIRE(build_unipotent(tw, sh, digits).at(0, 0) == tw.one());
}

TEST_CASE("smallest case by hand") {
    // n = 1, k = 2 over F_2: the projection sum has two terms
    FieldTower tw(2, 1, 2);
    JacquetConfig cfg = make_jacquet_config(tw, 1, 2, 1, tw.one());
    MatSub I = mat_identity(tw, 1);
    REQUIRE(twisted_char_bruteforce(cfg, I).as_integer() == 1);
    REQUIRE(twisted_char_closed(cfg, I).as_integer() == 1);
    REQUIRE(jacquet_dim(cfg) == 1);
}

TEST_CASE("three computation routes agree") {
    FieldTower tw(2, 1, 4);
    JacquetConfig cfg = make_jacquet_config(tw, 2, 2, 1, tw.one());
    for (const MatSub& g : gl_enumerate(tw, 2)) {
        CycInt direct = twisted_char_bruteforce(cfg, g);
        REQUIRE(direct == twisted_char_via_products(cfg, g));
        REQUIRE(direct == twisted_char_via_shifted_psi(cfg, g));
        REQUIRE(direct == twisted_char_closed(cfg, g));
    }
}

TEST_CASE("counts factor out the character") {
    FieldTower tw(2, 1, 4);
    MatSub g = mat_identity(tw, 2);
    GreenClassData cls = classify(tw, g);
    JacquetConfig c1 = make_jacquet_config(tw, 2, 2, 1, tw.one());
    auto counts = jacquet_counts(c1, g, cls);
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    REQUIRE(total == 16);  // one tally per point of N
    REQUIRE(twisted_char_from_counts(c1, cls, counts) == twisted_char_bruteforce(c1, g));

    // the same histogram serves any regular character exponent
    for (std::uint64_t c : regular_exponents(tw, 4)) {
        JacquetConfig cfg = make_jacquet_config(tw, 2, 2, c, tw.one());
        REQUIRE(twisted_char_from_counts(cfg, cls, counts) == twisted_char_bruteforce(cfg, g));
    }
}

TEST_CASE("multithreaded counts match") {
    FieldTower tw(2, 1, 4);
    MatSub g(2, 2);  // order-3 rotation
    g.at(0, 1) = tw.one();
    g.at(1, 0) = tw.one();
    g.at(1, 1) = tw.one();
    GreenClassData cls = classify(tw, g);
    JacquetConfig c1 = make_jacquet_config(tw, 2, 2, 1, tw.one());
    JacquetConfig c4 = make_jacquet_config(tw, 2, 2, 1, tw.one(), std::uint64_t{1} << 28, 4);
    REQUIRE(jacquet_counts(c1, g, cls) == jacquet_counts(c4, g, cls));
}

TEST_CASE("non-semisimple and mixed classes vanish") {
    FieldTower tw(2, 1, 4);
    JacquetConfig cfg = make_jacquet_config(tw, 2, 2, 1, tw.one());
    MatSub u = mat_identity(tw, 2);
    u.at(0, 1) = tw.one();  // transvection: t = 1 < n/d = 2
    REQUIRE(twisted_char_closed(cfg, u).is_zero());
    REQUIRE(twisted_char_bruteforce(cfg, u).is_zero());
}

TEST_CASE("induced characters from subfield tori") {
    FieldTower tw(2, 1, 4);
    JacquetConfig cfg = make_jacquet_config(tw, 2, 2, 1, tw.one());
    BasisCoords bc = make_basis_coords(tw, 2);
    MatSub I = mat_identity(tw, 2);

    // dim Ind = |GL_2(F_q)| / (q^ell - 1)
    REQUIRE(induced_char_closed(cfg, 1, I).as_integer() == 6);
    REQUIRE(induced_char_closed(cfg, 2, I).as_integer() == 2);

    for (std::uint32_t ell : {1u, 2u})
        for (const MatSub& s : gl_enumerate(tw, 2))
            REQUIRE(induced_char_closed(cfg, ell, s) ==
                    induced_char_bruteforce(cfg, ell, s, bc));

    REQUIRE_THROWS_AS(induced_char_closed(cfg, 3, I), std::invalid_argument);
}

TEST_CASE("class inventories") {
    FieldTower tw2(2, 1, 2);
    auto reps2 = class_reps(tw2, 2);
    REQUIRE(reps2.size() == 3);
    std::uint64_t total = 0;
    for (const auto& r : reps2) total += r.count;
    REQUIRE(total == 6);
    std::vector<std::uint64_t> sizes;
    for (const auto& r : reps2) sizes.push_back(r.count);
    std::sort(sizes.begin(), sizes.end());
    REQUIRE(sizes == std::vector<std::uint64_t>{1, 2, 3});

    FieldTower tw3(2, 1, 3);
    auto reps3 = class_reps(tw3, 3);
    REQUIRE(reps3.size() == 6);
    total = 0;
    for (const auto& r : reps3) total += r.count;
    REQUIRE(total == 168);
}

TEST_CASE("full group enumeration") {
    FieldTower tw(3, 1, 2);
    auto gl = gl_enumerate(tw, 2);
    REQUIRE(gl.size() == 48);
    for (const auto& g : gl) REQUIRE(mat_invertible(tw, g));
    REQUIRE(std::adjacent_find(gl.begin(), gl.end()) == gl.end());  // no duplicates
    REQUIRE_THROWS_AS(gl_enumerate(tw, 2, 10), guard_error);
}

TEST_CASE("flag alternating sums") {
    FieldTower tw(2, 1, 2);
    MatSub I = mat_identity(tw, 2);
    REQUIRE(steinberg_via_flags(tw, I) == 2);
    REQUIRE(steinberg_closed(tw, I) == 2);

    MatSub u = I;
    u.at(0, 1) = tw.one();
    REQUIRE(steinberg_via_flags(tw, u) == 0);
    REQUIRE_THROWS_AS(steinberg_closed(tw, u), std::invalid_argument);

    MatSub r(2, 2);
    r.at(0, 1) = tw.one();
    r.at(1, 0) = tw.one();
    r.at(1, 1) = tw.one();
    REQUIRE(steinberg_via_flags(tw, r) == -1);
    REQUIRE(steinberg_closed(tw, r) == -1);

    // n = 1: single flag, value 1
    FieldTower t1(3, 1, 1);
    REQUIRE(steinberg_via_flags(t1, mat_identity(t1, 1)) == 1);

    // invariant subspace counts under the identity: all subspaces survive
    auto levels = detail::invariant_subspaces(tw, I);
    REQUIRE(levels[0].size() == 1);
    REQUIRE(levels[1].size() == 3);
    REQUIRE(levels[2].size() == 1);

    // agreement across GL_2(F_3) semisimple-from-subfield classes
    FieldTower tw3(3, 1, 2);
    for (const auto& rep : class_reps(tw3, 2)) {
        if (!rep.cls.from_field || rep.cls.t != 2 / rep.cls.d) continue;
        REQUIRE(steinberg_via_flags(tw3, rep.g) == steinberg_closed(tw3, rep.g));
    }
}

TEST_CASE("rank-sum identity") {
    FieldTower tw21(2, 1, 1);
    AdditiveChar psi21 = make_additive_char(tw21, tw21.one());
    RankSumCheck rs = gauss_rank_sum_check(tw21, psi21, 1);
    REQUIRE(rs.ok);
    REQUIRE(rs.rhs == -2);

    FieldTower tw31(3, 1, 1);
    AdditiveChar psi31 = make_additive_char(tw31, tw31.one());
    rs = gauss_rank_sum_check(tw31, psi31, 1);
    REQUIRE(rs.ok);
    REQUIRE(rs.rhs == -3);

    FieldTower tw22(2, 1, 2);
    AdditiveChar psi22 = make_additive_char(tw22, tw22.one());
    rs = gauss_rank_sum_check(tw22, psi22, 2);
    REQUIRE(rs.ok);
    REQUIRE(rs.rhs == -32);

    REQUIRE_THROWS_AS(gauss_rank_sum_check(tw22, psi22, 2, 4), guard_error);
}

TEST_CASE("character twist stabilizer") {
    FieldTower tw(2, 1, 2);
    AdditiveChar psi = make_additive_char(tw, tw.one());
    REQUIRE(stabilizer_check(tw, 1, 2, psi));
    REQUIRE_THROWS_AS(stabilizer_check(tw, 1, 1, psi), std::invalid_argument);
}
