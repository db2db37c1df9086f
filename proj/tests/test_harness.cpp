#include "jacquetlab/harness.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <regex>

using namespace jacquetlab;

namespace {

std::string strip_ms(std::string s) {
    static const std::regex ms_re("\"ms\":\\s*\\d+");
    return std::regex_replace(s, ms_re, "\"ms\":0");
}

}  // namespace

TEST_CASE("theta set resolution") {
    FieldTower tw(2, 1, 2);
    REQUIRE(resolve_thetas(tw, 2, "all") == std::vector<std::uint64_t>{1});
    REQUIRE(resolve_thetas(tw, 2, "1,2") == std::vector<std::uint64_t>{1, 2});
    REQUIRE_THROWS_AS(resolve_thetas(tw, 2, "0"), std::invalid_argument);   // not regular
    REQUIRE_THROWS_AS(resolve_thetas(tw, 2, "x"), std::invalid_argument);
    REQUIRE_THROWS_AS(resolve_thetas(tw, 2, ""), std::invalid_argument);

    FieldTower tw4(2, 1, 4);
    REQUIRE(resolve_thetas(tw4, 4, "all") == std::vector<std::uint64_t>{1, 3, 7});
}

TEST_CASE("twist resolution") {
    FieldTower tw2(2, 1, 2);
    REQUIRE(resolve_twist(tw2, 0) == tw2.one());
    REQUIRE(resolve_twist(tw2, 1) == tw2.one());  // forced trivial at q = 2

    FieldTower tw3(3, 1, 2);
    REQUIRE(resolve_twist(tw3, 0) == tw3.one());
    elem b = resolve_twist(tw3, 1);
    REQUIRE(b != tw3.one());
    REQUIRE(tw3.is_in_subfield(b, 1));
    REQUIRE(resolve_twist(tw3, 2) == tw3.one());  // exponent mod q-1
}

TEST_CASE("suite dispatch") {
    RunConfig cfg;
    REQUIRE_THROWS_AS(run_suite(cfg, "nope"), std::invalid_argument);

    VerificationRun lem = run_suite(cfg, "lemand");
    REQUIRE(lem.fail == 0);
    REQUIRE(lem.skip == 0);
    REQUIRE(lem.pass == 56);

    cfg.n = 2;
    cfg.k = 2;
    VerificationRun ch = run_suite(cfg, "char");
    REQUIRE(ch.fail == 0);
    REQUIRE(ch.pass == 3);  // one per character orbit of F_16
}

TEST_CASE("report shape") {
    RunConfig cfg;
    cfg.n = 2;
    cfg.k = 2;
    VerificationRun run = run_suite(cfg, "dim");
    nlohmann::json j = run_to_json(run);
    REQUIRE(j.contains("config"));
    REQUIRE(j.contains("suite"));
    REQUIRE(j.contains("checks"));
    REQUIRE(j.contains("totals"));
    REQUIRE(j["suite"] == "dim");
    // thread count must not enter the report: runs at different widths compare equal
    REQUIRE(!j["config"].contains("threads"));
    REQUIRE(j["config"]["seed"] == 20260814);
    REQUIRE(j["totals"]["total"] ==
            j["totals"]["pass"].get<std::uint64_t>() + j["totals"]["fail"].get<std::uint64_t>() +
                j["totals"]["skip"].get<std::uint64_t>());
    REQUIRE(j["checks"].size() == run.checks.size());
    for (const auto& c : j["checks"]) {
        REQUIRE(c.contains("name"));
        REQUIRE(c.contains("params"));
        REQUIRE(c.contains("status"));
        REQUIRE(c.contains("ms"));
        if (c["status"] == "PASS") {
            REQUIRE(!c.contains("lhs"));
            REQUIRE(!c.contains("reason"));
        }
    }
}

TEST_CASE("determinism across repeat runs") {
    RunConfig cfg;
    cfg.p = 3;
    cfg.n = 2;
    cfg.k = 2;
    std::string one = strip_ms(run_to_json(run_suite(cfg, "char")).dump(2));
    std::string two = strip_ms(run_to_json(run_suite(cfg, "char")).dump(2));
    REQUIRE(one == two);

    cfg.threads = 4;
    std::string wide = strip_ms(run_to_json(run_suite(cfg, "char")).dump(2));
    REQUIRE(one == wide);
}

TEST_CASE("budget guard surfaces as SKIP") {
    RunConfig cfg;
    cfg.n = 2;
    cfg.k = 2;
    cfg.budget = 4;  // |N| = 16 exceeds this
    VerificationRun run = run_suite(cfg, "char");
    REQUIRE(run.fail == 0);
    REQUIRE(run.pass == 0);
    REQUIRE(run.skip == 3);
    for (const auto& c : run.checks) REQUIRE(!c.reason.empty());
}

TEST_CASE("character table") {
    FieldTower tw(2, 1, 4);
    JacquetConfig jc = make_jacquet_config(tw, 2, 2, 1, tw.one());
    auto rows = char_table(jc);
    REQUIRE(rows.size() == 3);
    std::uint64_t total = 0;
    for (const auto& row : rows) {
        REQUIRE(row.match);
        total += row.class_size;
    }
    REQUIRE(total == 6);

    nlohmann::json j = char_table_json(jc, rows);
    REQUIRE(j["config"]["n"] == 2);
    REQUIRE(j["config"]["theta"] == 1);
    REQUIRE(j["rows"].size() == 3);
    for (const auto& row : j["rows"]) {
        REQUIRE(row.contains("charpoly"));
        REQUIRE(row.contains("class-d"));
        REQUIRE(row.contains("class-t"));
        REQUIRE(row.contains("class-size"));
        REQUIRE(row["brute"].size() == 8);  // phi(30) coordinates
        REQUIRE(row["match"] == true);
    }

    std::string csv = char_table_csv(jc, rows);
    REQUIRE(csv.rfind("charpoly-coeffs,class-d,class-t,class-size,brute,closed,match\n", 0) == 0);
    REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("atomic file write") {
    std::string path = "harness_test_out.json";
    write_file_atomic(path, "{\"x\": 1}\n");
    std::ifstream f(path);
    std::string content((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    REQUIRE(content == "{\"x\": 1}\n");
    f.close();
    std::remove(path.c_str());
    std::remove((path + ".tmp").c_str());
}
