// Command-line front end: verification suites, character tables, the
// decomposition coefficients, and regular-exponent listings.
//
// Exit codes: 0 all checks pass, 1 at least one FAIL, 2 usage or guard error.

#include "jacquetlab/harness.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

std::uint32_t env_threads() {
    const char* v = std::getenv("JACQUETLAB_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    unsigned long t = std::strtoul(v, &end, 10);
    if (end == v || *end || t == 0 || t > 1024)
        throw std::invalid_argument("JACQUETLAB_THREADS must be an integer in 1..1024");
    return static_cast<std::uint32_t>(t);
}

void emit(const std::string& text, const std::string& out_path) {
    std::string payload = text;
    if (payload.empty() || payload.back() != '\n') payload += '\n';
    if (out_path.empty())
        std::cout << payload;
    else
        jacquetlab::write_file_atomic(out_path, payload);
}

}  // namespace

int main(int argc, char** argv) {
    using namespace jacquetlab;

    CLI::App app{"exact character computations for twisted Jacquet modules of GL_kn(F_q)"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string suite = "all", out_path;
    bool threads_set = false;

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite, report JSON");
    verify->add_option("--suite", suite, "one of fk|chu|landsberg|lemand|indchar|dim|char|decomp|steinberg|all")
        ->default_val("all");
    verify->add_option("--p", cfg.p, "field characteristic")->default_val(2);
    verify->add_option("--a", cfg.a, "base-field degree: q = p^a")->default_val(1);
    verify->add_option("--n", cfg.n, "block size n")->default_val(1);
    verify->add_option("--k", cfg.k, "number of blocks k")->default_val(2);
    verify->add_option("--theta", cfg.theta, "'all' or comma-separated regular exponents")
        ->default_val("all");
    verify->add_option("--threads", cfg.threads, "worker threads (default: JACQUETLAB_THREADS or 1)");
    verify->add_option("--budget", cfg.budget, "largest unipotent enumeration allowed")
        ->default_val(std::uint64_t{1} << 28);
    verify->add_option("--twist", cfg.twist, "psi twist exponent: b = g^twist in F_q^*")
        ->default_val(0);
    verify->add_option("--out", out_path, "write the JSON report to this file (atomic)");

    std::uint32_t ct_p = 2, ct_a = 1, ct_n = 1, ct_k = 2;
    std::uint64_t ct_theta = 1, ct_twist = 0;
    std::string ct_format = "json", ct_out;
    CLI::App* table = app.add_subcommand("char-table", "per-class character table at one theta");
    table->add_option("--p", ct_p, "field characteristic")->default_val(2);
    table->add_option("--a", ct_a, "base-field degree: q = p^a")->default_val(1);
    table->add_option("--n", ct_n, "block size n")->default_val(1);
    table->add_option("--k", ct_k, "number of blocks k")->default_val(2);
    table->add_option("--theta", ct_theta, "regular character exponent")->required();
    table->add_option("--twist", ct_twist, "psi twist exponent")->default_val(0);
    table->add_option("--format", ct_format, "json or csv")->default_val("json");
    table->add_option("--out", ct_out, "write the table to this file (atomic)");

    std::uint32_t ap_k = 2, ap_n = 1, ap_d = 1;
    CLI::App* apoly_cmd = app.add_subcommand("apoly", "decomposition coefficient polynomial");
    apoly_cmd->add_option("--k", ap_k, "number of blocks k")->required();
    apoly_cmd->add_option("--n", ap_n, "block size n")->required();
    apoly_cmd->add_option("--d", ap_d, "subfield degree d | n")->required();

    std::uint32_t lr_p = 2, lr_a = 1, lr_m = 1;
    CLI::App* lr = app.add_subcommand("list-regular", "regular character exponents of F_{q^m}^*");
    lr->add_option("--p", lr_p, "field characteristic")->default_val(2);
    lr->add_option("--a", lr_a, "base-field degree: q = p^a")->default_val(1);
    lr->add_option("--m", lr_m, "extension degree m")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;  // help/version exit clean; bad usage is 2
    }

    try {
        if (verify->parsed()) {
            threads_set = verify->count("--threads") > 0;
            if (!threads_set) cfg.threads = env_threads();
            VerificationRun run = run_suite(cfg, suite);
            emit(run_to_json(run).dump(2), out_path);
            return run.fail ? 1 : 0;
        }
        if (table->parsed()) {
            if (ct_format != "json" && ct_format != "csv")
                throw std::invalid_argument("--format must be json or csv");
            FieldTower tw(ct_p, ct_a, ct_n * ct_k);
            JacquetConfig jc =
                make_jacquet_config(tw, ct_n, ct_k, ct_theta, resolve_twist(tw, ct_twist));
            std::vector<CharTableRow> rows = char_table(jc);
            if (ct_format == "json")
                emit(char_table_json(jc, rows).dump(2), ct_out);
            else
                emit(char_table_csv(jc, rows), ct_out);
            for (const CharTableRow& row : rows)
                if (!row.match) return 1;
            return 0;
        }
        if (apoly_cmd->parsed()) {
            IntPoly a = a_poly(ap_k, ap_n, ap_d);
            std::ostringstream os;
            if (a.is_zero()) {
                os << "0";
            } else {
                for (std::size_t i = 0; i < a.coeffs.size(); ++i) {
                    if (i) os << ' ';
                    os << a.coeffs[i].str();
                }
            }
            std::cout << os.str() << '\n' << a.str() << '\n';
            return 0;
        }
        if (lr->parsed()) {
            FieldTower tw(lr_p, lr_a, lr_m);
            std::ostringstream os;
            bool first = true;
            for (std::uint64_t c : regular_exponents(tw, lr_m)) {
                if (!first) os << ' ';
                os << c;
                first = false;
            }
            std::cout << os.str() << '\n';
            return 0;
        }
    } catch (const jacquetlab::guard_error& e) {
        std::cerr << "guard: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
