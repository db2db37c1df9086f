#pragma once
// Named verification suites over the whole library, reported as JSON.
//
// A run is a list of checks; each check PASSes, FAILs with both sides
// recorded, or SKIPs with a reason (enumeration guards, non-regular
// restrictions).  Reports are deterministic for a fixed config: sampled
// checks draw from a generator seeded from the config, loops run in fixed
// ascending orders, and the thread count is deliberately left out of the
// report so runs at different --threads stay byte-identical apart from the
// timing fields.

#include "jacquet.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

namespace jacquetlab {

struct RunConfig {
    std::uint32_t p = 2, a = 1, n = 1, k = 2;
    std::string theta = "all";  // "all" or comma-separated exponents
    std::uint32_t threads = 1;
    std::uint64_t budget = std::uint64_t{1} << 28;
    std::uint64_t twist = 0;  // psi_b with b = g_1^twist (forced to 1 when q = 2)
    std::uint64_t seed = 20260814;
};

struct CheckResult {
    std::string name;
    nlohmann::json params;
    std::string status;    // PASS | FAIL | SKIP
    std::string lhs, rhs;  // populated on FAIL
    std::string reason;    // populated on SKIP
    std::int64_t ms = 0;
};

struct VerificationRun {
    RunConfig cfg;
    std::string suite;
    std::vector<CheckResult> checks;
    std::uint64_t pass = 0, fail = 0, skip = 0;
};

inline nlohmann::json run_to_json(const VerificationRun& r) {
    nlohmann::json jc;
    jc["p"] = r.cfg.p;
    jc["a"] = r.cfg.a;
    jc["n"] = r.cfg.n;
    jc["k"] = r.cfg.k;
    jc["theta"] = r.cfg.theta;
    jc["budget"] = r.cfg.budget;
    jc["twist"] = r.cfg.twist;
    jc["seed"] = r.cfg.seed;
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& c : r.checks) {
        nlohmann::json jk;
        jk["name"] = c.name;
        jk["params"] = c.params;
        jk["status"] = c.status;
        if (c.status == "FAIL") {
            jk["lhs"] = c.lhs;
            jk["rhs"] = c.rhs;
        }
        if (c.status == "SKIP") jk["reason"] = c.reason;
        jk["ms"] = c.ms;
        arr.push_back(std::move(jk));
    }
    nlohmann::json out;
    out["config"] = std::move(jc);
    out["suite"] = r.suite;
    out["checks"] = std::move(arr);
    out["totals"] = {{"pass", r.pass},
                     {"fail", r.fail},
                     {"skip", r.skip},
                     {"total", r.pass + r.fail + r.skip}};
    return out;
}

// Runs one check body, catching guard_error as SKIP and timing the body.
// Bodies mark failure through the expect_* helpers; an unmarked body passes.
class Runner {
public:
    explicit Runner(VerificationRun& out) : out_(out) {}

    template <class F>
    void check(const std::string& name, nlohmann::json params, F&& body) {
        CheckResult cr;
        cr.name = name;
        cr.params = std::move(params);
        auto t0 = std::chrono::steady_clock::now();
        try {
            body(cr);
        } catch (const guard_error& e) {
            cr.status = "SKIP";
            cr.reason = e.what();
        }
        if (cr.status.empty()) cr.status = "PASS";
        auto t1 = std::chrono::steady_clock::now();
        cr.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        if (cr.status == "PASS") ++out_.pass;
        else if (cr.status == "FAIL") ++out_.fail;
        else ++out_.skip;
        out_.checks.push_back(std::move(cr));
    }

private:
    VerificationRun& out_;
};

// First mismatch wins; later expectations on a failed check are ignored.
inline void expect(CheckResult& cr, bool ok, const std::string& lhs, const std::string& rhs) {
    if (!ok && cr.status.empty()) {
        cr.status = "FAIL";
        cr.lhs = lhs;
        cr.rhs = rhs;
    }
}
inline void expect_eq(CheckResult& cr, const CycInt& lhs, const CycInt& rhs) {
    if (lhs != rhs) expect(cr, false, lhs.str(), rhs.str());
}
inline void expect_eq(CheckResult& cr, const BigInt& lhs, const BigInt& rhs) {
    if (lhs != rhs) expect(cr, false, lhs.str(), rhs.str());
}
inline void expect_eq(CheckResult& cr, const BigRat& lhs, const BigRat& rhs) {
    if (lhs != rhs)
        expect(cr, false, lhs.str(), rhs.str());
}
inline void expect_eq(CheckResult& cr, const IntPoly& lhs, const IntPoly& rhs) {
    if (lhs != rhs) expect(cr, false, lhs.str(), rhs.str());
}

// ---------------------------------------------------------------- theta sets

// "all" -> one representative per Galois orbit of regular exponents;
// otherwise a comma-separated exponent list, each validated as regular.
inline std::vector<std::uint64_t> resolve_thetas(const FieldTower& tw, std::uint32_t mprime,
                                                 const std::string& spec) {
    if (spec == "all") return regular_orbit_reps(tw, mprime);
    std::vector<std::uint64_t> out;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::uint64_t c = 0;
        try {
            c = std::stoull(tok);
        } catch (const std::exception&) {
            throw std::invalid_argument("theta list: '" + tok + "' is not an integer");
        }
        if (!is_regular(make_mult_char(tw, mprime, c)))
            throw std::invalid_argument("theta exponent " + tok + " is not regular");
        out.push_back(c);
    }
    if (out.empty()) throw std::invalid_argument("theta list is empty");
    return out;
}

// psi twist b = g_1^j; trivially 1 when q = 2.
inline elem resolve_twist(const FieldTower& tw, std::uint64_t j) {
    if (tw.q() == 2) return tw.one();
    return tw.pow(tw.subfield_generator(1), static_cast<std::int64_t>(j % (tw.q() - 1)));
}

// ------------------------------------------------------ shared branch tables

// Character table skeleton: group elements (exhaustive when the total
// enumeration cost stays small, one representative per class otherwise) with
// their classification and the theta-independent (t, psi-exponent) histogram.
struct CharEntry {
    MatSub g;
    GreenClassData cls;
    std::uint64_t class_size = 1;
    std::vector<std::int64_t> counts;  // empty iff not from a field
};

inline std::vector<CharEntry> char_entries(const JacquetConfig& cfg, bool& exhaustive) {
    const FieldTower& tw = *cfg.tw;
    UnipotentShape sh = make_unipotent_shape(tw, cfg.n, cfg.k, cfg.budget);
    BigInt gl = gl_order(BigInt(tw.q()), cfg.n);
    exhaustive = gl <= 1000 && gl * BigInt(sh.count) <= (BigInt(1) << 26);
    std::vector<CharEntry> out;
    if (exhaustive) {
        for (MatSub& g : gl_enumerate(tw, cfg.n)) {
            CharEntry e;
            e.cls = classify(tw, g);
            e.g = std::move(g);
            out.push_back(std::move(e));
        }
    } else {
        for (ClassRep& rep : class_reps(tw, cfg.n)) {
            CharEntry e;
            e.g = std::move(rep.g);
            e.cls = std::move(rep.cls);
            e.class_size = rep.count;
            out.push_back(std::move(e));
        }
    }
    for (CharEntry& e : out)
        if (e.cls.from_field) e.counts = jacquet_counts(cfg, e.g, e.cls);
    return out;
}

inline CycInt entry_bruteforce(const JacquetConfig& cfg, const CharEntry& e) {
    if (!e.cls.from_field) return CycInt::zero(cyc_modulus(*cfg.tw));
    return twisted_char_from_counts(cfg, e.cls, e.counts);
}

// --------------------------------------------------------------- suite: fk

// The block-triangular counting identity over the full small grid.  The rank
// distribution of each shape is enumerated once and reused for all three
// admissible a values.
inline void suite_fk(Runner& r) {
    for (std::uint64_t q : {2, 3}) {
        for (std::uint32_t k = 1; k <= 3; ++k) {
            std::vector<std::uint32_t> ns(k, 0), ms(k, 0);
            std::vector<std::uint32_t> digits(2 * k, 0);
            const std::uint64_t total = upow(3, 2 * k);
            for (std::uint64_t it = 0; it < total; ++it) {
                for (std::uint32_t i = 0; i < k; ++i) {
                    ns[i] = digits[i];
                    ms[i] = digits[k + i];
                }
                std::uint32_t smin = fk_srange_min(ns, ms);
                r.check("fk-identity",
                        {{"q", q}, {"k", k}, {"ns", ns}, {"ms", ms}, {"a-range", {smin, smin + 2}}},
                        [&](CheckResult& cr) {
                            std::vector<std::int64_t> cnt = fk_rank_counts(q, ns, ms);
                            for (std::uint32_t a = smin; a <= smin + 2; ++a)
                                expect_eq(cr, fk_from_rank_counts(q, cnt, a), fk_closed(q, ns, ms, a));
                        });
                for (std::size_t t = digits.size(); t-- > 0;) {
                    if (digits[t] + 1u < 3) {
                        ++digits[t];
                        break;
                    }
                    digits[t] = 0;
                }
            }
        }
    }
}

// -------------------------------------------------------------- suite: chu

inline void suite_chu(Runner& r) {
    for (std::uint64_t q : {2, 3})
        for (std::uint32_t n = 0; n <= 3; ++n)
            for (std::uint32_t m = 0; m <= 3; ++m)
                r.check("chu-identity", {{"q", q}, {"n", n}, {"m", m}, {"a-range", {n + m, n + m + 3}}},
                        [&](CheckResult& cr) {
                            for (std::uint32_t a = n + m; a <= n + m + 3; ++a)
                                expect(cr, chu_check(q, n, m, a), "lhs(a=" + std::to_string(a) + ")",
                                       "rhs");
                        });
}

// -------------------------------------------------------- suite: landsberg

inline void suite_landsberg(Runner& r) {
    for (std::uint64_t q : {2, 3})
        for (std::uint32_t n = 0; n <= 3; ++n)
            for (std::uint32_t m = 0; m <= 3; ++m)
                r.check("rank-count", {{"q", q}, {"n", n}, {"m", m}},
                        [&](CheckResult& cr) {
                            BigInt sum = 0;
                            for (std::uint32_t rk = 0; rk <= 3; ++rk) {
                                BigInt prod = rank_count(q, n, m, rk);
                                expect_eq(cr, BigRat(prod), landsberg_rank_count(q, n, m, rk));
                                expect_eq(cr, prod, rank_count_bruteforce(q, n, m, rk));
                                sum += prod;
                            }
                            // ranks cap at min(n,m) <= 3, so the counts exhaust the matrix space
                            expect_eq(cr, sum, bigpow(BigInt(q), std::uint64_t(n) * m));
                        });
}

// ----------------------------------------------------------- suite: lemand

// The a_{k;n,d} polynomial lemma: integrality and divisibility (I), degree
// and leading coefficient (II), sign of values at prime powers (III), plus
// the necklace-polynomial form checked at square points (where x^{n/2} stays
// integral for odd n).
inline void suite_lemand(Runner& r) {
    for (std::uint32_t k = 2; k <= 5; ++k)
        for (std::uint32_t n = 1; n <= 6; ++n)
            for (std::uint32_t d = 1; d <= n; ++d) {
                if (n % d != 0) continue;
                r.check("a-poly", {{"k", k}, {"n", n}, {"d", d}}, [&](CheckResult& cr) {
                    IntPoly apol = a_poly(k, n, d);

                    // (I) special cases and divisibility by x^d - 1
                    if (d == n) {
                        BigInt c = (std::uint64_t(k) * (n - 1)) % 2 ? -1 : 1;
                        expect_eq(cr, apol, IntPoly::constant(c));
                    } else if (2 * d == n) {
                        BigInt c = (k % 2 == 0) ? -1 : 1;  // (-1)^{k+1}
                        IntPoly lhs = apol * (IntPoly::monomial(1, n / 2) + IntPoly::constant(1));
                        IntPoly rhs = IntPoly::monomial(1, std::size_t(k - 2) * n / 2) +
                                      IntPoly::constant(c);
                        expect_eq(cr, lhs, rhs);
                    } else {
                        IntPoly rem;
                        divmod_monic(apol, xn_minus_1(d), rem);
                        expect_eq(cr, rem, IntPoly());
                    }

                    // (II) degree and leading coefficient
                    bool neg = (std::uint64_t(k) * (n - n / d)) % 2 != 0;
                    if (k == 2) {
                        expect_eq(cr, apol, IntPoly::constant(d == n ? 1 : 0));
                    } else {
                        long long deg =
                            (std::int64_t(n) * (k - 2) - 2 * d) * (n - d) / (2 * std::int64_t(d));
                        expect(cr, apol.degree() == deg, std::to_string(apol.degree()),
                               std::to_string(deg));
                        expect_eq(cr, apol.leading(), BigInt(neg ? -1 : 1));
                    }

                    // (III) nonvanishing and sign at prime powers
                    if (k > 2)
                        for (std::uint64_t q : {2, 3, 4, 5}) {
                            BigInt v = a_value(k, n, d, q);
                            expect(cr, v != 0 && ((v < 0) == neg), "a(" + std::to_string(q) + ")=" + v.str(),
                                   neg ? "negative" : "positive");
                        }

                    // necklace form, a = (n/d) (x^d-1)/(x^n-1) ((-1)^n/x^{n/2})^{k-2}
                    //                     * M_{n/d}((-x^{n/2})^{k-2}),
                    // checked at x = s^2 so x^{n/2} = s^n stays integral.  The
                    // substitution m = de turns the defining Mobius sum into
                    // (n/d) M_{n/d}; the n/d factor compensates the 1/r inside M_r.
                    RatPoly M = necklace_poly(n / d);
                    for (std::uint64_t s : {2, 3, 4, 5, 6}) {
                        BigInt x = BigInt(s) * s;
                        BigInt sn = bigpow(BigInt(s), n);     // x^{n/2}
                        BigInt u = bigpow(BigInt(-sn), k - 2);  // (-x^{n/2})^{k-2}
                        BigInt mid = (std::uint64_t(n) * (k - 2)) % 2 ? -1 : 1;  // (-1)^{n(k-2)}
                        BigRat rhs = BigRat(BigInt(n / d) * (bigpow(x, d) - 1), bigpow(x, n) - 1) *
                                     BigRat(mid, bigpow(sn, k - 2)) * BigRat(M.num.eval(u), M.den);
                        expect_eq(cr, BigRat(apol.eval(x)), rhs);
                    }
                });
            }
}

// ---------------------------------------------------------- suite: indchar

// Induced-from-subfield-torus characters on GL_2: closed form against group
// summation for every element, every character of the torus, and two
// primitive-element embeddings.
inline void suite_indchar(Runner& r) {
    for (std::uint32_t p : {2, 3}) {
        FieldTower tw(p, 1, 2);
        // two generators of F_{q^2} over F_q: gamma and another primitive element
        elem g1 = tw.subfield_generator(2);
        elem g2 = tw.pow(g1, static_cast<std::int64_t>(p));  // conjugate, also primitive
        std::vector<MatSub> gl = gl_enumerate(tw, 2);
        for (std::uint32_t ell : {1u, 2u}) {
            std::uint64_t chars = tw.subfield_card(ell) - 1;
            for (std::uint64_t c = 0; c < chars; ++c) {
                MultChar th = make_mult_char(tw, ell, c);
                int which = 0;
                for (elem gen : {g1, g2}) {
                    ++which;
                    r.check("induced-char",
                            {{"q", p}, {"ell", ell}, {"c", c}, {"basis", which}},
                            [&](CheckResult& cr) {
                                BasisCoords bc = make_basis_coords(tw, 2, gen);
                                for (const MatSub& s : gl)
                                    expect_eq(cr, induced_char_closed(tw, 2, ell, th, s),
                                              induced_char_bruteforce(tw, 2, ell, th, s, bc));
                            });
                }
            }
        }
    }
}

// -------------------------------------------------------------- suite: dim

// Dimension at the identity, once per character orbit, against the closed
// product; plus the Gauss-sum rank identity at this (q, n).
inline void suite_dim(Runner& r, const FieldTower& tw, const RunConfig& cfg,
                      const std::vector<std::uint64_t>& thetas, elem twist) {
    r.check("gauss-rank-sum", {{"q", tw.q()}, {"n", cfg.n}}, [&](CheckResult& cr) {
        RankSumCheck rs = gauss_rank_sum_check(tw, make_additive_char(tw, twist), cfg.n);
        if (!rs.ok) expect(cr, false, rs.lhs.str(), rs.rhs.str());
    });
    if (cfg.k < 2) {
        r.check("dimension", {{"n", cfg.n}, {"k", cfg.k}}, [&](CheckResult&) {
            throw guard_error("dimension formula needs k >= 2");
        });
        return;
    }
    MatSub id = mat_identity(tw, cfg.n);
    GreenClassData cls;
    std::vector<std::int64_t> counts;
    bool have_counts = false;
    for (std::uint64_t c : thetas)
        r.check("dimension", {{"theta", c}}, [&](CheckResult& cr) {
            JacquetConfig jc =
                make_jacquet_config(tw, cfg.n, cfg.k, c, twist, cfg.budget, cfg.threads);
            if (!have_counts) {
                cls = classify(tw, id);
                counts = jacquet_counts(jc, id, cls);
                have_counts = true;
            }
            CycInt dim = CycInt::from_int(cyc_modulus(tw), jacquet_dim(jc));
            expect_eq(cr, twisted_char_from_counts(jc, cls, counts), dim);
            expect_eq(cr, twisted_char_closed(jc, id), dim);
        });
}

// ------------------------------------------------------------- suite: char

// The case formula against brute force, once per character orbit, across the
// element table (exhaustive or per class).
inline void suite_char(Runner& r, const FieldTower& tw, const RunConfig& cfg,
                       const std::vector<std::uint64_t>& thetas, elem twist) {
    if (cfg.k < 2) {
        r.check("case-formula", {{"n", cfg.n}, {"k", cfg.k}}, [&](CheckResult&) {
            throw guard_error("case formula needs k >= 2");
        });
        return;
    }
    std::vector<CharEntry> entries;
    bool exhaustive = false;
    std::string guard_reason;
    try {
        JacquetConfig jc =
            make_jacquet_config(tw, cfg.n, cfg.k, thetas[0], twist, cfg.budget, cfg.threads);
        entries = char_entries(jc, exhaustive);
    } catch (const guard_error& e) {
        guard_reason = e.what();
    }
    for (std::uint64_t c : thetas)
        r.check("case-formula",
                {{"theta", c}, {"elements", exhaustive ? "all" : "class-reps"}},
                [&](CheckResult& cr) {
                    if (!guard_reason.empty()) throw guard_error(guard_reason);
                    JacquetConfig jc =
                        make_jacquet_config(tw, cfg.n, cfg.k, c, twist, cfg.budget, cfg.threads);
                    for (const CharEntry& e : entries) {
                        CycInt lhs = entry_bruteforce(jc, e);
                        CycInt rhs = twisted_char_closed(jc, e.g);
                        if (lhs != rhs) {
                            cr.params["failed-g"] = e.g.e;
                            expect_eq(cr, lhs, rhs);
                            return;
                        }
                    }
                });
}

// ----------------------------------------------------------- suite: decomp

// Pointwise decomposition into induced characters with the a_{k;n,ell}
// coefficients; at k = 2 the sum must collapse to the single ell = n term.
inline void suite_decomp(Runner& r, const FieldTower& tw, const RunConfig& cfg,
                         const std::vector<std::uint64_t>& thetas, elem twist) {
    if (cfg.k < 2) {
        r.check("decomposition", {{"n", cfg.n}, {"k", cfg.k}}, [&](CheckResult&) {
            throw guard_error("decomposition needs k >= 2");
        });
        return;
    }
    std::vector<CharEntry> entries;
    bool exhaustive = false;
    std::string guard_reason;
    try {
        JacquetConfig jc =
            make_jacquet_config(tw, cfg.n, cfg.k, thetas[0], twist, cfg.budget, cfg.threads);
        entries = char_entries(jc, exhaustive);
    } catch (const guard_error& e) {
        guard_reason = e.what();
    }
    std::vector<std::uint64_t> ells = divisors(cfg.n);
    std::vector<BigInt> coef;
    for (std::uint64_t ell : ells)
        coef.push_back(a_value(cfg.k, cfg.n, static_cast<std::uint32_t>(ell), tw.q()));
    for (std::uint64_t c : thetas)
        r.check("decomposition",
                {{"theta", c}, {"elements", exhaustive ? "all" : "class-reps"}},
                [&](CheckResult& cr) {
                    if (!guard_reason.empty()) throw guard_error(guard_reason);
                    JacquetConfig jc =
                        make_jacquet_config(tw, cfg.n, cfg.k, c, twist, cfg.budget, cfg.threads);
                    for (const CharEntry& e : entries) {
                        CycInt lhs = entry_bruteforce(jc, e);
                        CycInt rhs(cyc_modulus(tw));
                        for (std::size_t i = 0; i < ells.size(); ++i)
                            rhs += induced_char_closed(jc, static_cast<std::uint32_t>(ells[i]), e.g)
                                       .scaled(coef[i]);
                        if (lhs != rhs) {
                            cr.params["failed-g"] = e.g.e;
                            expect_eq(cr, lhs, rhs);
                            return;
                        }
                        if (cfg.k == 2) {
                            CycInt single = induced_char_closed(jc, cfg.n, e.g);
                            if (lhs != single) {
                                cr.params["failed-g"] = e.g.e;
                                expect_eq(cr, lhs, single);
                                return;
                            }
                        }
                    }
                });
}

// -------------------------------------------------------- suite: steinberg

// Factorization through the cuspidal character of GL_n and a Steinberg
// power: brute force against Theta_{theta|F_{q^n}}(g) * St(g)^{k-1} with St
// counted from invariant flags, when the restriction is regular.  The flag
// count is also compared with the closed Steinberg value at semisimple
// elements from subfields.
inline void suite_steinberg(Runner& r, const FieldTower& tw, const RunConfig& cfg,
                            const std::vector<std::uint64_t>& thetas, elem twist) {
    std::vector<CharEntry> entries;
    bool exhaustive = false;
    std::string guard_reason;
    try {
        JacquetConfig jc =
            make_jacquet_config(tw, cfg.n, cfg.k, thetas[0], twist, cfg.budget, cfg.threads);
        entries = char_entries(jc, exhaustive);
    } catch (const guard_error& e) {
        guard_reason = e.what();
    }

    r.check("steinberg-flags-closed", {{"q", tw.q()}, {"n", cfg.n}}, [&](CheckResult& cr) {
        if (!guard_reason.empty()) throw guard_error(guard_reason);
        for (const CharEntry& e : entries) {
            if (!e.cls.from_field || e.cls.t != cfg.n / e.cls.d) continue;
            expect_eq(cr, steinberg_via_flags(tw, e.g), steinberg_closed(tw, e.g));
        }
    });

    for (std::uint64_t c : thetas)
        r.check("steinberg-factorization",
                {{"theta", c}, {"elements", exhaustive ? "all" : "class-reps"}},
                [&](CheckResult& cr) {
                    if (!guard_reason.empty()) throw guard_error(guard_reason);
                    MultChar th = make_mult_char(tw, cfg.n * cfg.k, c);
                    MultChar thn = restrict_char(th, cfg.n);
                    if (!is_regular(thn))
                        throw guard_error("theta restricted to F_{q^n} is not regular");
                    JacquetConfig jc =
                        make_jacquet_config(tw, cfg.n, cfg.k, c, twist, cfg.budget, cfg.threads);
                    GreenEvaluator ev(tw, thn);
                    for (const CharEntry& e : entries) {
                        CycInt lhs = entry_bruteforce(jc, e);
                        BigInt stp = bigpow(steinberg_via_flags(tw, e.g), cfg.k - 1);
                        CycInt rhs = ev.value(e.g).scaled(stp);
                        if (lhs != rhs) {
                            cr.params["failed-g"] = e.g.e;
                            expect_eq(cr, lhs, rhs);
                            return;
                        }
                    }
                });
}

// ------------------------------------------------------------ suite: props

namespace detail {

inline elem sample_elem(const FieldTower& tw, std::mt19937_64& rng) {
    return static_cast<elem>(rng() % tw.card());
}

// Entries drawn from the base field F_q: these matrices live in GL_n(F_q).
inline MatSub sample_invertible(const FieldTower& tw, std::uint32_t n, std::mt19937_64& rng) {
    const std::vector<elem>& fq = tw.subfield(1);
    for (;;) {
        MatSub g(n, n);
        for (elem& x : g.e) x = fq[rng() % fq.size()];
        if (mat_rank(tw, g) == n) return g;
    }
}

}  // namespace detail

// Structural properties: field axioms on sampled triples, the cyclotomic
// factorization, Green invariances, memoized-vs-fresh agreement, the psi
// stabilizer sweep, psi-twist independence, and agreement of the three
// brute-force routes.
inline void suite_props(Runner& r, const FieldTower& tw, const RunConfig& cfg,
                        const std::vector<std::uint64_t>& thetas, elem twist) {
    r.check("field-axioms", {{"q", tw.q()}, {"m", tw.m()}, {"samples", 300}},
            [&](CheckResult& cr) {
                std::mt19937_64 rng(cfg.seed);
                for (int i = 0; i < 300 && cr.status.empty(); ++i) {
                    elem x = detail::sample_elem(tw, rng);
                    elem y = detail::sample_elem(tw, rng);
                    elem z = detail::sample_elem(tw, rng);
                    expect(cr, tw.add(x, y) == tw.add(y, x), "x+y", "y+x");
                    expect(cr, tw.mul(x, y) == tw.mul(y, x), "x*y", "y*x");
                    expect(cr, tw.add(tw.add(x, y), z) == tw.add(x, tw.add(y, z)), "(x+y)+z",
                           "x+(y+z)");
                    expect(cr, tw.mul(tw.mul(x, y), z) == tw.mul(x, tw.mul(y, z)), "(x*y)*z",
                           "x*(y*z)");
                    expect(cr, tw.mul(x, tw.add(y, z)) == tw.add(tw.mul(x, y), tw.mul(x, z)),
                           "x*(y+z)", "x*y+x*z");
                    expect(cr, tw.add(x, tw.neg(x)) == tw.zero(), "x+(-x)", "0");
                    if (x != 0) expect(cr, tw.mul(x, tw.inv(x)) == tw.one(), "x*x^-1", "1");
                    expect(cr, tw.frobenius(tw.add(x, y)) ==
                                   tw.add(tw.frobenius(x), tw.frobenius(y)),
                           "(x+y)^q", "x^q+y^q");
                }
            });

    r.check("cyclotomic-product", {{"max-N", 64}}, [&](CheckResult& cr) {
        for (std::uint64_t N = 1; N <= 64 && cr.status.empty(); ++N) {
            IntPoly prod = IntPoly::constant(1);
            for (std::uint64_t d : divisors(N)) prod = prod * cyclotomic_poly(d);
            expect_eq(cr, prod, xn_minus_1(N));
        }
    });

    const std::uint32_t m = tw.m();
    MultChar th0 = make_mult_char(tw, m, thetas[0]);
    r.check("green-conjugation", {{"theta", thetas[0]}, {"samples", 60}}, [&](CheckResult& cr) {
        std::mt19937_64 rng(cfg.seed + 1);
        for (int i = 0; i < 60 && cr.status.empty(); ++i) {
            MatSub g = detail::sample_invertible(tw, m, rng);
            MatSub x = detail::sample_invertible(tw, m, rng);
            MatSub xg = mat_mul(tw, mat_mul(tw, x, g), mat_inverse(tw, x));
            expect_eq(cr, green_value(th0, xg), green_value(th0, g));
        }
    });

    r.check("green-central-twist", {{"theta", thetas[0]}, {"samples", 40}}, [&](CheckResult& cr) {
        std::mt19937_64 rng(cfg.seed + 2);
        for (int i = 0; i < 40 && cr.status.empty(); ++i) {
            MatSub g = detail::sample_invertible(tw, m, rng);
            for (elem z : tw.subfield(1)) {
                if (z == 0) continue;
                expect_eq(cr, green_value(th0, mat_scale(tw, z, g)),
                          theta_value(th0, z) * green_value(th0, g));
            }
        }
    });

    r.check("green-memo", {{"theta", thetas[0]}, {"samples", 60}}, [&](CheckResult& cr) {
        std::mt19937_64 rng(cfg.seed + 3);
        GreenEvaluator ev(tw, th0);
        for (int i = 0; i < 60 && cr.status.empty(); ++i) {
            MatSub g = detail::sample_invertible(tw, m, rng);
            expect_eq(cr, ev.value(g), green_value(th0, g));
        }
    });

    {
        struct Triple {
            std::uint32_t n, k, p;
        };
        for (Triple t : {Triple{1, 2, 2}, Triple{1, 2, 3}, Triple{2, 2, 2}})
            r.check("psi-stabilizer", {{"n", t.n}, {"k", t.k}, {"q", t.p}}, [&](CheckResult& cr) {
                FieldTower mini(t.p, 1, t.n * t.k);
                bool ok = stabilizer_check(mini, t.n, t.k, make_additive_char(mini, mini.one()));
                expect(cr, ok, "stabilizer set", "diagonal tuples");
            });
    }

    r.check("twist-independence", {{"q", 3}, {"n", 2}, {"k", 2}, {"theta", 1}},
            [&](CheckResult& cr) {
                FieldTower mini(3, 1, 4);
                elem b2 = mini.subfield_generator(1);  // the nontrivial twist: b = 2
                JacquetConfig c1 = make_jacquet_config(mini, 2, 2, 1, mini.one());
                JacquetConfig c2 = make_jacquet_config(mini, 2, 2, 1, b2);
                for (const MatSub& g : gl_enumerate(mini, 2)) {
                    CycInt v1 = twisted_char_bruteforce(c1, g);
                    expect_eq(cr, v1, twisted_char_bruteforce(c2, g));
                    expect_eq(cr, v1, twisted_char_closed(c1, g));
                    if (!cr.status.empty()) return;
                }
            });

    {
        struct Conf {
            std::uint32_t p, n, k;
        };
        for (Conf c : {Conf{2, 2, 2}, Conf{3, 2, 2}})
            r.check("route-agreement", {{"q", c.p}, {"n", c.n}, {"k", c.k}, {"samples", 4}},
                    [&](CheckResult& cr) {
                        FieldTower mini(c.p, 1, c.n * c.k);
                        std::uint64_t rep = regular_orbit_reps(mini, c.n * c.k).front();
                        JacquetConfig jc = make_jacquet_config(mini, c.n, c.k, rep, mini.one());
                        std::mt19937_64 rng(cfg.seed + 4);
                        for (int i = 0; i < 4 && cr.status.empty(); ++i) {
                            MatSub g = detail::sample_invertible(mini, c.n, rng);
                            CycInt direct = twisted_char_bruteforce(jc, g);
                            expect_eq(cr, direct, twisted_char_via_products(jc, g));
                            expect_eq(cr, direct, twisted_char_via_shifted_psi(jc, g));
                        }
                    });
    }
}

// ---------------------------------------------------------------- dispatch

inline VerificationRun run_suite(const RunConfig& cfg, const std::string& suite) {
    static const std::set<std::string> known = {"fk",  "chu",  "landsberg", "lemand", "indchar",
                                                "dim", "char", "decomp",    "steinberg", "all"};
    if (!known.count(suite)) throw std::invalid_argument("unknown suite: " + suite);
    VerificationRun out;
    out.cfg = cfg;
    out.suite = suite;
    Runner r(out);

    bool all = suite == "all";
    if (all || suite == "fk") suite_fk(r);
    if (all || suite == "chu") suite_chu(r);
    if (all || suite == "landsberg") suite_landsberg(r);
    if (all || suite == "lemand") suite_lemand(r);
    if (all || suite == "indchar") suite_indchar(r);

    if (all || suite == "dim" || suite == "char" || suite == "decomp" || suite == "steinberg") {
        if (cfg.n == 0 || cfg.k == 0) throw std::invalid_argument("config needs n, k >= 1");
        FieldTower tw(cfg.p, cfg.a, cfg.n * cfg.k);
        std::vector<std::uint64_t> thetas = resolve_thetas(tw, cfg.n * cfg.k, cfg.theta);
        elem twist = resolve_twist(tw, cfg.twist);
        if (all || suite == "dim") suite_dim(r, tw, cfg, thetas, twist);
        if (all || suite == "char") suite_char(r, tw, cfg, thetas, twist);
        if (all || suite == "decomp") suite_decomp(r, tw, cfg, thetas, twist);
        if (all || suite == "steinberg") suite_steinberg(r, tw, cfg, thetas, twist);
        if (all) suite_props(r, tw, cfg, thetas, twist);
    }
    return out;
}

// ------------------------------------------------------------- char tables

struct CharTableRow {
    GreenClassData cls;
    std::uint64_t class_size = 0;
    CycInt brute, closed;
    bool match = false;
};

// One row per class of GL_n(F_q): both character computations side by side.
inline std::vector<CharTableRow> char_table(const JacquetConfig& cfg) {
    std::vector<CharTableRow> rows;
    for (const ClassRep& rep : class_reps(*cfg.tw, cfg.n)) {
        CharTableRow row;
        row.class_size = rep.count;
        row.brute = twisted_char_bruteforce(cfg, rep.g);
        row.closed = twisted_char_closed(cfg, rep.g);
        row.match = row.brute == row.closed;
        row.cls = rep.cls;
        rows.push_back(std::move(row));
    }
    return rows;
}

// Coefficient digits of a polynomial over F_q: index of each coefficient in
// the [0, 1, g, g^2, ...] enumeration of F_q.
inline std::vector<std::uint32_t> poly_digits(const FieldTower& tw, const FieldPoly& f) {
    const std::vector<elem>& fq = tw.subfield(1);
    std::vector<std::uint32_t> out;
    for (elem c : f) {
        std::uint32_t digit = UINT32_MAX;
        for (std::uint32_t i = 0; i < fq.size(); ++i)
            if (fq[i] == c) {
                digit = i;
                break;
            }
        if (digit == UINT32_MAX) throw std::logic_error("poly_digits: coefficient outside F_q");
        out.push_back(digit);
    }
    return out;
}

inline std::vector<std::string> cyc_coeff_strings(const CycInt& x) {
    std::size_t deg = static_cast<std::size_t>(cyclotomic_poly(x.modulus()).degree());
    std::vector<std::string> out;
    out.reserve(deg);
    for (std::size_t i = 0; i < deg; ++i) out.push_back(x.coeffs()[i].str());
    return out;
}

inline nlohmann::json char_table_json(const JacquetConfig& cfg,
                                      const std::vector<CharTableRow>& rows) {
    nlohmann::json jrows = nlohmann::json::array();
    for (const CharTableRow& row : rows) {
        nlohmann::json jr;
        jr["charpoly"] = poly_digits(*cfg.tw, row.cls.charpoly);
        jr["class-d"] = row.cls.from_field ? row.cls.d : 0;
        jr["class-t"] = row.cls.from_field ? row.cls.t : 0;
        jr["class-size"] = row.class_size;
        jr["brute"] = cyc_coeff_strings(row.brute);
        jr["closed"] = cyc_coeff_strings(row.closed);
        jr["match"] = row.match;
        jrows.push_back(std::move(jr));
    }
    nlohmann::json out;
    out["config"] = {{"p", cfg.tw->p()},
                     {"a", cfg.tw->a()},
                     {"n", cfg.n},
                     {"k", cfg.k},
                     {"theta", cfg.theta.c},
                     {"twist", cfg.psi.b}};
    out["rows"] = std::move(jrows);
    return out;
}

inline std::string char_table_csv(const JacquetConfig& cfg,
                                  const std::vector<CharTableRow>& rows) {
    std::ostringstream os;
    auto join = [](const auto& v) {
        std::ostringstream cell;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) cell << ';';
            cell << v[i];
        }
        return cell.str();
    };
    os << "charpoly-coeffs,class-d,class-t,class-size,brute,closed,match\n";
    for (const CharTableRow& row : rows) {
        os << join(poly_digits(*cfg.tw, row.cls.charpoly)) << ','
           << (row.cls.from_field ? row.cls.d : 0) << ',' << (row.cls.from_field ? row.cls.t : 0)
           << ',' << row.class_size << ',' << join(cyc_coeff_strings(row.brute)) << ','
           << join(cyc_coeff_strings(row.closed)) << ',' << (row.match ? "true" : "false")
           << '\n';
    }
    return os.str();
}

// ------------------------------------------------------------------- output

inline void write_file_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp);
        f << content;
        if (!f) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace jacquetlab
