// Command-line surface for the eigenfactor library: coefficient queries, tau
// values, the factoring reduction with traces, empirical scans, and a
// self-test that reproduces the bundled fixtures end to end.
//
// Exit codes: 0 success, 1 reduction/scan failure, 2 usage or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eigenfactor/eigenfactor.hpp"

namespace ef = eigenfactor;

namespace {

constexpr std::uint64_t kDefaultGuard = 10'000'000;

std::string approx_to_string(const ef::ComplexApprox& a, unsigned digits) {
    std::string out = ef::detail::format_fixed(a.value.re, digits);
    mpf_class aim(0, a.value.precision());
    mpf_abs(aim.get_mpf_t(), a.value.im.get_mpf_t());
    if (aim > a.error_bound) {
        out += sgn(a.value.im) > 0 ? " + " : " - ";
        out += ef::detail::format_fixed(aim, digits);
        out += "*i";
    }
    out += " (err <= 1e-" + std::to_string(digits) + ")";
    return out;
}

mpz_class parse_positive_integer(const std::string& text) {
    mpz_class n;
    if (mpz_set_str(n.get_mpz_t(), text.c_str(), 10) != 0 || n < 1)
        throw ef::ParseError("expected a positive integer, got '" + text + "'");
    return n;
}

std::unique_ptr<ef::CoefficientOracle> make_oracle(
    const std::string& kind, const std::shared_ptr<const ef::EigenformSpec>& spec,
    std::size_t qexp_truncation, std::uint64_t guard) {
    if (kind == "recurrence") return std::make_unique<ef::RecurrenceOracle>(spec);
    if (spec->field->degree() != 1)
        throw ef::UnsupportedInput(
            "the q-expansion oracle computes Delta coefficients and needs a degree-1 field");
    return std::make_unique<ef::QexpOracle>(qexp_truncation, guard);
}

int run_tau(std::uint64_t n, std::uint64_t guard) {
    if (n >= guard)
        throw ef::GuardExceeded("tau(" + std::to_string(n) + ") needs truncation " +
                                std::to_string(n) + " + 1, beyond the guard " +
                                std::to_string(guard));
    const std::uint64_t T = n + 1 < 2 ? 2 : n + 1;
    ef::TruncatedSeries d = ef::delta_qexp(static_cast<std::size_t>(T), guard);
    std::cout << d.at(static_cast<std::size_t>(n)).get_str() << "\n";
    return 0;
}

int run_coeff(const std::string& spec_path, const std::string& n_text, unsigned precision) {
    auto spec = ef::load_spec_file(spec_path);
    const mpz_class n = parse_positive_integer(n_text);
    ef::AlgebraicNumber value = spec->field->zero();
    try {
        value = ef::recurrence_extend(*spec, n);
    } catch (const ef::UnknownPrimeFactor& e) {
        std::cerr << "error: the recurrence oracle only reaches indices whose prime factors "
                     "appear in the spec table ("
                  << e.what() << ")\n";
        return 2;
    }
    std::cout << value.to_string() << "\n";
    std::cout << ef::min_poly_of(value).to_string() << "\n";
    std::cout << approx_to_string(ef::embed(value, precision), precision) << "\n";
    return 0;
}

int run_factor(const std::string& spec_path, const std::string& n_text, const std::string& oracle,
               bool trace, const std::string& trace_out, std::uint64_t guard) {
    auto spec = ef::load_spec_file(spec_path);
    const mpz_class n = parse_positive_integer(n_text);
    std::size_t T = 2;
    if (oracle == "qexp") {
        mpz_class needed = n * n + 1;
        if (needed > static_cast<unsigned long>(guard))
            throw ef::GuardExceeded("q-expansion oracle would need truncation " + needed.get_str() +
                                    ", beyond the guard " + std::to_string(guard));
        T = static_cast<std::size_t>(needed.get_ui());
    }
    auto orc = make_oracle(oracle, spec, T, guard);
    ef::FactorOutcome out = ef::factor_semiprime(n, *spec, *orc);
    if (trace || !trace_out.empty()) {
        const std::string j = out.trace.to_json();
        if (!trace_out.empty()) {
            std::ofstream f(trace_out);
            if (!f) {
                std::cerr << "error: cannot write trace to '" << trace_out << "'\n";
                return 2;
            }
            f << j << "\n";
        } else {
            std::cerr << j << "\n";
        }
    }
    if (out.factored()) {
        std::cout << "factor: " << out.value.get_str() << "\n";
        return 0;
    }
    std::cout << "failure: " << ef::to_string(out.kind);
    if (!out.reason.empty()) std::cout << " (" << out.reason << ")";
    std::cout << "\n";
    return 1;
}

int run_delta_qexp(std::uint64_t T, std::uint64_t guard, const std::string& out_path) {
    ef::TruncatedSeries d = ef::delta_qexp(static_cast<std::size_t>(T), guard);
    std::ostream* os = &std::cout;
    std::ofstream f;
    if (!out_path.empty()) {
        f.open(out_path);
        if (!f) {
            std::cerr << "error: cannot open '" << out_path << "'\n";
            return 2;
        }
        os = &f;
    }
    for (std::size_t i = 0; i < d.truncation(); ++i) *os << i << "\t" << d.at(i).get_str() << "\n";
    return 0;
}

int run_scan_zeros(const std::string& spec_path, std::uint64_t X, const std::string& oracle,
                   std::uint64_t guard) {
    auto spec = ef::load_spec_file(spec_path);
    auto orc = make_oracle(oracle, spec, static_cast<std::size_t>(X + 1), guard);
    ef::VanishingScan scan = ef::scan_vanishing(*spec, *orc, static_cast<unsigned long>(X));
    std::cout << "count: " << scan.count << "\n";
    for (unsigned long p : scan.primes) std::cout << p << "\n";
    return 0;
}

int run_scan_nonordinary(const std::string& spec_path, std::uint64_t X, const std::string& oracle,
                         std::uint64_t guard) {
    auto spec = ef::load_spec_file(spec_path);
    auto orc = make_oracle(oracle, spec, static_cast<std::size_t>(X + 1), guard);
    for (unsigned long p : ef::scan_nonordinary(*spec, *orc, static_cast<unsigned long>(X)))
        std::cout << p << "\n";
    return 0;
}

std::vector<unsigned long> fuzz_pool(const ef::EigenformSpec& spec, unsigned long pool_max) {
    std::vector<unsigned long> pool;
    for (const auto& [p, ap] : spec.prime_coeffs) {
        (void)ap;
        if (p == 2 || p > pool_max) continue;
        if (gcd(mpz_class(p), mpz_class(spec.level)) != 1) continue;
        pool.push_back(p);
    }
    return pool;
}

int run_fuzz(const std::string& spec_path, std::uint64_t trials, std::uint64_t seed,
             unsigned long pool_max) {
    auto spec = ef::load_spec_file(spec_path);
    ef::RecurrenceOracle oracle(spec);
    ef::FuzzStats stats = ef::reduction_fuzz(*spec, oracle, fuzz_pool(*spec, pool_max), trials, seed);
    std::cout << stats.summary();
    return stats.all_ok() ? 0 : 1;
}

std::string locate_data_dir(const std::string& hint) {
    std::vector<std::string> candidates;
    if (!hint.empty()) candidates.push_back(hint);
    candidates.push_back("data");
    candidates.push_back("../data");
    for (const auto& dir : candidates) {
        std::filesystem::path p(dir);
        if (std::filesystem::exists(p / "delta.json") && std::filesystem::exists(p / "g29.json"))
            return p.string();
    }
    throw ef::ParseError("cannot locate the bundled spec fixtures (delta.json, g29.json); "
                         "pass --data DIR");
}

int run_selftest(bool quick, const std::string& data_hint) {
    const std::string dir = locate_data_dir(data_hint);
    const std::string delta_path = dir + "/delta.json";
    const std::string g29_path = dir + "/g29.json";

    struct Check {
        std::string name;
        std::function<void()> body;
    };

    std::vector<Check> checks;

    checks.push_back({"example-1", [&] {
        auto spec = ef::load_spec_file(delta_path);
        ef::QexpOracle oracle(226);
        if (oracle.series().at(15) != 1217160) throw ef::Error("tau(15) mismatch");
        if (oracle.series().at(225) != mpz_class("2897808426675")) throw ef::Error("tau(225) mismatch");
        const mpq_class A(oracle.series().at(15));
        const mpq_class B(oracle.series().at(225));
        mpz_class nk;
        mpz_ui_pow_ui(nk.get_mpz_t(), 15, 11);
        mpq_class alpha2 = A * A / mpq_class(nk);
        mpq_class beta = B / mpq_class(nk);
        alpha2.canonicalize();
        beta.canonicalize();
        if (alpha2 != mpq_class("81288256/474609375")) throw ef::Error("alpha^2 mismatch");
        if (beta != mpq_class("1431016507/4271484375")) throw ef::Error("beta mismatch");
        ef::FactorOutcome out = ef::factor_semiprime(15, *spec, oracle);
        if (out.kind != ef::FactorOutcome::Kind::Factor || out.value != 5)
            throw ef::Error("reduction did not return 5");
        if (out.trace.candidates.at(0).rational_value() != mpq_class("933156/1953125"))
            throw ef::Error("candidate x^2 mismatch");
        if (out.trace.denominators.at(0) != 1953125 || out.trace.gcds.at(0) != 5)
            throw ef::Error("denominator/gcd mismatch");
    }});

    checks.push_back({"example-2", [&] {
        auto spec = ef::load_spec_file(g29_path);
        const auto K = spec->field;
        auto el = [&](const std::string& s) { return ef::parse_algebraic(s, K); };
        if (ef::recurrence_extend(*spec, 4) != el("(-7) + (-2)*g")) throw ef::Error("a(4) mismatch");
        if (ef::recurrence_extend(*spec, 15) != el("(-4) + (-5)*g")) throw ef::Error("a(15) mismatch");
        if (ef::recurrence_extend(*spec, 225) != el("(-6168) + (-2680)*g"))
            throw ef::Error("a(225) mismatch");
        ef::RecurrenceOracle oracle(spec);
        ef::FactorOutcome out = ef::factor_semiprime(15, *spec, oracle);
        if (out.kind != ef::FactorOutcome::Kind::Factor || (out.value != 3 && out.value != 5))
            throw ef::Error("reduction did not return 3 or 5");
        const ef::AlgebraicNumber c1 = el("(73/27) + (10/9)*g");
        const ef::AlgebraicNumber c2 = el("(17/125) + (-8/25)*g");
        const auto& cand = out.trace.candidates;
        if (cand.size() != 2 || !((cand[0] == c1 && cand[1] == c2) || (cand[0] == c2 && cand[1] == c1)))
            throw ef::Error("candidates mismatch");
    }});

    checks.push_back({"oracle-equivalence", [&] {
        auto spec = ef::load_spec_file(delta_path);
        ef::RecurrenceOracle rec(spec);
        ef::QexpOracle qexp(1001);
        for (mpz_class n = 1; n <= 1000; ++n) {
            if (!rec.supports(n)) continue;
            if (rec.coeff(n) != qexp.coeff(n))
                throw ef::Error("recurrence and q-expansion disagree at n = " + n.get_str());
        }
    }});

    checks.push_back({"fuzz-delta", [&] {
        auto spec = ef::load_spec_file(delta_path);
        ef::RecurrenceOracle oracle(spec);
        ef::FuzzStats stats = ef::reduction_fuzz(*spec, oracle, fuzz_pool(*spec, 97), 200, 12345);
        if (!stats.all_ok())
            throw ef::Error("fuzz statistics not clean: " + std::to_string(stats.successes) + "/" +
                            std::to_string(stats.trials_run) + " successes, " +
                            std::to_string(stats.violations) + " violations");
    }});

    if (!quick) {
        checks.push_back({"vanishing-scan-10k", [&] {
            auto spec = ef::load_spec_file(delta_path);
            ef::QexpOracle oracle(10001);
            ef::VanishingScan scan = ef::scan_vanishing(*spec, oracle, 10000);
            if (scan.count != 0)
                throw ef::Error("found " + std::to_string(scan.count) + " vanishing primes");
        }});
    }

    std::size_t passed = 0;
    std::string first_failure;
    for (const auto& check : checks) {
        try {
            check.body();
            std::cout << "ok " << check.name << "\n";
            ++passed;
        } catch (const std::exception& e) {
            std::cout << "FAIL " << check.name << ": " << e.what() << "\n";
            if (first_failure.empty()) first_failure = check.name;
        }
    }
    std::cout << "selftest: " << passed << "/" << checks.size() << " checks passed\n";
    if (!first_failure.empty()) {
        std::cout << "first failure: " << first_failure << "\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hecke eigenform coefficient toolkit: exact q-expansions and the "
                 "semiprime factoring reduction"};
    app.require_subcommand(1);
    app.fallthrough();  // accept --guard after the subcommand name too

    std::uint64_t guard = kDefaultGuard;
    app.add_option("--guard", guard, "truncation guard for q-expansion work")
        ->capture_default_str();

    // tau
    auto* tau_cmd = app.add_subcommand("tau", "print tau(n), the n-th Delta coefficient");
    std::uint64_t tau_n = 1;
    tau_cmd->add_option("n", tau_n, "index (>= 1)")->required()->check(CLI::PositiveNumber);

    // coeff
    auto* coeff_cmd =
        app.add_subcommand("coeff", "print a(n), its minimal polynomial, and an approximation");
    std::string coeff_spec, coeff_n;
    unsigned coeff_precision = 30;
    coeff_cmd->add_option("spec", coeff_spec, "eigenform spec file")->required();
    coeff_cmd->add_option("n", coeff_n, "index (>= 1)")->required();
    coeff_cmd->add_option("--precision", coeff_precision, "approximation digits")
        ->capture_default_str()
        ->check(CLI::Range(1u, 1000u));

    // factor
    auto* factor_cmd = app.add_subcommand("factor", "run the factoring reduction on n");
    std::string factor_spec, factor_n, factor_oracle = "recurrence", factor_trace_out;
    bool factor_trace = false;
    factor_cmd->add_option("spec", factor_spec, "eigenform spec file")->required();
    factor_cmd->add_option("n", factor_n, "odd integer >= 3")->required();
    factor_cmd->add_option("--oracle", factor_oracle, "coefficient source")
        ->check(CLI::IsMember({"qexp", "recurrence"}))
        ->capture_default_str();
    factor_cmd->add_flag("--trace", factor_trace, "emit the reduction trace JSON on stderr");
    factor_cmd->add_option("--trace-out", factor_trace_out, "write the trace JSON to a file");

    // delta-qexp
    auto* dump_cmd = app.add_subcommand("delta-qexp", "dump the Delta q-expansion, one "
                                                      "'n<TAB>value' line per coefficient");
    std::uint64_t dump_T = 2;
    std::string dump_out;
    dump_cmd->add_option("T", dump_T, "truncation (>= 2)")->required();
    dump_cmd->add_option("--out", dump_out, "write to a file instead of stdout");

    // scan-zeros
    auto* zeros_cmd = app.add_subcommand("scan-zeros", "count primes p <= X with a(p) = 0");
    std::string zeros_spec, zeros_oracle = "qexp";
    std::uint64_t zeros_X = 10;
    zeros_cmd->add_option("spec", zeros_spec, "eigenform spec file")->required();
    zeros_cmd->add_option("X", zeros_X, "scan bound")->required();
    zeros_cmd->add_option("--oracle", zeros_oracle, "coefficient source")
        ->check(CLI::IsMember({"qexp", "recurrence"}))
        ->capture_default_str();

    // scan-nonordinary
    auto* nonord_cmd =
        app.add_subcommand("scan-nonordinary", "list primes p <= X with a(p) divisible by p");
    std::string nonord_spec, nonord_oracle = "qexp";
    std::uint64_t nonord_X = 10;
    nonord_cmd->add_option("spec", nonord_spec, "eigenform spec file")->required();
    nonord_cmd->add_option("X", nonord_X, "scan bound")->required();
    nonord_cmd->add_option("--oracle", nonord_oracle, "coefficient source")
        ->check(CLI::IsMember({"qexp", "recurrence"}))
        ->capture_default_str();

    // fuzz
    auto* fuzz_cmd = app.add_subcommand("fuzz", "random semiprime sweep through the reduction");
    std::string fuzz_spec;
    std::uint64_t fuzz_trials = 200, fuzz_seed = 12345;
    unsigned long fuzz_pool_max = 97;
    fuzz_cmd->add_option("spec", fuzz_spec, "eigenform spec file")->required();
    fuzz_cmd->add_option("--trials", fuzz_trials, "number of random pairs")->capture_default_str();
    fuzz_cmd->add_option("--seed", fuzz_seed, "deterministic seed")->capture_default_str();
    fuzz_cmd->add_option("--pool-max", fuzz_pool_max, "largest pool prime")->capture_default_str();

    // selftest
    auto* selftest_cmd = app.add_subcommand("selftest", "reproduce the bundled fixtures");
    bool selftest_quick = false;
    std::string selftest_data;
    selftest_cmd->add_flag("--quick", selftest_quick, "skip the 10^4 vanishing scan");
    selftest_cmd->add_option("--data", selftest_data, "directory holding delta.json and g29.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*tau_cmd) return run_tau(tau_n, guard);
        if (*coeff_cmd) return run_coeff(coeff_spec, coeff_n, coeff_precision);
        if (*factor_cmd)
            return run_factor(factor_spec, factor_n, factor_oracle, factor_trace, factor_trace_out,
                              guard);
        if (*dump_cmd) return run_delta_qexp(dump_T, guard, dump_out);
        if (*zeros_cmd) return run_scan_zeros(zeros_spec, zeros_X, zeros_oracle, guard);
        if (*nonord_cmd) return run_scan_nonordinary(nonord_spec, nonord_X, nonord_oracle, guard);
        if (*fuzz_cmd) return run_fuzz(fuzz_spec, fuzz_trials, fuzz_seed, fuzz_pool_max);
        if (*selftest_cmd) return run_selftest(selftest_quick, selftest_data);
    } catch (const ef::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
