#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>

#include "eigenfactor/eigenfactor.hpp"
#include "oracles.hpp"

using namespace eigenfactor;

#ifndef EF_DATA_DIR
#define EF_DATA_DIR "data"
#endif

namespace {

const std::string kDataDir = EF_DATA_DIR;

std::shared_ptr<const EigenformSpec> delta_spec() {
    return load_spec_file(kDataDir + "/delta.json");
}
std::shared_ptr<const EigenformSpec> g29_spec() { return load_spec_file(kDataDir + "/g29.json"); }

// weight-12 level-1 spec over Q with a chosen prime table
std::shared_ptr<const EigenformSpec> table_spec(std::map<unsigned long, long> table,
                                                unsigned weight = 12) {
    FieldPtr Q = testoracles::rational_field();
    std::map<unsigned long, AlgebraicNumber> primes;
    for (auto [p, v] : table) primes.emplace(p, Q->from_rational(v));
    return std::make_shared<const EigenformSpec>("synthetic", weight, 1,
                                                 DirichletCharacter::trivial(1, Q), Q,
                                                 std::move(primes));
}

// hands back scripted values for n and n^2; anything else is out of range
class ScriptedOracle final : public CoefficientOracle {
public:
    ScriptedOracle(FieldPtr field, std::map<long, long> values)
        : field_(std::move(field)), values_(std::move(values)) {}
    AlgebraicNumber coeff(const mpz_class& n) const override {
        auto it = values_.find(static_cast<long>(n.get_si()));
        if (it == values_.end()) throw OutOfRange("scripted oracle has no value at " + n.get_str());
        return field_->from_rational(it->second);
    }
    bool supports(const mpz_class& n) const override {
        return values_.count(static_cast<long>(n.get_si())) != 0;
    }
    std::string domain() const override { return "scripted"; }
    const FieldPtr& field() const override { return field_; }

private:
    FieldPtr field_;
    std::map<long, long> values_;
};

}  // namespace

TEST_CASE("example 1: factoring 15 through the honest tau oracle") {
    auto spec = delta_spec();
    QexpOracle oracle(226);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    REQUIRE(out.kind == FactorOutcome::Kind::Factor);
    CHECK(out.value == 5);

    const ReductionTrace& tr = out.trace;
    CHECK(tr.A->rational_value() == 1217160);
    CHECK(tr.B->rational_value() == mpq_class("2897808426675"));
    CHECK(tr.S->rational_value() == mpq_class("7233425898300"));
    CHECK(tr.radicand->rational_value() == mpq_class("1064742072751224442890000"));
    CHECK(tr.sqrt_radicand->rational_value() == mpq_class("1031863398300"));
    REQUIRE(tr.candidates.size() == 2);
    CHECK(tr.candidates[0].rational_value() == mpq_class("933156/1953125"));
    CHECK(tr.candidates[1].rational_value() == mpq_class("784/2187"));
    CHECK(tr.denominators == std::vector<mpz_class>({1953125, 2187}));
    CHECK(tr.gcds == std::vector<mpz_class>({5, 3}));
    CHECK_FALSE(tr.odd_weight_caveat);
    CHECK_FALSE(check_trace_identities(tr, *spec).has_value());

    // the candidates are exactly tau(p)^2 / p^11 for p = 5, 3
    CHECK(tr.candidates[0].rational_value() == testoracles::frac(mpz_class(4830) * 4830, mpz_class("48828125")));
    CHECK(tr.candidates[1].rational_value() == testoracles::frac(mpz_class(252) * 252, mpz_class("177147")));
}

TEST_CASE("example 2: factoring 15 through the level-29 newform") {
    auto spec = g29_spec();
    FieldPtr K = spec->field;
    RecurrenceOracle oracle(spec);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    REQUIRE(out.kind == FactorOutcome::Kind::Factor);
    CHECK((out.value == 3 || out.value == 5));

    const AlgebraicNumber c1 = parse_algebraic("(73/27) + (10/9)*g", K);
    const AlgebraicNumber c2 = parse_algebraic("(17/125) + (-8/25)*g", K);
    REQUIRE(out.trace.candidates.size() == 2);
    const auto& cand = out.trace.candidates;
    CHECK(((cand[0] == c1 && cand[1] == c2) || (cand[0] == c2 && cand[1] == c1)));
    CHECK(out.trace.sqrt_radicand.has_value());
    CHECK((*out.trace.sqrt_radicand) * (*out.trace.sqrt_radicand) == *out.trace.radicand);

    // denominators 729 and 15625, both yielding proper factors
    CHECK(out.trace.denominators == std::vector<mpz_class>({729, 15625}));
    CHECK(out.trace.gcds == std::vector<mpz_class>({3, 5}));
    CHECK_FALSE(check_trace_identities(out.trace, *spec).has_value());
}

TEST_CASE("further composite inputs") {
    auto spec = delta_spec();
    RecurrenceOracle oracle(spec);

    FactorOutcome f21 = factor_semiprime(21, *spec, oracle);
    REQUIRE(f21.kind == FactorOutcome::Kind::Factor);
    CHECK((f21.value == 3 || f21.value == 7));
    CHECK(mpz_class(21) % f21.value == 0);

    // n = 9 is not a semiprime of distinct primes; outcome must still be sound
    FactorOutcome f9 = factor_semiprime(9, *spec, oracle);
    if (f9.kind == FactorOutcome::Kind::Factor) {
        CHECK(f9.value == 3);
    } else {
        CHECK(f9.kind != FactorOutcome::Kind::UnsupportedInput);
    }
}

TEST_CASE("level shortcut and unsupported inputs") {
    auto spec = g29_spec();
    RecurrenceOracle oracle(spec);

    // the level shortcut runs before the parity check: 58 = 2 * 29
    FactorOutcome f58 = factor_semiprime(58, *spec, oracle);
    CHECK(f58.kind == FactorOutcome::Kind::TrivialGcdWithLevel);
    CHECK(f58.value == 29);
    CHECK(f58.factored());

    FactorOutcome f87 = factor_semiprime(87, *spec, oracle);  // 3 * 29
    CHECK(f87.kind == FactorOutcome::Kind::TrivialGcdWithLevel);
    CHECK(f87.value == 29);

    FactorOutcome f29 = factor_semiprime(29, *spec, oracle);  // gcd(n, N) = n
    CHECK(f29.kind == FactorOutcome::Kind::UnsupportedInput);

    CHECK(factor_semiprime(1, *spec, oracle).kind == FactorOutcome::Kind::UnsupportedInput);
    CHECK(factor_semiprime(16, *spec, oracle).kind == FactorOutcome::Kind::UnsupportedInput);

    // oracle errors surface as UnsupportedInput with the reason attached
    FactorOutcome f33 = factor_semiprime(33, *spec, oracle);  // 11 outside the table
    CHECK(f33.kind == FactorOutcome::Kind::UnsupportedInput);
    CHECK(f33.reason.find("prime factor") != std::string::npos);
}

TEST_CASE("vanishing coefficient branch") {
    // a(3) = 0 but a(5) != 0: A = 0, the single-candidate path still factors
    auto spec = table_spec({{2, -24}, {3, 0}, {5, 4830}, {7, -16744}});
    RecurrenceOracle oracle(spec);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    REQUIRE(out.kind == FactorOutcome::Kind::Factor);
    CHECK(out.value == 5);
    CHECK(out.trace.candidates.size() == 1);
    // y^2 = a(5)^2 / 5^11
    CHECK(out.trace.candidates[0].rational_value() ==
          testoracles::frac(mpz_class(4830) * 4830, mpz_class("48828125")));
    CHECK_FALSE(out.trace.S.has_value());
    CHECK_FALSE(check_trace_identities(out.trace, *spec).has_value());

    // both coefficients vanish
    auto spec2 = table_spec({{3, 0}, {5, 0}});
    RecurrenceOracle oracle2(spec2);
    CHECK(factor_semiprime(15, *spec2, oracle2).kind ==
          FactorOutcome::Kind::BothCoefficientsVanish);
}

TEST_CASE("adversarial oracles hit the failure outcomes") {
    FieldPtr Q = testoracles::rational_field();
    auto spec = table_spec({}, 2);  // weight 2 over Q, empty table

    // radicand 9^2 - 4*15 = 21 is not a rational square
    ScriptedOracle no_sqrt(Q, {{15, 1}, {225, 7}});
    CHECK(factor_semiprime(15, *spec, no_sqrt).kind == FactorOutcome::Kind::NoSquareRootInField);

    // candidates 4 and 1/15: gcd(1, 15) = 1 and gcd(15, 15) = n are both unusable
    ScriptedOracle no_denom(Q, {{15, 2}, {225, -42}});
    FactorOutcome out = factor_semiprime(15, *spec, no_denom);
    CHECK(out.kind == FactorOutcome::Kind::NoUsableDenominator);
    REQUIRE(out.trace.candidates.size() == 2);
    CHECK(out.trace.gcds == std::vector<mpz_class>({1, 15}));
}

TEST_CASE("odd weights carry a caveat flag") {
    auto spec = table_spec({{3, 5}, {5, 7}}, 3);
    RecurrenceOracle oracle(spec);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    CHECK(out.trace.odd_weight_caveat);
    auto even = factor_semiprime(15, *delta_spec(), RecurrenceOracle(delta_spec()));
    CHECK_FALSE(even.trace.odd_weight_caveat);
}

TEST_CASE("trace identity checker notices tampering") {
    auto spec = delta_spec();
    QexpOracle oracle(226);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    REQUIRE_FALSE(check_trace_identities(out.trace, *spec).has_value());
    ReductionTrace bad = out.trace;
    bad.candidates[0] = bad.candidates[0] + spec->field->one();
    CHECK(check_trace_identities(bad, *spec).has_value());
}

TEST_CASE("trace serialization") {
    auto spec = delta_spec();
    QexpOracle oracle(226);
    FactorOutcome out = factor_semiprime(15, *spec, oracle);
    nlohmann::json j = nlohmann::json::parse(out.trace.to_json());
    CHECK(j["n"] == "15");
    CHECK(j["k"] == 12);
    CHECK(j["N"] == 1);
    CHECK(j["outcome"] == "Factor");
    CHECK(j["candidates"][0] == "933156/1953125");
    CHECK(j["denominators"][0] == "1953125");
    CHECK(j["gcds"][0] == "5");
    CHECK(j["chi_n"] == "1");
    CHECK(j["odd_weight_caveat"] == false);

    // the trivial-gcd branch serializes its sparse trace too
    FactorOutcome lvl = factor_semiprime(87, *g29_spec(), RecurrenceOracle(g29_spec()));
    nlohmann::json j2 = nlohmann::json::parse(lvl.trace.to_json());
    CHECK(j2["outcome"] == "TrivialGcdWithLevel");
    CHECK(j2["A"].is_null());
}

TEST_CASE("vanishing scans") {
    auto delta = delta_spec();
    QexpOracle small(11);
    VanishingScan s10 = scan_vanishing(*delta, small, 10);
    CHECK(s10.count == 0);
    CHECK(s10.primes.empty());

    auto synthetic = table_spec({{2, -24}, {3, 0}, {5, 4830}, {7, -16744}});
    RecurrenceOracle rec(synthetic);
    VanishingScan s = scan_vanishing(*synthetic, rec, 10);
    CHECK(s.count == 1);
    CHECK(s.primes == std::vector<unsigned long>({3}));
}

TEST_CASE("non-ordinary scans") {
    auto delta = delta_spec();
    QexpOracle oracle(101);
    CHECK(scan_nonordinary(*delta, oracle, 100) == std::vector<unsigned long>({2, 3, 5, 7}));
    CHECK(scan_nonordinary(*delta, QexpOracle(11), 2) == std::vector<unsigned long>({2}));

    // a(p) = 1 for every prime: nothing is non-ordinary
    std::map<unsigned long, long> ones;
    for (unsigned long p : primes_up_to(100)) ones[p] = 1;
    auto spec1 = table_spec(ones);
    RecurrenceOracle rec(spec1);
    CHECK(scan_nonordinary(*spec1, rec, 100).empty());

    CHECK_THROWS_AS(scan_nonordinary(*g29_spec(), RecurrenceOracle(g29_spec()), 5),
                    UnsupportedInput);
}

TEST_CASE("fuzzing the reduction") {
    auto g29 = g29_spec();
    RecurrenceOracle oracle(g29);

    FuzzStats one = reduction_fuzz(*g29, oracle, {3, 5}, 1, 42);
    CHECK(one.trials_run == 1);
    CHECK(one.successes == 1);
    CHECK(one.violations == 0);
    CHECK(one.all_ok());

    FuzzStats empty = reduction_fuzz(*g29, oracle, {3}, 5, 42);
    CHECK(empty.pool_size == 1);
    CHECK(empty.trials_run == 0);
    CHECK_FALSE(empty.all_ok());

    CHECK_THROWS_AS(reduction_fuzz(*g29, oracle, {3, 4}, 1, 42), UnsupportedInput);
    CHECK_THROWS_AS(reduction_fuzz(*g29, oracle, {3, 29}, 1, 42), UnsupportedInput);
    CHECK_THROWS_AS(reduction_fuzz(*g29, oracle, {3, 3}, 1, 42), UnsupportedInput);

    // deterministic under a fixed seed
    auto delta = delta_spec();
    RecurrenceOracle drec(delta);
    std::vector<unsigned long> pool;
    for (const auto& [p, ap] : delta->prime_coeffs)
        if (p != 2) pool.push_back(p);
    FuzzStats a = reduction_fuzz(*delta, drec, pool, 25, 777);
    FuzzStats b = reduction_fuzz(*delta, drec, pool, 25, 777);
    CHECK(a.summary() == b.summary());
    CHECK(a.all_ok());
}
