#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eigenfactor/errors.hpp"
#include "eigenfactor/forms.hpp"
#include "eigenfactor/numberfield.hpp"

// The factoring reduction: from a(n) and a(n^2) of a non-CM eigenform,
// recover a prime factor of a semiprime n through the quadratic whose roots
// are x^2 and y^2, an exact in-field square root, and the gcd of candidate
// denominators with n. Everything the reduction touches is recorded in a
// ReductionTrace.

namespace eigenfactor {

struct ReductionTrace {
    mpz_class n;
    unsigned weight = 0;      // k
    unsigned long level = 0;  // N
    std::optional<AlgebraicNumber> chi_n;
    std::optional<AlgebraicNumber> A;  // a(n)/chi(n)
    std::optional<AlgebraicNumber> B;  // a(n^2)
    std::optional<AlgebraicNumber> S;  // A^2 chi(n) - B + n^{k-1} chi(n)
    std::optional<AlgebraicNumber> radicand;  // S^2 - 4 A^2 n^{k-1} chi(n)^2
    std::optional<AlgebraicNumber> sqrt_radicand;
    std::vector<AlgebraicNumber> candidates;  // t+ then t-; single entry on the A = 0 path
    std::vector<mpz_class> denominators;
    std::vector<mpz_class> gcds;
    std::string outcome;
    bool odd_weight_caveat = false;

    std::string to_json() const {
        nlohmann::json j;
        auto put = [&](const char* key, const std::optional<AlgebraicNumber>& v) {
            if (v)
                j[key] = v->to_string();
            else
                j[key] = nullptr;
        };
        j["n"] = n.get_str();
        j["k"] = weight;
        j["N"] = level;
        put("chi_n", chi_n);
        put("A", A);
        put("B", B);
        put("S", S);
        put("radicand", radicand);
        put("sqrt_radicand", sqrt_radicand);
        j["candidates"] = nlohmann::json::array();
        for (const auto& t : candidates) j["candidates"].push_back(t.to_string());
        j["denominators"] = nlohmann::json::array();
        for (const auto& d : denominators) j["denominators"].push_back(d.get_str());
        j["gcds"] = nlohmann::json::array();
        for (const auto& g : gcds) j["gcds"].push_back(g.get_str());
        j["outcome"] = outcome;
        j["odd_weight_caveat"] = odd_weight_caveat;
        return j.dump();
    }
};

struct FactorOutcome {
    enum class Kind {
        Factor,
        TrivialGcdWithLevel,
        BothCoefficientsVanish,
        NoUsableDenominator,
        NoSquareRootInField,
        UnsupportedInput,
    };

    Kind kind = Kind::UnsupportedInput;
    mpz_class value;     // the factor (Factor) or the level gcd (TrivialGcdWithLevel)
    std::string reason;  // UnsupportedInput detail
    ReductionTrace trace;

    bool factored() const { return kind == Kind::Factor || kind == Kind::TrivialGcdWithLevel; }
};

inline const char* to_string(FactorOutcome::Kind k) {
    switch (k) {
        case FactorOutcome::Kind::Factor: return "Factor";
        case FactorOutcome::Kind::TrivialGcdWithLevel: return "TrivialGcdWithLevel";
        case FactorOutcome::Kind::BothCoefficientsVanish: return "BothCoefficientsVanish";
        case FactorOutcome::Kind::NoUsableDenominator: return "NoUsableDenominator";
        case FactorOutcome::Kind::NoSquareRootInField: return "NoSquareRootInField";
        case FactorOutcome::Kind::UnsupportedInput: return "UnsupportedInput";
    }
    return "?";
}

// Runs the reduction on n against the given spec and coefficient oracle.
// Returns a factor when one of the candidate denominators shares a proper
// divisor with n; every branch leaves its trace attached.
inline FactorOutcome factor_semiprime(const mpz_class& n, const EigenformSpec& spec,
                                      const CoefficientOracle& oracle) {
    FactorOutcome out;
    ReductionTrace& tr = out.trace;
    tr.n = n;
    tr.weight = spec.weight;
    tr.level = spec.level;
    tr.odd_weight_caveat = (spec.weight % 2) == 1;

    auto finish = [&](FactorOutcome::Kind kind, mpz_class value = 0, std::string reason = "") {
        out.kind = kind;
        out.value = std::move(value);
        out.reason = std::move(reason);
        tr.outcome = to_string(kind);
        return out;
    };

    if (n < 3)
        return finish(FactorOutcome::Kind::UnsupportedInput, 0, "n must be an odd integer >= 3");

    // step 1: gcd with the level short-circuits the oracle entirely (even a
    // malformed n can fall out here, so this runs before the parity check)
    mpz_class g0 = gcd(n, mpz_class(spec.level));
    if (g0 == n)
        return finish(FactorOutcome::Kind::UnsupportedInput, 0,
                      "gcd(n, N) = n; the level absorbs every factor of n");
    if (g0 > 1) return finish(FactorOutcome::Kind::TrivialGcdWithLevel, g0);

    if (mpz_even_p(n.get_mpz_t()))
        return finish(FactorOutcome::Kind::UnsupportedInput, 0, "n must be an odd integer >= 3");

    const AlgebraicNumber chi_n = spec.character.eval(n);
    tr.chi_n = chi_n;  // nonzero since gcd(n, N) = 1

    AlgebraicNumber A = spec.field->zero(), B = spec.field->zero();
    try {
        A = oracle.coeff(n) / chi_n;
        B = oracle.coeff(n * n);
    } catch (const OracleError& e) {
        return finish(FactorOutcome::Kind::UnsupportedInput, 0, e.what());
    }
    tr.A = A;
    tr.B = B;

    mpz_class nk;
    mpz_pow_ui(nk.get_mpz_t(), n.get_mpz_t(), spec.weight - 1);
    const AlgebraicNumber nk_el = spec.field->from_rational(mpq_class(nk));

    if (A.is_zero()) {
        // a(p) or a(q) vanishes; equation (x^2-1)(y^2-1) still pins the other square:
        // y^2 = (n^{k-1} chi(n) - B) / (n^{k-1} chi(n))
        const AlgebraicNumber denom = nk_el * chi_n;
        const AlgebraicNumber t = (denom - B) / denom;
        if (t.is_zero()) return finish(FactorOutcome::Kind::BothCoefficientsVanish);
        tr.candidates.push_back(t);
    } else {
        const AlgebraicNumber S = A * A * chi_n - B + nk_el * chi_n;
        tr.S = S;
        const AlgebraicNumber radicand = S * S - spec.field->from_rational(4) * A * A * nk_el * chi_n * chi_n;
        tr.radicand = radicand;
        std::optional<AlgebraicNumber> w = sqrt_in_field(radicand);
        if (!w) return finish(FactorOutcome::Kind::NoSquareRootInField);
        tr.sqrt_radicand = *w;
        const AlgebraicNumber half_den = spec.field->from_rational(2) * chi_n * nk_el;
        tr.candidates.push_back((S + *w) / half_den);
        tr.candidates.push_back((S - *w) / half_den);
    }

    for (const AlgebraicNumber& t : tr.candidates) {
        mpz_class d = denominator_of(t);
        tr.denominators.push_back(d);
        tr.gcds.push_back(gcd(d, n));
    }
    for (std::size_t i = 0; i < tr.gcds.size(); ++i) {
        if (tr.gcds[i] > 1 && tr.gcds[i] < n)
            return finish(FactorOutcome::Kind::Factor, tr.gcds[i]);
    }
    return finish(FactorOutcome::Kind::NoUsableDenominator);
}

// Exact identities every two-candidate trace must satisfy; returns a message
// naming the first violated identity, or nothing when all hold.
//   t+ * t- = A^2 / n^{k-1}
//   t+ + t- = S / (chi(n) n^{k-1})
//   n^{k-1} chi(n) (t+ - 1)(t- - 1) = B
// On the single-candidate path the last identity degenerates to
//   n^{k-1} chi(n) (1 - t) = B.
inline std::optional<std::string> check_trace_identities(const ReductionTrace& tr,
                                                         const EigenformSpec& spec) {
    if (!tr.A || !tr.B || !tr.chi_n) return std::nullopt;  // oracle was never consulted
    mpz_class nk;
    mpz_pow_ui(nk.get_mpz_t(), tr.n.get_mpz_t(), spec.weight - 1);
    const AlgebraicNumber nk_el = spec.field->from_rational(mpq_class(nk));
    const AlgebraicNumber one = spec.field->one();
    if (tr.candidates.size() == 2) {
        const AlgebraicNumber& tp = tr.candidates[0];
        const AlgebraicNumber& tm = tr.candidates[1];
        if (tp * tm != (*tr.A) * (*tr.A) / nk_el) return "Vieta product (t+ t- = A^2/n^{k-1})";
        if (tp + tm != (*tr.S) / ((*tr.chi_n) * nk_el))
            return "Vieta sum (t+ + t- = S/(chi(n) n^{k-1}))";
        if (nk_el * (*tr.chi_n) * (tp - one) * (tm - one) != *tr.B)
            return "equation-3 reconstruction (n^{k-1} chi(n)(t+ - 1)(t- - 1) = B)";
    } else if (tr.candidates.size() == 1) {
        const AlgebraicNumber& t = tr.candidates[0];
        if (nk_el * (*tr.chi_n) * (one - t) != *tr.B)
            return "vanishing-branch reconstruction (n^{k-1} chi(n)(1 - y^2) = B)";
    }
    return std::nullopt;
}

// ------------------------------------------------------------------
// empirical scans

inline std::vector<unsigned long> primes_up_to(unsigned long X) {
    std::vector<unsigned long> out;
    if (X < 2) return out;
    if (X == std::numeric_limits<unsigned long>::max())
        throw UnsupportedInput("scan bound too large");
    std::vector<bool> sieve(X + 1, true);
    sieve[0] = sieve[1] = false;
    for (unsigned long i = 2; i <= X; ++i) {
        if (!sieve[i]) continue;
        out.push_back(i);
        if (i > X / i) continue;  // i^2 would overflow or exceed X
        for (unsigned long j = i * i; j <= X; j += i) sieve[j] = false;
    }
    return out;
}

struct VanishingScan {
    std::uint64_t count = 0;
    std::vector<unsigned long> primes;  // the p <= X with a(p) = 0
};

// Counts primes p <= X with a(p) = 0 by direct evaluation.
inline VanishingScan scan_vanishing(const EigenformSpec& spec, const CoefficientOracle& oracle,
                                    unsigned long X) {
    (void)spec;
    VanishingScan result;
    for (unsigned long p : primes_up_to(X)) {
        if (oracle.coeff(mpz_class(p)).is_zero()) {
            ++result.count;
            result.primes.push_back(p);
        }
    }
    return result;
}

// Primes p <= X with a(p) == 0 (mod p); rational coefficient fields only.
inline std::vector<unsigned long> scan_nonordinary(const EigenformSpec& spec,
                                                   const CoefficientOracle& oracle,
                                                   unsigned long X) {
    if (spec.field->degree() != 1)
        throw UnsupportedInput("non-ordinary scan requires a degree-1 coefficient field");
    std::vector<unsigned long> out;
    for (unsigned long p : primes_up_to(X)) {
        const AlgebraicNumber ap = oracle.coeff(mpz_class(p));
        const mpq_class& v = ap.rational_value();
        if (v.get_den() != 1)
            throw InvariantViolation("a(" + std::to_string(p) + ") is not an integer");
        if (mpz_divisible_ui_p(v.get_num().get_mpz_t(), p)) out.push_back(p);
    }
    return out;
}

// ------------------------------------------------------------------
// randomized semiprime sweep

struct FuzzStats {
    std::size_t pool_size = 0;
    std::uint64_t trials_requested = 0;
    std::uint64_t trials_run = 0;
    std::uint64_t successes = 0;  // outcome Factor with the factor in {p, q}
    std::map<std::string, std::uint64_t> outcomes;
    std::uint64_t violations = 0;  // invariant failures across all trials
    std::string first_violation;

    bool all_ok() const { return trials_run == trials_requested && successes == trials_run && violations == 0; }

    std::string summary() const {
        std::string s;
        s += "pool size: " + std::to_string(pool_size) + "\n";
        s += "trials: " + std::to_string(trials_run) + "/" + std::to_string(trials_requested) + "\n";
        s += "successes: " + std::to_string(successes) + "\n";
        for (const auto& [k, v] : outcomes) s += "outcome " + k + ": " + std::to_string(v) + "\n";
        s += "invariant violations: " + std::to_string(violations) + "\n";
        if (!first_violation.empty()) s += "first violation: " + first_violation + "\n";
        return s;
    }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::size_t bounded(std::uint64_t r, std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(r) * n) >> 64);
}

}  // namespace detail

// Runs `trials` seeded random unordered pairs {p, q} from the pool through
// factor_semiprime(p*q) and tallies outcomes. Each trial additionally checks:
// soundness of any returned factor, membership in {p, q}, the trace
// identities, candidate identification against a(p)^2/(chi(p)^2 p^{k-1}), and
// that candidate gcds stay in {1, p, q}. Deterministic for a fixed seed.
inline FuzzStats reduction_fuzz(const EigenformSpec& spec, const CoefficientOracle& oracle,
                                const std::vector<unsigned long>& prime_pool, std::uint64_t trials,
                                std::uint64_t seed) {
    for (std::size_t i = 0; i < prime_pool.size(); ++i) {
        if (!detail::is_prime_u64(prime_pool[i]))
            throw UnsupportedInput("pool entry " + std::to_string(prime_pool[i]) + " is not prime");
        if (gcd(mpz_class(prime_pool[i]), mpz_class(spec.level)) != 1)
            throw UnsupportedInput("pool entry " + std::to_string(prime_pool[i]) +
                                   " shares a factor with the level");
        for (std::size_t j = i + 1; j < prime_pool.size(); ++j)
            if (prime_pool[i] == prime_pool[j])
                throw UnsupportedInput("pool entries must be pairwise distinct");
    }

    FuzzStats stats;
    stats.pool_size = prime_pool.size();
    stats.trials_requested = trials;
    if (prime_pool.size() < 2) return stats;  // no unordered pairs to draw

    auto note_violation = [&](const std::string& msg) {
        ++stats.violations;
        if (stats.first_violation.empty()) stats.first_violation = msg;
    };

    for (std::uint64_t t = 0; t < trials; ++t) {
        const std::uint64_t r1 = detail::splitmix64(seed ^ detail::splitmix64(2 * t + 1));
        const std::uint64_t r2 = detail::splitmix64(seed ^ detail::splitmix64(2 * t + 2));
        std::size_t i = detail::bounded(r1, prime_pool.size());
        std::size_t j = detail::bounded(r2, prime_pool.size() - 1);
        if (j >= i) ++j;
        const unsigned long p = prime_pool[i], q = prime_pool[j];
        const mpz_class n = mpz_class(p) * mpz_class(q);

        FactorOutcome out = factor_semiprime(n, spec, oracle);
        ++stats.trials_run;
        ++stats.outcomes[to_string(out.kind)];

        const std::string label = "trial " + std::to_string(t) + " (n = " + n.get_str() + ")";
        if (out.kind == FactorOutcome::Kind::Factor) {
            if (out.value <= 1 || out.value >= n || n % out.value != 0)
                note_violation(label + ": returned factor is unsound");
            else if (out.value != p && out.value != q)
                note_violation(label + ": factor outside {p, q}");
            else
                ++stats.successes;
        }
        if (auto bad = check_trace_identities(out.trace, spec))
            note_violation(label + ": " + *bad);
        // candidate identification: {t+, t-} = {a(p)^2/(chi(p)^2 p^{k-1}), same for q};
        // needs both primes in the spec table
        if (out.trace.candidates.size() == 2 && spec.prime_coeffs.count(p) &&
            spec.prime_coeffs.count(q)) {
            auto expected = [&](unsigned long r) {
                mpz_class rk;
                mpz_ui_pow_ui(rk.get_mpz_t(), r, spec.weight - 1);
                const AlgebraicNumber ar = spec.prime_coeffs.at(r);
                const AlgebraicNumber chi_r = spec.character.eval(mpz_class(r));
                return (ar * ar) / (chi_r * chi_r * spec.field->from_rational(mpq_class(rk)));
            };
            const AlgebraicNumber xp = expected(p), xq = expected(q);
            const auto& c = out.trace.candidates;
            const bool match = (c[0] == xp && c[1] == xq) || (c[0] == xq && c[1] == xp);
            if (!match) note_violation(label + ": candidates do not match a(p)^2/(chi(p)^2 p^{k-1})");
        }
        for (const mpz_class& g : out.trace.gcds) {
            if (!(g == 1 || g == p || g == q))
                note_violation(label + ": candidate denominator gcd " + g.get_str() +
                               " outside {1, p, q}");
        }
    }
    return stats;
}

}  // namespace eigenfactor
