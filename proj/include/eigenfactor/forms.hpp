#pragma once

#include <gmpxx.h>

#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eigenfactor/errors.hpp"
#include "eigenfactor/numberfield.hpp"
#include "eigenfactor/qseries.hpp"

// Eigenform metadata and pluggable coefficient oracles: Dirichlet characters
// as explicit value tables, prime-coefficient tables extended by the Hecke
// recurrences, and an honest q-expansion oracle for Delta that never factors
// its input.

namespace eigenfactor {

namespace detail {

inline bool is_prime_u64(unsigned long n) {
    if (n < 2) return false;
    for (unsigned long d = 2; d <= n / d; ++d)
        if (n % d == 0) return false;
    return true;
}

// Carmichael function: exponent of (Z/nZ)^*.
inline unsigned long group_exponent(unsigned long n) {
    auto lcm_u = [](unsigned long a, unsigned long b) {
        mpz_class l = lcm(mpz_class(a), mpz_class(b));
        return l.get_ui();
    };
    unsigned long result = 1;
    for (unsigned long p = 2; p <= n / p; ++p) {
        if (n % p) continue;
        unsigned long pe = 1;
        while (n % p == 0) {
            n /= p;
            pe *= p;
        }
        unsigned long lam;
        if (p == 2) {
            lam = pe <= 4 ? pe / 2 : pe / 4;
        } else {
            lam = pe / p * (p - 1);
        }
        if (lam == 0) lam = 1;
        result = lcm_u(result, lam);
    }
    if (n > 1) result = lcm_u(result, n - 1);
    return result;
}

}  // namespace detail

// ------------------------------------------------------------------
// Dirichlet characters as validated value tables

class DirichletCharacter {
public:
    static DirichletCharacter trivial(unsigned long modulus, const FieldPtr& field) {
        std::vector<AlgebraicNumber> values;
        values.reserve(modulus);
        for (unsigned long r = 0; r < modulus; ++r) {
            bool unit = mpz_class(gcd(mpz_class(r), mpz_class(modulus))) == 1;
            values.push_back(unit ? field->one() : field->zero());
        }
        return DirichletCharacter(modulus, std::move(values));
    }

    static DirichletCharacter from_table(unsigned long modulus,
                                         std::vector<AlgebraicNumber> values) {
        DirichletCharacter chi(modulus, std::move(values));
        chi.validate();
        return chi;
    }

    unsigned long modulus() const { return modulus_; }
    const std::vector<AlgebraicNumber>& values() const { return values_; }

    // chi(m) for any integer m, by table lookup at m mod N.
    const AlgebraicNumber& eval(const mpz_class& m) const {
        mpz_class r;
        mpz_mod(r.get_mpz_t(), m.get_mpz_t(), mpz_class(modulus_).get_mpz_t());
        return values_[r.get_ui()];
    }

    void validate() const {
        if (modulus_ == 0) throw InvariantViolation("character: modulus must be positive");
        if (values_.size() != modulus_)
            throw InvariantViolation("character: table size differs from modulus");
        const FieldPtr& K = values_[0].field();
        const unsigned long residue_one = modulus_ == 1 ? 0 : 1;
        if (values_[residue_one] != K->one())
            throw InvariantViolation("character: chi(1) != 1");
        for (unsigned long r = 0; r < modulus_; ++r) {
            bool unit = mpz_class(gcd(mpz_class(r), mpz_class(modulus_))) == 1;
            if (unit == values_[r].is_zero())
                throw InvariantViolation("character: chi(m) = 0 exactly when gcd(m, N) > 1 fails at " +
                                         std::to_string(r));
        }
        for (unsigned long a = 0; a < modulus_; ++a)
            for (unsigned long b = a; b < modulus_; ++b) {
                unsigned long ab = modulus_ == 1 ? 0 : (a * b) % modulus_;
                if (values_[ab] != values_[a] * values_[b])
                    throw InvariantViolation("character: multiplicativity fails at (" +
                                             std::to_string(a) + ", " + std::to_string(b) + ")");
            }
        const unsigned long lambda = detail::group_exponent(modulus_);
        for (unsigned long r = 0; r < modulus_; ++r) {
            if (values_[r].is_zero()) continue;
            if (values_[r].pow(lambda) != K->one())
                throw InvariantViolation("character: value at " + std::to_string(r) +
                                         " is not a root of unity");
        }
    }

private:
    DirichletCharacter(unsigned long modulus, std::vector<AlgebraicNumber> values)
        : modulus_(modulus), values_(std::move(values)) {}

    unsigned long modulus_ = 1;
    std::vector<AlgebraicNumber> values_;
};

// ------------------------------------------------------------------
// eigenform metadata

struct EigenformSpec {
    std::string name;
    unsigned weight = 2;       // k >= 2
    unsigned long level = 1;   // N
    DirichletCharacter character;
    FieldPtr field;
    std::map<unsigned long, AlgebraicNumber> prime_coeffs;  // p -> a(p)
    bool non_cm = true;  // asserted, not verified

    EigenformSpec(std::string nm, unsigned k, unsigned long N, DirichletCharacter chi, FieldPtr K,
                  std::map<unsigned long, AlgebraicNumber> primes)
        : name(std::move(nm)),
          weight(k),
          level(N),
          character(std::move(chi)),
          field(std::move(K)),
          prime_coeffs(std::move(primes)) {
        validate();
    }

    void validate() const {
        if (weight < 2) throw InvariantViolation("spec: weight must be at least 2");
        if (level < 1) throw InvariantViolation("spec: level must be positive");
        if (character.modulus() != level)
            throw InvariantViolation("spec: character modulus differs from level");
        for (const auto& [p, ap] : prime_coeffs) {
            if (!detail::is_prime_u64(p))
                throw InvariantViolation("spec: table index " + std::to_string(p) + " is not prime");
            if (!ap.field()->compatible(*field))
                throw InvariantViolation("spec: coefficient a(" + std::to_string(p) +
                                         ") lies in a different field");
            if (denominator_of(ap) != 1)
                throw InvariantViolation("spec: a(" + std::to_string(p) +
                                         ") is not an algebraic integer");
        }
    }
};

// a(n) assembled from the spec's prime table by multiplicativity and the
// prime-power recurrence a(p^{r+1}) = a(p) a(p^r) - chi(p) p^{k-1} a(p^{r-1}).
// Factors n by trial division against the table: a stand-in for the
// hypothesized polynomial-time coefficient algorithm, not an honest oracle.
inline AlgebraicNumber recurrence_extend(const EigenformSpec& spec, const mpz_class& n) {
    if (n < 1) throw UnsupportedInput("recurrence_extend needs n >= 1");
    mpz_class rest = n;
    AlgebraicNumber result = spec.field->one();
    for (const auto& [p, ap] : spec.prime_coeffs) {
        if (rest == 1) break;
        if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
        unsigned long e = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
            ++e;
        }
        mpz_class pk;
        mpz_ui_pow_ui(pk.get_mpz_t(), p, spec.weight - 1);
        const AlgebraicNumber chi_p = spec.character.eval(mpz_class(p));
        const AlgebraicNumber scale = chi_p * spec.field->from_rational(mpq_class(pk));
        AlgebraicNumber prev = spec.field->one();  // a(p^0)
        AlgebraicNumber cur = ap;                  // a(p^1)
        for (unsigned long r = 1; r < e; ++r) {
            AlgebraicNumber next = ap * cur - scale * prev;
            prev = std::move(cur);
            cur = std::move(next);
        }
        result = result * cur;
    }
    if (rest != 1)
        throw UnknownPrimeFactor("n has a prime factor outside the table (left over: " +
                                 rest.get_str() + ")");
    return result;
}

// ------------------------------------------------------------------
// coefficient oracles

class CoefficientOracle {
public:
    virtual ~CoefficientOracle() = default;
    virtual AlgebraicNumber coeff(const mpz_class& n) const = 0;
    virtual bool supports(const mpz_class& n) const = 0;
    virtual std::string domain() const = 0;
    virtual const FieldPtr& field() const = 0;
};

class RecurrenceOracle final : public CoefficientOracle {
public:
    explicit RecurrenceOracle(std::shared_ptr<const EigenformSpec> spec) : spec_(std::move(spec)) {}

    AlgebraicNumber coeff(const mpz_class& n) const override {
        return recurrence_extend(*spec_, n);
    }
    bool supports(const mpz_class& n) const override {
        if (n < 1) return false;
        mpz_class rest = n;
        for (const auto& [p, ap] : spec_->prime_coeffs) {
            (void)ap;
            while (mpz_divisible_ui_p(rest.get_mpz_t(), p))
                mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
        }
        return rest == 1;
    }
    std::string domain() const override {
        return "positive integers whose prime factors appear in the table of " + spec_->name;
    }
    const FieldPtr& field() const override { return spec_->field; }

private:
    std::shared_ptr<const EigenformSpec> spec_;
};

// tau(n) read off the Delta q-expansion: supports 1 <= n < T and never
// factors its input.
class QexpOracle final : public CoefficientOracle {
public:
    explicit QexpOracle(std::size_t truncation, std::size_t guard = 10'000'000)
        : series_(delta_qexp(truncation, guard)),
          field_(NumberField::create(IntegerPolynomial({mpz_class(0), mpz_class(1)}), {0.0, 0.0})) {}

    AlgebraicNumber coeff(const mpz_class& n) const override {
        if (!supports(n))
            throw OutOfRange("index " + n.get_str() + " outside the q-expansion range [1, " +
                             std::to_string(series_.truncation()) + ")");
        return field_->from_rational(mpq_class(series_.at(n.get_ui())));
    }
    bool supports(const mpz_class& n) const override {
        return n >= 1 && n < static_cast<unsigned long>(series_.truncation());
    }
    std::string domain() const override {
        return "1 <= n < " + std::to_string(series_.truncation());
    }
    const FieldPtr& field() const override { return field_; }

    const TruncatedSeries& series() const { return series_; }

private:
    TruncatedSeries series_;
    FieldPtr field_;
};

// Linear combination sum_i alpha_i f_i of oracles over one field.
class BasisCombinationOracle final : public CoefficientOracle {
public:
    BasisCombinationOracle(std::vector<std::shared_ptr<const CoefficientOracle>> basis,
                           std::vector<AlgebraicNumber> alphas)
        : basis_(std::move(basis)), alphas_(std::move(alphas)) {
        if (basis_.empty() || basis_.size() != alphas_.size())
            throw InvariantViolation("basis combination: lengths differ or empty");
        for (const auto& o : basis_)
            if (!o->field()->compatible(*alphas_[0].field()))
                throw FieldMismatch("basis combination: oracles over different fields");
    }

    AlgebraicNumber coeff(const mpz_class& n) const override {
        AlgebraicNumber acc = alphas_[0] * basis_[0]->coeff(n);
        for (std::size_t i = 1; i < basis_.size(); ++i) acc = acc + alphas_[i] * basis_[i]->coeff(n);
        return acc;
    }
    bool supports(const mpz_class& n) const override {
        for (const auto& o : basis_)
            if (!o->supports(n)) return false;
        return true;
    }
    std::string domain() const override { return "intersection of the member oracle domains"; }
    const FieldPtr& field() const override { return alphas_[0].field(); }

private:
    std::vector<std::shared_ptr<const CoefficientOracle>> basis_;
    std::vector<AlgebraicNumber> alphas_;
};

// ------------------------------------------------------------------
// spec documents

// Parses and validates an eigenform spec document:
// {"name": ..., "weight": k, "level": N,
//  "character": {"kind": "trivial"} | {"kind": "table", "values": [...]},
//  "field": {"min_poly": [c0, c1, ...], "embedding": [re, im]},
//  "primes": {"2": ["coord0", ...], ...}}
inline std::shared_ptr<const EigenformSpec> load_spec(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec document is not valid JSON: ") + e.what());
    }
    try {
        const std::string name = doc.at("name").get<std::string>();
        const long weight = doc.at("weight").get<long>();
        const long level = doc.at("level").get<long>();
        if (weight < 2) throw InvariantViolation("spec: weight must be at least 2");
        if (level < 1) throw InvariantViolation("spec: level must be positive");

        const auto& jfield = doc.at("field");
        std::vector<mpz_class> mp;
        for (const auto& c : jfield.at("min_poly")) mp.emplace_back(c.get<long>());
        const auto& jemb = jfield.at("embedding");
        std::complex<double> hint(jemb.at(0).get<double>(), jemb.at(1).get<double>());
        FieldPtr field;
        try {
            field = NumberField::create(IntegerPolynomial(std::move(mp)), hint);
        } catch (const Error& e) {
            throw InvariantViolation(std::string("spec: field rejected: ") + e.what());
        }

        const auto& jchar = doc.at("character");
        const std::string kind = jchar.at("kind").get<std::string>();
        DirichletCharacter chi = DirichletCharacter::trivial(static_cast<unsigned long>(level), field);
        if (kind == "table") {
            std::vector<AlgebraicNumber> values;
            for (const auto& v : jchar.at("values"))
                values.push_back(parse_algebraic(v.get<std::string>(), field));
            chi = DirichletCharacter::from_table(static_cast<unsigned long>(level),
                                                 std::move(values));
        } else if (kind != "trivial") {
            throw ParseError("spec: unknown character kind '" + kind + "'");
        }

        std::map<unsigned long, AlgebraicNumber> primes;
        for (const auto& [key, val] : doc.at("primes").items()) {
            if (key.empty() || key.size() > 12 ||
                key.find_first_not_of("0123456789") != std::string::npos)
                throw ParseError("spec: prime key '" + key + "' is not a small positive integer");
            unsigned long p = std::stoul(key);
            std::vector<mpq_class> coords;
            for (const auto& coord : val) {
                const std::string s = coord.get<std::string>();
                std::size_t pos = 0;
                coords.push_back(detail::parse_rational_token(s, pos));
                detail::skip_ws(s, pos);
                if (pos != s.size()) throw ParseError("trailing junk in coordinate '" + s + "'");
            }
            primes.emplace(p, field->element(std::move(coords)));
        }
        return std::make_shared<const EigenformSpec>(name, static_cast<unsigned>(weight),
                                                     static_cast<unsigned long>(level),
                                                     std::move(chi), field, std::move(primes));
    } catch (const Error&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("spec document is malformed: ") + e.what());
    } catch (const std::exception& e) {
        throw ParseError(std::string("spec document is malformed: ") + e.what());
    }
}

inline std::shared_ptr<const EigenformSpec> load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_spec(ss.str());
}

}  // namespace eigenfactor
