#include <catch2/catch_amalgamated.hpp>

#include "eigenfactor/eigenfactor.hpp"
#include "oracles.hpp"

using namespace eigenfactor;

namespace {

AlgebraicNumber el(const FieldPtr& K, long c0, long c1) {
    return K->element({mpq_class(c0), mpq_class(c1)});
}

mpf_class abs_diff(const mpf_class& a, const mpf_class& b) {
    mpf_class d(0, std::max(a.get_prec(), b.get_prec()));
    d = a - b;
    mpf_abs(d.get_mpf_t(), d.get_mpf_t());
    return d;
}

}  // namespace

TEST_CASE("field construction accepts the fixture fields") {
    FieldPtr K = testoracles::sqrt2m1_field();
    CHECK(K->degree() == 2);
    ComplexApprox g = embed(K->generator(), 12);
    CHECK(abs_diff(g.value.re, mpf_class("0.414213562373", 256)) < 1e-10);

    // the stored root really sits on the polynomial, within its error bound
    CHECK(K->gamma_error() <= 1e-30);
    BigComplex residual = detail::poly_eval(K->min_poly().coeffs, K->gamma());
    CHECK(cabs(residual) < 1e-28);

    FieldPtr Q = testoracles::rational_field();
    CHECK(Q->degree() == 1);
    CHECK(Q->generator().is_zero());
}

TEST_CASE("field construction rejects bad inputs") {
    CHECK_THROWS_AS(NumberField::create(IntegerPolynomial({mpz_class(-4), mpz_class(0), mpz_class(1)}),
                                        {2.0, 0.0}),
                    Reducible);  // x^2 - 4 = (x-2)(x+2)
    CHECK_THROWS_AS(NumberField::create(IntegerPolynomial({mpz_class(1), mpz_class(0), mpz_class(2)}),
                                        {0.7, 0.0}),
                    NotMonic);
    CHECK_THROWS_AS(NumberField::create(IntegerPolynomial({mpz_class(-1), mpz_class(2), mpz_class(1)}),
                                        {5.0, 0.0}),
                    NoNearbyRoot);
    // cubic with the rational root 1
    CHECK_THROWS_AS(NumberField::create(
                        IntegerPolynomial({mpz_class(-1), mpz_class(0), mpz_class(0), mpz_class(1)}),
                        {1.0, 0.0}),
                    Reducible);
    // x^3 - 2 is fine
    FieldPtr C = NumberField::create(
        IntegerPolynomial({mpz_class(-2), mpz_class(0), mpz_class(0), mpz_class(1)}), {1.26, 0.0});
    CHECK(C->degree() == 3);
}

TEST_CASE("arithmetic matches the defining relation") {
    FieldPtr K = testoracles::sqrt2m1_field();
    const AlgebraicNumber g = K->generator();
    CHECK(g * g == el(K, 1, -2));                    // gamma^2 = 1 - 2 gamma
    CHECK(el(K, -8, -3) * el(K, -1, 4) == el(K, -4, -5));  // a(3) a(5) = a(15)
    CHECK(g.inverse() == el(K, 2, 1));               // gamma (gamma + 2) = 1
    CHECK(g * g.inverse() == K->one());
    CHECK_THROWS_AS(K->zero().inverse(), DivisionByZero);

    FieldPtr Q = testoracles::rational_field();
    CHECK_THROWS_AS(g + Q->one(), FieldMismatch);
}

TEST_CASE("ring axioms and inverses on random elements") {
    FieldPtr K = testoracles::sqrt2m1_field();
    std::mt19937_64 rng(0xabcdef12);
    for (int i = 0; i < 200; ++i) {
        AlgebraicNumber a = testoracles::rand_element(K, rng);
        AlgebraicNumber b = testoracles::rand_element(K, rng);
        AlgebraicNumber c = testoracles::rand_element(K, rng);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a * b == b * a);
        if (!a.is_zero()) CHECK(a * a.inverse() == K->one());
    }
}

TEST_CASE("minimal polynomials of the fixture values") {
    FieldPtr K = testoracles::sqrt2m1_field();
    CHECK(min_poly_of(K->generator()) ==
          IntegerPolynomial({mpz_class(-1), mpz_class(2), mpz_class(1)}));

    AlgebraicNumber z = K->element({mpq_class(73, 27), mpq_class(30, 27)});
    CHECK(min_poly_of(z) == IntegerPolynomial({mpz_class(49), mpz_class(-2322), mpz_class(729)}));
    CHECK(denominator_of(z) == 729);

    FieldPtr Q = testoracles::rational_field();
    AlgebraicNumber x2 = Q->from_rational(mpq_class("933156/1953125"));
    CHECK(min_poly_of(x2) == IntegerPolynomial({mpz_class(-933156), mpz_class(1953125)}));
    CHECK(denominator_of(x2) == 1953125);
    CHECK(denominator_of(K->generator()) == 1);
}

TEST_CASE("minimal polynomial properties on random elements") {
    FieldPtr K = testoracles::sqrt2m1_field();
    std::mt19937_64 rng(0x5151);
    for (int i = 0; i < 100; ++i) {
        AlgebraicNumber z = testoracles::rand_element(K, rng, 200, 20);
        IntegerPolynomial mp = min_poly_of(z);
        CHECK(evaluate(mp, z).is_zero());
        CHECK(mp.leading() > 0);
        // primitivity
        mpz_class content = 0;
        for (const auto& c : mp.coeffs) content = gcd(content, c);
        CHECK(content == 1);
        CHECK((denominator_of(z) == 1) == mp.is_monic());

        // independent quadratic route: trace and norm from the conjugate
        // gamma' = -2 - gamma
        const mpq_class a = z.coords()[0], b = z.coords()[1];
        if (b != 0) {
            mpq_class tr = 2 * a - 2 * b;
            mpq_class nm = a * a - 2 * a * b - b * b;
            mpz_class den = lcm(tr.get_den(), nm.get_den());
            mpz_class c2 = den, c1(mpq_class(-tr * den)), c0(mpq_class(nm * den));
            mpz_class g = gcd(gcd(c2, c1), c0);
            CHECK(mp == IntegerPolynomial({c0 / g, c1 / g, c2 / g}));
        }
    }
}

TEST_CASE("square roots in the rationals") {
    FieldPtr Q = testoracles::rational_field();
    auto r = sqrt_in_field(Q->from_rational(mpq_class(9, 4)));
    REQUIRE(r.has_value());
    CHECK(r->rational_value() == mpq_class(3, 2));
    CHECK_FALSE(sqrt_in_field(Q->from_rational(mpq_class(-1))).has_value());
    CHECK_FALSE(sqrt_in_field(Q->from_rational(mpq_class(2))).has_value());
    CHECK(sqrt_in_field(Q->zero())->is_zero());
}

TEST_CASE("square roots in the quadratic field") {
    FieldPtr K = testoracles::sqrt2m1_field();
    auto s2 = sqrt_in_field(K->from_rational(2));
    REQUIRE(s2.has_value());
    CHECK(*s2 == el(K, 1, 1));  // (1 + gamma)^2 = 2
    CHECK_FALSE(sqrt_in_field(K->from_rational(3)).has_value());

    // the Example-2 radicand
    AlgebraicNumber rad = el(K, 98428456, 37055760);
    auto w = sqrt_in_field(rad);
    REQUIRE(w.has_value());
    CHECK(*w == el(K, 8666, 4830));
}

TEST_CASE("square root round-trips with the sign convention") {
    FieldPtr K = testoracles::sqrt2m1_field();
    std::mt19937_64 rng(0x77aa);
    for (int i = 0; i < 200; ++i) {
        AlgebraicNumber z = testoracles::rand_element(K, rng, 500, 30);
        auto w = sqrt_in_field(z * z);
        REQUIRE(w.has_value());
        CHECK((*w == z || *w == -z));
        CHECK(*w * *w == z * z);
    }
}

TEST_CASE("square roots in a complex quadratic field") {
    FieldPtr K = NumberField::create(IntegerPolynomial({mpz_class(1), mpz_class(0), mpz_class(1)}),
                                     {0.0, 1.0});  // Q(i)
    auto i_root = sqrt_in_field(K->from_rational(-1));
    REQUIRE(i_root.has_value());
    CHECK(*i_root == K->generator());  // +i by the sign convention
    auto two_i = sqrt_in_field(K->element({mpq_class(0), mpq_class(2)}));
    REQUIRE(two_i.has_value());
    CHECK(*two_i == K->element({mpq_class(1), mpq_class(1)}));  // (1+i)^2 = 2i
}

TEST_CASE("square roots by embedding reconstruction in a cubic field") {
    FieldPtr C = NumberField::create(
        IntegerPolynomial({mpz_class(-2), mpz_class(0), mpz_class(0), mpz_class(1)}), {1.26, 0.0});
    std::mt19937_64 rng(0x993);
    for (int i = 0; i < 20; ++i) {
        AlgebraicNumber z = testoracles::rand_element(C, rng, 30, 6);
        auto w = sqrt_in_field(z * z);
        REQUIRE(w.has_value());
        CHECK((*w == z || *w == -z));
    }
    CHECK_FALSE(sqrt_in_field(C->generator()).has_value());  // 2^(1/6) is not in the field
}

TEST_CASE("square roots by embedding reconstruction in a quartic field") {
    // x^4 - 2, two real and two imaginary conjugates
    FieldPtr F = NumberField::create(
        IntegerPolynomial({mpz_class(-2), mpz_class(0), mpz_class(0), mpz_class(0), mpz_class(1)}),
        {1.19, 0.0});
    std::mt19937_64 rng(0x44aa);
    for (int i = 0; i < 10; ++i) {
        AlgebraicNumber z = testoracles::rand_element(F, rng, 20, 4);
        auto w = sqrt_in_field(z * z);
        REQUIRE(w.has_value());
        CHECK((*w == z || *w == -z));
    }
    // sqrt(2) = gamma^2 lives in the field and comes back exactly
    auto s2 = sqrt_in_field(F->from_rational(2));
    REQUIRE(s2.has_value());
    CHECK(*s2 == F->generator() * F->generator());
}

TEST_CASE("embeddings of the fixture values") {
    FieldPtr K = testoracles::sqrt2m1_field();
    ComplexApprox g = embed(K->generator(), 10);
    CHECK(abs_diff(g.value.re, mpf_class("0.4142135624", 256)) < 1e-9);
    CHECK(g.error_bound <= 1e-10);

    ComplexApprox v = embed(el(K, -4, -5), 10);
    CHECK(abs_diff(v.value.re, mpf_class("-6.0710678119", 256)) < 1e-9);

    FieldPtr Q = testoracles::rational_field();
    ComplexApprox h = embed(Q->from_rational(mpq_class(7, 2)), 10);
    CHECK(abs_diff(h.value.re, mpf_class("3.5", 64)) < 1e-10);
    CHECK(detail::format_fixed(h.value.re, 10) == "3.5000000000");
}

TEST_CASE("embedding is multiplicative within error bounds") {
    FieldPtr K = testoracles::sqrt2m1_field();
    std::mt19937_64 rng(0x1f2e);
    for (int i = 0; i < 50; ++i) {
        AlgebraicNumber a = testoracles::rand_element(K, rng);
        AlgebraicNumber b = testoracles::rand_element(K, rng);
        ComplexApprox ea = embed(a, 30), eb = embed(b, 30), eab = embed(a * b, 30);
        BigComplex prod = cmul(ea.value, eb.value);
        mpf_class diff = cabs(csub(eab.value, prod));
        CHECK(diff < 1e-20);
    }
}

TEST_CASE("rendering and parsing round-trip") {
    FieldPtr K = testoracles::sqrt2m1_field();
    CHECK(el(K, -6168, -2680).to_string() == "(-6168) + (-2680)*g");
    CHECK(K->element({mpq_class(73, 27), mpq_class(10, 9)}).to_string() == "(73/27) + (10/9)*g");

    FieldPtr Q = testoracles::rational_field();
    CHECK(Q->from_rational(-6048).to_string() == "-6048");
    CHECK(parse_algebraic("-6048", Q) == Q->from_rational(-6048));
    CHECK(parse_algebraic("(933156/1953125)", Q) == Q->from_rational(mpq_class("933156/1953125")));

    std::mt19937_64 rng(0x8bad);
    for (int i = 0; i < 100; ++i) {
        AlgebraicNumber z = testoracles::rand_element(K, rng);
        CHECK(parse_algebraic(z.to_string(), K) == z);
    }
    CHECK(parse_algebraic("(1) + (2)*g", K) == el(K, 1, 2));
    CHECK(parse_algebraic(" ( -1/3 ) ", K) == K->from_rational(mpq_class(-1, 3)));

    CHECK_THROWS_AS(parse_algebraic("", K), ParseError);
    CHECK_THROWS_AS(parse_algebraic("(1) + (2)", K), ParseError);        // duplicate power 0
    CHECK_THROWS_AS(parse_algebraic("(1)*g^2", K), ParseError);          // power >= degree
    CHECK_THROWS_AS(parse_algebraic("(1/0)", K), ParseError);
    CHECK_THROWS_AS(parse_algebraic("wibble", K), ParseError);
}

TEST_CASE("integer polynomial rendering") {
    CHECK(IntegerPolynomial({mpz_class(49), mpz_class(-2322), mpz_class(729)}).to_string() ==
          "729*x^2 - 2322*x + 49");
    CHECK(IntegerPolynomial({mpz_class(-933156), mpz_class(1953125)}).to_string() ==
          "1953125*x - 933156");
    CHECK(IntegerPolynomial({mpz_class(-1), mpz_class(2), mpz_class(1)}).to_string() ==
          "x^2 + 2*x - 1");
    CHECK(IntegerPolynomial({mpz_class(0), mpz_class(1)}).to_string() == "x");
}
