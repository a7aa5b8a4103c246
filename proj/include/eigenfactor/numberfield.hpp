#pragma once

#include <gmpxx.h>

#include <cctype>
#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eigenfactor/bigcomplex.hpp"
#include "eigenfactor/errors.hpp"

// Exact arithmetic in a fixed number field K = Q(gamma) given by a monic
// integer polynomial together with a distinguished complex root. Elements are
// stored as exact rational coordinate vectors on the power basis
// 1, gamma, ..., gamma^(d-1), constant coordinate first.

namespace eigenfactor {

struct IntegerPolynomial {
    std::vector<mpz_class> coeffs;  // constant term first

    IntegerPolynomial() = default;
    explicit IntegerPolynomial(std::vector<mpz_class> c) : coeffs(std::move(c)) {
        while (coeffs.size() > 1 && coeffs.back() == 0) coeffs.pop_back();
    }

    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    bool is_zero() const { return coeffs.empty() || (coeffs.size() == 1 && coeffs[0] == 0); }
    const mpz_class& leading() const { return coeffs.back(); }
    bool is_monic() const { return !coeffs.empty() && coeffs.back() == 1; }

    bool operator==(const IntegerPolynomial& o) const { return coeffs == o.coeffs; }

    // "729*x^2 - 2322*x + 49"
    std::string to_string() const;
};

namespace detail {

using QPoly = std::vector<mpq_class>;  // constant term first, trailing zeros allowed

inline void qp_trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline int qp_degree(const QPoly& p) { return static_cast<int>(p.size()) - 1; }

inline QPoly qp_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, mpq_class(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j] == 0) continue;
            r[i + j] += a[i] * b[j];
        }
    }
    qp_trim(r);
    return r;
}

inline QPoly qp_sub(QPoly a, const QPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), mpq_class(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    qp_trim(a);
    return a;
}

// Classical division; b must be nonzero.
inline std::pair<QPoly, QPoly> qp_divmod(QPoly a, const QPoly& b) {
    qp_trim(a);
    QPoly bb = b;
    qp_trim(bb);
    if (bb.empty()) throw DivisionByZero("polynomial division by zero");
    QPoly q;
    if (a.size() < bb.size()) return {q, a};
    q.assign(a.size() - bb.size() + 1, mpq_class(0));
    const mpq_class& lead = bb.back();
    for (int i = static_cast<int>(a.size()) - 1; i >= static_cast<int>(bb.size()) - 1; --i) {
        if (a[i] == 0) continue;
        mpq_class f = a[i] / lead;
        q[i - (bb.size() - 1)] = f;
        for (std::size_t j = 0; j < bb.size(); ++j) a[i - (bb.size() - 1) + j] -= f * bb[j];
    }
    qp_trim(a);
    return {q, a};
}

inline QPoly qp_monic(QPoly p) {
    qp_trim(p);
    if (p.empty()) return p;
    const mpq_class lead = p.back();
    for (auto& c : p) c /= lead;
    return p;
}

inline QPoly qp_gcd(QPoly a, QPoly b) {
    qp_trim(a);
    qp_trim(b);
    while (!b.empty()) {
        QPoly r = qp_divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return qp_monic(a);
}

inline QPoly qp_derivative(const QPoly& p) {
    QPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
    qp_trim(d);
    return d;
}

inline mpz_class isqrt_z(const mpz_class& n) {
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square_z(const mpz_class& n) {
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

// Exact square root of a non-negative rational, if it exists.
inline std::optional<mpq_class> rational_sqrt(const mpq_class& q) {
    if (sgn(q) < 0) return std::nullopt;
    const mpz_class& num = q.get_num();
    const mpz_class& den = q.get_den();
    if (!is_square_z(num) || !is_square_z(den)) return std::nullopt;
    mpq_class r(isqrt_z(num), isqrt_z(den));
    r.canonicalize();
    return r;
}

}  // namespace detail

inline std::string IntegerPolynomial::to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
        const mpz_class& c = coeffs[i];
        if (c == 0 && !(out.empty() && i == 0)) continue;
        mpz_class a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += (c < 0) ? " - " : " + ";
        }
        if (i == 0) {
            out += a.get_str();
        } else {
            if (a != 1) {
                out += a.get_str();
                out += "*";
            }
            out += (i == 1) ? "x" : ("x^" + std::to_string(i));
        }
    }
    return out;
}

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class AlgebraicNumber;

struct ComplexApprox {
    BigComplex value;
    mpf_class error_bound;
};

class NumberField : public std::enable_shared_from_this<NumberField> {
public:
    // Builds a field from a monic integer polynomial and a complex hint for
    // the distinguished root (must land within 1e-3 of an actual root). For
    // degrees up to 3 the polynomial is verified irreducible over Q.
    static FieldPtr create(const IntegerPolynomial& min_poly, std::complex<double> embedding_hint);

    int degree() const { return min_poly_.degree(); }
    const IntegerPolynomial& min_poly() const { return min_poly_; }
    const BigComplex& gamma() const { return gamma_; }
    const mpf_class& gamma_error() const { return gamma_err_; }

    // Same polynomial and same distinguished root.
    bool compatible(const NumberField& o) const {
        if (min_poly_ != o.min_poly_) return false;
        mpf_class d(0, 128);
        d = gamma_.re - o.gamma_.re;
        mpf_abs(d.get_mpf_t(), d.get_mpf_t());
        if (d > 1e-6) return false;
        d = gamma_.im - o.gamma_.im;
        mpf_abs(d.get_mpf_t(), d.get_mpf_t());
        return d <= 1e-6;
    }

    AlgebraicNumber zero() const;
    AlgebraicNumber one() const;
    AlgebraicNumber generator() const;
    AlgebraicNumber from_rational(const mpq_class& q) const;
    AlgebraicNumber element(std::vector<mpq_class> coords) const;

    // Root of min_poly near the stored root, polished to about `bits` of
    // precision; returns the refined point and its error estimate.
    BigComplex refined_gamma(mp_bitcnt_t bits, mpf_class* err_out) const {
        return detail::newton_polish(min_poly_.coeffs, gamma_, bits, err_out);
    }

private:
    NumberField(IntegerPolynomial mp, BigComplex g, mpf_class err)
        : min_poly_(std::move(mp)), gamma_(std::move(g)), gamma_err_(std::move(err)) {}

    IntegerPolynomial min_poly_;
    BigComplex gamma_;
    mpf_class gamma_err_;
};

class AlgebraicNumber {
public:
    AlgebraicNumber() = default;
    AlgebraicNumber(FieldPtr field, std::vector<mpq_class> coords)
        : field_(std::move(field)), coords_(std::move(coords)) {
        coords_.resize(static_cast<std::size_t>(field_->degree()), mpq_class(0));
        for (auto& c : coords_) c.canonicalize();
    }

    const FieldPtr& field() const { return field_; }
    const std::vector<mpq_class>& coords() const { return coords_; }

    bool is_zero() const {
        for (const auto& c : coords_)
            if (c != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < coords_.size(); ++i)
            if (coords_[i] != 0) return false;
        return true;
    }
    const mpq_class& rational_value() const {
        if (!is_rational()) throw InvariantViolation("element is not rational");
        return coords_[0];
    }

    AlgebraicNumber operator-() const {
        std::vector<mpq_class> c = coords_;
        for (auto& x : c) x = -x;
        return AlgebraicNumber(field_, std::move(c));
    }

    friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_same_field(a, b);
        std::vector<mpq_class> c = a.coords_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.coords_[i];
        return AlgebraicNumber(a.field_, std::move(c));
    }
    friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_same_field(a, b);
        std::vector<mpq_class> c = a.coords_;
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.coords_[i];
        return AlgebraicNumber(a.field_, std::move(c));
    }
    friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_same_field(a, b);
        detail::QPoly prod = detail::qp_mul(detail::QPoly(a.coords_.begin(), a.coords_.end()),
                                            detail::QPoly(b.coords_.begin(), b.coords_.end()));
        return AlgebraicNumber(a.field_, a.field_->degree() > 0
                                             ? reduce_mod_minpoly(prod, a.field_->min_poly())
                                             : std::vector<mpq_class>{});
    }
    friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        return a * b.inverse();
    }

    AlgebraicNumber inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero");
        // extended Euclid of the coordinate polynomial with min_poly
        detail::QPoly r0(field_->min_poly().coeffs.begin(), field_->min_poly().coeffs.end());
        detail::QPoly r1(coords_.begin(), coords_.end());
        detail::qp_trim(r1);
        detail::QPoly t0, t1{mpq_class(1)};
        while (detail::qp_degree(r1) > 0) {
            auto [q, r] = detail::qp_divmod(r0, r1);
            r0 = std::move(r1);
            r1 = std::move(r);
            detail::QPoly t = detail::qp_sub(t0, detail::qp_mul(q, t1));
            t0 = std::move(t1);
            t1 = std::move(t);
        }
        if (r1.empty()) throw DivisionByZero("element shares a factor with min_poly");
        const mpq_class c = r1[0];
        for (auto& x : t1) x /= c;
        return AlgebraicNumber(field_, reduce_mod_minpoly(t1, field_->min_poly()));
    }

    AlgebraicNumber pow(unsigned long e) const {
        AlgebraicNumber acc = field_->one();
        AlgebraicNumber base = *this;
        while (e) {
            if (e & 1) acc = acc * base;
            base = base * base;
            e >>= 1;
        }
        return acc;
    }

    friend bool operator==(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        check_same_field(a, b);
        return a.coords_ == b.coords_;
    }
    friend bool operator!=(const AlgebraicNumber& a, const AlgebraicNumber& b) { return !(a == b); }

    // "(73/27) + (10/9)*g"; degree-1 fields render as the bare rational.
    std::string to_string() const;

private:
    static void check_same_field(const AlgebraicNumber& a, const AlgebraicNumber& b) {
        if (!a.field_ || !b.field_) throw FieldMismatch("uninitialized element");
        if (a.field_.get() == b.field_.get()) return;
        if (!a.field_->compatible(*b.field_)) throw FieldMismatch("elements of different fields");
    }

    static std::vector<mpq_class> reduce_mod_minpoly(detail::QPoly p, const IntegerPolynomial& m) {
        const std::size_t d = static_cast<std::size_t>(m.degree());
        for (std::size_t i = p.size(); i-- > d;) {
            if (p[i] == 0) continue;
            mpq_class c = p[i];
            p[i] = 0;
            for (std::size_t j = 0; j < d; ++j) p[i - d + j] -= c * m.coeffs[j];
        }
        p.resize(d, mpq_class(0));
        return std::vector<mpq_class>(p.begin(), p.end());
    }

    FieldPtr field_;
    std::vector<mpq_class> coords_;
};

inline AlgebraicNumber NumberField::zero() const {
    return AlgebraicNumber(shared_from_this(), {});
}
inline AlgebraicNumber NumberField::one() const {
    return AlgebraicNumber(shared_from_this(), {mpq_class(1)});
}
inline AlgebraicNumber NumberField::from_rational(const mpq_class& q) const {
    return AlgebraicNumber(shared_from_this(), {q});
}
inline AlgebraicNumber NumberField::generator() const {
    if (degree() == 1) return AlgebraicNumber(shared_from_this(), {mpq_class(-min_poly_.coeffs[0])});
    std::vector<mpq_class> c(static_cast<std::size_t>(degree()), mpq_class(0));
    c[1] = 1;
    return AlgebraicNumber(shared_from_this(), std::move(c));
}
inline AlgebraicNumber NumberField::element(std::vector<mpq_class> coords) const {
    if (coords.size() > static_cast<std::size_t>(degree()))
        throw InvariantViolation("coordinate vector longer than field degree");
    return AlgebraicNumber(shared_from_this(), std::move(coords));
}

inline FieldPtr NumberField::create(const IntegerPolynomial& min_poly,
                                    std::complex<double> embedding_hint) {
    if (min_poly.degree() < 1) throw NotMonic("min_poly must have degree at least 1");
    if (!min_poly.is_monic()) throw NotMonic("min_poly must be monic");
    const int d = min_poly.degree();
    if (d >= 2 && min_poly.coeffs[0] == 0) throw Reducible("x divides min_poly");
    if (d == 2) {
        mpz_class disc = min_poly.coeffs[1] * min_poly.coeffs[1] - 4 * min_poly.coeffs[0];
        if (detail::is_square_z(disc)) throw Reducible("quadratic with square discriminant");
    }
    if (d == 3) {
        // monic integer cubic is reducible over Q iff it has an integer root
        mpz_class c0 = abs(min_poly.coeffs[0]);
        mpz_class bound = detail::isqrt_z(c0);
        auto has_root = [&](const mpz_class& r) {
            mpz_class acc = 0;
            for (auto it = min_poly.coeffs.rbegin(); it != min_poly.coeffs.rend(); ++it)
                acc = acc * r + *it;
            return acc == 0;
        };
        for (mpz_class i = 1; i <= bound; ++i) {
            if (c0 % i != 0) continue;
            mpz_class j = c0 / i;
            if (has_root(i) || has_root(-i) || has_root(j) || has_root(-j))
                throw Reducible("cubic with rational root");
        }
    }

    const mp_bitcnt_t prec = 384;  // comfortably past the 1e-30 target
    std::vector<BigComplex> roots = detail::all_roots(min_poly.coeffs, prec);
    BigComplex hint(prec);
    hint.re = embedding_hint.real();
    hint.im = embedding_hint.imag();
    int best = -1;
    mpf_class best_d(0, prec);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        mpf_class dist = cabs(csub(roots[i], hint));
        if (best < 0 || dist < best_d) {
            best = static_cast<int>(i);
            best_d = dist;
        }
    }
    if (best < 0 || best_d > 1e-3)
        throw NoNearbyRoot("embedding hint is not within 1e-3 of any root");
    mpf_class err(0, prec);
    BigComplex gamma = detail::newton_polish(min_poly.coeffs, roots[static_cast<std::size_t>(best)],
                                             prec, &err);
    if (err > 1e-30) throw NoNearbyRoot("failed to refine the embedding to 1e-30");
    return FieldPtr(new NumberField(min_poly, std::move(gamma), std::move(err)));
}

// ------------------------------------------------------------------
// minimal polynomials and denominators

// Primitive integer minimal polynomial of z, positive leading coefficient:
// characteristic polynomial of multiplication-by-z, square-free part,
// denominators cleared.
inline IntegerPolynomial min_poly_of(const AlgebraicNumber& z) {
    const int d = z.field()->degree();

    // columns: z * gamma^j on the power basis
    std::vector<std::vector<mpq_class>> col(static_cast<std::size_t>(d));
    AlgebraicNumber basis = z;
    const AlgebraicNumber gen = z.field()->generator();
    for (int j = 0; j < d; ++j) {
        col[static_cast<std::size_t>(j)] = basis.coords();
        if (j + 1 < d) basis = basis * gen;
    }
    // Faddeev-LeVerrier on M with M[i][j] = col[j][i]
    auto mat_mul = [&](const std::vector<std::vector<mpq_class>>& A,
                       const std::vector<std::vector<mpq_class>>& B) {
        std::vector<std::vector<mpq_class>> C(
            static_cast<std::size_t>(d),
            std::vector<mpq_class>(static_cast<std::size_t>(d), mpq_class(0)));
        for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k) {
                const mpq_class& a = A[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
                if (a == 0) continue;
                for (int j = 0; j < d; ++j)
                    C[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                        a * B[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
            }
        return C;
    };
    std::vector<std::vector<mpq_class>> M(
        static_cast<std::size_t>(d), std::vector<mpq_class>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                col[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
    std::vector<mpq_class> c(static_cast<std::size_t>(d) + 1, mpq_class(0));
    c[static_cast<std::size_t>(d)] = 1;  // monic
    std::vector<std::vector<mpq_class>> Mk = M;
    for (int k = 1; k <= d; ++k) {
        mpq_class tr = 0;
        for (int i = 0; i < d; ++i)
            tr += Mk[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        mpq_class ck = -tr / k;
        c[static_cast<std::size_t>(d - k)] = ck;
        if (k < d) {
            for (int i = 0; i < d; ++i)
                Mk[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] += ck;
            Mk = mat_mul(M, Mk);
        }
    }
    detail::QPoly charpoly(c.begin(), c.end());

    // square-free part = charpoly / gcd(charpoly, charpoly'); irreducible here
    detail::QPoly g = detail::qp_gcd(charpoly, detail::qp_derivative(charpoly));
    detail::QPoly m = charpoly;
    if (detail::qp_degree(g) > 0) {
        auto [q, r] = detail::qp_divmod(charpoly, g);
        if (!r.empty()) throw InvariantViolation("square-free extraction left a remainder");
        m = detail::qp_monic(q);
    }

    mpz_class den = 1;
    for (const auto& q : m) den = lcm(den, q.get_den());
    std::vector<mpz_class> zc(m.size());
    mpz_class content = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        mpq_class t = m[i] * den;
        zc[i] = t.get_num();
        content = gcd(content, zc[i]);
    }
    if (content == 0) content = 1;
    for (auto& x : zc) x /= content;
    if (zc.back() < 0)
        for (auto& x : zc) x = -x;
    return IntegerPolynomial(std::move(zc));
}

// The denominator of z: the leading coefficient of its primitive minimal
// polynomial over Z (1 exactly when z is an algebraic integer).
inline mpz_class denominator_of(const AlgebraicNumber& z) { return min_poly_of(z).leading(); }

// Evaluate an integer polynomial at a field element.
inline AlgebraicNumber evaluate(const IntegerPolynomial& p, const AlgebraicNumber& z) {
    AlgebraicNumber acc = z.field()->zero();
    for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it)
        acc = acc * z + z.field()->from_rational(mpq_class(*it));
    return acc;
}

// ------------------------------------------------------------------
// embeddings

// Complex approximation of z under the distinguished embedding, accurate to
// 10^-digits.
inline ComplexApprox embed(const AlgebraicNumber& z, unsigned digits = 30) {
    if (digits < 1) digits = 1;
    const mp_bitcnt_t prec =
        static_cast<mp_bitcnt_t>((static_cast<double>(digits) + 40) * 3.33) + 64;
    mpf_class gerr(0, prec);
    BigComplex g = z.field()->refined_gamma(prec, &gerr);
    BigComplex acc(prec);
    for (auto it = z.coords().rbegin(); it != z.coords().rend(); ++it) {
        acc = cmul(acc, g);
        acc.re += mpf_class(*it, prec);
    }
    // error: |dP/dgamma| * gamma_err plus rounding slack
    mpf_class radius = cabs(g);
    radius += 1;
    mpf_class deriv_bound(0, prec);
    mpf_class power(1, prec);
    for (std::size_t i = 1; i < z.coords().size(); ++i) {
        mpf_class a(0, prec);
        mpf_abs(a.get_mpf_t(), mpf_class(z.coords()[i], prec).get_mpf_t());
        deriv_bound += a * power * static_cast<unsigned long>(i);
        power *= radius;
    }
    mpf_class rounding = cabs(acc);
    rounding += 1;
    mpf_div_2exp(rounding.get_mpf_t(), rounding.get_mpf_t(), prec > 64 ? prec - 32 : 32);
    ComplexApprox out{BigComplex(prec), mpf_class(0, prec)};
    out.value = acc;
    out.error_bound = gerr * deriv_bound + rounding;
    // by construction this sits far below the request; clamp up to the contract
    mpf_class target(0, prec);
    mpf_class ten(10, prec);
    mpf_pow_ui(target.get_mpf_t(), ten.get_mpf_t(), digits);
    target = 1 / target;
    if (out.error_bound > target)
        throw InvariantViolation("embedding error bound exceeds requested precision");
    return out;
}

namespace detail {

// Sign normalization for square roots: pick the root whose embedding has
// positive real part (ties: non-negative imaginary part).
inline AlgebraicNumber normalize_sqrt_sign(const AlgebraicNumber& w) {
    for (unsigned digits : {30u, 60u, 120u}) {
        ComplexApprox a = embed(w, digits);
        mpf_class are(0, a.value.precision());
        mpf_abs(are.get_mpf_t(), a.value.re.get_mpf_t());
        if (are > a.error_bound) return sgn(a.value.re) > 0 ? w : -w;
        mpf_class aim(0, a.value.precision());
        mpf_abs(aim.get_mpf_t(), a.value.im.get_mpf_t());
        if (aim > a.error_bound) return sgn(a.value.im) > 0 ? w : -w;
    }
    return w;  // indistinguishable from zero on both axes
}

}  // namespace detail

// ------------------------------------------------------------------
// square roots in K

struct SqrtOptions {
    // continued-fraction denominator bound for the degree >= 3 reconstruction
    mpz_class den_bound = mpz_class("100000000000000000000000000000000");  // 1e32
    mp_bitcnt_t precision = 512;
};

// Exact square root of z in K, if one exists. Returned root has embedding
// with non-negative real part (tie: non-negative imaginary part). Degrees 1
// and 2 are solved in closed form; higher degrees reconstruct rational
// coordinates from conjugate square roots and verify exactly.
inline std::optional<AlgebraicNumber> sqrt_in_field(const AlgebraicNumber& z,
                                                    const SqrtOptions& opts = {}) {
    const FieldPtr& K = z.field();
    const int d = K->degree();
    if (z.is_zero()) return K->zero();

    if (d == 1) {
        auto r = detail::rational_sqrt(z.coords()[0]);
        if (!r) return std::nullopt;
        return K->from_rational(*r);
    }

    if (d == 2) {
        // w = u + v*gamma with gamma^2 = -c1*gamma - c0; matching coordinates
        // of w^2 = z = a + b*gamma gives u^2 - c0 v^2 = a, 2uv - c1 v^2 = b.
        // With s = v^2 this collapses to
        //   (c1^2 - 4 c0) s^2 + (2 b c1 - 4 a) s + b^2 = 0.
        const mpq_class c0(K->min_poly().coeffs[0]);
        const mpq_class c1(K->min_poly().coeffs[1]);
        const mpq_class a = z.coords()[0];
        const mpq_class b = z.coords()[1];
        const mpq_class lead = c1 * c1 - 4 * c0;  // field discriminant, nonzero
        const mpq_class lin = 2 * b * c1 - 4 * a;
        const mpq_class cst = b * b;
        auto disc = detail::rational_sqrt(lin * lin - 4 * lead * cst);
        if (!disc) return std::nullopt;
        for (int sign : {+1, -1}) {
            mpq_class s = (-lin + sign * *disc) / (2 * lead);
            if (sgn(s) < 0) continue;
            if (s == 0) {
                auto u = detail::rational_sqrt(a);
                if (!u) continue;
                AlgebraicNumber w = K->element({*u, mpq_class(0)});
                if (w * w == z) return detail::normalize_sqrt_sign(w);
                continue;
            }
            auto v = detail::rational_sqrt(s);
            if (!v) continue;
            mpq_class u = (b + c1 * s) / (2 * *v);
            AlgebraicNumber w = K->element({u, *v});
            if (w * w == z) return detail::normalize_sqrt_sign(w);
        }
        return std::nullopt;
    }

    // degree >= 3: numeric reconstruction across conjugates (best effort)
    const mp_bitcnt_t prec = opts.precision;
    std::vector<BigComplex> roots = detail::all_roots(K->min_poly().coeffs, prec);
    const std::size_t n = roots.size();
    std::vector<BigComplex> zconj;
    for (const auto& r : roots) {
        BigComplex acc(prec);
        for (auto it = z.coords().rbegin(); it != z.coords().rend(); ++it) {
            acc = cmul(acc, r);
            acc.re += mpf_class(*it, prec);
        }
        zconj.push_back(acc);
    }
    std::vector<BigComplex> sq;
    for (const auto& c : zconj) sq.push_back(csqrt(c));
    mpf_class tol(0, prec);
    mpf_div_2exp(tol.get_mpf_t(), mpf_class(1, prec).get_mpf_t(), prec / 3);

    for (std::uint64_t mask = 0; mask < (1ull << (n - 1)); ++mask) {
        // solve the Vandermonde system V x = rhs by Gaussian elimination
        std::vector<std::vector<BigComplex>> A(n, std::vector<BigComplex>(n, BigComplex(prec)));
        std::vector<BigComplex> rhs;
        for (std::size_t i = 0; i < n; ++i) {
            BigComplex p(prec);
            p.re = 1;
            for (std::size_t j = 0; j < n; ++j) {
                A[i][j] = p;
                p = cmul(p, roots[i]);
            }
            BigComplex s = sq[i];
            if (i > 0 && (mask >> (i - 1)) & 1) s = cneg(s);
            rhs.push_back(s);
        }
        bool singular = false;
        for (std::size_t col = 0; col < n && !singular; ++col) {
            std::size_t piv = col;
            mpf_class best = cnorm(A[col][col]);
            for (std::size_t r = col + 1; r < n; ++r) {
                mpf_class cand = cnorm(A[r][col]);
                if (cand > best) {
                    best = cand;
                    piv = r;
                }
            }
            if (sgn(best) == 0) {
                singular = true;
                break;
            }
            std::swap(A[col], A[piv]);
            std::swap(rhs[col], rhs[piv]);
            for (std::size_t r = 0; r < n; ++r) {
                if (r == col) continue;
                if (A[r][col].is_zero()) continue;
                BigComplex f = cdiv(A[r][col], A[col][col]);
                for (std::size_t cc = col; cc < n; ++cc)
                    A[r][cc] = csub(A[r][cc], cmul(f, A[col][cc]));
                rhs[r] = csub(rhs[r], cmul(f, rhs[col]));
            }
        }
        if (singular) continue;
        std::vector<mpq_class> coords;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            BigComplex x = cdiv(rhs[i], A[i][i]);
            mpf_class aim(0, prec);
            mpf_abs(aim.get_mpf_t(), x.im.get_mpf_t());
            if (aim > tol) {
                ok = false;
                break;
            }
            auto q = detail::rational_reconstruct(x.re, opts.den_bound, tol);
            if (!q) {
                ok = false;
                break;
            }
            coords.push_back(*q);
        }
        if (!ok) continue;
        AlgebraicNumber w = K->element(std::move(coords));
        if (w * w == z) return detail::normalize_sqrt_sign(w);
    }
    return std::nullopt;
}

// ------------------------------------------------------------------
// text grammar

inline std::string AlgebraicNumber::to_string() const {
    if (field_->degree() == 1) return coords_[0].get_str();
    std::string out;
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (i > 0) out += " + ";
        out += "(" + coords_[i].get_str() + ")";
        if (i == 1) out += "*g";
        if (i > 1) out += "*g^" + std::to_string(i);
    }
    return out;
}

namespace detail {

inline void skip_ws(const std::string& s, std::size_t& i) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

inline mpq_class parse_rational_token(const std::string& s, std::size_t& i) {
    skip_ws(s, i);
    std::size_t start = i;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        negative = s[i] == '-';
        ++i;
        start = i;
    }
    std::size_t digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (digits == 0) throw ParseError("expected a rational at position " + std::to_string(start));
    if (i < s.size() && s[i] == '/') {
        ++i;
        std::size_t dd = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++dd;
        if (dd == 0) throw ParseError("expected a denominator at position " + std::to_string(i));
    }
    mpq_class q;
    if (mpq_set_str(q.get_mpq_t(), s.substr(start, i - start).c_str(), 10) != 0)
        throw ParseError("bad rational '" + s.substr(start, i - start) + "'");
    if (sgn(q.get_den()) == 0) throw ParseError("zero denominator");
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

}  // namespace detail

// Parses the rendering grammar: "(c0) + (c1)*g + (c2)*g^2 ..." or a bare
// rational. Missing powers default to zero; duplicates are rejected.
inline AlgebraicNumber parse_algebraic(const std::string& text, const FieldPtr& field) {
    const std::size_t d = static_cast<std::size_t>(field->degree());
    std::vector<mpq_class> coords(d, mpq_class(0));
    std::vector<bool> seen(d, false);
    std::size_t i = 0;
    detail::skip_ws(text, i);
    if (i >= text.size()) throw ParseError("empty algebraic number");
    bool first = true;
    while (i < text.size()) {
        if (!first) {
            detail::skip_ws(text, i);
            if (i >= text.size()) break;
            if (text[i] != '+') throw ParseError("expected '+' between terms");
            ++i;
        }
        detail::skip_ws(text, i);
        mpq_class value;
        if (i < text.size() && text[i] == '(') {
            ++i;
            value = detail::parse_rational_token(text, i);
            detail::skip_ws(text, i);
            if (i >= text.size() || text[i] != ')') throw ParseError("expected ')'");
            ++i;
        } else {
            value = detail::parse_rational_token(text, i);
        }
        std::size_t power = 0;
        detail::skip_ws(text, i);
        if (i < text.size() && text[i] == '*') {
            ++i;
            detail::skip_ws(text, i);
            if (i >= text.size() || text[i] != 'g') throw ParseError("expected 'g'");
            ++i;
            power = 1;
            if (i < text.size() && text[i] == '^') {
                ++i;
                std::size_t start = i;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
                if (i == start) throw ParseError("expected an exponent after '^'");
                power = std::stoul(text.substr(start, i - start));
            }
        }
        if (power >= d) throw ParseError("power " + std::to_string(power) + " exceeds field degree");
        if (seen[power]) throw ParseError("duplicate coordinate for power " + std::to_string(power));
        seen[power] = true;
        coords[power] = value;
        first = false;
        detail::skip_ws(text, i);
    }
    return AlgebraicNumber(field, std::move(coords));
}

}  // namespace eigenfactor
