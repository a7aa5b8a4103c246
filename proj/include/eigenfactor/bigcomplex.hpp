#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "eigenfactor/errors.hpp"

// Arbitrary-precision complex scratch arithmetic: just enough to polish
// polynomial roots, evaluate embeddings with error bounds, and reconstruct
// rationals from approximations. Not a general complex type.

namespace eigenfactor {

struct BigComplex {
    mpf_class re;
    mpf_class im;

    explicit BigComplex(mp_bitcnt_t prec = 128) : re(0, prec), im(0, prec) {}
    BigComplex(const mpf_class& r, const mpf_class& i) : re(r), im(i) {}

    mp_bitcnt_t precision() const { return re.get_prec(); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
};

inline BigComplex cadd(const BigComplex& a, const BigComplex& b) {
    mp_bitcnt_t p = std::max(a.precision(), b.precision());
    BigComplex r(p);
    r.re = a.re + b.re;
    r.im = a.im + b.im;
    return r;
}

inline BigComplex csub(const BigComplex& a, const BigComplex& b) {
    mp_bitcnt_t p = std::max(a.precision(), b.precision());
    BigComplex r(p);
    r.re = a.re - b.re;
    r.im = a.im - b.im;
    return r;
}

inline BigComplex cmul(const BigComplex& a, const BigComplex& b) {
    mp_bitcnt_t p = std::max(a.precision(), b.precision());
    BigComplex r(p);
    r.re = a.re * b.re - a.im * b.im;
    r.im = a.re * b.im + a.im * b.re;
    return r;
}

// |z|^2
inline mpf_class cnorm(const BigComplex& a) {
    mpf_class r(0, a.precision());
    r = a.re * a.re + a.im * a.im;
    return r;
}

inline mpf_class cabs(const BigComplex& a) {
    mpf_class r(0, a.precision());
    mpf_sqrt(r.get_mpf_t(), cnorm(a).get_mpf_t());
    return r;
}

inline BigComplex cdiv(const BigComplex& a, const BigComplex& b) {
    mp_bitcnt_t p = std::max(a.precision(), b.precision());
    mpf_class d = cnorm(b);
    if (sgn(d) == 0) throw DivisionByZero("complex division by zero");
    BigComplex r(p);
    r.re = (a.re * b.re + a.im * b.im) / d;
    r.im = (a.im * b.re - a.re * b.im) / d;
    return r;
}

inline BigComplex cneg(const BigComplex& a) {
    BigComplex r(a.precision());
    r.re = -a.re;
    r.im = -a.im;
    return r;
}

// Principal square root: result in the closed right half plane, branch cut on
// the negative real axis mapping to the positive imaginary axis.
inline BigComplex csqrt(const BigComplex& z) {
    mp_bitcnt_t p = z.precision();
    BigComplex r(p);
    if (z.is_zero()) return r;
    mpf_class m = cabs(z);
    mpf_class t(0, p);
    if (sgn(z.re) >= 0) {
        t = (m + z.re) / 2;
        mpf_sqrt(t.get_mpf_t(), t.get_mpf_t());
        r.re = t;
        r.im = z.im / (2 * t);
    } else {
        t = (m - z.re) / 2;
        mpf_sqrt(t.get_mpf_t(), t.get_mpf_t());
        if (sgn(z.im) >= 0) {
            r.re = z.im / (2 * t);
            r.im = t;
        } else {
            r.re = -z.im / (2 * t);
            r.im = -t;
        }
    }
    return r;
}

namespace detail {

// Horner evaluation of an integer polynomial (constant term first).
inline BigComplex poly_eval(const std::vector<mpz_class>& coeffs, const BigComplex& z) {
    mp_bitcnt_t p = z.precision();
    BigComplex acc(p);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
        acc = cmul(acc, z);
        acc.re += mpf_class(*it, p);
    }
    return acc;
}

inline std::vector<mpz_class> poly_derivative(const std::vector<mpz_class>& coeffs) {
    std::vector<mpz_class> d;
    for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(coeffs[i] * static_cast<unsigned long>(i));
    if (d.empty()) d.emplace_back(0);
    return d;
}

// One Newton polish pass. Returns the refined point and an error estimate
// (twice the magnitude of the last correction).
inline BigComplex newton_polish(const std::vector<mpz_class>& coeffs, BigComplex z,
                                mp_bitcnt_t prec, mpf_class* err_out = nullptr) {
    std::vector<mpz_class> deriv = poly_derivative(coeffs);
    BigComplex cur(prec);
    cur.re = z.re;
    cur.im = z.im;
    mpf_class step(0, prec);
    mpf_class eps(0, prec);
    mpf_div_2exp(eps.get_mpf_t(), mpf_class(1, prec).get_mpf_t(), prec > 24 ? prec - 12 : 12);
    for (int it = 0; it < 256; ++it) {
        BigComplex f = poly_eval(coeffs, cur);
        BigComplex fp = poly_eval(deriv, cur);
        if (sgn(cnorm(fp)) == 0) break;
        BigComplex dz = cdiv(f, fp);
        cur = csub(cur, dz);
        step = cabs(dz);
        mpf_class scale = cabs(cur);
        if (scale < 1) scale = 1;
        if (step <= eps * scale) {
            // one extra pass so the final correction reflects the converged point
            f = poly_eval(coeffs, cur);
            fp = poly_eval(deriv, cur);
            if (sgn(cnorm(fp)) != 0) {
                dz = cdiv(f, fp);
                cur = csub(cur, dz);
                step = cabs(dz);
            }
            break;
        }
    }
    if (err_out) {
        *err_out = mpf_class(2 * step + eps, prec);
    }
    return cur;
}

// All complex roots of a monic integer polynomial by Durand-Kerner iteration.
// Intended for the small degrees this library works at.
inline std::vector<BigComplex> all_roots(const std::vector<mpz_class>& coeffs, mp_bitcnt_t prec) {
    const std::size_t deg = coeffs.size() - 1;
    std::vector<BigComplex> roots;
    if (deg == 0) return roots;
    if (deg == 1) {
        BigComplex r(prec);
        r.re = mpf_class(-coeffs[0], prec);
        roots.push_back(r);
        return roots;
    }
    mpf_class radius(1, prec);
    for (std::size_t i = 0; i < deg; ++i) {
        mpf_class a(0, prec);
        mpf_abs(a.get_mpf_t(), mpf_class(coeffs[i], prec).get_mpf_t());
        if (a > radius) radius = a;
    }
    radius += 1;
    BigComplex seed(prec);
    seed.re = mpf_class("0.4", prec);
    seed.im = mpf_class("0.9", prec);
    BigComplex cur(prec);
    cur.re = radius * seed.re;
    cur.im = radius * seed.im;
    for (std::size_t i = 0; i < deg; ++i) {
        roots.push_back(cur);
        cur = cmul(cur, seed);
    }
    mpf_class eps(0, prec);
    mpf_div_2exp(eps.get_mpf_t(), mpf_class(1, prec).get_mpf_t(), prec > 32 ? prec - 16 : 16);
    for (int it = 0; it < 4000; ++it) {
        mpf_class worst(0, prec);
        for (std::size_t i = 0; i < deg; ++i) {
            BigComplex num = poly_eval(coeffs, roots[i]);
            BigComplex den(prec);
            den.re = 1;
            for (std::size_t j = 0; j < deg; ++j) {
                if (j == i) continue;
                den = cmul(den, csub(roots[i], roots[j]));
            }
            if (sgn(cnorm(den)) == 0) {
                // nudge coincident points apart
                roots[i].re += eps + mpf_class(1e-8, prec);
                continue;
            }
            BigComplex dz = cdiv(num, den);
            roots[i] = csub(roots[i], dz);
            mpf_class s = cabs(dz);
            if (s > worst) worst = s;
        }
        if (worst <= eps * radius) break;
    }
    for (std::size_t i = 0; i < deg; ++i) roots[i] = newton_polish(coeffs, roots[i], prec);
    // deterministic order: by real part, then imaginary part
    std::sort(roots.begin(), roots.end(), [](const BigComplex& a, const BigComplex& b) {
        int c = cmp(a.re, b.re);
        if (c != 0) return c < 0;
        return cmp(a.im, b.im) < 0;
    });
    return roots;
}

// Continued-fraction rational reconstruction of a real approximation.
// Returns the first convergent within tol, refusing denominators above bound.
inline std::optional<mpq_class> rational_reconstruct(const mpf_class& x, const mpz_class& den_bound,
                                                     const mpf_class& tol) {
    mp_bitcnt_t prec = x.get_prec();
    mpz_class h_prev = 1, h = 0, k_prev = 0, k = 1;  // h/k starts as 0/1 after first step
    // initialize with a0
    mpf_class cur(x, prec);
    mpz_class a;
    mpf_class fl(0, prec);
    mpf_floor(fl.get_mpf_t(), cur.get_mpf_t());
    a = mpz_class(fl);
    h = a;
    k = 1;
    h_prev = 1;
    k_prev = 0;
    mpf_class frac = cur - fl;
    for (int it = 0; it < 20000; ++it) {
        mpq_class cand(h, k);
        cand.canonicalize();
        mpf_class approx(cand, prec);
        mpf_class diff = x - approx;
        mpf_abs(diff.get_mpf_t(), diff.get_mpf_t());
        if (diff <= tol) return cand;
        if (sgn(frac) == 0) return std::nullopt;
        cur = 1 / frac;
        mpf_floor(fl.get_mpf_t(), cur.get_mpf_t());
        a = mpz_class(fl);
        frac = cur - fl;
        mpz_class h_next = a * h + h_prev;
        mpz_class k_next = a * k + k_prev;
        h_prev = h;
        k_prev = k;
        h = h_next;
        k = k_next;
        if (k > den_bound) return std::nullopt;
    }
    return std::nullopt;
}

// Fixed-point decimal rendering with round-half-up, e.g. (-6.07106..., 4) -> "-6.0711".
inline std::string format_fixed(const mpf_class& x, std::size_t decimals) {
    mp_bitcnt_t prec = std::max<mp_bitcnt_t>(x.get_prec(), static_cast<mp_bitcnt_t>(decimals * 4 + 64));
    bool neg = sgn(x) < 0;
    mpf_class ax(0, prec);
    mpf_abs(ax.get_mpf_t(), x.get_mpf_t());
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(decimals));
    mpf_class scaled(0, prec);
    scaled = ax * mpf_class(scale, prec);
    scaled += mpf_class(0.5, prec);
    mpz_class units;
    mpz_set_f(units.get_mpz_t(), scaled.get_mpf_t());
    std::string digits = units.get_str();
    if (digits.size() <= decimals) digits.insert(0, decimals + 1 - digits.size(), '0');
    std::string out;
    if (neg && units != 0) out += '-';
    out += digits.substr(0, digits.size() - decimals);
    if (decimals > 0) {
        out += '.';
        out += digits.substr(digits.size() - decimals);
    }
    return out;
}

}  // namespace detail
}  // namespace eigenfactor
