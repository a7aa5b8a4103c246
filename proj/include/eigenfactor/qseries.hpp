#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "eigenfactor/errors.hpp"

// Truncated power series over arbitrary-precision integers, sized for honest
// q-expansion work: coefficient vectors of length T, arithmetic never touching
// indices >= T. The multiplication kernel has three bit-identical paths:
// schoolbook (reference), Karatsuba splitting, and Kronecker substitution
// through one big GMP integer product.

namespace eigenfactor {

struct TruncatedSeries {
    std::vector<mpz_class> c;  // c[i] = coefficient of q^i; size() is the truncation

    TruncatedSeries() = default;
    explicit TruncatedSeries(std::size_t truncation) : c(truncation) {}
    explicit TruncatedSeries(std::vector<mpz_class> coeffs) : c(std::move(coeffs)) {}

    std::size_t truncation() const { return c.size(); }
    const mpz_class& at(std::size_t i) const { return c[i]; }

    bool operator==(const TruncatedSeries& o) const { return c == o.c; }
};

enum class MulAlgorithm { Auto, Schoolbook, Karatsuba, Kronecker };

struct MulPolicy {
    std::size_t fast_threshold = 64;        // schoolbook below this many terms
    std::size_t kronecker_threshold = 2048;  // Karatsuba below, Kronecker from here up
};

namespace detail {

inline void school_mul_into(const mpz_class* a, std::size_t na, const mpz_class* b, std::size_t nb,
                            mpz_class* out, std::size_t limit) {
    // out must hold `limit` zero-initialized entries
    for (std::size_t i = 0; i < na && i < limit; ++i) {
        if (sgn(a[i]) == 0) continue;
        const std::size_t jmax = std::min(nb, limit - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (sgn(b[j]) == 0) continue;
            mpz_addmul(out[i + j].get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        }
    }
}

// Full product by Karatsuba splitting; result length na + nb - 1.
inline std::vector<mpz_class> kara_full(const mpz_class* a, std::size_t na, const mpz_class* b,
                                        std::size_t nb, std::size_t base_threshold) {
    if (na == 0 || nb == 0) return {};
    std::vector<mpz_class> out(na + nb - 1);
    if (na <= base_threshold || nb <= base_threshold) {
        school_mul_into(a, na, b, nb, out.data(), out.size());
        return out;
    }
    const std::size_t h = std::min(na, nb) / 2;
    // a = a0 + x^h a1, b = b0 + x^h b1
    std::vector<mpz_class> z0 = kara_full(a, h, b, h, base_threshold);
    std::vector<mpz_class> z2 = kara_full(a + h, na - h, b + h, nb - h, base_threshold);
    std::vector<mpz_class> as(std::max(h, na - h));
    std::vector<mpz_class> bs(std::max(h, nb - h));
    for (std::size_t i = 0; i < as.size(); ++i) {
        if (i < h) as[i] = a[i];
        if (i < na - h) as[i] += a[h + i];
    }
    for (std::size_t i = 0; i < bs.size(); ++i) {
        if (i < h) bs[i] = b[i];
        if (i < nb - h) bs[i] += b[h + i];
    }
    std::vector<mpz_class> z1 = kara_full(as.data(), as.size(), bs.data(), bs.size(), base_threshold);
    for (std::size_t i = 0; i < z1.size(); ++i) {
        if (i < z0.size()) z1[i] -= z0[i];
        if (i < z2.size()) z1[i] -= z2[i];
    }
    for (std::size_t i = 0; i < z0.size(); ++i) out[i] += z0[i];
    for (std::size_t i = 0; i < z1.size(); ++i) out[h + i] += z1[i];
    for (std::size_t i = 0; i < z2.size(); ++i) out[2 * h + i] += z2[i];
    return out;
}

inline std::size_t max_coeff_bits(const std::vector<mpz_class>& v) {
    std::size_t bits = 0;
    for (const auto& x : v) {
        if (sgn(x) == 0) continue;
        bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
    }
    return bits;
}

// Packs the non-negative part (sign = +1) or negated negative part
// (sign = -1) of v into one big integer with slot_bytes bytes per slot.
inline mpz_class kronecker_pack(const std::vector<mpz_class>& v, int sign, std::size_t slot_bytes) {
    std::vector<unsigned char> buf(v.size() * slot_bytes, 0);
    mpz_class tmp;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (sgn(v[i]) != sign) continue;
        tmp = abs(v[i]);
        std::size_t count = 0;
        mpz_export(buf.data() + i * slot_bytes, &count, -1, 1, 0, 0, tmp.get_mpz_t());
    }
    mpz_class packed;
    mpz_import(packed.get_mpz_t(), buf.size(), -1, 1, 0, 0, buf.data());
    return packed;
}

// Reads the first `limit` slots back out of a non-negative packed integer.
inline std::vector<mpz_class> kronecker_unpack(const mpz_class& packed, std::size_t slot_bytes,
                                               std::size_t limit) {
    const std::size_t total_bytes =
        sgn(packed) == 0 ? 0 : (mpz_sizeinbase(packed.get_mpz_t(), 2) + 7) / 8;
    std::vector<unsigned char> buf(std::max(total_bytes, limit * slot_bytes), 0);
    std::size_t count = 0;
    if (sgn(packed) != 0) mpz_export(buf.data(), &count, -1, 1, 0, 0, packed.get_mpz_t());
    std::vector<mpz_class> out(limit);
    for (std::size_t i = 0; i < limit; ++i)
        mpz_import(out[i].get_mpz_t(), slot_bytes, -1, 1, 0, 0, buf.data() + i * slot_bytes);
    return out;
}

inline std::vector<mpz_class> kronecker_mul(const std::vector<mpz_class>& a,
                                            const std::vector<mpz_class>& b, std::size_t limit) {
    const std::size_t ba = max_coeff_bits(a);
    const std::size_t bb = max_coeff_bits(b);
    if (ba == 0 || bb == 0) return std::vector<mpz_class>(limit);
    std::size_t lg = 1;
    while ((std::size_t{1} << lg) < std::min(a.size(), b.size())) ++lg;
    const std::size_t slot_bits = ba + bb + lg + 2;
    const std::size_t slot_bytes = (slot_bits + 7) / 8;
    mpz_class ap = kronecker_pack(a, +1, slot_bytes);
    mpz_class am = kronecker_pack(a, -1, slot_bytes);
    mpz_class bp = kronecker_pack(b, +1, slot_bytes);
    mpz_class bm = kronecker_pack(b, -1, slot_bytes);
    mpz_class pos = ap * bp + am * bm;
    mpz_class neg = ap * bm + am * bp;
    std::vector<mpz_class> up = kronecker_unpack(pos, slot_bytes, limit);
    std::vector<mpz_class> un = kronecker_unpack(neg, slot_bytes, limit);
    for (std::size_t i = 0; i < limit; ++i) up[i] -= un[i];
    return up;
}

}  // namespace detail

// Product truncated at the common truncation. All algorithm choices produce
// identical coefficients; Auto picks by size against the policy thresholds.
inline TruncatedSeries series_mul(const TruncatedSeries& a, const TruncatedSeries& b,
                                  MulAlgorithm alg = MulAlgorithm::Auto,
                                  const MulPolicy& policy = {}) {
    if (a.truncation() != b.truncation())
        throw TruncationMismatch("series truncations differ: " + std::to_string(a.truncation()) +
                                 " vs " + std::to_string(b.truncation()));
    const std::size_t T = a.truncation();
    if (alg == MulAlgorithm::Auto) {
        if (T <= policy.fast_threshold)
            alg = MulAlgorithm::Schoolbook;
        else if (T < policy.kronecker_threshold)
            alg = MulAlgorithm::Karatsuba;
        else
            alg = MulAlgorithm::Kronecker;
    }
    TruncatedSeries r(T);
    switch (alg) {
        case MulAlgorithm::Schoolbook:
            detail::school_mul_into(a.c.data(), T, b.c.data(), T, r.c.data(), T);
            break;
        case MulAlgorithm::Karatsuba: {
            std::vector<mpz_class> full =
                detail::kara_full(a.c.data(), T, b.c.data(), T, policy.fast_threshold);
            for (std::size_t i = 0; i < T && i < full.size(); ++i) r.c[i] = std::move(full[i]);
            break;
        }
        case MulAlgorithm::Kronecker:
            r.c = detail::kronecker_mul(a.c, b.c, T);
            break;
        case MulAlgorithm::Auto:
            break;  // unreachable
    }
    return r;
}

// prod_{n>=1} (1 - q^n)^3 truncated at T, via the sparse identity
// sum_{m>=0} (-1)^m (2m+1) q^{m(m+1)/2}.
inline TruncatedSeries eta_cubed(std::size_t T) {
    if (T < 1) throw GuardExceeded("eta_cubed needs T >= 1");
    TruncatedSeries r(T);
    for (unsigned long m = 0;; ++m) {
        unsigned long idx = m * (m + 1) / 2;
        if (idx >= T) break;
        r.c[idx] = (m % 2 == 0) ? mpz_class(2 * m + 1) : mpz_class(-static_cast<long>(2 * m + 1));
    }
    return r;
}

// q-expansion of Delta = q prod (1 - q^n)^24 truncated at T: the coefficient
// of q^n is tau(n) for 1 <= n < T. Built as q * (eta_cubed)^8 with three
// truncated squarings.
inline TruncatedSeries delta_qexp(std::size_t T, std::size_t guard = 10'000'000,
                                  const MulPolicy& policy = {}) {
    if (T < 2) throw GuardExceeded("delta_qexp needs T >= 2");
    if (T > guard)
        throw GuardExceeded("truncation " + std::to_string(T) + " exceeds the guard " +
                            std::to_string(guard));
    TruncatedSeries e = eta_cubed(T);
    TruncatedSeries s = series_mul(e, e, MulAlgorithm::Auto, policy);
    s = series_mul(s, s, MulAlgorithm::Auto, policy);
    s = series_mul(s, s, MulAlgorithm::Auto, policy);
    TruncatedSeries r(T);
    for (std::size_t i = T - 1; i >= 1; --i) r.c[i] = std::move(s.c[i - 1]);
    return r;
}

}  // namespace eigenfactor
