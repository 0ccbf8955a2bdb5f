#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <span>
#include <vector>

#include "core_types.hpp"

namespace ellipse_contact {

class NonConvergence : public ContactError {
public:
    using ContactError::ContactError;
};

namespace detail {

using cld = std::complex<long double>;

// Horner evaluation of p(z) and p'(z); coefficients are highest degree first.
inline void horner(std::span<const long double> c, cld z, cld& p, cld& dp)
{
    p = c[0];
    dp = 0.0L;
    for (std::size_t i = 1; i < c.size(); ++i) {
        dp = dp * z + p;
        p = p * z + c[i];
    }
}

inline long double horner_scale(std::span<const long double> c, long double az)
{
    long double s = 0.0L;
    for (long double ci : c) s = s * az + std::abs(ci);
    return s;
}

} // namespace detail

/// Relative residual |p(z)| / sum |c_i| |z|^i; coefficients highest degree first.
inline double polynomial_relative_residual(std::span<const double> coeffs, std::complex<double> z)
{
    std::vector<long double> c(coeffs.begin(), coeffs.end());
    detail::cld p, dp;
    detail::horner(c, detail::cld(z.real(), z.imag()), p, dp);
    const long double scale = detail::horner_scale(c, std::abs(detail::cld(z.real(), z.imag())));
    return scale > 0 ? static_cast<double>(std::abs(p) / scale) : 0.0;
}

/// All complex roots of a polynomial by Durand-Kerner (Weierstrass) iteration in
/// extended precision, followed by a Newton polish of each root. Coefficients are
/// ordered from the highest degree down; the leading coefficient must be nonzero.
///
/// Each returned root satisfies polynomial_relative_residual <= tol, otherwise
/// NonConvergence is thrown.
inline std::vector<std::complex<double>> polynomial_roots(std::span<const double> coeffs, double tol = 1e-9,
                                                          int max_iters = 2000)
{
    using detail::cld;
    if (coeffs.size() < 2 || coeffs[0] == 0.0)
        throw NonConvergence("polynomial_roots: leading coefficient must be nonzero");
    const std::size_t n = coeffs.size() - 1;
    std::vector<long double> c(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) c[i] = static_cast<long double>(coeffs[i]) / coeffs[0];

    // Cauchy bound on root magnitudes.
    long double bound = 0.0L;
    for (std::size_t i = 1; i < c.size(); ++i) bound = std::max(bound, std::abs(c[i]));
    bound += 1.0L;

    std::vector<cld> z(n);
    const cld seed(0.4L, 0.9L);
    cld w = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
        w *= seed;
        z[i] = w * (bound / std::abs(w)) * 0.5L;
    }

    const long double stop = 64.0L * std::numeric_limits<long double>::epsilon();
    for (int it = 0; it < max_iters; ++it) {
        long double max_step = 0.0L;
        for (std::size_t i = 0; i < n; ++i) {
            cld p, dp;
            detail::horner(c, z[i], p, dp);
            cld denom = 1.0L;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= (z[i] - z[j]);
            if (std::abs(denom) == 0.0L) denom = cld(1e-30L, 0.0L);
            const cld step = p / denom;
            z[i] -= step;
            max_step = std::max(max_step, std::abs(step) / std::max(1.0L, std::abs(z[i])));
        }
        if (max_step < stop) break;
        // Clustered roots converge linearly; stop once every residual is at rounding level.
        long double worst = 0.0L;
        for (const auto& zi : z) {
            cld p, dp;
            detail::horner(c, zi, p, dp);
            const long double sc = detail::horner_scale(c, std::abs(zi));
            worst = std::max(worst, sc > 0.0L ? std::abs(p) / sc : 0.0L);
        }
        if (worst < stop) break;
    }

    for (auto& zi : z) {
        for (int k = 0; k < 4; ++k) {
            cld p, dp;
            detail::horner(c, zi, p, dp);
            if (std::abs(dp) == 0.0L) break;
            const cld next = zi - p / dp;
            cld pn, dpn;
            detail::horner(c, next, pn, dpn);
            if (std::abs(pn) < std::abs(p)) zi = next;
            else break;
        }
    }

    std::vector<std::complex<double>> out;
    out.reserve(n);
    for (const auto& zi : z) {
        cld p, dp;
        detail::horner(c, zi, p, dp);
        const long double scale = detail::horner_scale(c, std::abs(zi));
        if (!(std::abs(p) <= tol * scale))
            throw NonConvergence("polynomial_roots: Durand-Kerner iteration did not converge");
        out.emplace_back(static_cast<double>(zi.real()), static_cast<double>(zi.imag()));
    }
    std::sort(out.begin(), out.end(),
              [](auto a, auto b) { return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag()); });
    return out;
}

/// Real roots (|Im z| <= imag_tol * max(1, |z|)) of the polynomial inside [lo, hi].
inline std::vector<double> real_roots_in(std::span<const std::complex<double>> roots, double lo, double hi,
                                         double imag_tol = 1e-8)
{
    std::vector<double> out;
    for (auto z : roots) {
        if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z)) && z.real() >= lo && z.real() <= hi)
            out.push_back(z.real());
    }
    return out;
}

} // namespace ellipse_contact
