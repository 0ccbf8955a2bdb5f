#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "polynomial_roots.hpp"

namespace ellipse_contact {

class NoPhysicalRoot : public ContactError {
public:
    using ContactError::ContactError;
};

/// Coefficients of A q^4 + B q^3 + C q^2 + D q + E = 0 for the tangency variable
/// q = sqrt(1 + delta sin^2 psi).
struct QuarticCoeffs {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
    double E = 0.0;

    std::array<double, 5> as_array() const { return {A, B, C, D, E}; }
    double operator()(double q) const { return (((A * q + B) * q + C) * q + D) * q + E; }
};

inline QuarticCoeffs quartic_coefficients(double b2p, double delta, double tan2phi)
{
    const double t = tan2phi;
    const double inv_b = 1.0 / b2p;
    const double onep_delta = 1.0 + delta;
    return {
        -inv_b * inv_b * (1.0 + t),
        -2.0 * inv_b * (1.0 + t + delta),
        -t - onep_delta * onep_delta + inv_b * inv_b * (1.0 + onep_delta * t),
        2.0 * inv_b * (1.0 + t) * onep_delta,
        (1.0 + t + delta) * onep_delta,
    };
}

enum class FerrariBranch { GeneralU, UZero, BetaZero };

inline const char* to_string(FerrariBranch b)
{
    switch (b) {
    case FerrariBranch::GeneralU: return "general-U";
    case FerrariBranch::UZero: return "U-zero";
    case FerrariBranch::BetaZero: return "beta-zero";
    }
    return "?";
}

struct FerrariIntermediates {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double P = 0.0;
    double Q = 0.0;
    double U_re = 0.0;
    double U_im = 0.0;
    double y = 0.0;
    double y_im = 0.0; // imaginary residue dropped from y
    FerrariBranch branch = FerrariBranch::GeneralU;

    double ferrari_root = 0.0;       // closed-form root before any fallback
    double relative_residual = 0.0;  // |p(q)| / max(|A| q^4, |E|) at the returned q
    bool used_fallback = false;      // closed form rejected, root taken from the all-roots solver
    bool other_sqrt_branch = false;  // positive root came from W = -sqrt(alpha + 2y)
};

struct QuarticSolution {
    double q = 1.0;
    FerrariIntermediates inter;
};

namespace detail {

inline constexpr double u_zero_threshold = 1e-12;
inline constexpr double beta_zero_threshold = 1e-11;
inline constexpr double radicand_clamp = 1e-12;
inline constexpr double bracket_slack = 1e-9;
inline constexpr double residual_tolerance = 1e-8;

inline double contact_residual(const QuarticCoeffs& c, double q)
{
    const double scale = std::max(std::abs(c.A) * q * q * q * q, std::abs(c.E));
    return std::abs(c(q)) / scale;
}

// Closed-form Ferrari root with the (+, +) sign choice.
inline double ferrari_root(const QuarticCoeffs& c, FerrariIntermediates& f)
{
    using cd = std::complex<double>;
    const double b = c.B / c.A;
    const double cc = c.C / c.A;
    const double d = c.D / c.A;
    const double e = c.E / c.A;
    const double b2 = b * b;

    f.alpha = -3.0 * b2 / 8.0 + cc;
    f.beta = b2 * b / 8.0 - b * cc / 2.0 + d;
    f.gamma = -3.0 * b2 * b2 / 256.0 + cc * b2 / 16.0 - b * d / 4.0 + e;
    const double shift = -b / 4.0;
    const double alpha = f.alpha;
    const double beta = f.beta;
    const double gamma = f.gamma;

    if (std::abs(beta) < beta_zero_threshold * std::max(1.0, std::abs(b2 * b))) {
        f.branch = FerrariBranch::BetaZero;
        const double inner = std::sqrt(std::max(0.0, alpha * alpha - 4.0 * gamma));
        return shift + std::sqrt(std::max(0.0, (-alpha + inner) / 2.0));
    }

    f.P = -alpha * alpha / 12.0 - gamma;
    f.Q = -alpha * alpha * alpha / 108.0 + alpha * gamma / 3.0 - beta * beta / 8.0;
    // Real cube-root argument: take the real cube root so that y stays real.
    // Three real resolvent roots (negative radicand): principal complex cube root.
    const double radicand = f.Q * f.Q / 4.0 + f.P * f.P * f.P / 27.0;
    cd U;
    if (radicand >= 0.0) {
        U = std::cbrt(-f.Q / 2.0 + std::sqrt(radicand));
    } else {
        U = std::pow(cd(-f.Q / 2.0, std::sqrt(-radicand)), 1.0 / 3.0);
    }
    f.U_re = U.real();
    f.U_im = U.imag();

    cd y;
    if (std::abs(U) < u_zero_threshold * std::max(1.0, std::cbrt(std::abs(f.Q)))) {
        f.branch = FerrariBranch::UZero;
        y = -5.0 / 6.0 * alpha - std::cbrt(f.Q);
    } else {
        f.branch = FerrariBranch::GeneralU;
        y = -5.0 / 6.0 * alpha + U - f.P / (3.0 * U);
    }
    f.y = y.real();
    f.y_im = y.imag();

    double w2 = alpha + 2.0 * f.y;
    if (w2 < 0.0 && w2 > -radicand_clamp * std::max(1.0, std::abs(alpha))) w2 = 0.0;
    // W = +sqrt(alpha + 2y) is the (+, +) root. When that quadratic factor has
    // complex roots, the positive root sits in the other factor, reached by W -> -W.
    const double W = std::sqrt(w2);
    const double r_plus = -(3.0 * alpha + 2.0 * f.y + 2.0 * beta / W);
    const double r_minus = -(3.0 * alpha + 2.0 * f.y - 2.0 * beta / W);
    const double cand_plus = r_plus >= 0.0 ? shift + 0.5 * (W + std::sqrt(r_plus)) : -HUGE_VAL;
    const double cand_minus = r_minus >= 0.0 ? shift + 0.5 * (-W + std::sqrt(r_minus)) : -HUGE_VAL;
    f.other_sqrt_branch = cand_minus > cand_plus;
    const double q = std::max(cand_plus, cand_minus);
    return q == -HUGE_VAL ? std::nan("") : q;
}

// Newton iterations on the undepressed quartic; stops as soon as a step fails
// to reduce |p(q)|.
inline double newton_polish(const QuarticCoeffs& c, double q, int max_steps = 6)
{
    double pq = c(q);
    for (int i = 0; i < max_steps && pq != 0.0; ++i) {
        const double dp = ((4.0 * c.A * q + 3.0 * c.B) * q + 2.0 * c.C) * q + c.D;
        if (dp == 0.0 || !std::isfinite(dp)) break;
        const double next = q - pq / dp;
        const double pn = c(next);
        if (!(std::abs(pn) < std::abs(pq))) break;
        q = next;
        pq = pn;
    }
    return q;
}

} // namespace detail

/// Physical root q in [1, sqrt(1+delta)] of the tangency quartic.
///
/// The closed-form Ferrari root is refined by a few Newton steps (the shift -B/4A
/// cancels against the radicals and costs up to ~3 digits), then accepted when it is finite, inside the bracket
/// (up to 1e-9) and has relative residual <= 1e-8. Otherwise all four roots are
/// found numerically and the unique real root inside the bracket is returned; zero
/// or several candidates raise NoPhysicalRoot.
inline QuarticSolution solve_contact_quartic(const QuarticCoeffs& c, double delta)
{
    QuarticSolution sol;
    FerrariIntermediates& f = sol.inter;
    const double lo = 1.0;
    const double hi = std::sqrt(1.0 + delta);

    double q = detail::ferrari_root(c, f);
    f.ferrari_root = q;
    if (std::isfinite(q)) q = detail::newton_polish(c, q);

    const bool in_bracket =
        std::isfinite(q) && q >= lo - detail::bracket_slack && q <= hi + detail::bracket_slack * hi;
    const bool small_imag = std::abs(f.y_im) <= 1e-9 * std::max(1.0, std::abs(f.y));
    if (!in_bracket || !small_imag || detail::contact_residual(c, q) > detail::residual_tolerance) {
        f.used_fallback = true;
        std::vector<std::complex<double>> roots;
        try {
            const auto arr = c.as_array();
            roots = polynomial_roots(arr);
        } catch (const NonConvergence&) {
            throw NoPhysicalRoot("contact quartic: closed form failed and the root finder did not converge");
        }
        const auto cands = real_roots_in(roots, lo - detail::bracket_slack, hi + detail::bracket_slack * hi);
        if (cands.size() != 1)
            throw NoPhysicalRoot("contact quartic: expected exactly one real root in [1, sqrt(1+delta)], found " +
                                 std::to_string(cands.size()));
        q = cands.front();
    }

    if (q < lo && q >= lo - detail::bracket_slack) q = lo;
    if (q > hi && q <= hi + detail::bracket_slack * hi) q = hi;
    sol.q = q;
    f.relative_residual = detail::contact_residual(c, q);
    return sol;
}

} // namespace ellipse_contact
