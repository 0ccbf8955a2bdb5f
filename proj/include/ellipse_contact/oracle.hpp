#pragma once

// Brute-force reference implementations. Nothing here shares code with the
// analytic path beyond the value types.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "core_types.hpp"
#include "polynomial_roots.hpp"
#include "quartic.hpp"

namespace ellipse_contact {

struct OracleSettings {
    int boundary_samples = 4096;
    double bisection_tol = 1e-10;
    int refine_iters = 64;

    void validate() const
    {
        if (boundary_samples < 64) throw ContactError("OracleSettings: boundary_samples must be >= 64");
        if (!(bisection_tol > 0.0)) throw ContactError("OracleSettings: bisection_tol must be positive");
        if (refine_iters < 1) throw ContactError("OracleSettings: refine_iters must be positive");
    }
};

namespace detail {

// Boundary of one ellipse tested against the quadratic form of the other, with
// the tested ellipse's centre offset by t * dir from the form's centre.
// f_i(t) = (p_i - t dir).M.(p_i - t dir) - 1 = c0_i - 2 t c1_i + t^2 c2.
class BoundaryProbe {
public:
    BoundaryProbe(const EllipseShape& moving, UnitVec2 k_moving, const EllipseShape& fixed, UnitVec2 k_fixed,
                  Vec2 dir, const OracleSettings& s)
        : a_(moving.a()), b_(moving.b()), k_(k_moving), m_(fixed_matrix(fixed, k_fixed)), dir_(dir),
          refine_(s.refine_iters)
    {
        const int n = s.boundary_samples;
        theta_.resize(n);
        c0_.resize(n);
        c1_.resize(n);
        for (int i = 0; i < n; ++i) {
            theta_[i] = 2.0 * M_PI * i / n;
            const Vec2 p = point(theta_[i]);
            c0_[i] = m_.quad(p);
            c1_[i] = dot(dir_, m_.apply(p));
        }
        c2_ = m_.quad(dir_);
    }

    struct Minimum {
        double value;
        double theta;
    };

    // Minimum over the boundary of the other ellipse's form value minus one.
    // Negative means the boundary enters the other ellipse.
    Minimum min_form(double t) const
    {
        const std::size_t n = theta_.size();
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i) f[i] = c0_[i] - 2.0 * t * c1_[i] + t * t * c2_;
        Minimum best{std::numeric_limits<double>::infinity(), 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            const double prev = f[(i + n - 1) % n];
            const double next = f[(i + 1) % n];
            if (f[i] <= prev && f[i] <= next) {
                const double h = 2.0 * M_PI / n;
                const Minimum m = golden(t, theta_[i] - h, theta_[i] + h);
                if (m.value < best.value) best = m;
                if (f[i] < best.value) best = {f[i], theta_[i]};
            }
        }
        return best;
    }

    Vec2 point(double theta) const
    {
        const Vec2 kp = perp(k_.vec());
        return a_ * std::cos(theta) * k_.vec() + b_ * std::sin(theta) * kp;
    }

private:
    static SymMat2 fixed_matrix(const EllipseShape& e, UnitVec2 k)
    {
        // Built from the rotation of diag(1/a^2, 1/b^2), not from the e^2 form.
        const double c = k.x(), s = k.y();
        const double ia = 1.0 / (e.a() * e.a()), ib = 1.0 / (e.b() * e.b());
        return {c * c * ia + s * s * ib, c * s * (ia - ib), s * s * ia + c * c * ib};
    }

    double eval(double t, double theta) const
    {
        const Vec2 p = point(theta) - t * dir_;
        return m_.quad(p) - 1.0;
    }

    Minimum golden(double t, double lo, double hi) const
    {
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        double f1 = eval(t, x1), f2 = eval(t, x2);
        for (int it = 0; it < refine_; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = eval(t, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = eval(t, x2);
            }
        }
        return f1 < f2 ? Minimum{f1, x1} : Minimum{f2, x2};
    }

    double a_, b_;
    UnitVec2 k_;
    SymMat2 m_;
    Vec2 dir_;
    int refine_;
    std::vector<double> theta_, c0_, c1_;
    double c2_ = 0.0;
};

struct OracleContact {
    double d;
    Vec2 point; // on ellipse 1, from its centre
};

inline OracleContact oracle_contact_impl(const PairConfiguration& cfg, const OracleSettings& s)
{
    s.validate();
    // Probe A: boundary of ellipse 1 against ellipse 2 centred at t dhat.
    // Probe B: boundary of ellipse 2 (centred at origin) against ellipse 1 centred at -t dhat.
    const BoundaryProbe pa(cfg.shape1, cfg.k1, cfg.shape2, cfg.k2, cfg.dhat.vec(), s);
    const BoundaryProbe pb(cfg.shape2, cfg.k2, cfg.shape1, cfg.k1, -cfg.dhat.vec(), s);
    auto overlapping = [&](double t) { return pa.min_form(t).value < 0.0 || pb.min_form(t).value < 0.0; };

    const double lo_bound = cfg.shape1.b() + cfg.shape2.b();
    const double hi_bound = cfg.shape1.a() + cfg.shape2.a();
    double lo = 0.5 * lo_bound;
    double hi = 1.5 * hi_bound;
    if (!overlapping(lo) || overlapping(hi))
        throw NonConvergence("oracle_distance: overlap predicate is not bracketed");
    int iters = 0;
    while (hi - lo > s.bisection_tol * hi) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (overlapping(mid) ? lo : hi) = mid;
        if (++iters > 400) throw NonConvergence("oracle_distance: bisection did not converge");
    }
    const double d = 0.5 * (lo + hi);
    const auto ma = pa.min_form(d);
    const auto mb = pb.min_form(d);
    // The contact point is the grazing point of whichever probe is closer to zero.
    Vec2 point = pa.point(ma.theta);
    if (std::abs(mb.value) < std::abs(ma.value)) point = pb.point(mb.theta) + d * cfg.dhat.vec();
    return {d, point};
}

} // namespace detail

/// Distance of closest approach by bisection on a sampled overlap predicate.
inline double oracle_distance(const PairConfiguration& cfg, const OracleSettings& s = {})
{
    return detail::oracle_contact_impl(cfg, s).d;
}

/// Oracle distance together with the grazing point on ellipse 1.
inline detail::OracleContact oracle_contact(const PairConfiguration& cfg, const OracleSettings& s = {})
{
    return detail::oracle_contact_impl(cfg, s);
}

/// Sampled overlap predicate for ellipse 2 centred at t * dhat.
inline bool oracle_overlaps(const PairConfiguration& cfg, double t, const OracleSettings& s = {})
{
    s.validate();
    const detail::BoundaryProbe pa(cfg.shape1, cfg.k1, cfg.shape2, cfg.k2, cfg.dhat.vec(), s);
    const detail::BoundaryProbe pb(cfg.shape2, cfg.k2, cfg.shape1, cfg.k1, -cfg.dhat.vec(), s);
    return pa.min_form(t).value < 0.0 || pb.min_form(t).value < 0.0;
}

/// Unit circle against an ellipse with semi-axes (a2p, b2p) whose major axis is `axis`.
inline double oracle_circle_ellipse_distance(double a2p, double b2p, UnitVec2 axis, UnitVec2 dhat,
                                             const OracleSettings& s = {})
{
    return oracle_distance(PairConfiguration{EllipseShape(1.0, 1.0), EllipseShape(a2p, b2p), axis, axis, dhat}, s);
}

inline std::vector<std::complex<double>> oracle_quartic_roots(const QuarticCoeffs& c)
{
    const auto arr = c.as_array();
    return polynomial_roots(arr);
}

/// Transformed-pair quantities from explicit Cartesian matrix products and a Jacobi
/// eigen-decomposition.
struct OracleTransformed {
    SymMat2 a_prime; // Cartesian components
    double lambda_plus;
    double lambda_minus;
    double delta;
    double cos2_phi;
    double dhat_scale;
    UnitVec2 kplus;
    UnitVec2 dhat_prime;
};

inline OracleTransformed oracle_transformed_pair(const PairConfiguration& cfg)
{
    using M = std::array<std::array<double, 2>, 2>;
    auto mul = [](const M& x, const M& y) {
        M r{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        return r;
    };
    auto rot = [](UnitVec2 k) { return M{{{k.x(), -k.y()}, {k.y(), k.x()}}}; };
    auto tr = [](const M& x) { return M{{{x[0][0], x[1][0]}, {x[0][1], x[1][1]}}}; };
    const double a1 = cfg.shape1.a(), b1 = cfg.shape1.b();
    const double a2 = cfg.shape2.a(), b2 = cfg.shape2.b();
    const M r1 = rot(cfg.k1), r2 = rot(cfg.k2);
    const M tinv = mul(mul(r1, M{{{a1, 0.0}, {0.0, b1}}}), tr(r1));
    const M t = mul(mul(r1, M{{{1.0 / a1, 0.0}, {0.0, 1.0 / b1}}}), tr(r1));
    const M a2m = mul(mul(r2, M{{{1.0 / (a2 * a2), 0.0}, {0.0, 1.0 / (b2 * b2)}}}), tr(r2));
    const M ap = mul(mul(tinv, a2m), tinv);

    // One Jacobi rotation diagonalizes a symmetric 2x2 matrix.
    const double p = ap[0][0], q = 0.5 * (ap[0][1] + ap[1][0]), r = ap[1][1];
    double c = 1.0, sn = 0.0;
    if (q != 0.0) {
        const double tau = (r - p) / (2.0 * q);
        const double tt = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        c = 1.0 / std::sqrt(1.0 + tt * tt);
        sn = tt * c;
    }
    const double e1 = c * c * p - 2.0 * sn * c * q + sn * sn * r;
    const double e2 = sn * sn * p + 2.0 * sn * c * q + c * c * r;
    const Vec2 v1{c, -sn}, v2{sn, c};
    const bool first_larger = e1 >= e2;
    OracleTransformed out{{p, q, r},
                          std::max(e1, e2),
                          std::min(e1, e2),
                          std::max(e1, e2) / std::min(e1, e2) - 1.0,
                          0.0,
                          0.0,
                          UnitVec2(first_larger ? v1 : v2),
                          UnitVec2(1.0, 0.0)};
    const Vec2 td{t[0][0] * cfg.dhat.x() + t[0][1] * cfg.dhat.y(), t[1][0] * cfg.dhat.x() + t[1][1] * cfg.dhat.y()};
    out.dhat_scale = td.norm();
    out.dhat_prime = UnitVec2(td);
    const double cp = dot(out.kplus, out.dhat_prime);
    out.cos2_phi = cp * cp;
    return out;
}

enum class Stratum { NearParallelAxes, NearPerpendicular, NearCircular, Uniform, Circles };

inline const char* to_string(Stratum s)
{
    switch (s) {
    case Stratum::NearParallelAxes: return "near-parallel";
    case Stratum::NearPerpendicular: return "near-perpendicular";
    case Stratum::NearCircular: return "near-circular";
    case Stratum::Uniform: return "uniform";
    case Stratum::Circles: return "circles";
    }
    return "?";
}

struct RandomConfiguration {
    PairConfiguration cfg;
    Stratum stratum;
};

/// Stratified random configurations: 20% near-parallel axes (angle < 1e-4),
/// 20% near-perpendicular centre line, 20% near-circular shapes (e < 1e-4),
/// 40% uniform. Aspect ratios up to 20.
class ConfigurationGenerator {
public:
    explicit ConfigurationGenerator(std::uint64_t seed, double max_aspect = 20.0)
        : rng_(seed), max_aspect_(max_aspect)
    {
    }

    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

    RandomConfiguration next()
    {
        const double u = uniform();
        if (u < 0.2) return next(Stratum::NearParallelAxes);
        if (u < 0.4) return next(Stratum::NearPerpendicular);
        if (u < 0.6) return next(Stratum::NearCircular);
        return next(Stratum::Uniform);
    }

    RandomConfiguration next(Stratum s)
    {
        switch (s) {
        case Stratum::NearParallelAxes: {
            const EllipseShape s1 = shape(), s2 = shape();
            const double t1 = uniform(0.0, 2.0 * M_PI);
            const double tiny = uniform() < 0.1 ? 0.0 : log_uniform(1e-13, 1e-4);
            const double sign = uniform() < 0.5 ? -1.0 : 1.0;
            const double flip = uniform() < 0.25 ? M_PI : 0.0;
            return {{s1, s2, UnitVec2::from_angle(t1), UnitVec2::from_angle(t1 + flip + sign * tiny),
                     UnitVec2::from_angle(uniform(0.0, 2.0 * M_PI))},
                    s};
        }
        case Stratum::NearPerpendicular: {
            const EllipseShape s1 = shape(), s2 = shape();
            const UnitVec2 k1 = UnitVec2::from_angle(uniform(0.0, 2.0 * M_PI));
            const UnitVec2 k2 = UnitVec2::from_angle(uniform(0.0, 2.0 * M_PI));
            const double tiny = uniform() < 0.1 ? 0.0 : (uniform() < 0.5 ? -1.0 : 1.0) * log_uniform(1e-13, 1e-4);
            PairConfiguration cfg{s1, s2, k1, k2, k1};
            if (uniform() < 0.5) {
                // Centre line across the major axis of ellipse 1.
                cfg.dhat = k1.perp().rotated(std::cos(tiny), std::sin(tiny));
            } else {
                // Centre line whose image is across the minor-axis eigenvector of the transformed ellipse 2.
                const OracleTransformed ot = oracle_transformed_pair(cfg);
                const Vec2 target = ot.kplus.perp().rotated(std::cos(tiny), std::sin(tiny));
                const double a1 = s1.a(), b1 = s1.b();
                const Vec2 back = a1 * dot(k1.vec(), target) * k1.vec() + b1 * cross(k1.vec(), target) * k1.perp().vec();
                cfg.dhat = UnitVec2(back);
            }
            return {cfg, s};
        }
        case Stratum::NearCircular: {
            EllipseShape s1 = shape(), s2 = shape();
            const int which = static_cast<int>(uniform() * 3.0);
            if (which != 1) s1 = near_circle();
            if (which != 0) s2 = near_circle();
            return {{s1, s2, direction(), direction(), direction()}, s};
        }
        case Stratum::Circles: {
            const double r1 = log_uniform(0.1, 10.0), r2 = log_uniform(0.1, 10.0);
            return {{EllipseShape(r1, r1), EllipseShape(r2, r2), direction(), direction(), direction()}, s};
        }
        case Stratum::Uniform:
        default: return {{shape(), shape(), direction(), direction(), direction()}, Stratum::Uniform};
        }
    }

private:
    UnitVec2 direction() { return UnitVec2::from_angle(uniform(0.0, 2.0 * M_PI)); }

    EllipseShape shape()
    {
        const double b = log_uniform(0.25, 4.0);
        return EllipseShape(b * log_uniform(1.0, max_aspect_), b);
    }

    EllipseShape near_circle()
    {
        const double b = log_uniform(0.25, 4.0);
        const double e = uniform() < 0.1 ? 0.0 : log_uniform(1e-9, 1e-4);
        return EllipseShape(b / std::sqrt(1.0 - e * e), b);
    }

    std::mt19937_64 rng_;
    double max_aspect_;
};

} // namespace ellipse_contact
