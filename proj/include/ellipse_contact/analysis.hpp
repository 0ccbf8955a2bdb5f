#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "contact.hpp"

namespace ellipse_contact {

class AdaptiveLimitReached : public ContactError {
public:
    using ContactError::ContactError;
};

enum class QuadratureScheme { FixedTrapezoid, GaussLegendrePanels, AdaptiveSimpson };

inline const char* to_string(QuadratureScheme s)
{
    switch (s) {
    case QuadratureScheme::FixedTrapezoid: return "trapezoid";
    case QuadratureScheme::GaussLegendrePanels: return "gauss-legendre";
    case QuadratureScheme::AdaptiveSimpson: return "adaptive-simpson";
    }
    return "?";
}

struct QuadratureSpec {
    QuadratureScheme scheme = QuadratureScheme::FixedTrapezoid;
    int panels = 2048;
    double abs_tol = 1e-8; // adaptive only
    int max_depth = 40;    // adaptive only

    void validate() const
    {
        if (panels < 16) throw ContactError("QuadratureSpec: panels must be >= 16");
        if (!(abs_tol > 0.0)) throw ContactError("QuadratureSpec: abs_tol must be positive");
    }
};

struct LocusSample {
    double angle; // radians
    Vec2 point;
};

struct LocusCurve {
    std::vector<LocusSample> samples;
    bool closed = true;
};

/// Pairwise (cascade) summation; the result depends only on the input order.
inline double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

namespace detail {

inline double periodic_trapezoid(const std::function<double(double)>& f, int n)
{
    std::vector<double> vals(n);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) vals[i] = f(h * i);
    return h * pairwise_sum(vals);
}

inline double gauss_legendre_panels(const std::function<double(double)>& f, int n)
{
    static constexpr std::array<double, 4> x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                             0.8611363115940526};
    static constexpr std::array<double, 4> w{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                             0.3478548451374538};
    std::vector<double> vals;
    vals.reserve(4 * n);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
        const double mid = h * (i + 0.5);
        for (int j = 0; j < 4; ++j) vals.push_back(w[j] * f(mid + 0.5 * h * x[j]));
    }
    return 0.5 * h * pairwise_sum(vals);
}

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
};

inline double simpson_recurse(const SimpsonState& st, double a, double b, double fa, double fm, double fb,
                              double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = st.f(lm), frm = st.f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    if (depth >= st.max_depth)
        throw AdaptiveLimitReached("excluded_area: adaptive Simpson reached the maximum recursion depth");
    return simpson_recurse(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           simpson_recurse(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, int n, double tol, int max_depth)
{
    const SimpsonState st{f, max_depth};
    std::vector<double> parts(n);
    const double h = 2.0 * M_PI / n;
    for (int i = 0; i < n; ++i) {
        const double a = h * i, b = h * (i + 1), m = 0.5 * (a + b);
        const double fa = f(a), fm = f(m), fb = f(b);
        parts[i] = simpson_recurse(st, a, b, fa, fm, fb, h / 6.0 * (fa + 4.0 * fm + fb), tol / n, 0);
    }
    return pairwise_sum(parts);
}

} // namespace detail

/// Integral over [0, 2 pi) of a periodic function.
inline double integrate_periodic(const std::function<double(double)>& f, const QuadratureSpec& spec)
{
    spec.validate();
    switch (spec.scheme) {
    case QuadratureScheme::GaussLegendrePanels: return detail::gauss_legendre_panels(f, spec.panels);
    case QuadratureScheme::AdaptiveSimpson:
        return detail::adaptive_simpson(f, spec.panels, spec.abs_tol, spec.max_depth);
    case QuadratureScheme::FixedTrapezoid:
    default: return detail::periodic_trapezoid(f, spec.panels);
    }
}

/// Excluded area: one half of the integral of d^2 over the centre-line angle.
inline double excluded_area(const EllipseShape& shape1, const EllipseShape& shape2, UnitVec2 k1, UnitVec2 k2,
                            const QuadratureSpec& spec = {})
{
    auto integrand = [&](double theta) {
        const double d = closest_approach({shape1, shape2, k1, k2, UnitVec2::from_angle(theta)}).d;
        return 0.5 * d * d;
    };
    return integrate_periodic(integrand, spec);
}

/// Excluded area of two congruent-shape pairs with major axes `angle_deg` apart.
inline double excluded_area_at_angle(const EllipseShape& shape1, const EllipseShape& shape2, double angle_deg,
                                     const QuadratureSpec& spec = {})
{
    return excluded_area(shape1, shape2, UnitVec2(1.0, 0.0), UnitVec2::from_degrees(angle_deg), spec);
}

/// Positions of the centre of ellipse 2 in contact with ellipse 1: d(theta) dhat(theta).
inline LocusCurve excluded_boundary(const EllipseShape& shape1, const EllipseShape& shape2, UnitVec2 k1,
                                    UnitVec2 k2, int n)
{
    if (n < 16) throw ContactError("excluded_boundary: n must be >= 16");
    LocusCurve out;
    out.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * M_PI * i / n;
        const UnitVec2 dhat = UnitVec2::from_angle(theta);
        const double d = closest_approach({shape1, shape2, k1, k2, dhat}).d;
        out.samples.push_back({theta, d * dhat.vec()});
    }
    return out;
}

/// Contact point while ellipse 1 turns through a full revolution and ellipse 2
/// keeps its orientation and centre-line direction.
inline LocusCurve contact_locus(const EllipseShape& shape1, const EllipseShape& shape2, UnitVec2 k2, UnitVec2 dhat,
                                int n)
{
    if (n < 16) throw ContactError("contact_locus: n must be >= 16");
    LocusCurve out;
    out.samples.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double theta = 2.0 * M_PI * i / n;
        const ContactSolution s = closest_approach({shape1, shape2, UnitVec2::from_angle(theta), k2, dhat});
        out.samples.push_back({theta, s.contact_point});
    }
    return out;
}

/// Signed area enclosed by a closed curve (shoelace formula).
inline double shoelace_area(const LocusCurve& c)
{
    const std::size_t n = c.samples.size();
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) terms[i] = cross(c.samples[i].point, c.samples[(i + 1) % n].point);
    return 0.5 * pairwise_sum(terms);
}

} // namespace ellipse_contact
