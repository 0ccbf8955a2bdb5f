#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "quartic.hpp"
#include "transform.hpp"

namespace ellipse_contact {

enum class ContactBranch { General, CircleLike, PhiRightAngle, ParallelAxes2a, ParallelAxes2b };

inline const char* to_string(ContactBranch b)
{
    switch (b) {
    case ContactBranch::General: return "general";
    case ContactBranch::CircleLike: return "circle-like";
    case ContactBranch::PhiRightAngle: return "phi-right-angle";
    case ContactBranch::ParallelAxes2a: return "parallel-2a";
    case ContactBranch::ParallelAxes2b: return "parallel-2b";
    }
    return "?";
}

struct ContactSolution {
    double d = 0.0;       // distance of closest approach
    double d_prime = 0.0; // same, in the frame where ellipse 1 is the unit circle
    double q = 1.0;
    double sin_psi = 0.0;
    double cos_psi = 1.0;
    double sin_gamma = 0.0;
    double cos_gamma = 1.0;
    Vec2 contact_point;      // from the centre of ellipse 1
    UnitVec2 contact_normal; // outward normal of ellipse 1 at contact_point
    ContactBranch branch = ContactBranch::General;
    std::optional<FerrariIntermediates> quartic; // set when the quartic was solved
    TransformedPair transformed;
};

struct TransformedDistance {
    double d_prime = 0.0;
    double q = 1.0;
    ContactBranch branch = ContactBranch::General;
    std::optional<FerrariIntermediates> quartic;
};

namespace detail {

inline constexpr double circle_like_threshold = 1e-12;
inline constexpr double right_angle_threshold = 1e-12;

inline ContactBranch general_branch_of(TransformBranch b)
{
    switch (b) {
    case TransformBranch::ParallelAxesCase2a: return ContactBranch::ParallelAxes2a;
    case TransformBranch::ParallelAxesCase2b: return ContactBranch::ParallelAxes2b;
    default: return ContactBranch::General;
    }
}

inline double sgn(double x) { return x < 0.0 ? -1.0 : 1.0; }

} // namespace detail

/// Distance of closest approach between the unit circle and the transformed ellipse 2.
inline TransformedDistance transformed_distance(const TransformedPair& tp)
{
    TransformedDistance out;
    if (tp.delta < detail::circle_like_threshold) {
        out.d_prime = 1.0 + tp.b2p;
        out.q = 1.0;
        out.branch = ContactBranch::CircleLike;
        return out;
    }
    if (std::abs(tp.cos_phi) < detail::right_angle_threshold) {
        out.d_prime = 1.0 + tp.a2p;
        out.q = std::sqrt(1.0 + tp.delta);
        out.branch = ContactBranch::PhiRightAngle;
        return out;
    }
    const double tan2phi = (tp.sin_phi * tp.sin_phi) / (tp.cos_phi * tp.cos_phi);
    const QuarticCoeffs coeffs = quartic_coefficients(tp.b2p, tp.delta, tan2phi);
    const QuarticSolution sol = solve_contact_quartic(coeffs, tp.delta);
    const double q = sol.q;
    const double b = tp.b2p;
    const double s2 = std::clamp((q * q - 1.0) / tp.delta, 0.0, 1.0);
    const double major = 1.0 + b * (1.0 + tp.delta) / q;
    const double minor = 1.0 + b / q;
    out.d_prime = std::sqrt(s2 * major * major + (1.0 - s2) * minor * minor);
    out.q = q;
    out.branch = detail::general_branch_of(tp.branch);
    out.quartic = sol.inter;
    return out;
}

/// Full contact solution: distance, contact point and normal.
///
/// The normal angle psi in the eigenframe of the transformed ellipse follows from
/// the two component equations of the tangency condition, whose ratio gives
/// tan psi = tan phi (q + b2') / (q + b2'(1 + delta)). This agrees with
/// sin^2 psi = (q^2 - 1)/delta but keeps full precision when delta is small.
inline ContactSolution closest_approach(const PairConfiguration& cfg)
{
    ContactSolution sol;
    sol.transformed = transformed_pair(cfg);
    const TransformedPair& tp = sol.transformed;
    const TransformedDistance td = transformed_distance(tp);
    sol.d_prime = td.d_prime;
    sol.q = td.q;
    sol.branch = td.branch;
    sol.quartic = td.quartic;
    sol.d = td.d_prime / tp.dhat_scale;

    Vec2 n_prime;
    if (td.branch == ContactBranch::CircleLike || td.branch == ContactBranch::PhiRightAngle) {
        n_prime = tp.dhat_prime.vec();
        sol.cos_psi = tp.cos_phi;
        sol.sin_psi = tp.sin_phi;
    } else {
        const double b = tp.b2p;
        const double y = tp.sin_phi * (td.q + b);
        const double x = tp.cos_phi * (td.q + b * (1.0 + tp.delta));
        const double h = std::hypot(x, y);
        sol.cos_psi = x / h;
        sol.sin_psi = y / h;
        n_prime = sol.cos_psi * tp.kplus.vec() + sol.sin_psi * tp.kminus.vec();
    }
    sol.cos_gamma = dot(tp.kplus, tp.basis_u);
    sol.sin_gamma = dot(tp.kplus, tp.basis_v);
    sol.contact_point = tp.scaling.inverse_apply(n_prime);
    sol.contact_normal = UnitVec2(tp.scaling.apply(n_prime));
    return sol;
}

struct ContactPointResult {
    Vec2 r_c;
    ContactSolution solution;
};

inline ContactPointResult contact_point(const PairConfiguration& cfg)
{
    ContactSolution s = closest_approach(cfg);
    return {s.contact_point, std::move(s)};
}

/// psi from sin psi = sgn(sin phi) sqrt((q^2-1)/delta), cos psi = sgn(cos phi) sqrt(1 - (q^2-1)/delta).
/// Equivalent to the angle used by closest_approach; less accurate as delta -> 0.
inline std::pair<double, double> psi_from_q(const TransformedPair& tp, double q)
{
    const double s2 = std::clamp((q * q - 1.0) / tp.delta, 0.0, 1.0);
    return {detail::sgn(tp.sin_phi) * std::sqrt(s2), detail::sgn(tp.cos_phi) * std::sqrt(1.0 - s2)};
}

/// Contact point written on k1 and k2 through the angle psi + gamma measured in
/// the (k1+k2, k1-k2) basis. Only defined off the parallel-axes branches.
inline Vec2 contact_point_via_axes(const PairConfiguration& cfg, const ContactSolution& sol)
{
    const TransformedPair& tp = sol.transformed;
    const double c = tp.cos_k12;
    const double a1 = cfg.shape1.a();
    const double b1 = cfg.shape1.b();
    // psi is measured from kplus towards kminus = perp(kplus); the (u, v) basis may be left-handed.
    const double hand = cross(tp.basis_u, tp.basis_v) > 0.0 ? 1.0 : -1.0;
    double sin_psi = hand * sol.sin_psi;
    double cos_psi = sol.cos_psi;
    if (sol.branch == ContactBranch::CircleLike || sol.branch == ContactBranch::PhiRightAngle) {
        // n' = dhat', so psi + gamma is the angle of dhat' in the (u, v) basis.
        const double cu = dot(tp.dhat_prime, tp.basis_u);
        const double sv = dot(tp.dhat_prime, tp.basis_v);
        const double cg = sol.cos_gamma, sg = sol.sin_gamma;
        cos_psi = cu * cg + sv * sg;
        sin_psi = sv * cg - cu * sg;
    }
    const double C = cos_psi * sol.cos_gamma - sin_psi * sol.sin_gamma; // cos(psi + gamma)
    const double S = sin_psi * sol.cos_gamma + cos_psi * sol.sin_gamma; // sin(psi + gamma)
    const double rp = std::sqrt(2.0 * (1.0 + c));
    const double rm = std::sqrt(2.0 * (1.0 - c));
    const double along_k1 = (a1 + (a1 - b1) * c) * C / rp + (a1 - (a1 - b1) * c) * S / rm;
    const double along_k2 = b1 * C / rp - b1 * S / rm;
    return along_k1 * cfg.k1.vec() + along_k2 * tp.k2.vec();
}

struct TangencyResiduals {
    double on_ellipse1 = 0.0;   // |r.A1.r - 1|
    double on_ellipse2 = 0.0;   // |(r - d).A2.(r - d) - 1|
    double normal_cross = 0.0;  // |n1 x n2|
    double normal_dot = -1.0;   // n1 . n2, -1 when anti-parallel
};

inline TangencyResiduals tangency_residuals(const PairConfiguration& cfg, const ContactSolution& sol)
{
    const SymMat2 m1 = ellipse_matrix(cfg.shape1, cfg.k1);
    const SymMat2 m2 = ellipse_matrix(cfg.shape2, cfg.k2);
    const Vec2 r1 = sol.contact_point;
    const Vec2 r2 = r1 - sol.d * cfg.dhat.vec();
    const UnitVec2 n1(m1.apply(r1));
    const UnitVec2 n2(m2.apply(r2));
    return {std::abs(m1.quad(r1) - 1.0), std::abs(m2.quad(r2) - 1.0), std::abs(cross(n1, n2)), dot(n1, n2)};
}

class ConcentricCenters : public ContactError {
public:
    using ContactError::ContactError;
};

enum class OverlapVerdict { Disjoint, Tangent, Overlapping };

inline const char* to_string(OverlapVerdict v)
{
    switch (v) {
    case OverlapVerdict::Disjoint: return "disjoint";
    case OverlapVerdict::Tangent: return "tangent";
    case OverlapVerdict::Overlapping: return "overlapping";
    }
    return "?";
}

inline constexpr double tangent_tolerance = 1e-9;
inline constexpr double concentric_tolerance = 1e-14;

/// Overlap test for ellipse 2 centred at r12 relative to ellipse 1. Throws
/// ConcentricCenters (which always overlap) when |r12| < 1e-14.
inline OverlapVerdict overlap(const EllipseShape& shape1, const EllipseShape& shape2, UnitVec2 k1, UnitVec2 k2,
                              Vec2 r12)
{
    const double dist = r12.norm();
    if (dist < concentric_tolerance)
        throw ConcentricCenters("overlap: centres coincide; the ellipses always overlap");
    const PairConfiguration cfg{shape1, shape2, k1, k2, UnitVec2(r12)};
    const double d = closest_approach(cfg).d;
    if (std::abs(dist - d) <= tangent_tolerance * d) return OverlapVerdict::Tangent;
    return dist < d ? OverlapVerdict::Overlapping : OverlapVerdict::Disjoint;
}

} // namespace ellipse_contact
