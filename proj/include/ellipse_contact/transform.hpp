#pragma once

#include <algorithm>
#include <cmath>

#include "core_types.hpp"

namespace ellipse_contact {

/// Anisotropic scaling that maps ellipse 1 onto the unit circle: factor 1/a1 along k1, 1/b1 across it.
struct ScalingTransform {
    double b1 = 1.0;
    double eta = 0.0; // a1/b1 - 1
    UnitVec2 k1;

    double a1() const { return b1 * (1.0 + eta); }

    Vec2 apply(Vec2 v) const
    {
        const double shrink = -eta / (1.0 + eta); // b1/a1 - 1
        return (v + shrink * dot(k1.vec(), v) * k1.vec()) / b1;
    }

    Vec2 inverse_apply(Vec2 v) const { return b1 * (v + eta * dot(k1.vec(), v) * k1.vec()); }

    SymMat2 matrix() const
    {
        const double shrink = -eta / (1.0 + eta);
        return {(1.0 + shrink * k1.x() * k1.x()) / b1, shrink * k1.x() * k1.y() / b1,
                (1.0 + shrink * k1.y() * k1.y()) / b1};
    }

    SymMat2 inverse_matrix() const
    {
        return {b1 * (1.0 + eta * k1.x() * k1.x()), b1 * eta * k1.x() * k1.y(), b1 * (1.0 + eta * k1.y() * k1.y())};
    }
};

inline ScalingTransform scaling_transform(const EllipseShape& shape1, UnitVec2 k1)
{
    return {shape1.b(), shape1.a() / shape1.b() - 1.0, k1};
}

enum class TransformBranch { General, ParallelAxesCase2a, ParallelAxesCase2b };

inline const char* to_string(TransformBranch b)
{
    switch (b) {
    case TransformBranch::General: return "general";
    case TransformBranch::ParallelAxesCase2a: return "parallel-2a";
    case TransformBranch::ParallelAxesCase2b: return "parallel-2b";
    }
    return "?";
}

/// Result of scaling ellipse 2 into the frame where ellipse 1 is the unit circle.
///
/// In the general branch a11/a22/a12 are the components of A' in the basis
/// u = (k1+k2)/|k1+k2|, v = (k1-k2)/|k1-k2|. In the parallel-axes branches the
/// basis is (k1, k1_perp), which is the limit of (u, +-v) as k2 -> k1.
/// The eigenbasis is right-handed: kminus = perp(kplus).
struct TransformedPair {
    double a11 = 0.0;
    double a22 = 0.0;
    double a12 = 0.0;
    double lambda_plus = 0.0;
    double lambda_minus = 0.0;
    UnitVec2 kplus;
    UnitVec2 kminus;
    double a2p = 0.0;
    double b2p = 0.0;
    double delta = 0.0;
    double cos_phi = 1.0;
    double sin_phi = 0.0;
    double dhat_scale = 0.0; // |T dhat|
    TransformBranch branch = TransformBranch::General;

    // Frame data reused by the contact-point formulas.
    UnitVec2 basis_u;
    UnitVec2 basis_v;
    UnitVec2 k2;          // k2 after the sign canonicalization k1.k2 >= 0
    double cos_k12 = 1.0; // k1.k2 after canonicalization
    UnitVec2 dhat_prime;
    ScalingTransform scaling;
};

namespace detail {

/// Squared-sine threshold below which k1 and k2 are treated as parallel.
inline constexpr double parallel_axes_threshold = 1e-9;
/// Relative eigenvalue splitting below which A' is treated as isotropic.
inline constexpr double isotropic_threshold = 1e-14;

struct Eigen2 {
    double lambda_plus;
    double lambda_minus;
    double x, y; // unit eigenvector of lambda_plus in the working basis
    bool isotropic;
};

// det is supplied in closed form; lambda_minus = det / lambda_plus avoids the
// cancellation in tr/2 - disc when the transformed ellipse is very elongated.
inline Eigen2 eigen_sym2(double a11, double a22, double a12, double det)
{
    const double half_diff = 0.5 * (a11 - a22);
    const double disc = std::hypot(half_diff, a12);
    const double lp = 0.5 * (a11 + a22) + disc;
    const double lm = det / lp;
    Eigen2 out{lp, lm, 1.0, 0.0, disc <= isotropic_threshold * lp};
    // Two algebraically equivalent columns of adj(A' - lambda I); take the longer one.
    const double c1x = a12, c1y = lp - a11;
    const double c2x = lp - a22, c2y = a12;
    const double n1 = std::hypot(c1x, c1y);
    const double n2 = std::hypot(c2x, c2y);
    if (n1 >= n2 && n1 > 0.0) {
        out.x = c1x / n1;
        out.y = c1y / n1;
    } else if (n2 > 0.0) {
        out.x = c2x / n2;
        out.y = c2y / n2;
    }
    return out;
}

} // namespace detail

inline TransformedPair transformed_pair(const PairConfiguration& cfg)
{
    TransformedPair tp;
    const EllipseShape& s1 = cfg.shape1;
    const EllipseShape& s2 = cfg.shape2;
    const UnitVec2 k1 = cfg.k1;
    UnitVec2 k2 = cfg.k2;
    if (dot(k1, k2) < 0.0) k2 = -k2;

    tp.scaling = scaling_transform(s1, k1);
    tp.k2 = k2;
    const double eta = tp.scaling.eta;
    const double e2sq = s2.eccentricity2();
    const double ratio = s1.b() / s2.b();
    const double s = ratio * ratio;
    // det A' = (a1 b1 / (a2 b2))^2
    const double det_root = (s1.a() * s1.b()) / (s2.a() * s2.b());
    const double det = det_root * det_root;

    const double c = dot(k1, k2);
    const double sn = cross(k1, k2); // sin of the angle from k1 to k2
    tp.cos_k12 = c;

    // dhat' = T dhat / |T dhat|, expressed on (k1, k1_perp).
    const double p = dot(k1, cfg.dhat);
    const double r = cross(k1.vec(), cfg.dhat.vec());
    const double bovera = s1.b() / s1.a();
    const double scaled_norm = std::hypot(bovera * p, r); // sqrt(1 - e1^2 (k1.dhat)^2)
    tp.dhat_scale = scaled_norm / s1.b();
    const UnitVec2 k1p = k1.perp();
    tp.dhat_prime = UnitVec2((bovera * p / scaled_norm) * k1.vec() + (r / scaled_norm) * k1p.vec());

    const double one_minus_c2 = sn * sn;
    UnitVec2 frame_x, frame_y;
    if (one_minus_c2 < detail::parallel_axes_threshold) {
        // Near-parallel axes: work in (k1, k1_perp) where no basis vector degenerates.
        frame_x = k1;
        frame_y = k1p;
        const double onep = 1.0 + eta;
        const double w1 = c * onep;
        const double w2 = sn;
        const double bovera2 = s2.b() / s2.a();
        // 1 - e2^2 c^2 written without cancellation.
        tp.a11 = s * onep * onep * (bovera2 * bovera2 + e2sq * sn * sn);
        tp.a22 = s * (1.0 - e2sq * w2 * w2);
        tp.a12 = -s * e2sq * w1 * w2;
        tp.branch = tp.a11 >= tp.a22 ? TransformBranch::ParallelAxesCase2a : TransformBranch::ParallelAxesCase2b;
        tp.basis_u = k1;
        tp.basis_v = k1p;
    } else {
        const Vec2 sum = k1.vec() + k2.vec();
        const Vec2 diff = k1.vec() - k2.vec();
        tp.basis_u = UnitVec2(sum);
        tp.basis_v = UnitVec2(diff);
        frame_x = tp.basis_u;
        frame_y = tp.basis_v;
        const double one_plus_c = 0.5 * sum.norm2();
        const double one_minus_c = 0.5 * diff.norm2();
        const double sin_k12 = std::abs(sn); // sqrt(1 - c^2)
        const double g = eta * (2.0 + eta);
        const double wp = 1.0 + eta * c;
        const double wm = 1.0 - eta * c;
        tp.a11 = s * (1.0 + 0.5 * one_plus_c * (g - e2sq * wp * wp));
        tp.a22 = s * (1.0 + 0.5 * one_minus_c * (g - e2sq * wm * wm));
        tp.a12 = s * 0.5 * sin_k12 * (g + e2sq * (1.0 - eta * eta * c * c));
        tp.branch = TransformBranch::General;
    }

    const detail::Eigen2 eig = detail::eigen_sym2(tp.a11, tp.a22, tp.a12, det);
    tp.lambda_plus = eig.lambda_plus;
    tp.lambda_minus = std::min(eig.lambda_minus, eig.lambda_plus);
    if (eig.isotropic) {
        tp.kplus = tp.dhat_prime;
    } else {
        tp.kplus = UnitVec2(eig.x * frame_x.vec() + eig.y * frame_y.vec());
    }
    tp.kminus = tp.kplus.perp();
    tp.b2p = 1.0 / std::sqrt(tp.lambda_plus);
    tp.a2p = 1.0 / std::sqrt(tp.lambda_minus);
    // delta = lambda+/lambda- - 1, with lambda+ - lambda- = 2 disc taken without cancellation.
    const double disc = std::hypot(0.5 * (tp.a11 - tp.a22), tp.a12);
    tp.delta = eig.isotropic ? 0.0 : 2.0 * disc / tp.lambda_minus;

    const double cphi = dot(tp.kplus, tp.dhat_prime);
    const double sphi = dot(tp.kminus, tp.dhat_prime);
    const double nphi = std::hypot(cphi, sphi);
    tp.cos_phi = cphi / nphi;
    tp.sin_phi = sphi / nphi;
    return tp;
}

} // namespace ellipse_contact
