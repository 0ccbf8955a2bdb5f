#include <gtest/gtest.h>

#include <limits>

#include "ellipse_contact/contact.hpp"
#include "ellipse_contact/oracle.hpp"
#include "test_support.hpp"

using namespace ellipse_contact;

namespace {

Vec2 reflect(Vec2 v, UnitVec2 axis) { return 2.0 * dot(v, axis.vec()) * axis.vec() - v; }

void expect_tangent(const PairConfiguration& cfg, const ContactSolution& s)
{
    const auto r = tangency_residuals(cfg, s);
    EXPECT_LE(r.on_ellipse1, 1e-9);
    EXPECT_LE(r.on_ellipse2, 1e-9);
    EXPECT_LE(r.normal_cross, 1e-8);
    EXPECT_LT(r.normal_dot, 0.0);
    EXPECT_GE(s.d, cfg.shape1.b() + cfg.shape2.b() - 1e-9);
    EXPECT_LE(s.d, cfg.shape1.a() + cfg.shape2.a() + 1e-9);
}

TransformedPair synthetic(double b2p, double delta, double cos_phi, double sin_sign = 1.0)
{
    TransformedPair tp;
    tp.b2p = b2p;
    tp.delta = delta;
    tp.a2p = b2p * std::sqrt(1.0 + delta);
    tp.cos_phi = cos_phi;
    tp.sin_phi = sin_sign * std::sqrt(1.0 - cos_phi * cos_phi);
    return tp;
}

} // namespace

TEST(ClosestApproach, Circles)
{
    ConfigurationGenerator gen(1);
    for (int i = 0; i < 1000; ++i) {
        const auto cfg = gen.next(Stratum::Circles).cfg;
        const auto s = closest_approach(cfg);
        const double r1 = cfg.shape1.a(), r2 = cfg.shape2.a();
        EXPECT_NEAR(s.d, r1 + r2, 1e-12 * (r1 + r2));
        EXPECT_EQ(s.branch, ContactBranch::CircleLike);
        EXPECT_LE((s.contact_point - r1 * cfg.dhat.vec()).norm(), 1e-12 * r1);
        expect_tangent(cfg, s);
    }
}

TEST(ClosestApproach, IdenticalEllipses)
{
    const EllipseShape e(2, 1);
    const auto tip = closest_approach({e, e, UnitVec2(1, 0), UnitVec2(1, 0), UnitVec2(1, 0)});
    EXPECT_NEAR(tip.d, 4.0, 4e-12);
    EXPECT_NEAR(tip.contact_point.x, 2.0, 1e-12);
    EXPECT_NEAR(tip.contact_point.y, 0.0, 1e-12);
    const auto side = closest_approach({e, e, UnitVec2(1, 0), UnitVec2(1, 0), UnitVec2(0, 1)});
    EXPECT_NEAR(side.d, 2.0, 2e-12);
    // Tip to tip for unequal parallel ellipses, at arbitrary common orientation.
    const auto k = UnitVec2::from_degrees(37.0);
    const auto t2 = closest_approach({EllipseShape(3, 1), EllipseShape(5, 0.5), k, -k, k});
    EXPECT_NEAR(t2.d, 8.0, 8e-12);
}

TEST(ClosestApproach, ThirtyDegreeSweepAgainstOracle)
{
    const EllipseShape e(2, 1);
    for (int i = 0; i < 360; ++i) {
        const PairConfiguration cfg{e, e, UnitVec2(1, 0), UnitVec2::from_degrees(30), UnitVec2::from_degrees(i)};
        const auto s = closest_approach(cfg);
        EXPECT_NEAR(s.d, oracle_distance(cfg), 1e-8 * s.d) << i;
        expect_tangent(cfg, s);
    }
}

TEST(ClosestApproach, Deterministic)
{
    ConfigurationGenerator gen(8);
    for (int i = 0; i < 200; ++i) {
        const auto cfg = gen.next().cfg;
        const auto a = closest_approach(cfg);
        const auto b = closest_approach(cfg);
        EXPECT_EQ(a.d, b.d);
        EXPECT_EQ(a.contact_point, b.contact_point);
    }
}

TEST(TransformedDistance, SpecialCases)
{
    const auto c = transformed_distance(synthetic(0.5, 0.0, 0.3));
    EXPECT_EQ(c.d_prime, 1.5);
    EXPECT_EQ(c.q, 1.0);
    EXPECT_EQ(c.branch, ContactBranch::CircleLike);

    const auto r = transformed_distance(synthetic(0.5, 3.0, 0.0));
    EXPECT_EQ(r.d_prime, 2.0);
    EXPECT_EQ(r.q, 2.0);
    EXPECT_EQ(r.branch, ContactBranch::PhiRightAngle);
}

TEST(TransformedDistance, AgainstCircleEllipseOracle)
{
    ConfigurationGenerator gen(55);
    for (int i = 0; i < 300; ++i) {
        const double b = gen.log_uniform(0.05, 5.0);
        const double delta = gen.log_uniform(1e-6, 100.0);
        const UnitVec2 axis = UnitVec2::from_angle(gen.uniform(0.0, 2.0 * M_PI));
        const UnitVec2 dhat = UnitVec2::from_angle(gen.uniform(0.0, 2.0 * M_PI));
        TransformedPair tp = synthetic(b, delta, 1.0);
        tp.kminus = axis;
        tp.kplus = -axis.perp();
        tp.cos_phi = dot(tp.kplus, dhat);
        tp.sin_phi = dot(tp.kminus, dhat);
        const auto td = transformed_distance(tp);
        EXPECT_NEAR(td.d_prime, oracle_circle_ellipse_distance(tp.a2p, tp.b2p, axis, dhat), 1e-8 * td.d_prime);
    }
    EXPECT_NEAR(oracle_circle_ellipse_distance(1, 1, UnitVec2(1, 0), UnitVec2(0, 1)), 2.0, 1e-9);
    EXPECT_NEAR(oracle_circle_ellipse_distance(0.5, 0.5, UnitVec2(1, 0), UnitVec2(0, 1)), 1.5, 1e-9);
}

TEST(TransformedDistance, ThresholdStraddles)
{
    ConfigurationGenerator gen(66);
    for (int i = 0; i < 500; ++i) {
        const double b = gen.log_uniform(0.05, 5.0);
        const double cphi = gen.uniform(-1.0, 1.0);
        const double sgn = gen.uniform() < 0.5 ? -1.0 : 1.0;
        // delta on either side of 1e-12
        const auto below = transformed_distance(synthetic(b, 1e-12 * (1 - 1e-3), cphi, sgn));
        const auto above = transformed_distance(synthetic(b, 1e-12 * (1 + 1e-3), cphi, sgn));
        EXPECT_EQ(below.branch, ContactBranch::CircleLike);
        EXPECT_EQ(above.branch, ContactBranch::General);
        EXPECT_NEAR(below.d_prime, above.d_prime, 1e-8 * above.d_prime);

        // |cos phi| on either side of 1e-12
        const double delta = gen.log_uniform(1e-6, 1e3);
        const auto inside = transformed_distance(synthetic(b, delta, sgn * 1e-12 * (1 - 1e-3)));
        const auto outside = transformed_distance(synthetic(b, delta, sgn * 1e-12 * (1 + 1e-3)));
        EXPECT_EQ(inside.branch, ContactBranch::PhiRightAngle);
        EXPECT_EQ(outside.branch, ContactBranch::General);
        EXPECT_NEAR(inside.d_prime, outside.d_prime, 1e-8 * outside.d_prime);
    }
}

TEST(ClosestApproach, ParallelThresholdStraddle)
{
    ConfigurationGenerator gen(67);
    for (int i = 0; i < 500; ++i) {
        const auto base = gen.next(Stratum::Uniform).cfg;
        const double s_lo = std::sqrt(1e-9) * (1.0 - 1e-6);
        const double s_hi = std::sqrt(1e-9) * (1.0 + 1e-6);
        const PairConfiguration lo{base.shape1, base.shape2, base.k1,
                                   base.k1.rotated(std::sqrt(1 - s_lo * s_lo), s_lo), base.dhat};
        const PairConfiguration hi{base.shape1, base.shape2, base.k1,
                                   base.k1.rotated(std::sqrt(1 - s_hi * s_hi), s_hi), base.dhat};
        const auto a = closest_approach(lo);
        const auto b = closest_approach(hi);
        EXPECT_TRUE(a.branch == ContactBranch::ParallelAxes2a || a.branch == ContactBranch::ParallelAxes2b ||
                    a.branch == ContactBranch::CircleLike || a.branch == ContactBranch::PhiRightAngle);
        EXPECT_NEAR(a.d, b.d, 1e-8 * b.d);
        EXPECT_LE((a.contact_point - b.contact_point).norm(), 1e-6 * b.d);
    }
}

TEST(ClosestApproach, ParallelLimitMatchesOracle)
{
    ConfigurationGenerator gen(68);
    for (int i = 0; i < 300; ++i) {
        auto cfg = gen.next(Stratum::Uniform).cfg;
        cfg.k2 = gen.uniform() < 0.5 ? cfg.k1 : -cfg.k1;
        const auto s = closest_approach(cfg);
        EXPECT_TRUE(s.branch == ContactBranch::ParallelAxes2a || s.branch == ContactBranch::ParallelAxes2b ||
                    s.branch == ContactBranch::CircleLike || s.branch == ContactBranch::PhiRightAngle);
        EXPECT_NEAR(s.d, oracle_distance(cfg), 1e-8 * s.d);
        expect_tangent(cfg, s);
        // Limit contact-point form: a1 cos psi k1 + b1 sin psi k1_perp (or the swapped form).
        const double x = dot(s.contact_point, cfg.k1.vec()) / cfg.shape1.a();
        const double y = dot(s.contact_point, cfg.k1.perp().vec()) / cfg.shape1.b();
        EXPECT_NEAR(x * x + y * y, 1.0, 1e-12);
    }
}

TEST(ContactPoint, RandomTangencyAndCrossChecks)
{
    ConfigurationGenerator gen(9);
    for (int i = 0; i < 1000; ++i) {
        const auto rc = gen.next();
        const auto& cfg = rc.cfg;
        const auto [r_c, s] = contact_point(cfg);
        EXPECT_EQ(r_c, s.contact_point);
        expect_tangent(cfg, s);
        const auto oc = oracle_contact(cfg);
        EXPECT_LE((r_c - oc.point).norm(), 1e-6 * s.d) << i << ' ' << to_string(rc.stratum);
        // Normal is the gradient direction of ellipse 1's form.
        const UnitVec2 n1(ellipse_matrix(cfg.shape1, cfg.k1).apply(r_c));
        EXPECT_NEAR(cross(n1, s.contact_normal), 0.0, 1e-9);
        EXPECT_GT(dot(n1, s.contact_normal), 0.0);

        if (s.transformed.branch == TransformBranch::General) {
            // The axis form divides by |k1 - k2| twice.
            const double cond = std::numeric_limits<double>::epsilon() / (1.0 - s.transformed.cos_k12);
            const Vec2 alt = contact_point_via_axes(cfg, s);
            EXPECT_LE((alt - r_c).norm(), (1e-9 + cond) * s.d) << i;
        }
        if (s.branch == ContactBranch::General && s.transformed.delta > 1e-3) {
            const auto [sp, cp] = psi_from_q(s.transformed, s.q);
            EXPECT_NEAR(sp, s.sin_psi, 1e-7);
            EXPECT_NEAR(cp, s.cos_psi, 1e-7);
        }
    }
}

TEST(Overlap, Examples)
{
    const EllipseShape c(1, 1), e(2, 1);
    const UnitVec2 x(1, 0);
    EXPECT_EQ(overlap(c, c, x, x, {1.5, 0.0}), OverlapVerdict::Overlapping);
    EXPECT_EQ(overlap(c, c, x, x, {2.5, 0.0}), OverlapVerdict::Disjoint);
    EXPECT_EQ(overlap(e, e, x, x, {4.0, 0.0}), OverlapVerdict::Tangent);
    EXPECT_EQ(overlap(e, e, x, x, {4.0 + 1e-8, 0.0}), OverlapVerdict::Disjoint);
    EXPECT_EQ(overlap(e, e, x, x, {4.0 - 1e-8, 0.0}), OverlapVerdict::Overlapping);
    EXPECT_THROW(overlap(e, e, x, x, {0.0, 1e-15}), ConcentricCenters);
}

TEST(Overlap, AgreesWithSamplingOracle)
{
    ConfigurationGenerator gen(10);
    OracleSettings os;
    for (int i = 0; i < 10000; ++i) {
        const auto cfg = gen.next().cfg;
        const double d = closest_approach(cfg).d;
        const double eps = (gen.uniform() < 0.5 ? -1.0 : 1.0) * gen.log_uniform(1e-6, 0.5);
        const double t = d * (1.0 + eps);
        const auto v = overlap(cfg.shape1, cfg.shape2, cfg.k1, cfg.k2, t * cfg.dhat.vec());
        ASSERT_NE(v, OverlapVerdict::Tangent);
        ASSERT_EQ(v == OverlapVerdict::Overlapping, oracle_overlaps(cfg, t, os)) << i << " eps=" << eps;
    }
}

TEST(Invariance, Exchange)
{
    ConfigurationGenerator gen(11);
    for (int i = 0; i < 1000; ++i) {
        const auto c = gen.next().cfg;
        const double d = closest_approach(c).d;
        EXPECT_NEAR(closest_approach({c.shape2, c.shape1, c.k2, c.k1, c.dhat}).d, d, 1e-9 * d);
        EXPECT_NEAR(closest_approach({c.shape2, c.shape1, c.k2, c.k1, -c.dhat}).d, d, 1e-9 * d);
    }
}

TEST(Invariance, Scaling)
{
    ConfigurationGenerator gen(12);
    for (int i = 0; i < 1000; ++i) {
        const auto c = gen.next().cfg;
        const double f = gen.log_uniform(1e-3, 1e3);
        const auto s = closest_approach(c);
        const auto t = closest_approach({c.shape1.scaled(f), c.shape2.scaled(f), c.k1, c.k2, c.dhat});
        EXPECT_NEAR(t.d, f * s.d, 1e-12 * f * s.d);
        EXPECT_LE((t.contact_point - f * s.contact_point).norm(), 1e-12 * f * s.d);
    }
}

TEST(Invariance, Rotation)
{
    ConfigurationGenerator gen(13);
    for (int i = 0; i < 1000; ++i) {
        const auto c = gen.next().cfg;
        const double th = gen.uniform(0.0, 2.0 * M_PI);
        const double co = std::cos(th), si = std::sin(th);
        const auto s = closest_approach(c);
        const auto t = closest_approach({c.shape1, c.shape2, c.k1.rotated(co, si), c.k2.rotated(co, si),
                                         c.dhat.rotated(co, si)});
        EXPECT_NEAR(t.d, s.d, 1e-10 * s.d);
        EXPECT_LE((t.contact_point - rotate(s.contact_point, co, si)).norm(), 1e-9 * s.d);
    }
}

TEST(Invariance, Reflection)
{
    ConfigurationGenerator gen(14);
    for (int i = 0; i < 1000; ++i) {
        const auto c = gen.next().cfg;
        const auto s = closest_approach(c);
        const auto t = closest_approach({c.shape1, c.shape2, UnitVec2(reflect(c.k1, c.dhat)),
                                         UnitVec2(reflect(c.k2, c.dhat)), c.dhat});
        EXPECT_NEAR(t.d, s.d, 1e-10 * s.d);
        EXPECT_LE((t.contact_point - reflect(s.contact_point, c.dhat)).norm(), 1e-9 * s.d);
    }
}

TEST(Invariance, SignFlips)
{
    ConfigurationGenerator gen(15);
    for (int i = 0; i < 1000; ++i) {
        const auto c = gen.next().cfg;
        const auto s = closest_approach(c);
        const auto f1 = closest_approach({c.shape1, c.shape2, -c.k1, c.k2, c.dhat});
        const auto f2 = closest_approach({c.shape1, c.shape2, c.k1, -c.k2, c.dhat});
        const auto fd = closest_approach({c.shape1, c.shape2, c.k1, c.k2, -c.dhat});
        EXPECT_NEAR(f1.d, s.d, 1e-10 * s.d);
        EXPECT_NEAR(f2.d, s.d, 1e-10 * s.d);
        EXPECT_NEAR(fd.d, s.d, 1e-10 * s.d);
        EXPECT_LE((f1.contact_point - s.contact_point).norm(), 1e-9 * s.d);
        EXPECT_LE((f2.contact_point - s.contact_point).norm(), 1e-9 * s.d);
        EXPECT_LE((fd.contact_point + s.contact_point).norm(), 1e-9 * s.d);
    }
}
