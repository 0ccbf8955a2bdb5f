#include <gtest/gtest.h>

#include "ellipse_contact/mcsim.hpp"

using namespace ellipse_contact;

namespace {

MCConfig config(int n, EllipseShape s, double phi)
{
    MCConfig c;
    c.n_particles = n;
    c.species = {{s, 1.0}};
    std::tie(c.Lx, c.Ly) = lattice_box(c, phi);
    return c;
}

MCState state_with_angles(const std::vector<double>& deg)
{
    MCState st;
    for (double a : deg) {
        st.positions.push_back({0.0, 0.0});
        st.orientations.push_back(UnitVec2::from_degrees(a));
    }
    return st;
}

} // namespace

TEST(InitState, CirclesInSquareBox)
{
    MCConfig c;
    c.n_particles = 100;
    c.species = {{EllipseShape(0.5, 0.5), 1.0}};
    c.Lx = c.Ly = 20.0;
    McRng rng(1);
    const auto st = init_state(c, rng);
    EXPECT_EQ(st.size(), 100u);
    EXPECT_EQ(count_overlaps(st, c), 0u);
    EXPECT_TRUE(cell_list_consistent(st));
}

TEST(InitState, EllipsesAtHalfPacking)
{
    const auto c = config(64, EllipseShape(2, 1), 0.5);
    EXPECT_NEAR(c.packing_fraction(), 0.5, 1e-12);
    McRng rng(2);
    const auto st = init_state(c, rng);
    EXPECT_EQ(st.size(), 64u);
    EXPECT_EQ(count_overlaps(st, c), 0u);
    for (const auto& k : st.orientations) EXPECT_EQ(k, UnitVec2(1, 0));
}

TEST(InitState, InfeasiblePacking)
{
    MCConfig c;
    c.n_particles = 64;
    c.species = {{EllipseShape(2, 1), 1.0}};
    EXPECT_THROW(lattice_box(c, 0.95), PackingInfeasible);
    c.Lx = c.Ly = std::sqrt(64 * 2 * M_PI / 0.95);
    McRng rng(3);
    EXPECT_THROW(init_state(c, rng), PackingInfeasible);
}

TEST(MCConfig, Validation)
{
    auto c = config(16, EllipseShape(2, 1), 0.1);
    EXPECT_NO_THROW(c.validate());
    auto small = c;
    small.Lx = 7.9;
    EXPECT_THROW(small.validate(), InvalidMCConfig);
    auto none = c;
    none.n_particles = 0;
    EXPECT_THROW(none.validate(), InvalidMCConfig);
    auto neg = c;
    neg.max_translation = -1.0;
    EXPECT_THROW(neg.validate(), InvalidMCConfig);
    auto nospecies = c;
    nospecies.species.clear();
    EXPECT_THROW(nospecies.validate(), InvalidMCConfig);
}

TEST(MCConfig, SpeciesCounts)
{
    MCConfig c;
    c.n_particles = 10;
    c.species = {{EllipseShape(1, 1), 1.0}, {EllipseShape(2, 1), 1.0}, {EllipseShape(3, 1), 1.0}};
    EXPECT_EQ(c.species_counts(), (std::vector<int>{4, 3, 3}));
    c.species[1].fraction = 2.0;
    EXPECT_EQ(c.species_counts(), (std::vector<int>{3, 5, 2}));
}

TEST(McSweep, ZeroAmplitudeAcceptsEverything)
{
    auto c = config(36, EllipseShape(2, 1), 0.6);
    c.max_translation = 0.0;
    c.max_rotation = 0.0;
    McRng rng(4);
    auto st = init_state(c, rng);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(mc_sweep(st, c, rng).total().ratio(), 1.0);
}

TEST(McSweep, DiluteGasAcceptance)
{
    auto c = config(50, EllipseShape(2, 1), 0.01);
    c.max_translation = 1.0;
    c.max_rotation = 0.5;
    McRng rng(5);
    auto st = init_state(c, rng);
    MoveStats total;
    for (int i = 0; i < 100; ++i) total += mc_sweep(st, c, rng).total();
    EXPECT_GT(total.ratio(), 0.95);
}

TEST(McSweep, AuditedDenseRunStaysOverlapFree)
{
    MCConfig c;
    c.n_particles = 60;
    c.species = {{EllipseShape(2, 1), 0.5}, {EllipseShape(1, 0.6), 0.5}};
    std::tie(c.Lx, c.Ly) = lattice_box(c, 0.45);
    c.max_translation = 0.3;
    c.max_rotation = 0.3;
    c.audit = true;
    McRng rng(6);
    auto st = init_state(c, rng);
    MoveStats total;
    for (int i = 0; i < 40; ++i) {
        const auto s = mc_sweep(st, c, rng);
        ASSERT_TRUE(s.audited);
        ASSERT_EQ(s.audit_overlaps, 0u) << "sweep " << i;
        ASSERT_EQ(s.audit_mismatches, 0u) << "sweep " << i;
        total += s.total();
    }
    EXPECT_GT(total.accepted, 0u);
    EXPECT_LT(total.accepted, total.attempted);
    EXPECT_EQ(st.sweeps_done, 40u);
}

TEST(McSweep, DeterministicTrajectory)
{
    auto c = config(25, EllipseShape(1.5, 0.5), 0.4);
    c.sweeps = 30;
    c.sample_every = 10;
    c.seed = 77;
    auto record = [&] {
        std::vector<double> out;
        run_simulation(c, [&](int, const MCState& st, const SweepStats&) {
            for (std::size_t i = 0; i < st.size(); ++i) {
                out.push_back(st.positions[i].x);
                out.push_back(st.positions[i].y);
                out.push_back(st.orientations[i].x());
                out.push_back(st.orientations[i].y());
            }
        });
        return out;
    };
    const auto a = record(), b = record();
    ASSERT_EQ(a.size(), 4u * 25u * 4u);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i], b[i]) << i;
}

TEST(McSweep, TwoParticleRadialDistribution)
{
    // Two unit-diameter discs in a 4 x 4 periodic box: the separation density is
    // zero below 1 and proportional to r above it (for r < 2).
    MCConfig c;
    c.n_particles = 2;
    c.species = {{EllipseShape(0.5, 0.5), 1.0}};
    c.Lx = c.Ly = 4.0;
    c.max_translation = 2.0;
    c.max_rotation = 0.1;
    McRng rng(7);
    auto st = init_state(c, rng);
    const int bins = 10;
    std::vector<double> hist(bins, 0.0);
    double below = 0.0, inside = 0.0;
    const int sweeps = 400000;
    for (int s = 0; s < sweeps; ++s) {
        mc_sweep(st, c, rng);
        const double r = st.minimum_image(st.positions[1] - st.positions[0]).norm();
        if (r < 1.0) ++below;
        if (r >= 1.0 && r < 2.0) {
            ++inside;
            ++hist[std::min(bins - 1, static_cast<int>((r - 1.0) * bins))];
        }
    }
    EXPECT_EQ(below, 0.0);
    for (int i = 0; i < bins; ++i) {
        const double lo = 1.0 + 0.1 * i, hi = lo + 0.1;
        const double expect = inside * (hi * hi - lo * lo) / 3.0;
        EXPECT_NEAR(hist[i], expect, 0.05 * expect) << "bin " << i;
    }
}

TEST(OrderParameter, Examples)
{
    EXPECT_NEAR(order_parameter(state_with_angles({33, 33, 33, 213})), 1.0, 1e-15);
    EXPECT_NEAR(order_parameter(state_with_angles({0, 90, 0, 90, 0, 90})), 0.0, 1e-15);
    McRng rng(8);
    std::vector<double> ang(10000);
    for (auto& a : ang) a = 360.0 * rng.uniform();
    EXPECT_LT(order_parameter(state_with_angles(ang)), 0.05);
    EXPECT_THROW(order_parameter(MCState{}), ContactError);
}

TEST(CellList, MoveKeepsMembershipConsistent)
{
    auto c = config(40, EllipseShape(1, 0.5), 0.3);
    c.max_translation = 1.5;
    McRng rng(9);
    auto st = init_state(c, rng);
    for (int i = 0; i < 20; ++i) {
        mc_sweep(st, c, rng);
        ASSERT_TRUE(cell_list_consistent(st));
    }
    std::size_t total = 0;
    for (int cell = 0; cell < st.cells.nx() * st.cells.ny(); ++cell) total += st.cells.members(cell).size();
    EXPECT_EQ(total, st.size());
}

TEST(MCState, MinimumImageAndWrap)
{
    MCState st;
    st.Lx = 10.0;
    st.Ly = 6.0;
    const Vec2 r = st.minimum_image({9.0, -4.0});
    EXPECT_NEAR(r.x, -1.0, 1e-15);
    EXPECT_NEAR(r.y, 2.0, 1e-15);
    const Vec2 w = st.wrap({-0.5, 13.0});
    EXPECT_NEAR(w.x, 9.5, 1e-15);
    EXPECT_NEAR(w.y, 1.0, 1e-15);
}
