#include <gtest/gtest.h>

#include <cstring>
#include <random>

#include "ellipse_contact/io.hpp"

using namespace ellipse_contact;
using namespace ellipse_contact::io;

TEST(Fmt17, RoundTrips)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        double v;
        do {
            const std::uint64_t bits = rng();
            std::memcpy(&v, &bits, sizeof v);
        } while (!std::isfinite(v));
        EXPECT_EQ(parse_double(fmt17(v), "v"), v);
    }
    EXPECT_EQ(fmt17(0.1), "0.10000000000000001");
}

TEST(ParseDouble, Strict)
{
    EXPECT_EQ(parse_double(" 2.5 ", "x"), 2.5);
    EXPECT_EQ(parse_double("+1e3", "x"), 1000.0);
    EXPECT_THROW(parse_double("", "x"), ParseError);
    EXPECT_THROW(parse_double("2,5", "x"), ParseError);
    EXPECT_THROW(parse_double("1.0abc", "x"), ParseError);
    EXPECT_THROW(parse_double("nan", "x"), ParseError);
    EXPECT_THROW(parse_double("inf", "x"), ParseError);
}

TEST(McConfigText, KeyValue)
{
    const auto c = parse_mc_config("# comment\nn_particles = 10\nspecies = 2:1:3, 1:1:1\nbox = 30 x 20\n"
                                   "max_translation = 0.2\nmax_rotation_deg = 90\nseed = 42\nsweeps = 7\naudit = true\n");
    EXPECT_EQ(c.n_particles, 10);
    ASSERT_EQ(c.species.size(), 2u);
    EXPECT_EQ(c.species[0].shape, EllipseShape(2, 1));
    EXPECT_EQ(c.species[0].fraction, 3.0);
    EXPECT_EQ(c.Lx, 30.0);
    EXPECT_EQ(c.Ly, 20.0);
    EXPECT_NEAR(c.max_rotation, M_PI / 2, 1e-15);
    EXPECT_EQ(c.seed, 42u);
    EXPECT_EQ(c.sweeps, 7);
    EXPECT_TRUE(c.audit);
}

TEST(McConfigText, PackingFractionChoosesBox)
{
    const auto c = parse_mc_config("n_particles = 64\nspecies = 2:1\npacking_fraction = 0.5\n");
    EXPECT_NEAR(c.packing_fraction(), 0.5, 1e-12);
}

TEST(McConfigText, Json)
{
    const auto c = parse_mc_config(R"({"n_particles": 4, "species": [{"a": 1.5, "b": 0.5}], "box": [12, 10],
                                       "max_rotation_deg": 45, "seed": 3})");
    EXPECT_EQ(c.n_particles, 4);
    EXPECT_EQ(c.species[0].shape, EllipseShape(1.5, 0.5));
    EXPECT_EQ(c.Lx, 12.0);
    EXPECT_NEAR(c.max_rotation, M_PI / 4, 1e-15);
}

TEST(McConfigText, Errors)
{
    EXPECT_THROW(parse_mc_config("n_particles = 4\n"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1:1\nbogus = 3\n"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1:1\nbox = 3\n"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1\n"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1:1\nLx = ten\n"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1:1\nno equals sign\n"), ParseError);
    EXPECT_THROW(parse_mc_config("{\"species\": 3"), ParseError);
    EXPECT_THROW(parse_mc_config("species = 1:2\n"), DegenerateShape);
    EXPECT_THROW(load_mc_config("/nonexistent/file.conf"), ParseError);
}

TEST(Records, SnapshotAndSummary)
{
    MCConfig c;
    c.n_particles = 4;
    c.species = {{EllipseShape(1, 1), 1.0}};
    c.Lx = c.Ly = 8.0;
    McRng rng(1);
    const auto st = init_state(c, rng);
    const auto j = snapshot_json(3, st, SweepStats{});
    EXPECT_EQ(j["sweep"], 3);
    EXPECT_EQ(j["positions"].size(), 4u);
    EXPECT_EQ(j["orientations"][0][0], 1.0);
    EXPECT_EQ(j["S"], 1.0);
    EXPECT_EQ(j["acceptance"], 1.0);
    // Doubles survive a dump/parse cycle exactly.
    const auto back = json::parse(j.dump());
    EXPECT_EQ(back["positions"][1][0].get<double>(), st.positions[1].x);

    RunSummary r;
    r.sweeps = 5;
    EXPECT_EQ(summary_json(r)["summary"], true);
}

TEST(Records, CurveCsv)
{
    LocusCurve c;
    c.samples = {{0.0, {2.0, 0.0}}, {M_PI / 2, {0.0, 1.0}}};
    std::ostringstream os;
    write_curve_csv(os, c, "theta_deg");
    EXPECT_EQ(os.str(), "theta_deg,x,y\n0,2,0\n90,0,1\n");
    EXPECT_EQ(curve_json(c, "theta_deg")["points"].size(), 2u);
}
