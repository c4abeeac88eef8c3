#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "ertf/cmj.hpp"
#include "oracles.hpp"

using namespace ertf;

TEST(InterBirth, MeansAreReciprocalRates)
{
    const double rate = 3.0;
    const std::vector<InterBirthLaw> laws{ExponentialLaw{}, GammaLaw{0.5}, GammaLaw{4.0}, BetaLaw{2.0, 0.5},
                                          RayleighLaw{}};
    for (std::size_t k = 0; k < laws.size(); ++k)
    {
        Rng rng = Rng::stream(17, k);
        const int N = 200000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < N; ++i)
        {
            const double x = laws[k].draw(rate, rng);
            ASSERT_GE(x, 0.0);
            s += x;
            s2 += x * x;
        }
        const double mean = s / N;
        const double sd = std::sqrt((s2 / N - mean * mean) / N);
        EXPECT_NEAR(mean, 1.0 / rate, 5 * sd) << "law " << k;
    }
}

TEST(InterBirth, RejectsInvalidParameters)
{
    EXPECT_THROW(InterBirthLaw(GammaLaw{0.0}), InvalidParameters);
    EXPECT_THROW(InterBirthLaw(BetaLaw{0.5, 0.5}), InvalidParameters);
    EXPECT_THROW(InterBirthLaw(BetaLaw{2.0, 1.5}), InvalidParameters);
}

TEST(Cmj, FourNodeShapesMatchEnumeration)
{
    const FitnessSpec spec(PowerLaw{2.0});
    const WeightDistribution dist = ConstantLaw{0.0};
    const auto exact = oracle::exact_shape_law([](std::size_t i) { return (i + 1.0) * (i + 1.0); }, 4);
    std::map<std::string, double> law;
    const std::size_t R = 40000;
    for (std::size_t r = 0; r < R; ++r)
    {
        Rng rng = Rng::stream(21, r);
        const CmjRun run = simulate_births(spec, dist, ExponentialLaw{}, StopRule::after_births(3), rng);
        law[oracle::shape_of(run.tree)] += 1.0 / R;
    }
    EXPECT_LT(oracle::total_variation(law, exact), 0.015);
}

TEST(Cmj, BirthTimesOrderedAndStopRules)
{
    const FitnessSpec spec(PowerLaw{1.5}, WeightFunctionPair::mixed(0.0));
    const WeightDistribution dist = ParetoLaw{3.0, 1.0};
    Rng rng(2);
    const CmjRun run = simulate_births(spec, dist, GammaLaw{2.0}, StopRule::after_births(2000), rng);
    ASSERT_EQ(run.tree.size(), 2001u);
    for (std::size_t v = 1; v < run.birth_time.size(); ++v)
    {
        EXPECT_LE(run.birth_time[v - 1], run.birth_time[v]);
        EXPECT_LT(run.birth_time[run.tree.parent[v]], run.birth_time[v]);
    }
    const auto taus = run.taus();
    EXPECT_EQ(taus.size(), 2000u);

    Rng rng2(2);
    const double t = run.birth_time[500];
    const CmjRun cut = simulate_births(spec, dist, GammaLaw{2.0}, StopRule::at_time(t), rng2);
    EXPECT_FALSE(cut.truncated);
    EXPECT_LE(cut.birth_time.back(), t);
    // Same stream: the time-truncated run is a prefix of the birth-count run.
    ASSERT_LE(cut.tree.size(), run.tree.size());
    for (std::size_t v = 0; v < cut.tree.size(); ++v)
        EXPECT_EQ(cut.tree.parent[v], run.tree.parent[v]);
    EXPECT_EQ(cut.tree.size(), 501u);
}

TEST(Cmj, TimeRuleRespectsCap)
{
    const FitnessSpec spec(PowerLaw{2.0});
    Rng rng(3);
    const CmjRun run = simulate_births(spec, ConstantLaw{0.0}, ExponentialLaw{}, StopRule::at_time(1e9, 100), rng);
    EXPECT_TRUE(run.truncated);
    EXPECT_EQ(run.tree.size(), 101u);
}

TEST(Cmj, ExplosionEstimate)
{
    // Constant weights, f(i) = (i+1)^2: the root alone explodes in mean pi^2/6.
    const FitnessSpec spec(PowerLaw{2.0});
    double acc = 0.0;
    const int R = 400;
    for (int r = 0; r < R; ++r)
    {
        Rng rng = Rng::stream(5, r);
        const ExplosionEstimate e = explosion_estimate(spec, ConstantLaw{0.0}, ExponentialLaw{}, 2000, rng);
        ASSERT_GE(e.estimate, e.taus.back());
        ASSERT_GT(e.tail, 0.0);
        acc += e.estimate;
    }
    // The explosion time is below the root's own explosion time, so the mean is at most pi^2/6.
    EXPECT_LT(acc / R, 1.6449340668482264 * 1.05);
    EXPECT_GT(acc / R, 0.3);
    Rng rng(1);
    EXPECT_THROW(explosion_estimate(FitnessSpec(TableDegree{{1.0}, 1.0, 1.0}), ConstantLaw{0.0}, ExponentialLaw{}, 10, rng),
                 NonSummable);
}

TEST(Output, BirthCsv)
{
    const FitnessSpec spec(PowerLaw{2.0});
    Rng rng(1);
    const CmjRun run = simulate_births(spec, ConstantLaw{0.0}, ExponentialLaw{}, StopRule::after_births(3), rng);
    std::ostringstream os;
    write_birth_csv(os, run);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "rank,time,node,parent");
    int rows = 0;
    while (std::getline(in, line))
        ++rows;
    EXPECT_EQ(rows, 3);
}
