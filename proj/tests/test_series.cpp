#include <cmath>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "ertf/series.hpp"

using namespace ertf;

namespace {

constexpr double pi = std::numbers::pi;

// prod_{k>=1} (1 + x/k^2) = sinh(pi sqrt x) / (pi sqrt x)
double sinh_product(double x)
{
    if (x == 0.0)
        return 1.0;
    const double a = pi * std::sqrt(x);
    return std::sinh(a) / a;
}

}  // namespace

TEST(InfiniteProduct, SinhIdentity)
{
    const FitnessSpec spec(PowerLaw{2.0});
    for (double a : {0.5, 1.0, 2.0})
    {
        const ProductValue r = infinite_product(spec, 0.0, a * a, 1e-9);
        const double truth = pi * a / std::sinh(pi * a);
        EXPECT_NEAR(r.value / truth, 1.0, 1e-6) << "a=" << a;
        EXPECT_TRUE(r.bracket.contains(truth)) << "a=" << a;
    }
    EXPECT_NEAR(infinite_product(spec, 0.0, 4.0, 1e-12).value, 0.0234670593, 1e-10);
}

TEST(InfiniteProduct, AdditiveSinhRatio)
{
    // prod (k^2 + b) / (k^2 + b + l) for f(i, b) = (i+1)^2 + b.
    const FitnessSpec spec(PowerLaw{2.0}, WeightFunctionPair::additive_pair());
    for (double b : {0.5, 3.0})
        for (double l : {0.1, 7.0})
        {
            const double truth = sinh_product(b) / sinh_product(b + l);
            const ProductValue r = infinite_product(spec, b, l, 1e-9);
            EXPECT_NEAR(r.value / truth, 1.0, 1e-8);
            EXPECT_TRUE(r.bracket.contains(truth));
        }
}

TEST(InfiniteProduct, AgreesWithLongFiniteProduct)
{
    const FitnessSpec spec(PowerLaw{1.5}, WeightFunctionPair::mixed(0.0));
    const double w = 0.3, lambda = 0.8;
    const double finite = laplace_product(spec, 10000000, w, lambda);
    const ProductValue r = infinite_product(spec, w, lambda, 1e-10);
    // The omitted factors lie in [exp(-lambda sum_{i>=N} 1/f_i), 1].
    const double gap = lambda * mu_exact(spec, 10000000, w, 1e-12).value;
    EXPECT_LE(r.bracket.lower, finite);
    EXPECT_GE(r.bracket.upper * std::exp(gap) * (1 + 1e-12), finite);
    EXPECT_NEAR(std::log(finite) - r.log_value, 0.0, gap + 1e-9);
    EXPECT_DOUBLE_EQ(infinite_product(spec, w, 0.0).value, 1.0);
}

TEST(StarSeries, ConstantWeightClosedForm)
{
    const FitnessSpec spec(PowerLaw{2.0});
    for (std::size_t n : {16u, 1000u})
    {
        const double mu = mu_exact(spec, n, 0.0, 1e-13).value;
        const McEstimate e = star_series_term(spec, ConstantLaw{0.0}, n, 0.5);
        const double a2 = 0.5 / mu;
        const double truth = pi * std::sqrt(a2) / std::sinh(pi * std::sqrt(a2));
        EXPECT_NEAR(e.log_value, std::log(truth), 1e-6);
        EXPECT_EQ(e.std_error, 0.0);
        EXPECT_EQ(e.samples, 1u);
    }
    // mu_n is about 1e-3 near n = 1000; the term approaches 2 pi a exp(-pi a).
    const double a = std::sqrt(0.5 / mu_exact(spec, 1000, 0.0, 1e-13).value);
    EXPECT_NEAR(star_series_term(spec, ConstantLaw{0.0}, 1000).value / (2 * pi * a * std::exp(-pi * a)), 1.0, 1e-8);
    EXPECT_NEAR(std::log10(star_series_term(spec, ConstantLaw{0.0}, 1000).value), -28.37, 0.01);
}

TEST(StarSeries, ConstantWeightTermsNonincreasing)
{
    const FitnessSpec spec(PowerLaw{1.3}, WeightFunctionPair::mixed(0.0));
    double prev = 1.0;
    for (std::size_t n : power_grid(1, 14))
    {
        const double v = star_series_term(spec, ConstantLaw{2.0}, n).value;
        EXPECT_LE(v, prev);
        prev = v;
    }
}

TEST(StarSeries, ImportanceSamplingMatchesPlainMonteCarlo)
{
    const FitnessSpec spec(PowerLaw{2.0}, WeightFunctionPair::mixed(0.0));
    const WeightDistribution dist = ParetoLaw{3.0, 1.0};
    const std::size_t n = 32;
    McOptions opt;
    opt.samples = 20000;
    opt.threads = 0;
    const McEstimate is = star_series_term(spec, dist, n, 0.5, opt);

    const double lambda = 0.5 / mu_exact(spec, n, 0.0, 1e-13).value;
    Rng rng(99);
    const int N = 20000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < N; ++i)
    {
        const double x = infinite_product(spec, dist.sample(rng).value, lambda, 1e-4).value;
        s += x;
        s2 += x * x;
    }
    const double mean = s / N;
    const double se = std::sqrt((s2 / N - mean * mean) / N);
    EXPECT_NEAR(is.value, mean, 4.0 * std::hypot(se, is.std_error));
}

TEST(PathSeries, TwoNodeConstantMatchesProduct)
{
    const FitnessSpec spec(PowerLaw{2.0});
    const double lambda = 2.0 * std::log(2.0) / mu_exact(spec, 2, 0.0, 1e-13).value;
    EXPECT_NEAR(path_series_term(spec, ConstantLaw{0.0}, 2).value,
                infinite_product(spec, 0.0, lambda, 1e-12).value, 1e-9);
    EXPECT_THROW(path_series_term(spec, ConstantLaw{0.0}, 2, 1.0), InvalidParameters);
    EXPECT_THROW(star_series_term(spec, ConstantLaw{0.0}, 2, 1.0), InvalidParameters);
}

TEST(DecayFit, RecoversSyntheticExponent)
{
    auto make = [](double a, double wobble) {
        std::vector<SeriesTerm> t;
        int sign = 1;
        for (std::size_t n : power_grid(4, 12))
        {
            const double v = 3.0 * std::pow(static_cast<double>(n), -a) * (1.0 + wobble * sign);
            sign = -sign;
            t.push_back({n, v, 0.0, std::log(v)});
        }
        return t;
    };
    const SeriesReport fast = make_report(make(1.6, 0.05));
    EXPECT_NEAR(fast.fit.a, 1.6, 0.02);
    EXPECT_LT(fast.fit.ci_low, fast.fit.a);
    EXPECT_EQ(fast.verdict, SeriesVerdict::LikelySummable);
    EXPECT_EQ(make_report(make(0.4, 0.05)).verdict, SeriesVerdict::LikelyDivergent);
    EXPECT_EQ(make_report(make(1.0, 0.3)).verdict, SeriesVerdict::Inconclusive);
    const DecayFit exact = fit_decay(make(2.0, 0.0));
    EXPECT_NEAR(exact.a, 2.0, 1e-12);
    EXPECT_EQ(exact.points, 9u);
}

TEST(StarSeries, ConstantWeightVerdicts)
{
    const auto grid = power_grid(4, 12);
    EXPECT_EQ(star_series(FitnessSpec(PowerLaw{2.0}, WeightFunctionPair::mixed(0.0)), ConstantLaw{1.0}, grid).verdict,
              SeriesVerdict::LikelySummable);
    EXPECT_EQ(star_series(FitnessSpec(PowerLaw{2.0}, WeightFunctionPair::additive_pair()), ConstantLaw{1.0}, grid)
                  .verdict,
              SeriesVerdict::LikelySummable);
}

TEST(DivergenceProbe, PathPhasePoint)
{
    // mixed, p = 1.2, Pareto alpha = 2: (p-1)(alpha-1) = 0.2 < 1.
    const FitnessSpec spec(PowerLaw{1.2}, WeightFunctionPair::mixed(0.0));
    McOptions opt;
    opt.samples = 4000;
    opt.threads = 0;
    const SeriesReport r = divergence_probe(spec, ParetoLaw{2.0, 1.0}, 0.0, power_grid(4, 12), 0.5, opt);
    EXPECT_EQ(r.verdict, SeriesVerdict::LikelyDivergent) << "a=" << r.fit.a;
}

TEST(Output, SeriesCsv)
{
    SeriesReport r;
    r.terms.push_back({16, 0.5, 0.01, std::log(0.5)});
    std::ostringstream os;
    write_series_csv(os, r);
    EXPECT_EQ(os.str(), "n,term,stderr\n16,0.5,0.01\n");
}
