#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "cmj.hpp"
#include "errors.hpp"
#include "grower.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace ertf {

/// D(x) = 1 - E[exp(-(R v 1) x)] for P(R > r) = r^{-(alpha-1)}, r >= 1.
///
/// Written as -expm1(-x) + x^a int_x^inf e^{-y} y^{-a} dy with a = alpha - 1,
/// the integral evaluated in s = log y.
inline double starvation_probability(double alpha, double x)
{
    if (!(alpha > 1.0))
        throw InvalidParameters("starvation probability needs alpha > 1");
    if (!(x >= 0.0))
        throw InvalidParameters("starvation probability needs x >= 0");
    if (x == 0.0)
        return 0.0;
    const double a = alpha - 1.0;
    const double lx = std::log(x);
    auto f = [&](double s) { return std::exp(a * lx + s * (1.0 - a) - std::exp(s)); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double hi = 5.0;
    double v = 0.0;
    if (lx < 0.0)
        v += GK::integrate(f, lx, 0.0, 15, 1e-12);
    v += GK::integrate(f, std::max(lx, 0.0), std::max(hi, lx + 5.0), 15, 1e-12);
    return -std::expm1(-x) + v;
}

struct CounterexampleSpec
{
    double alpha = 1.5;
    double p = 2.5;
    double coin = 0.5;  // P(type 1)
    std::vector<double> varsigma;  // varsigma[k] for k = 1..k_max, index 0 unused
    std::vector<double> s;         // s[i] for i = 2..k_max, indices 0 and 1 unused

    /// Deterministic inter-birth time s_i of a type-1 node; 0 past the table.
    double s_at(std::size_t i) const noexcept { return i < s.size() ? s[i] : 0.0; }
};

/// Choose varsigma_k by bisection on log varsigma so that
/// D(varsigma_k) < 0.9 * 2^{-k}, then s_k = varsigma_{k-1} - varsigma_k.
/// Once the target underflows varsigma_k = 0 and the remaining s_k vanish.
inline CounterexampleSpec build_s_sequence(double alpha, double p, std::size_t k_max, double coin = 0.5)
{
    if (k_max < 2)
        throw InvalidParameters("s sequence needs k_max >= 2");
    if (!(alpha > 1.0) || !(p > 1.0))
        throw InvalidParameters("counterexample needs alpha > 1 and p > 1");
    if (!((alpha - 1.0) * (p - 1.0) < 1.0))
        throw InvalidParameters("counterexample needs (alpha-1)(p-1) < 1");
    if (!(coin >= 0.0 && coin <= 1.0))
        throw InvalidParameters("coin must be a probability");
    CounterexampleSpec c;
    c.alpha = alpha;
    c.p = p;
    c.coin = coin;
    c.varsigma.assign(k_max + 1, 0.0);
    c.s.assign(k_max + 1, 0.0);
    const double floor_log = std::log(std::numeric_limits<double>::denorm_min());
    double hi = 0.0;  // log of the previous varsigma; D(1) > 1/2
    for (std::size_t k = 1; k <= k_max; ++k)
    {
        const double target = 0.9 * std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(k, 1100)));
        double lo = floor_log;
        if (target == 0.0 || !(starvation_probability(alpha, std::exp(lo)) < target) || hi <= lo)
        {
            c.varsigma[k] = 0.0;
            hi = lo;
            continue;
        }
        for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, std::fabs(lo)); ++it)
        {
            const double mid = 0.5 * (lo + hi);
            (starvation_probability(alpha, std::exp(mid)) < target ? lo : hi) = mid;
        }
        c.varsigma[k] = std::exp(lo);
        hi = lo;
    }
    for (std::size_t k = 2; k <= k_max; ++k)
        c.s[k] = c.varsigma[k - 1] - c.varsigma[k];
    return c;
}

/// Type 0: X(i) ~ Exp(R i^p). Type 1: X(1) ~ Exp(1), X(i) = s_i for i >= 2.
struct TwoTypeClock
{
    std::shared_ptr<const CounterexampleSpec> spec;

    double operator()(const Weight& w, std::size_t i, Rng& rng) const
    {
        if (w.type == 0)
            return rng.exponential(w.value * std::pow(static_cast<double>(i), spec->p));
        if (i == 1)
            return rng.exponential(1.0);
        return spec->s_at(i);
    }
};

enum class RunClass
{
    StarLike,
    PathLike,
    Undecided
};

struct ClassifierOptions
{
    double theta = 0.5;
    std::size_t depth = 20;
};

/// Star-like: max out-degree > theta * births. Path-like otherwise when the
/// most recently born node sits deeper than `depth`.
inline RunClass classify_run(const CmjRun& run, const ClassifierOptions& opt = {})
{
    const Tree& t = run.tree;
    const std::size_t births = t.size() - 1;
    const std::size_t dmax = t.outdeg(t.max_degree_node());
    if (static_cast<double>(dmax) > opt.theta * static_cast<double>(births))
        return RunClass::StarLike;
    if (t.depth(static_cast<node_t>(t.size() - 1)) > opt.depth)
        return RunClass::PathLike;
    return RunClass::Undecided;
}

struct Interval
{
    double lo = 0.0;
    double hi = 1.0;
};

/// Wilson score interval for k successes out of n.
inline Interval wilson_interval(std::size_t k, std::size_t n, double z = 1.959963984540054)
{
    if (n == 0)
        return {0.0, 1.0};
    const double N = static_cast<double>(n);
    const double ph = static_cast<double>(k) / N;
    const double z2 = z * z;
    const double centre = (ph + z2 / (2 * N)) / (1 + z2 / N);
    const double half = z / (1 + z2 / N) * std::sqrt(ph * (1 - ph) / N + z2 / (4 * N * N));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

struct CounterexampleResult
{
    std::size_t births = 0;
    std::size_t replicas = 0;
    std::size_t star_like = 0;
    std::size_t path_like = 0;
    std::size_t undecided = 0;
    std::uint64_t seed = 0;
    ClassifierOptions classifier;

    double fraction(std::size_t k) const { return replicas ? static_cast<double>(k) / static_cast<double>(replicas) : 0.0; }
};

/// Replica r runs on Rng::stream(seed, r).
inline CounterexampleResult simulate_counterexample(const CounterexampleSpec& spec, std::size_t births,
                                                    std::size_t replicas, std::uint64_t seed,
                                                    const ClassifierOptions& opt = {}, unsigned threads = 1)
{
    if (births < 1000)
        throw InvalidParameters("counterexample simulation needs births >= 1000");
    if (replicas == 0)
        throw InvalidParameters("counterexample simulation needs replicas >= 1");
    const WeightDistribution dist(TwoTypeLaw{ParetoLaw{spec.alpha, 1.0}, spec.coin});
    const TwoTypeClock clock{std::make_shared<const CounterexampleSpec>(spec)};
    std::vector<RunClass> cls(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) {
        Rng rng = Rng::stream(seed, r);
        const CmjRun run = simulate_births(clock, dist, StopRule::after_births(births), rng);
        cls[r] = classify_run(run, opt);
    });
    CounterexampleResult res;
    res.births = births;
    res.replicas = replicas;
    res.seed = seed;
    res.classifier = opt;
    for (RunClass c : cls)
    {
        if (c == RunClass::StarLike)
            ++res.star_like;
        else if (c == RunClass::PathLike)
            ++res.path_like;
        else
            ++res.undecided;
    }
    return res;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline nlohmann::json to_json(const CounterexampleSpec& spec, const CounterexampleResult& r)
{
    nlohmann::json cfg = {{"alpha", spec.alpha},
                          {"p", spec.p},
                          {"coin", spec.coin},
                          {"births", r.births},
                          {"replicas", r.replicas},
                          {"seed", r.seed},
                          {"theta", r.classifier.theta},
                          {"depth", r.classifier.depth}};
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(cfg.dump())));
    auto wi = [&](std::size_t k) {
        const Interval i = wilson_interval(k, r.replicas);
        return nlohmann::json::array({i.lo, i.hi});
    };
    return {{"star_like", r.fraction(r.star_like)},
            {"path_like", r.fraction(r.path_like)},
            {"undecided", r.fraction(r.undecided)},
            {"wilson_intervals",
             {{"star_like", wi(r.star_like)}, {"path_like", wi(r.path_like)}, {"undecided", wi(r.undecided)}}},
            {"config", cfg},
            {"config_hash", hash},
            {"note", "finite-horizon proxy frequencies, not limit probabilities"}};
}

}  // namespace ertf
