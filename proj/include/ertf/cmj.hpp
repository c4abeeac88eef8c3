#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <queue>
#include <random>
#include <type_traits>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "grower.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace ertf {

// ---------------------------------------------------------------------------
// Inter-birth laws. Each draw has mean 1/rate.
// ---------------------------------------------------------------------------

struct ExponentialLaw
{
};

/// Gamma(k, k rate).
struct GammaLaw
{
    double k = 1.0;
};

/// ((a+b)/a) (1/rate) Beta(a, b), a >= 1, 0 < b <= 1.
struct BetaLaw
{
    double a = 1.0;
    double b = 1.0;
};

/// Rayleigh with scale sqrt(2/pi)/rate.
struct RayleighLaw
{
};

class InterBirthLaw
{
public:
    using Variant = std::variant<ExponentialLaw, GammaLaw, BetaLaw, RayleighLaw>;

    InterBirthLaw() = default;
    template <class T>
        requires std::is_constructible_v<Variant, T>
    InterBirthLaw(T v) : v_(std::move(v))
    {
        if (auto g = std::get_if<GammaLaw>(&v_); g && !(g->k > 0.0))
            throw InvalidParameters("gamma inter-birth law needs k > 0");
        if (auto b = std::get_if<BetaLaw>(&v_); b && !(b->a >= 1.0 && b->b > 0.0 && b->b <= 1.0))
            throw InvalidParameters("beta inter-birth law needs a >= 1 and 0 < b <= 1");
    }

    const Variant& variant() const noexcept { return v_; }

    double draw(double rate, Rng& rng) const
    {
        return std::visit(
            [&](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, ExponentialLaw>)
                    return rng.exponential(rate);
                else if constexpr (std::is_same_v<T, GammaLaw>)
                    return std::gamma_distribution<double>(d.k, 1.0 / (d.k * rate))(rng);
                else if constexpr (std::is_same_v<T, BetaLaw>)
                {
                    const double x = std::gamma_distribution<double>(d.a, 1.0)(rng);
                    const double y = std::gamma_distribution<double>(d.b, 1.0)(rng);
                    return (d.a + d.b) / d.a / rate * (x / (x + y));
                }
                else
                {
                    const double sigma = std::sqrt(2.0 / std::numbers::pi) / rate;
                    return sigma * std::sqrt(-2.0 * std::log(rng.uniform_pos()));
                }
            },
            v_);
    }

private:
    Variant v_;
};

/// The i-th inter-birth time (i >= 1) of a node with weight w is drawn from
/// `law` with mean 1/f(i-1, w).
struct FitnessClock
{
    FitnessSpec spec;
    InterBirthLaw law;

    double operator()(const Weight& w, std::size_t i, Rng& rng) const
    {
        return law.draw(spec(i - 1, w.value), rng);
    }
};

// ---------------------------------------------------------------------------
// Event-driven simulation
// ---------------------------------------------------------------------------

struct StopRule
{
    std::size_t births = 0;  // stop after this many births (0: unused)
    double time = std::numeric_limits<double>::infinity();  // stop before events after this time
    std::size_t max_births = std::size_t{1} << 26;  // hard cap for the time rule

    static StopRule after_births(std::size_t k) { return {k, std::numeric_limits<double>::infinity(), k}; }
    static StopRule at_time(double t, std::size_t cap = std::size_t{1} << 26) { return {0, t, cap}; }
};

struct CmjRun
{
    Tree tree;
    std::vector<double> birth_time;  // per node, root at 0
    bool truncated = false;          // time rule hit max_births

    /// tau_k for k = 1..births; node labels are birth ranks, so this is birth_time[1..].
    std::vector<double> taus() const { return {birth_time.begin() + 1, birth_time.end()}; }
};

/// Simulate the genealogical tree with one pending next-birth clock per node.
///
/// Rng use per event: the child's weight, then the parent's next inter-birth
/// time, then the child's first inter-birth time. The root's weight and first
/// clock are drawn before the loop.
template <class Clock>
CmjRun simulate_births(const Clock& clock, const WeightDistribution& dist, const StopRule& stop, Rng& rng)
{
    if (stop.births == 0 && !(stop.time >= 0.0))
        throw InvalidParameters("stop rule needs births >= 1 or time >= 0");
    const std::size_t limit = stop.births ? stop.births : stop.max_births;

    CmjRun run;
    run.tree.reserve(std::min<std::size_t>(limit + 1, std::size_t{1} << 24));
    using Event = std::pair<double, node_t>;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue;

    run.tree.add_node(no_parent, dist.sample(rng));
    run.birth_time.push_back(0.0);
    queue.push({clock(run.tree.weight[0], 1, rng), 0});

    std::size_t births = 0;
    while (births < limit)
    {
        const auto [t, u] = queue.top();
        if (t > stop.time)
            return run;
        queue.pop();
        const node_t v = run.tree.add_node(u, dist.sample(rng));
        run.birth_time.push_back(t);
        ++births;
        queue.push({t + clock(run.tree.weight[u], run.tree.outdeg(u) + 1, rng), u});
        queue.push({t + clock(run.tree.weight[v], 1, rng), v});
    }
    if (stop.births == 0 && queue.top().first <= stop.time)
        run.truncated = true;
    return run;
}

inline CmjRun simulate_births(const FitnessSpec& spec, const WeightDistribution& dist,
                              const InterBirthLaw& law, const StopRule& stop, Rng& rng)
{
    return simulate_births(FitnessClock{spec, law}, dist, stop, rng);
}

struct ExplosionEstimate
{
    std::vector<double> taus;
    double tail = 0.0;      // d * mu_{deg}^{w} at the current hub
    double estimate = 0.0;  // tau_k + tail; heuristic, not a certified limit
};

/// Run k_max births and extrapolate the explosion time by adding the expected
/// residual time d * mu_{outdeg(hub)}^{W_hub} of the current maximum-degree node.
inline ExplosionEstimate explosion_estimate(const FitnessSpec& spec, const WeightDistribution& dist,
                                            const InterBirthLaw& law, std::size_t k_max, Rng& rng,
                                            double d = 1.0)
{
    if (!spec.degree.summable())
        throw NonSummable("explosion estimate needs an explosive degree function");
    const CmjRun run = simulate_births(spec, dist, law, StopRule::after_births(k_max), rng);
    ExplosionEstimate e;
    e.taus = run.taus();
    const node_t hub = run.tree.max_degree_node();
    e.tail = d * mu_exact(spec, run.tree.outdeg(hub), run.tree.weight[hub].value, 1e-9).value;
    e.estimate = (e.taus.empty() ? 0.0 : e.taus.back()) + e.tail;
    return e;
}

/// Birth trace CSV: rank,time,node,parent.
inline void write_birth_csv(std::ostream& os, const CmjRun& run)
{
    os << "rank,time,node,parent\n";
    char buf[64];
    for (node_t v = 1; v < run.tree.size(); ++v)
    {
        std::snprintf(buf, sizeof buf, "%.17g", run.birth_time[v]);
        os << v << ',' << buf << ',' << v << ',' << run.tree.parent[v] << '\n';
    }
}

}  // namespace ertf
