#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "series.hpp"
#include "subtree_spec.hpp"

namespace ertf {

/// A birth order of the vertices of T: sequence[j] = v_j, rank[v] = O(v).
struct Ordering
{
    std::vector<std::size_t> sequence;
    std::vector<std::size_t> rank;

    /// The tree O|_j on {v_0, ..., v_j}.
    SubtreeSpec prefix(const SubtreeSpec& t, std::size_t j) const
    {
        std::vector<Tuple> nodes;
        for (std::size_t i = 0; i <= j; ++i)
            nodes.push_back(t.label(sequence[i]));
        return SubtreeSpec(std::move(nodes));
    }
};

inline constexpr std::size_t default_ordering_cap = 12;

/// All linear extensions of the precedence generated by "parent before child"
/// and "earlier sibling before later sibling".
inline std::vector<Ordering> orderings(const SubtreeSpec& t, std::size_t cap = default_ordering_cap)
{
    if (t.size() > cap)
        throw CapExceeded("orderings: tree has " + std::to_string(t.size()) + " nodes, cap is " +
                          std::to_string(cap));
    const std::size_t n = t.size();
    // Node i becomes available once its parent and its previous sibling are placed.
    std::vector<std::size_t> prev_sibling(n, SubtreeSpec::npos);
    for (std::size_t v = 0; v < n; ++v)
    {
        const auto& c = t.children(v);
        for (std::size_t i = 1; i < c.size(); ++i)
            prev_sibling[c[i]] = c[i - 1];
    }
    std::vector<Ordering> out;
    std::vector<char> placed(n, 0);
    std::vector<std::size_t> seq;
    seq.reserve(n);
    auto available = [&](std::size_t v) {
        return !placed[v] && (v == 0 || placed[t.parent(v)]) &&
               (prev_sibling[v] == SubtreeSpec::npos || placed[prev_sibling[v]]);
    };
    auto rec = [&](auto&& self) -> void {
        if (seq.size() == n)
        {
            Ordering o;
            o.sequence = seq;
            o.rank.assign(n, 0);
            for (std::size_t j = 0; j < n; ++j)
                o.rank[seq[j]] = j;
            out.push_back(std::move(o));
            return;
        }
        for (std::size_t v = 0; v < n; ++v)
            if (available(v))
            {
                placed[v] = 1;
                seq.push_back(v);
                self(self);
                seq.pop_back();
                placed[v] = 0;
            }
    };
    rec(rec);
    return out;
}

struct G12
{
    double g1 = 0.0;
    double g2 = 0.0;
};

/// G1 = sum of out-degrees exceeding z, G2 = number of such vertices.
inline G12 g1_g2(const SubtreeSpec& t, double z)
{
    if (!(z > 0.0))
        throw InvalidParameters("g1_g2 needs z > 0");
    G12 r;
    for (std::size_t v = 0; v < t.size(); ++v)
    {
        const auto d = static_cast<double>(t.outdeg(v));
        if (d > z)
        {
            r.g1 += d;
            r.g2 += 1.0;
        }
    }
    return r;
}

namespace detail {

/// Per ordering and transition j = 0..k-1: the parent of v_{j+1} and the
/// vertices of O|_j still missing children, with their out-degree in O|_j.
struct OrderingPlan
{
    struct Step
    {
        std::size_t parent = 0;
        std::size_t parent_deg = 0;
        std::vector<std::pair<std::size_t, std::size_t>> active;  // (vertex, outdeg in O|_j)
    };
    std::vector<Step> steps;
};

inline std::vector<OrderingPlan> plan_orderings(const SubtreeSpec& t, const std::vector<Ordering>& os)
{
    std::vector<OrderingPlan> plans;
    for (const auto& o : os)
    {
        OrderingPlan plan;
        std::vector<std::size_t> deg(t.size(), 0);
        for (std::size_t j = 0; j + 1 < t.size(); ++j)
        {
            OrderingPlan::Step s;
            for (std::size_t i = 0; i <= j; ++i)
            {
                const std::size_t v = o.sequence[i];
                if (deg[v] < t.outdeg(v))
                    s.active.push_back({v, deg[v]});
            }
            const std::size_t next = o.sequence[j + 1];
            s.parent = t.parent(next);
            s.parent_deg = deg[s.parent];
            ++deg[s.parent];
            plan.steps.push_back(std::move(s));
        }
        plans.push_back(std::move(plan));
    }
    return plans;
}

}  // namespace detail

/// E over i.i.d. weights of
///   sum_O prod_{j=0}^{k-1} f(outdeg(v_j^+, O|_j), W_{v_j^+})
///         / (sum_{i<=j} f(outdeg(v_i, O|_j), W_{v_i}) 1{outdeg(v_i, O|_j) < outdeg(v_i, T)} + 1/mu_n),
/// where v_j^+ is the parent of v_{j+1}. The numerators multiply out to
/// prod_v prod_{l < outdeg(v,T)} f(l, W_v).
inline McEstimate tree_series_term(const FitnessSpec& spec, const WeightDistribution& dist, const SubtreeSpec& t,
                                   std::size_t n, const McOptions& opt = {})
{
    const double inv_mu = 1.0 / mu_exact(spec, n, 0.0, 1e-13).value;
    const auto plans = detail::plan_orderings(t, orderings(t));
    const std::size_t N = dist.is_constant() ? 1 : opt.samples;
    std::vector<double> logs(N);
    parallel_for(N, opt.threads, [&](std::size_t s) {
        Rng rng = Rng::stream(opt.seed, s);
        std::vector<double> w(t.size());
        double log_lr = 0.0;
        for (auto& x : w)
        {
            const WeightDraw d = importance_draw(dist, rng, opt.v_min);
            x = d.w;
            log_lr += d.log_lr;
        }
        std::vector<double> per(plans.size());
        for (std::size_t o = 0; o < plans.size(); ++o)
        {
            double lt = 0.0;
            for (const auto& step : plans[o].steps)
            {
                double denom = inv_mu;
                for (const auto& [v, d] : step.active)
                    denom += spec(d, w[v]);
                lt += std::log(spec(step.parent_deg, w[step.parent])) - std::log(denom);
            }
            per[o] = lt;
        }
        const double m = per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
        double acc = 0.0;
        for (double x : per)
            acc += std::exp(x - m);
        logs[s] = m + std::log(acc) + log_lr;
    });
    McEstimate e = detail::combine_logs(logs);
    if (dist.is_constant())
        e.std_error = 0.0;
    return e;
}

}  // namespace ertf
