#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "sampler.hpp"
#include "subtree_spec.hpp"

namespace ertf {

using node_t = std::uint32_t;
inline constexpr node_t no_parent = std::numeric_limits<node_t>::max();

/// Rooted tree with birth-ordered child lists. Node labels are birth ranks.
struct Tree
{
    std::vector<node_t> parent;
    std::vector<std::vector<node_t>> children;
    std::vector<Weight> weight;

    std::size_t size() const noexcept { return parent.size(); }
    std::size_t outdeg(node_t v) const noexcept { return children[v].size(); }

    node_t add_node(node_t p, Weight w)
    {
        const auto v = static_cast<node_t>(parent.size());
        parent.push_back(p);
        children.emplace_back();
        weight.push_back(w);
        if (p != no_parent)
            children[p].push_back(v);
        return v;
    }

    void reserve(std::size_t n)
    {
        parent.reserve(n);
        children.reserve(n);
        weight.reserve(n);
    }

    /// Node of maximal out-degree, smallest index among ties.
    node_t max_degree_node() const noexcept
    {
        node_t best = 0;
        for (node_t v = 1; v < size(); ++v)
            if (outdeg(v) > outdeg(best))
                best = v;
        return best;
    }

    std::size_t depth(node_t v) const noexcept
    {
        std::size_t d = 0;
        while (parent[v] != no_parent)
        {
            v = parent[v];
            ++d;
        }
        return d;
    }
};

/// Tree plus the attachment index used by the discrete growth rule.
class TreeState
{
public:
    explicit TreeState(FitnessSpec spec) : spec_(std::move(spec)) {}

    /// Start a tree whose root has weight drawn from `dist`.
    static TreeState with_root(FitnessSpec spec, const WeightDistribution& dist, Rng& rng)
    {
        TreeState s(std::move(spec));
        s.add_node(no_parent, dist.sample(rng));
        return s;
    }

    const Tree& tree() const noexcept { return tree_; }
    const FitnessSpec& spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return tree_.size(); }
    double node_fitness(node_t v) const noexcept { return sampler_.weight(v); }
    double total_fitness() const noexcept { return sampler_.total(); }
    const FenwickSampler& sampler() const noexcept { return sampler_; }

    void reserve(std::size_t n)
    {
        tree_.reserve(n);
        sampler_.reserve(n);
    }

    /// Append a node under `p` (no_parent for the root) and refresh rates.
    node_t add_node(node_t p, Weight w)
    {
        if ((p == no_parent) != (tree_.size() == 0) || (p != no_parent && p >= tree_.size()))
            throw InvalidParameters("add_node: parent must be an existing node (root only first)");
        const node_t v = tree_.add_node(p, w);
        if (p != no_parent)
            sampler_.set(p, spec_(tree_.outdeg(p), tree_.weight[p].value));
        sampler_.push_back(spec_(0, w.value));
        if (++updates_ >= rebuild_period)
        {
            sampler_.rebuild();
            updates_ = 0;
        }
        return v;
    }

    /// Choose the attachment target for a uniform draw u in [0, 1).
    node_t select(double u) const
    {
        const double total = sampler_.total();
        if (!(total > 0.0) || !std::isfinite(total))
            throw DegenerateFitness("total fitness is " + std::to_string(total));
        return static_cast<node_t>(sampler_.find(u * total));
    }

    static constexpr std::size_t rebuild_period = std::size_t{1} << 16;

private:
    FitnessSpec spec_;
    Tree tree_;
    FenwickSampler sampler_;
    std::size_t updates_ = 0;
};

/// One step of the discrete model: consumes one uniform for the target, then
/// the new node's weight draw. Returns the target.
inline node_t grow_step(TreeState& state, const WeightDistribution& dist, Rng& rng)
{
    if (state.size() == 0)
        throw InvalidParameters("grow_step needs a non-empty tree");
    const node_t target = state.select(rng.uniform());
    state.add_node(target, dist.sample(rng));
    return target;
}

/// Grow to exactly n nodes. Each observer is called as obs(state, new_node)
/// after every step.
template <class... Observers>
void grow_to(TreeState& state, const WeightDistribution& dist, std::size_t n, Rng& rng,
             Observers&... observers)
{
    if (n < state.size())
        throw InvalidParameters("grow_to target below current size");
    state.reserve(n);
    while (state.size() < n)
    {
        grow_step(state, dist, rng);
        const auto v = static_cast<node_t>(state.size() - 1);
        (observers(state, v), ...);
    }
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct HubRecord
{
    std::size_t step = 0;  // tree size when the record was made
    node_t node = 0;
    std::size_t degree = 0;

    friend bool operator==(const HubRecord&, const HubRecord&) = default;
};

/// Tracks the maximum-degree node (smallest index on ties) and records each
/// change of argmax.
class HubTracker
{
public:
    HubTracker() = default;
    explicit HubTracker(const TreeState& state) { reset(state); }

    void reset(const TreeState& state)
    {
        records_.clear();
        const Tree& t = state.tree();
        if (t.size() == 0)
            return;
        hub_ = t.max_degree_node();
        degree_ = t.outdeg(hub_);
        records_.push_back({t.size(), hub_, degree_});
    }

    void operator()(const TreeState& state, node_t v)
    {
        const Tree& t = state.tree();
        if (records_.empty())
        {
            reset(state);
            return;
        }
        const node_t p = t.parent[v];
        const std::size_t d = t.outdeg(p);
        if (p == hub_)
            degree_ = d;
        else if (d > degree_ || (d == degree_ && p < hub_))
        {
            hub_ = p;
            degree_ = d;
            records_.push_back({t.size(), hub_, degree_});
        }
    }

    node_t hub() const noexcept { return hub_; }
    std::size_t degree() const noexcept { return degree_; }
    const std::vector<HubRecord>& records() const noexcept { return records_; }

private:
    node_t hub_ = 0;
    std::size_t degree_ = 0;
    std::vector<HubRecord> records_;
};

enum class Anchor
{
    AllNodes,
    ChildrenOfMaxDegree
};

namespace detail {

inline bool embeds(const Tree& tree, node_t u, const SubtreeSpec& t, std::size_t x)
{
    const auto& tc = t.children(x);
    if (tree.outdeg(u) < tc.size())
        return false;
    for (std::size_t i = 0; i < tc.size(); ++i)
        if (!embeds(tree, tree.children[u][i], t, tc[i]))
            return false;
    return true;
}

}  // namespace detail

/// Whether uT is contained in the tree: child i of T maps to the i-th born child.
inline bool embeds_at(const Tree& tree, node_t u, const SubtreeSpec& t)
{
    return detail::embeds(tree, u, t, 0);
}

inline std::size_t census(const Tree& tree, const SubtreeSpec& t, Anchor anchor = Anchor::AllNodes)
{
    std::size_t count = 0;
    if (tree.size() == 0)
        return 0;
    if (anchor == Anchor::AllNodes)
    {
        for (node_t u = 0; u < tree.size(); ++u)
            count += embeds_at(tree, u, t);
    }
    else
    {
        for (node_t u : tree.children[tree.max_degree_node()])
            count += embeds_at(tree, u, t);
    }
    return count;
}

/// hist[d] = number of nodes with out-degree d.
inline std::vector<std::size_t> degree_histogram(const Tree& tree)
{
    std::vector<std::size_t> hist;
    for (node_t v = 0; v < tree.size(); ++v)
    {
        const std::size_t d = tree.outdeg(v);
        if (d >= hist.size())
            hist.resize(d + 1, 0);
        ++hist[d];
    }
    return hist;
}

/// CSV dump: node_id,parent_id,weight,outdeg (root parent is -1).
inline void write_tree_csv(std::ostream& os, const Tree& tree)
{
    os << "node_id,parent_id,weight,outdeg\n";
    char buf[64];
    for (node_t v = 0; v < tree.size(); ++v)
    {
        std::snprintf(buf, sizeof buf, "%.17g", tree.weight[v].value);
        os << v << ',';
        if (tree.parent[v] == no_parent)
            os << -1;
        else
            os << tree.parent[v];
        os << ',' << buf << ',' << tree.outdeg(v) << '\n';
    }
}

inline void write_hub_csv(std::ostream& os, const std::vector<HubRecord>& records)
{
    os << "step,node,degree\n";
    for (const auto& r : records)
        os << r.step << ',' << r.node << ',' << r.degree << '\n';
}

}  // namespace ertf
