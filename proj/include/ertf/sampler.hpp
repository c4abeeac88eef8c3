#pragma once

#include <cstddef>
#include <vector>

namespace ertf {

/// Binary indexed tree over nonnegative weights supporting point updates,
/// appends and proportional sampling in O(log n).
///
/// Capacity is a power of two so the root of the implicit tree holds the
/// total. Appends into the zero-padded region are plain point updates.
class FenwickSampler
{
public:
    FenwickSampler() { reserve(16); }

    std::size_t size() const noexcept { return values_.size(); }
    double weight(std::size_t i) const noexcept { return values_[i]; }
    double total() const noexcept { return tree_[cap_]; }

    void reserve(std::size_t n)
    {
        std::size_t cap = 1;
        while (cap < n)
            cap <<= 1;
        if (cap > cap_)
        {
            cap_ = cap;
            values_.reserve(cap_);
            rebuild();
        }
    }

    void push_back(double w)
    {
        if (values_.size() == cap_)
            reserve(2 * cap_);
        values_.push_back(0.0);
        set(values_.size() - 1, w);
    }

    void set(std::size_t i, double w) noexcept
    {
        const double delta = w - values_[i];
        values_[i] = w;
        for (std::size_t k = i + 1; k <= cap_; k += k & (~k + 1))
            tree_[k] += delta;
    }

    /// Sum of weights[0..i).
    double prefix(std::size_t i) const noexcept
    {
        double s = 0.0;
        for (std::size_t k = i; k > 0; k &= k - 1)
            s += tree_[k];
        return s;
    }

    /// Smallest i with prefix(i + 1) > target, for target in [0, total()).
    /// Clamped to the last index to absorb rounding at the upper end.
    std::size_t find(double target) const noexcept
    {
        std::size_t pos = 0;
        for (std::size_t step = cap_; step > 0; step >>= 1)
        {
            const std::size_t next = pos + step;
            if (next <= cap_ && tree_[next] <= target)
            {
                target -= tree_[next];
                pos = next;
            }
        }
        return pos < values_.size() ? pos : values_.size() - 1;
    }

    /// Recompute every partial sum from the stored weights.
    void rebuild()
    {
        tree_.assign(cap_ + 1, 0.0);
        for (std::size_t i = 0; i < values_.size(); ++i)
            tree_[i + 1] = values_[i];
        for (std::size_t k = 1; k <= cap_; ++k)
        {
            const std::size_t parent = k + (k & (~k + 1));
            if (parent <= cap_)
                tree_[parent] += tree_[k];
        }
    }

private:
    std::size_t cap_ = 0;
    std::vector<double> values_;
    std::vector<double> tree_{0.0};
};

}  // namespace ertf
