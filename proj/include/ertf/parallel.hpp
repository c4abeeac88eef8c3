#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ertf {

/// Worker count used when the caller passes 0.
inline unsigned default_threads() noexcept
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

/// Call f(i) for i in [0, n) on up to `threads` workers. Work items are handed
/// out dynamically; results must be written to per-index slots so the outcome
/// does not depend on scheduling. The first exception is rethrown.
template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f)
{
    if (threads == 0)
        threads = default_threads();
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;)
        {
            const std::size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try
            {
                f(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

/// Pairwise (cascade) sum over [first, last); fixed association order.
template <class It>
double pairwise_sum(It first, It last)
{
    const auto n = static_cast<std::size_t>(last - first);
    if (n <= 8)
    {
        double s = 0.0;
        for (; first != last; ++first)
            s += *first;
        return s;
    }
    const It mid = first + static_cast<std::ptrdiff_t>(n / 2);
    return pairwise_sum(first, mid) + pairwise_sum(mid, last);
}

inline double pairwise_sum(const std::vector<double>& v) { return pairwise_sum(v.begin(), v.end()); }

}  // namespace ertf
