#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "rng.hpp"

namespace ertf {

/// prod_{i<n} f(i,w) / (f(i,w) + lambda), evaluated as exp of a log-sum.
inline double laplace_product(const FitnessSpec& spec, std::size_t n, double w, double lambda)
{
    if (!(lambda >= 0.0))
        throw InvalidParameters("laplace_product needs lambda >= 0");
    detail::Accumulator s;
    for (std::size_t i = 0; i < n; ++i)
        s.add(std::log1p(lambda / spec(i, w)));
    return std::exp(-s.value());
}

struct ProductValue
{
    double value = 1.0;
    double log_value = 0.0;
    Bracket bracket{1.0, 1.0};
    double log_lower = 0.0;
    double log_upper = 0.0;
    std::size_t cutoff = 0;
};

/// prod_{i>=0} f(i,w) / (f(i,w) + lambda) with a certified enclosure.
///
/// The factors below M are multiplied out. For the remainder
/// R = sum_{i>=M} log1p(lambda/f_i), x - x^2/2 <= log1p(x) <= x gives
///   lambda T_lo - lambda^2 T_hi / (2 f_M) <= R <= lambda T_hi,
/// where [T_lo, T_hi] encloses sum_{i>=M} 1/f_i. M doubles until the relative
/// width of the enclosure is below rel_tol.
inline ProductValue infinite_product(const FitnessSpec& spec, double w, double lambda, double rel_tol = 1e-9)
{
    if (!(lambda >= 0.0))
        throw InvalidParameters("infinite_product needs lambda >= 0");
    if (!(rel_tol > 0.0))
        throw InvalidParameters("infinite_product needs rel_tol > 0");
    if (!spec.degree.summable())
        throw NonConvergent("infinite_product: sum 1/f(i,w) is not certified finite");
    ProductValue r;
    if (lambda == 0.0)
        return r;

    const double gw = spec.weights.g(w);
    const double hw = spec.weights.h(w);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    std::size_t M = std::max<std::size_t>(spec.degree.table_size(), 16);
    detail::Accumulator head;
    for (std::size_t i = 0; i < M; ++i)
        head.add(std::log1p(lambda / (gw * spec.degree(i) + hw)));

    constexpr std::size_t max_cutoff = std::size_t{1} << 32;
    for (;;)
    {
        const Bracket T = detail::tail_bracket(spec, M, gw, hw);
        const double fM = gw * spec.degree(M) + hw;
        const double r_hi = lambda * T.upper;
        const double r_lo = std::max(0.0, lambda * T.lower - lambda * lambda * T.upper / (2.0 * fM));
        const double S = head.value();
        const double pad = 8.0 * eps * (S + r_hi) + 4.0 * eps;
        if (std::expm1(r_hi - r_lo + 2.0 * pad) <= rel_tol || M >= max_cutoff)
        {
            if (M >= max_cutoff && std::expm1(r_hi - r_lo + 2.0 * pad) > rel_tol)
                throw NonConvergent("infinite_product: truncation point exceeded 2^32");
            r.log_lower = -(S + r_hi) - pad;
            r.log_upper = std::min(0.0, -(S + r_lo) + pad);
            r.log_value = 0.5 * (r.log_lower + r.log_upper);
            r.value = std::exp(r.log_value);
            r.bracket = {std::exp(r.log_lower), std::exp(r.log_upper)};
            r.cutoff = M;
            return r;
        }
        const std::size_t next = 2 * M;
        for (std::size_t i = M; i < next; ++i)
            head.add(std::log1p(lambda / (gw * spec.degree(i) + hw)));
        M = next;
    }
}

// ---------------------------------------------------------------------------
// Monte Carlo over the weight law
// ---------------------------------------------------------------------------

struct McOptions
{
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    double product_tol = 1e-4;  // relative accuracy of each per-sample product
    double v_min = 1e-15;       // smallest tail quantile reached by the heavy proposal
    std::size_t clock_cap = std::size_t{1} << 14;  // clocks drawn per sample in divergence_probe
};

struct McEstimate
{
    double value = 0.0;
    double std_error = 0.0;
    double log_value = 0.0;  // log of value, finite even when value underflows
    std::size_t samples = 0;
};

/// A weight together with the log likelihood ratio of its proposal.
struct WeightDraw
{
    double w = 0.0;
    double log_lr = 0.0;
};

/// Defensive importance sampling over the tail quantile v = P(W >= w): with
/// probability 1/2 v is uniform, otherwise log-uniform on [v_min, 1]. Heavy
/// weights, which dominate the star-series terms, are reached at rate
/// 1/log(1/v_min) per decade instead of proportionally to their probability.
inline WeightDraw importance_draw(const WeightDistribution& dist, Rng& rng, double v_min)
{
    if (dist.is_constant())
        return {dist.tail_inverse(1.0), 0.0};
    const double L = -std::log(v_min);
    const double branch = rng.uniform();
    const double u = rng.uniform_pos();
    const double v = branch < 0.5 ? u : std::exp(-L * u);
    const double q = v >= v_min ? 0.5 + 0.5 / (v * L) : 0.5;
    return {dist.tail_inverse(v), -std::log(q)};
}

namespace detail {

/// Combine per-sample log values into a mean estimate, reducing pairwise.
inline McEstimate combine_logs(const std::vector<double>& logs)
{
    McEstimate e;
    e.samples = logs.size();
    if (logs.empty())
        return e;
    const double m = *std::max_element(logs.begin(), logs.end());
    if (!std::isfinite(m))
    {
        e.log_value = -std::numeric_limits<double>::infinity();
        return e;
    }
    std::vector<double> x(logs.size()), x2(logs.size());
    for (std::size_t i = 0; i < logs.size(); ++i)
    {
        x[i] = std::exp(logs[i] - m);
        x2[i] = x[i] * x[i];
    }
    const double n = static_cast<double>(logs.size());
    const double mean = pairwise_sum(x) / n;
    const double var = n > 1 ? std::max(0.0, (pairwise_sum(x2) / n - mean * mean) * n / (n - 1)) : 0.0;
    e.log_value = m + std::log(mean);
    e.value = std::exp(e.log_value);
    e.std_error = std::exp(m) * std::sqrt(var / n);
    return e;
}

template <class PerSample>
McEstimate monte_carlo(const WeightDistribution& dist, const McOptions& opt, PerSample&& log_term)
{
    const std::size_t N = dist.is_constant() ? 1 : opt.samples;
    std::vector<double> logs(N);
    parallel_for(N, opt.threads, [&](std::size_t j) {
        Rng rng = Rng::stream(opt.seed, j);
        const WeightDraw d = importance_draw(dist, rng, opt.v_min);
        logs[j] = log_term(d.w, rng) + d.log_lr;
    });
    McEstimate e = combine_logs(logs);
    if (dist.is_constant())
        e.std_error = 0.0;
    return e;
}

}  // namespace detail

/// E[prod_i f(i,W)/(f(i,W) + c/mu_n)], mu_n = mu_n^0.
inline McEstimate star_series_term(const FitnessSpec& spec, const WeightDistribution& dist, std::size_t n,
                                   double c = 0.5, const McOptions& opt = {})
{
    if (!(c > 0.0 && c < 1.0))
        throw InvalidParameters("star series needs 0 < c < 1");
    const double lambda = c / mu_exact(spec, n, 0.0, 1e-13).value;
    const double tol = dist.is_constant() ? std::min(opt.product_tol, 1e-9) : opt.product_tol;
    return detail::monte_carlo(dist, opt, [&](double w, Rng&) {
        return infinite_product(spec, w, lambda, tol).log_value;
    });
}

/// E[prod_i f(i,W)/(f(i,W) + c log(n)/mu_n^{w_ref})], n >= 2.
inline McEstimate path_series_term(const FitnessSpec& spec, const WeightDistribution& dist, std::size_t n,
                                   double c = 2.0, double w_ref = 0.0, const McOptions& opt = {})
{
    if (!(c > 1.0))
        throw InvalidParameters("path series needs c > 1");
    if (n < 2)
        throw InvalidParameters("path series needs n >= 2");
    const double lambda = c * std::log(static_cast<double>(n)) / mu_exact(spec, n, w_ref, 1e-13).value;
    const double tol = dist.is_constant() ? std::min(opt.product_tol, 1e-9) : opt.product_tol;
    return detail::monte_carlo(dist, opt, [&](double w, Rng&) {
        return infinite_product(spec, w, lambda, tol).log_value;
    });
}

// ---------------------------------------------------------------------------
// Decay fits and reports
// ---------------------------------------------------------------------------

enum class SeriesVerdict
{
    LikelySummable,
    LikelyDivergent,
    Inconclusive
};

inline const char* to_string(SeriesVerdict v)
{
    switch (v)
    {
    case SeriesVerdict::LikelySummable: return "LikelySummable";
    case SeriesVerdict::LikelyDivergent: return "LikelyDivergent";
    default: return "Inconclusive";
    }
}

struct SeriesTerm
{
    std::size_t n = 0;
    double value = 0.0;
    double std_error = 0.0;
    double log_value = 0.0;
};

struct DecayFit
{
    double a = 0.0;  // term ~ n^{-a}
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::size_t points = 0;
};

struct SeriesReport
{
    std::vector<SeriesTerm> terms;
    DecayFit fit;
    SeriesVerdict verdict = SeriesVerdict::Inconclusive;
};

/// Least-squares slope of log term against log n with a t-based confidence
/// interval. Terms with zero estimate are skipped.
inline DecayFit fit_decay(const std::vector<SeriesTerm>& terms, double confidence = 0.95)
{
    std::vector<double> x, y;
    for (const auto& t : terms)
        if (std::isfinite(t.log_value) && t.n > 0)
        {
            x.push_back(std::log(static_cast<double>(t.n)));
            y.push_back(t.log_value);
        }
    DecayFit f;
    f.points = x.size();
    if (x.size() < 3)
    {
        f.ci_low = -std::numeric_limits<double>::infinity();
        f.ci_high = std::numeric_limits<double>::infinity();
        return f;
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        const double r = y[i] - my - slope * (x[i] - mx);
        ssr += r * r;
    }
    const double se = std::sqrt(ssr / (n - 2.0) / sxx);
    const boost::math::students_t t(n - 2.0);
    const double q = boost::math::quantile(boost::math::complement(t, (1.0 - confidence) / 2.0));
    f.a = -slope;
    f.ci_low = f.a - q * se;
    f.ci_high = f.a + q * se;
    return f;
}

inline SeriesVerdict verdict_from_fit(const DecayFit& f)
{
    if (f.ci_low > 1.0)
        return SeriesVerdict::LikelySummable;
    if (f.ci_high < 1.0)
        return SeriesVerdict::LikelyDivergent;
    return SeriesVerdict::Inconclusive;
}

inline SeriesReport make_report(std::vector<SeriesTerm> terms)
{
    SeriesReport r;
    r.terms = std::move(terms);
    r.fit = fit_decay(r.terms);
    r.verdict = verdict_from_fit(r.fit);
    return r;
}

/// n = 2^lo, ..., 2^hi.
inline std::vector<std::size_t> power_grid(unsigned lo, unsigned hi)
{
    std::vector<std::size_t> g;
    for (unsigned e = lo; e <= hi; ++e)
        g.push_back(std::size_t{1} << e);
    return g;
}

inline SeriesReport star_series(const FitnessSpec& spec, const WeightDistribution& dist,
                                const std::vector<std::size_t>& n_grid, double c = 0.5, const McOptions& opt = {})
{
    std::vector<SeriesTerm> terms;
    for (std::size_t n : n_grid)
    {
        const McEstimate e = star_series_term(spec, dist, n, c, opt);
        terms.push_back({n, e.value, e.std_error, e.log_value});
    }
    return make_report(std::move(terms));
}

inline SeriesReport path_series(const FitnessSpec& spec, const WeightDistribution& dist,
                                const std::vector<std::size_t>& n_grid, double c = 2.0, double w_ref = 0.0,
                                const McOptions& opt = {})
{
    std::vector<SeriesTerm> terms;
    for (std::size_t n : n_grid)
    {
        const McEstimate e = path_series_term(spec, dist, n, c, w_ref, opt);
        terms.push_back({n, e.value, e.std_error, e.log_value});
    }
    return make_report(std::move(terms));
}

namespace detail {

/// Indicator of sum_{i>=0} Exp(f(i,w)) < x, drawing clocks until the running
/// sum exceeds x or the running sum plus an upper bound on the remaining mean
/// falls below x. After `cap` clocks the remainder is replaced by that upper
/// bound, which can only overstate the sum, so undecided samples count as 0.
inline bool total_time_below(const FitnessSpec& spec, double w, double x, Rng& rng, std::size_t cap)
{
    const double gw = spec.weights.g(w);
    const double hw = spec.weights.h(w);
    double sum = 0.0;
    std::size_t i = 0;
    std::size_t check = std::min(std::max<std::size_t>(spec.degree.table_size(), 8), cap);
    for (;;)
    {
        for (; i < check; ++i)
        {
            sum += rng.exponential(gw * spec.degree(i) + hw);
            if (sum >= x)
                return false;
        }
        if (sum + tail_bracket(spec, i, gw, hw).upper < x)
            return true;
        if (check >= cap)
            break;
        check = std::min(2 * check, cap);
    }
    return false;
}

}  // namespace detail

/// Estimates P(sum_i X_W(i) < d mu_n^{w}) per n with exponential clocks and
/// fits the decay; LikelyDivergent supports a divergent series.
inline SeriesReport divergence_probe(const FitnessSpec& spec, const WeightDistribution& dist, double w,
                                     const std::vector<std::size_t>& n_grid, double d = 0.5,
                                     const McOptions& opt = {})
{
    if (!(d > 0.0 && d < 1.0))
        throw InvalidParameters("divergence probe needs 0 < d < 1");
    std::vector<SeriesTerm> terms;
    for (std::size_t n : n_grid)
    {
        const double x = d * mu_exact(spec, n, w, 1e-13).value;
        std::vector<double> vals(opt.samples);
        parallel_for(opt.samples, opt.threads, [&](std::size_t j) {
            Rng rng = Rng::stream(opt.seed, j);
            const WeightDraw wd = importance_draw(dist, rng, opt.v_min);
            vals[j] = detail::total_time_below(spec, wd.w, x, rng, opt.clock_cap) ? std::exp(wd.log_lr) : 0.0;
        });
        const double N = static_cast<double>(opt.samples);
        std::vector<double> sq(vals.size());
        for (std::size_t j = 0; j < vals.size(); ++j)
            sq[j] = vals[j] * vals[j];
        const double mean = pairwise_sum(vals) / N;
        const double var = std::max(0.0, pairwise_sum(sq) / N - mean * mean) * N / std::max(1.0, N - 1.0);
        terms.push_back({n, mean, std::sqrt(var / N), mean > 0.0 ? std::log(mean) : -std::numeric_limits<double>::infinity()});
    }
    return make_report(std::move(terms));
}

/// CSV: n,term,stderr.
inline void write_series_csv(std::ostream& os, const SeriesReport& r)
{
    os << "n,term,stderr\n";
    char buf[96];
    for (const auto& t : r.terms)
    {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", t.n, t.value, t.std_error);
        os << buf;
    }
}

}  // namespace ertf
