#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "errors.hpp"
#include "rng.hpp"

namespace ertf {

// ---------------------------------------------------------------------------
// Degree functions s(i)
// ---------------------------------------------------------------------------

/// s(i) = (i+1)^p, p > 1.
struct PowerLaw
{
    double p = 2.0;
};

/// s(i) = (i+1) exp((log(i+1))^beta), beta in (0,1).
struct LogStretched
{
    double beta = 0.5;
};

/// s(i) = (i+2) (log(i+2))^sigma, sigma > 1.
struct PolyLog
{
    double sigma = 2.0;
};

/// Explicit values s(0..m-1) followed by the declared tail s(i) = coef (i+1)^exponent.
struct TableDegree
{
    std::vector<double> values;
    double tail_coef = 1.0;
    double tail_exponent = 2.0;
};

class DegreeFunction
{
public:
    using Variant = std::variant<PowerLaw, LogStretched, PolyLog, TableDegree>;

    DegreeFunction() : DegreeFunction(PowerLaw{}) {}

    template <class T>
        requires std::is_constructible_v<Variant, T>
    DegreeFunction(T v) : v_(std::move(v))
    {
        validate();
        auto cache = std::make_shared<std::vector<double>>(cache_size);
        for (std::size_t i = 0; i < cache_size; ++i)
            (*cache)[i] = eval(static_cast<double>(i));
        cache_ = std::move(cache);
    }

    const Variant& variant() const noexcept { return v_; }

    template <class T>
    const T* get_if() const noexcept
    {
        return std::get_if<T>(&v_);
    }

    double operator()(std::size_t i) const noexcept
    {
        if (i < cache_size)
            return (*cache_)[i];
        return eval(static_cast<double>(i));
    }

    /// Continuous extension used by the integral bounds. For Table only valid
    /// for x >= table_size() - 1/2.
    double at(double x) const noexcept { return eval(x); }

    /// First index from which s is given by a closed formula.
    std::size_t table_size() const noexcept
    {
        if (auto t = std::get_if<TableDegree>(&v_))
            return t->values.size();
        return 0;
    }

    /// Whether sum 1/s(i) is certified finite.
    bool summable() const noexcept
    {
        if (auto t = std::get_if<TableDegree>(&v_))
            return t->tail_exponent > 1.0;
        return true;
    }

    /// Integral of 1/s(t) over [x, inf), closed form per variant.
    double tail_integral(double x) const
    {
        return std::visit(
            [x](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PowerLaw>)
                    return std::pow(x + 1.0, 1.0 - d.p) / (d.p - 1.0);
                else if constexpr (std::is_same_v<T, LogStretched>)
                {
                    const double y = std::log(x + 1.0);
                    return boost::math::tgamma(1.0 / d.beta, std::pow(y, d.beta)) / d.beta;
                }
                else if constexpr (std::is_same_v<T, PolyLog>)
                    return std::pow(std::log(x + 2.0), 1.0 - d.sigma) / (d.sigma - 1.0);
                else
                {
                    if (d.tail_exponent <= 1.0)
                        return std::numeric_limits<double>::infinity();
                    return std::pow(x + 1.0, 1.0 - d.tail_exponent) /
                           (d.tail_coef * (d.tail_exponent - 1.0));
                }
            },
            v_);
    }

private:
    static constexpr std::size_t cache_size = 4096;

    void validate() const
    {
        std::visit(
            [](const auto& d) {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PowerLaw>)
                {
                    if (!(d.p > 1.0) || !std::isfinite(d.p))
                        throw InvalidParameters("power-law degree needs p > 1");
                }
                else if constexpr (std::is_same_v<T, LogStretched>)
                {
                    if (!(d.beta > 0.0 && d.beta < 1.0))
                        throw InvalidParameters("log-stretched degree needs beta in (0,1)");
                }
                else if constexpr (std::is_same_v<T, PolyLog>)
                {
                    if (!(d.sigma > 1.0) || !std::isfinite(d.sigma))
                        throw InvalidParameters("poly-log degree needs sigma > 1");
                }
                else
                {
                    for (double v : d.values)
                        if (!(v > 0.0) || !std::isfinite(v))
                            throw InvalidParameters("table degree values must be positive");
                    if (!(d.tail_coef > 0.0) || !(d.tail_exponent >= 0.0))
                        throw InvalidParameters("table tail needs coef > 0 and exponent >= 0");
                }
            },
            v_);
    }

    double eval(double x) const noexcept
    {
        return std::visit(
            [x](const auto& d) -> double {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, PowerLaw>)
                    return std::pow(x + 1.0, d.p);
                else if constexpr (std::is_same_v<T, LogStretched>)
                {
                    const double y = std::log(x + 1.0);
                    return (x + 1.0) * std::exp(std::pow(y, d.beta));
                }
                else if constexpr (std::is_same_v<T, PolyLog>)
                    return (x + 2.0) * std::pow(std::log(x + 2.0), d.sigma);
                else
                {
                    if (x >= 0.0 && x < static_cast<double>(d.values.size()) && x == std::floor(x))
                        return d.values[static_cast<std::size_t>(x)];
                    return d.tail_coef * std::pow(x + 1.0, d.tail_exponent);
                }
            },
            v_);
    }

    Variant v_;
    std::shared_ptr<const std::vector<double>> cache_;
};

// ---------------------------------------------------------------------------
// Weight functions and fitness
// ---------------------------------------------------------------------------

/// w -> constant + coef * w^exponent. Nondecreasing for admissible parameters.
struct WeightFunction
{
    double constant = 0.0;
    double coef = 0.0;
    double exponent = 1.0;

    double operator()(double w) const noexcept
    {
        if (coef == 0.0)
            return constant;
        if (exponent == 1.0)
            return constant + coef * w;
        return constant + coef * std::pow(w, exponent);
    }

    bool is_constant() const noexcept { return coef == 0.0 || exponent == 0.0; }

    friend bool operator==(const WeightFunction&, const WeightFunction&) = default;
};

struct WeightFunctionPair
{
    WeightFunction g{1.0, 0.0, 1.0};
    WeightFunction h{0.0, 0.0, 1.0};

    /// Regular-variation exponent of h.
    double gamma() const noexcept { return h.coef > 0.0 ? h.exponent : 0.0; }

    bool additive() const noexcept { return g.is_constant() && g(0.0) == 1.0; }

    void validate() const
    {
        for (const WeightFunction* f : {&g, &h})
            if (!(f->constant >= 0.0) || !(f->coef >= 0.0) || !(f->exponent >= 0.0) ||
                !std::isfinite(f->constant) || !std::isfinite(f->coef) || !std::isfinite(f->exponent))
                throw InvalidParameters("weight functions need nonnegative finite parameters");
        if (!(g(0.0) > 0.0))
            throw InvalidParameters("multiplicative weight function needs g(0) > 0");
    }

    /// g(w) = 1 + w, h = w^gamma (h = 0 when gamma = 0).
    static WeightFunctionPair mixed(double gamma = 0.0)
    {
        WeightFunctionPair r;
        r.g = {1.0, 1.0, 1.0};
        r.h = gamma > 0.0 ? WeightFunction{0.0, 1.0, gamma} : WeightFunction{};
        return r;
    }

    /// g = 1, h(w) = w.
    static WeightFunctionPair additive_pair()
    {
        WeightFunctionPair r;
        r.h = {0.0, 1.0, 1.0};
        return r;
    }

    friend bool operator==(const WeightFunctionPair&, const WeightFunctionPair&) = default;
};

/// f(i, w) = g(w) s(i) + h(w).
struct FitnessSpec
{
    DegreeFunction degree;
    WeightFunctionPair weights;

    FitnessSpec() = default;
    FitnessSpec(DegreeFunction d, WeightFunctionPair w = {}) : degree(std::move(d)), weights(w)
    {
        weights.validate();
    }

    double operator()(std::size_t i, double w) const noexcept
    {
        return weights.g(w) * degree(i) + weights.h(w);
    }
};

inline double fitness(const FitnessSpec& spec, std::size_t i, double w) noexcept
{
    return spec(i, w);
}

// ---------------------------------------------------------------------------
// Weight distributions
// ---------------------------------------------------------------------------

/// A vertex weight. `type` is only used by the two-type law.
struct Weight
{
    double value = 0.0;
    std::uint8_t type = 0;

    friend bool operator==(const Weight&, const Weight&) = default;
};

struct ConstantLaw
{
    double w0 = 0.0;
};

/// P(W >= x) = (x / scale)^{-(alpha-1)} for x >= scale.
struct ParetoLaw
{
    double alpha = 2.0;
    double scale = 1.0;
};

/// P(W >= x) = exp(-c (log x)^nu) for x >= 1.
struct LogStretchedExpLaw
{
    double nu = 2.0;
    double c = 1.0;
};

/// P(W >= x) = exp(-c x^kappa).
struct StretchedExpLaw
{
    double kappa = 1.0;
    double c = 1.0;
};

/// P(W >= x) = min(1, x^{-1} exp(-c (log x)^tau)) for x >= 1. c > 0 gives an
/// upper-bound type tail, c < 0 a lower-bound type tail (exponent tau').
struct PowerLawPlusLaw
{
    double tau = 0.5;
    double c = 1.0;
};

using BaseLaw = std::variant<ConstantLaw, ParetoLaw, LogStretchedExpLaw, StretchedExpLaw, PowerLawPlusLaw>;

/// Weight (R, I): R drawn from `r_law`, I = 1 with probability `coin`.
struct TwoTypeLaw
{
    BaseLaw r_law = ParetoLaw{};
    double coin = 0.5;
};

namespace detail {

inline double base_tail(const BaseLaw& law, double x)
{
    return std::visit(
        [x](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantLaw>)
                return x <= d.w0 ? 1.0 : 0.0;
            else if constexpr (std::is_same_v<T, ParetoLaw>)
                return x <= d.scale ? 1.0 : std::pow(x / d.scale, -(d.alpha - 1.0));
            else if constexpr (std::is_same_v<T, LogStretchedExpLaw>)
                return x <= 1.0 ? 1.0 : std::exp(-d.c * std::pow(std::log(x), d.nu));
            else if constexpr (std::is_same_v<T, StretchedExpLaw>)
                return x <= 0.0 ? 1.0 : std::exp(-d.c * std::pow(x, d.kappa));
            else
            {
                if (x <= 1.0)
                    return 1.0;
                const double y = std::log(x);
                return std::min(1.0, std::exp(-y - d.c * std::pow(y, d.tau)));
            }
        },
        law);
}

/// Smallest x with tail(x) <= v, v in (0, 1].
inline double base_tail_inverse(const BaseLaw& law, double v)
{
    return std::visit(
        [v](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            const double L = -std::log(v);
            if constexpr (std::is_same_v<T, ConstantLaw>)
                return d.w0;
            else if constexpr (std::is_same_v<T, ParetoLaw>)
                return d.scale * std::exp(L / (d.alpha - 1.0));
            else if constexpr (std::is_same_v<T, LogStretchedExpLaw>)
                return std::exp(std::pow(L / d.c, 1.0 / d.nu));
            else if constexpr (std::is_same_v<T, StretchedExpLaw>)
                return std::pow(L / d.c, 1.0 / d.kappa);
            else
            {
                // Solve y + c y^tau = L on the increasing branch y >= y0.
                const double y0 = d.c >= 0.0 ? 0.0 : std::pow(-d.c, 1.0 / (1.0 - d.tau));
                auto phi = [&](double y) { return y + d.c * std::pow(y, d.tau); };
                if (L <= 0.0)
                    return std::exp(y0);
                double lo = y0;
                double hi = y0 + L + 1.0;
                while (phi(hi) < L)
                    hi = y0 + 2.0 * (hi - y0);
                for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it)
                {
                    const double mid = 0.5 * (lo + hi);
                    (phi(mid) < L ? lo : hi) = mid;
                }
                return std::exp(0.5 * (lo + hi));
            }
        },
        law);
}

inline void validate_base(const BaseLaw& law)
{
    std::visit(
        [](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantLaw>)
            {
                if (!(d.w0 >= 0.0) || !std::isfinite(d.w0))
                    throw InvalidParameters("constant weight must be >= 0");
            }
            else if constexpr (std::is_same_v<T, ParetoLaw>)
            {
                if (!(d.alpha > 1.0) || !(d.scale > 0.0))
                    throw InvalidParameters("pareto weights need alpha > 1 and scale > 0");
            }
            else if constexpr (std::is_same_v<T, LogStretchedExpLaw>)
            {
                if (!(d.nu > 1.0) || !(d.c > 0.0))
                    throw InvalidParameters("log-stretched-exponential weights need nu > 1 and c > 0");
            }
            else if constexpr (std::is_same_v<T, StretchedExpLaw>)
            {
                if (!(d.kappa > 0.0) || !(d.c > 0.0))
                    throw InvalidParameters("stretched-exponential weights need kappa > 0 and c > 0");
            }
            else
            {
                if (!(d.tau > 0.0 && d.tau < 1.0) || !std::isfinite(d.c))
                    throw InvalidParameters("power-law-plus weights need tau in (0,1)");
            }
        },
        law);
}

}  // namespace detail

class WeightDistribution
{
public:
    using Variant = std::variant<ConstantLaw, ParetoLaw, LogStretchedExpLaw, StretchedExpLaw,
                                 PowerLawPlusLaw, TwoTypeLaw>;

    WeightDistribution() : v_(ConstantLaw{}) {}

    template <class T>
        requires std::is_constructible_v<Variant, T>
    WeightDistribution(T v) : v_(std::move(v))
    {
        if (auto t = std::get_if<TwoTypeLaw>(&v_))
        {
            detail::validate_base(t->r_law);
            if (!(t->coin >= 0.0 && t->coin <= 1.0))
                throw InvalidParameters("two-type coin must be a probability");
        }
        else
            detail::validate_base(base());
    }

    const Variant& variant() const noexcept { return v_; }

    template <class T>
    const T* get_if() const noexcept
    {
        return std::get_if<T>(&v_);
    }

    bool is_constant() const noexcept { return std::holds_alternative<ConstantLaw>(v_); }

    /// P(W >= x) of the real-valued component.
    double tail(double x) const { return detail::base_tail(base(), x); }

    /// Weight whose upper-tail probability equals v, v in (0, 1].
    double tail_inverse(double v) const { return detail::base_tail_inverse(base(), v); }

    /// Draw by inversion of the tail. Two-type draws consume two uniforms.
    Weight sample(Rng& rng) const
    {
        Weight w;
        w.value = tail_inverse(rng.uniform_pos());
        if (auto t = std::get_if<TwoTypeLaw>(&v_))
            w.type = rng.uniform() < t->coin ? 1 : 0;
        return w;
    }

private:
    BaseLaw base() const
    {
        return std::visit(
            [](const auto& d) -> BaseLaw {
                using T = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<T, TwoTypeLaw>)
                    return d.r_law;
                else
                    return d;
            },
            v_);
    }

    Variant v_;
};

inline Weight sample_weight(const WeightDistribution& dist, Rng& rng)
{
    return dist.sample(rng);
}

// ---------------------------------------------------------------------------
// Tail sums mu_n^w
// ---------------------------------------------------------------------------

/// A certified enclosure lower <= true value <= upper, with value the midpoint.
struct Bracket
{
    double lower = 0.0;
    double upper = 0.0;

    double value() const noexcept { return 0.5 * (lower + upper); }
    double width() const noexcept { return upper - lower; }
    bool contains(double x) const noexcept { return lower <= x && x <= upper; }
};

struct TailSum
{
    double value = 0.0;
    Bracket bracket;
    std::size_t cutoff = 0;  // terms below this index were summed explicitly
};

namespace detail {

/// Neumaier compensated sum.
class Accumulator
{
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Integral of 1/f(x, w) over [x0, inf) by double-exponential quadrature.
inline Bracket quadrature_tail(const FitnessSpec& spec, double x0, double gw, double hw)
{
    thread_local boost::math::quadrature::exp_sinh<double> integrator;
    const double base = x0 + 1.0;
    auto integrand = [&](double t) {
        const double x = base * std::exp(t);
        const double denom = gw * spec.degree.at(x - 1.0) + hw;
        return std::isfinite(denom) ? x / denom : 0.0;
    };
    double err = 0.0;
    const double value = integrator.integrate(integrand, 1e-12, &err);
    const double pad = err + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(value);
    return {std::max(0.0, value - pad), value + pad};
}

/// Enclosure of sum_{i >= M} 1/f(i, w).
///
/// With h(w) = 0, 1/f(., w) is decreasing and convex on [M - 1/2, inf) for all
/// analytic variants, so the trapezoid and midpoint rules give
///   I(M) + phi(M)/2 <= sum <= I(M - 1/2).
/// Otherwise the monotone bound I(M) <= sum <= I(M) + phi(M) is used.
inline Bracket tail_bracket(const FitnessSpec& spec, std::size_t M, double gw, double hw)
{
    const double phi = 1.0 / (gw * spec.degree(M) + hw);
    const double m = static_cast<double>(M);
    if (hw == 0.0)
    {
        const double lo = spec.degree.tail_integral(m) / gw + 0.5 * phi;
        const double hi = spec.degree.tail_integral(m - 0.5) / gw;
        const double pad = 8.0 * std::numeric_limits<double>::epsilon() * hi;
        return {std::max(0.0, lo - pad), std::max(lo, hi) + pad};
    }
    const Bracket I = quadrature_tail(spec, m, gw, hw);
    return {I.lower, I.upper + phi};
}

}  // namespace detail

/// sum_{i >= n} 1/f(i, w) to absolute accuracy `tol`, with a certified bracket.
inline TailSum mu_exact(const FitnessSpec& spec, std::size_t n, double w, double tol = 1e-10)
{
    if (!(tol > 0.0))
        throw InvalidParameters("mu_exact needs tol > 0");
    if (!spec.degree.summable())
        throw NonSummable("declared tail rule does not make sum 1/s(i) finite");

    const double gw = spec.weights.g(w);
    const double hw = spec.weights.h(w);
    std::size_t M = std::max<std::size_t>({n, spec.degree.table_size(), 1});

    detail::Accumulator head;
    for (std::size_t i = n; i < M; ++i)
        head.add(1.0 / (gw * spec.degree(i) + hw));

    constexpr std::size_t max_cutoff = std::size_t{1} << 34;
    for (;;)
    {
        const Bracket tail = detail::tail_bracket(spec, M, gw, hw);
        const double h = head.value();
        const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (h + tail.upper);
        if (tail.width() <= 2.0 * tol || tail.width() <= floor)
        {
            const double round = 4.0 * std::numeric_limits<double>::epsilon() * h;
            TailSum r;
            r.bracket = {h + tail.lower - round, h + tail.upper + round};
            r.value = h + tail.value();
            r.cutoff = M;
            return r;
        }
        if (M >= max_cutoff)
            throw NonConvergent("mu_exact: truncation point exceeded 2^34");
        const std::size_t next = std::max(2 * M, M + 16);
        for (std::size_t i = M; i < next; ++i)
            head.add(1.0 / (gw * spec.degree(i) + hw));
        M = next;
    }
}

/// Leading-order asymptotics of mu_n^w (requires n >= 2).
inline double mu_asymptotic(const FitnessSpec& spec, std::size_t n, double w)
{
    if (n < 2)
        throw InvalidParameters("mu_asymptotic needs n >= 2");
    const double g = spec.weights.g(w);
    const double x = static_cast<double>(n);
    const double L = std::log(x);
    return std::visit(
        [&](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, PowerLaw>)
                return x / (spec.degree(n) * g * (d.p - 1.0));
            else if constexpr (std::is_same_v<T, LogStretched>)
                return std::pow(L, 1.0 - d.beta) * std::exp(-std::pow(L, d.beta)) / (d.beta * g);
            else if constexpr (std::is_same_v<T, PolyLog>)
                return std::pow(L, -(d.sigma - 1.0)) / (g * (d.sigma - 1.0));
            else
                throw UnsupportedVariant("mu_asymptotic is not defined for table degree functions");
        },
        spec.degree.variant());
}

}  // namespace ertf
