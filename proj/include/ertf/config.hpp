#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cmj.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "phase.hpp"

namespace ertf {

// ---------------------------------------------------------------------------
// Model strings: name[:arg[,arg...]]
// ---------------------------------------------------------------------------

namespace detail {

inline std::pair<std::string, std::vector<double>> split_spec(const std::string& s)
{
    const auto colon = s.find(':');
    std::pair<std::string, std::vector<double>> r{s.substr(0, colon), {}};
    if (colon == std::string::npos)
        return r;
    std::istringstream in(s.substr(colon + 1));
    std::string tok;
    while (std::getline(in, tok, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(tok, &used);
        }
        catch (const std::exception&)
        {
            used = 0;
        }
        if (used == 0 || used != tok.size())
            throw InvalidParameters("malformed number '" + tok + "' in '" + s + "'");
        r.second.push_back(v);
    }
    return r;
}

inline void arity(const std::string& s, const std::vector<double>& a, std::size_t lo, std::size_t hi)
{
    if (a.size() < lo || a.size() > hi)
        throw InvalidParameters("wrong number of arguments in '" + s + "'");
}

}  // namespace detail

/// power:p | logstretched:beta | polylog:sigma | table:v0,v1,...,vm,c,q
/// (the last two table arguments are the tail c (i+1)^q).
inline DegreeFunction parse_degree(const std::string& s)
{
    auto [name, a] = detail::split_spec(s);
    if (name == "power")
    {
        detail::arity(s, a, 1, 1);
        return PowerLaw{a[0]};
    }
    if (name == "logstretched")
    {
        detail::arity(s, a, 1, 1);
        return LogStretched{a[0]};
    }
    if (name == "polylog")
    {
        detail::arity(s, a, 1, 1);
        return PolyLog{a[0]};
    }
    if (name == "table")
    {
        detail::arity(s, a, 3, 1u << 20);
        TableDegree t;
        t.tail_exponent = a.back();
        a.pop_back();
        t.tail_coef = a.back();
        a.pop_back();
        t.values = std::move(a);
        return t;
    }
    throw InvalidParameters("unknown degree function '" + s + "'");
}

/// mixed[:gamma] | additive
inline WeightFunctionPair parse_fitness(const std::string& s)
{
    auto [name, a] = detail::split_spec(s);
    if (name == "mixed")
    {
        detail::arity(s, a, 0, 1);
        return WeightFunctionPair::mixed(a.empty() ? 0.0 : a[0]);
    }
    if (name == "additive")
    {
        detail::arity(s, a, 0, 0);
        return WeightFunctionPair::additive_pair();
    }
    throw InvalidParameters("unknown fitness form '" + s + "'");
}

/// constant:w0 | pareto:alpha[,scale] | logstretchedexp:nu[,c] | stretchedexp:kappa[,c]
/// | powerlawplus:tau[,c] | twotype:alpha,coin
inline WeightDistribution parse_weights(const std::string& s)
{
    auto [name, a] = detail::split_spec(s);
    if (name == "constant")
    {
        detail::arity(s, a, 0, 1);
        return ConstantLaw{a.empty() ? 0.0 : a[0]};
    }
    if (name == "pareto")
    {
        detail::arity(s, a, 1, 2);
        return ParetoLaw{a[0], a.size() > 1 ? a[1] : 1.0};
    }
    if (name == "logstretchedexp")
    {
        detail::arity(s, a, 1, 2);
        return LogStretchedExpLaw{a[0], a.size() > 1 ? a[1] : 1.0};
    }
    if (name == "stretchedexp")
    {
        detail::arity(s, a, 1, 2);
        return StretchedExpLaw{a[0], a.size() > 1 ? a[1] : 1.0};
    }
    if (name == "powerlawplus")
    {
        detail::arity(s, a, 1, 2);
        return PowerLawPlusLaw{a[0], a.size() > 1 ? a[1] : 1.0};
    }
    if (name == "twotype")
    {
        detail::arity(s, a, 2, 2);
        return TwoTypeLaw{ParetoLaw{a[0], 1.0}, a[1]};
    }
    throw InvalidParameters("unknown weight law '" + s + "'");
}

/// exponential | gamma:k | beta:a,b | rayleigh
inline InterBirthLaw parse_inter_birth(const std::string& s)
{
    auto [name, a] = detail::split_spec(s);
    if (name == "exponential")
    {
        detail::arity(s, a, 0, 0);
        return ExponentialLaw{};
    }
    if (name == "gamma")
    {
        detail::arity(s, a, 1, 1);
        return GammaLaw{a[0]};
    }
    if (name == "beta")
    {
        detail::arity(s, a, 2, 2);
        return BetaLaw{a[0], a[1]};
    }
    if (name == "rayleigh")
    {
        detail::arity(s, a, 0, 0);
        return RayleighLaw{};
    }
    throw InvalidParameters("unknown inter-birth law '" + s + "'");
}

inline WeightTail parse_tail(const std::string& s)
{
    for (WeightTail t : {WeightTail::Constant, WeightTail::PowerLaw, WeightTail::LogStretchedExp,
                         WeightTail::StretchedExp, WeightTail::PowerLawPlusUpper, WeightTail::PowerLawPlusLower})
        if (s == to_string(t))
            return t;
    throw InvalidParameters("unknown weight tail '" + s + "'");
}

/// param:min:max:steps
inline Axis parse_axis(const std::string& s)
{
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ':'))
        parts.push_back(tok);
    if (parts.size() != 4)
        throw InvalidParameters("axis must be param:min:max:steps, got '" + s + "'");
    try
    {
        Axis a{parts[0], std::stod(parts[1]), std::stod(parts[2]), std::stoul(parts[3])};
        if (a.steps == 0 || !(a.max >= a.min))
            throw InvalidParameters("axis '" + s + "' needs steps >= 1 and max >= min");
        return a;
    }
    catch (const std::logic_error&)
    {
        throw InvalidParameters("malformed axis '" + s + "'");
    }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig
{
    std::string subcommand;

    std::string degree = "power:2";
    std::string fitness = "mixed:0";
    std::string weights = "constant:0";
    std::string law = "exponential";

    std::size_t n = 10000;
    std::size_t births = 10000;
    std::optional<double> time;
    std::size_t replicas = 500;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t samples = 10000;
    double tol = 1e-10;

    std::string series = "star";  // star | path | probe | tree
    unsigned lo = 4;
    unsigned hi = 12;
    std::optional<double> c;

    std::string tree = "star:2";
    std::string anchor = "all";  // all | hub
    bool explosion = false;

    std::string family = "mixed-superlinear";
    std::optional<std::string> tail;
    std::optional<double> p, alpha, gamma, beta, nu, kappa, tau, tau_prime, sigma, a_lower, a_upper;
    std::string x_axis;
    std::string y_axis;
    std::vector<std::string> trees;

    double coin = 0.5;
    std::optional<std::size_t> k_max;
    double theta = 0.5;
    std::size_t depth = 20;

    std::string out;
    std::string hub_out;
    std::string svg;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

template <class T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v)
{
    if (v)
        j[key] = *v;
}

template <class T>
void get(const nlohmann::json& j, const char* key, T& v)
{
    if (j.contains(key))
        v = j.at(key).get<T>();
}

template <class T>
void get(const nlohmann::json& j, const char* key, std::optional<T>& v)
{
    if (j.contains(key) && !j.at(key).is_null())
        v = j.at(key).get<T>();
}

}  // namespace detail

inline nlohmann::json to_json(const RunConfig& c)
{
    nlohmann::json j = {{"subcommand", c.subcommand},
                        {"degree", c.degree},
                        {"fitness", c.fitness},
                        {"weights", c.weights},
                        {"law", c.law},
                        {"n", c.n},
                        {"births", c.births},
                        {"replicas", c.replicas},
                        {"seed", c.seed},
                        {"threads", c.threads},
                        {"samples", c.samples},
                        {"tol", c.tol},
                        {"series", c.series},
                        {"lo", c.lo},
                        {"hi", c.hi},
                        {"tree", c.tree},
                        {"anchor", c.anchor},
                        {"explosion", c.explosion},
                        {"family", c.family},
                        {"x", c.x_axis},
                        {"y", c.y_axis},
                        {"trees", c.trees},
                        {"coin", c.coin},
                        {"theta", c.theta},
                        {"depth", c.depth},
                        {"out", c.out},
                        {"hub_out", c.hub_out},
                        {"svg", c.svg}};
    detail::put(j, "time", c.time);
    detail::put(j, "c", c.c);
    detail::put(j, "tail", c.tail);
    detail::put(j, "p", c.p);
    detail::put(j, "alpha", c.alpha);
    detail::put(j, "gamma", c.gamma);
    detail::put(j, "beta", c.beta);
    detail::put(j, "nu", c.nu);
    detail::put(j, "kappa", c.kappa);
    detail::put(j, "tau", c.tau);
    detail::put(j, "tau_prime", c.tau_prime);
    detail::put(j, "sigma", c.sigma);
    detail::put(j, "a_lower", c.a_lower);
    detail::put(j, "a_upper", c.a_upper);
    detail::put(j, "k_max", c.k_max);
    return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j)
{
    if (!j.is_object())
        throw InvalidParameters("config must be a JSON object");
    static const std::vector<std::string> known{
        "subcommand", "degree", "fitness", "weights", "law", "n", "births", "time", "replicas", "seed",
        "threads", "samples", "tol", "series", "lo", "hi", "c", "tree", "anchor", "explosion", "family",
        "tail", "p", "alpha", "gamma", "beta", "nu", "kappa", "tau", "tau_prime", "sigma", "a_lower",
        "a_upper", "x", "y", "trees", "coin", "k_max", "theta", "depth", "out", "hub_out", "svg"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw InvalidParameters("unknown config key '" + key + "'");
    RunConfig c;
    try
    {
        detail::get(j, "subcommand", c.subcommand);
        detail::get(j, "degree", c.degree);
        detail::get(j, "fitness", c.fitness);
        detail::get(j, "weights", c.weights);
        detail::get(j, "law", c.law);
        detail::get(j, "n", c.n);
        detail::get(j, "births", c.births);
        detail::get(j, "time", c.time);
        detail::get(j, "replicas", c.replicas);
        detail::get(j, "seed", c.seed);
        detail::get(j, "threads", c.threads);
        detail::get(j, "samples", c.samples);
        detail::get(j, "tol", c.tol);
        detail::get(j, "series", c.series);
        detail::get(j, "lo", c.lo);
        detail::get(j, "hi", c.hi);
        detail::get(j, "c", c.c);
        detail::get(j, "tree", c.tree);
        detail::get(j, "anchor", c.anchor);
        detail::get(j, "explosion", c.explosion);
        detail::get(j, "family", c.family);
        detail::get(j, "tail", c.tail);
        detail::get(j, "p", c.p);
        detail::get(j, "alpha", c.alpha);
        detail::get(j, "gamma", c.gamma);
        detail::get(j, "beta", c.beta);
        detail::get(j, "nu", c.nu);
        detail::get(j, "kappa", c.kappa);
        detail::get(j, "tau", c.tau);
        detail::get(j, "tau_prime", c.tau_prime);
        detail::get(j, "sigma", c.sigma);
        detail::get(j, "a_lower", c.a_lower);
        detail::get(j, "a_upper", c.a_upper);
        detail::get(j, "x", c.x_axis);
        detail::get(j, "y", c.y_axis);
        detail::get(j, "trees", c.trees);
        detail::get(j, "coin", c.coin);
        detail::get(j, "k_max", c.k_max);
        detail::get(j, "theta", c.theta);
        detail::get(j, "depth", c.depth);
        detail::get(j, "out", c.out);
        detail::get(j, "hub_out", c.hub_out);
        detail::get(j, "svg", c.svg);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw InvalidParameters(std::string("bad config value: ") + e.what());
    }
    return c;
}

/// The phase model selected by family plus any explicit parameters.
inline PhaseModel phase_model(const RunConfig& c)
{
    PhaseModel m = PhaseModel::family(c.family);
    if (c.tau && c.tau_prime)
        throw InvalidParameters("give tau (upper tail bound) or tau' (lower tail bound), not both");
    if (c.tail)
        m.tail = parse_tail(*c.tail);
    else if (c.family == "additive-polylog" && c.alpha && !c.nu)
        m.tail = WeightTail::PowerLaw;
    else if (c.family == "additive-logstretched" && c.tau_prime)
        m.tail = WeightTail::PowerLawPlusLower;
    auto set = [](double& dst, const std::optional<double>& v) {
        if (v)
            dst = *v;
    };
    set(m.p, c.p);
    set(m.alpha, c.alpha);
    set(m.gamma, c.gamma);
    set(m.beta, c.beta);
    set(m.nu, c.nu);
    set(m.kappa, c.kappa);
    set(m.tau, c.tau);
    set(m.tau_prime, c.tau_prime);
    set(m.sigma, c.sigma);
    set(m.a_lower, c.a_lower);
    set(m.a_upper, c.a_upper);
    m.validate();
    return m;
}

}  // namespace ertf
