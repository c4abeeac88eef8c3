#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "model.hpp"
#include "parallel.hpp"
#include "subtrees.hpp"

namespace ertf {

enum class FitnessClass
{
    Mixed,
    Additive
};

enum class DegreeClass
{
    SuperLinear,
    LogStretched,
    PolyLog
};

/// Weight tail families. PowerLawPlusUpper carries tau, PowerLawPlusLower tau'.
enum class WeightTail
{
    Constant,
    PowerLaw,
    LogStretchedExp,
    StretchedExp,
    PowerLawPlusUpper,
    PowerLawPlusLower
};

enum class Verdict
{
    Star,
    Path,
    Unknown
};

inline const char* to_string(Verdict v)
{
    switch (v)
    {
    case Verdict::Star: return "Star";
    case Verdict::Path: return "Path";
    default: return "Unknown";
    }
}

inline const char* to_string(WeightTail t)
{
    switch (t)
    {
    case WeightTail::Constant: return "constant";
    case WeightTail::PowerLaw: return "power-law";
    case WeightTail::LogStretchedExp: return "log-stretched-exp";
    case WeightTail::StretchedExp: return "stretched-exp";
    case WeightTail::PowerLawPlusUpper: return "power-law-plus-upper";
    default: return "power-law-plus-lower";
    }
}

struct PhaseModel
{
    FitnessClass fitness = FitnessClass::Mixed;
    DegreeClass degree = DegreeClass::SuperLinear;
    WeightTail tail = WeightTail::PowerLaw;

    double p = 2.0;
    double beta = 0.5;
    double sigma = 2.0;
    double gamma = 0.0;  // mixed only
    double alpha = 2.0;
    double nu = 2.0;
    double kappa = 1.0;
    double tau = 0.5;
    double tau_prime = 0.5;
    double a_lower = 0.0;
    double a_upper = 0.0;

    /// Named families: mixed-superlinear, additive-superlinear, mixed-logstretched,
    /// additive-logstretched, mixed-polylog, additive-polylog, constant-power.
    static PhaseModel family(const std::string& name)
    {
        PhaseModel m;
        if (name == "mixed-superlinear")
            m = {FitnessClass::Mixed, DegreeClass::SuperLinear, WeightTail::PowerLaw};
        else if (name == "additive-superlinear")
            m = {FitnessClass::Additive, DegreeClass::SuperLinear, WeightTail::PowerLaw};
        else if (name == "mixed-logstretched")
            m = {FitnessClass::Mixed, DegreeClass::LogStretched, WeightTail::LogStretchedExp};
        else if (name == "additive-logstretched")
            m = {FitnessClass::Additive, DegreeClass::LogStretched, WeightTail::PowerLawPlusUpper};
        else if (name == "mixed-polylog")
            m = {FitnessClass::Mixed, DegreeClass::PolyLog, WeightTail::StretchedExp};
        else if (name == "additive-polylog")
            m = {FitnessClass::Additive, DegreeClass::PolyLog, WeightTail::LogStretchedExp};
        else if (name == "constant-power")
            m = {FitnessClass::Mixed, DegreeClass::SuperLinear, WeightTail::Constant};
        else
            throw InvalidParameters("unknown phase family '" + name + "'");
        return m;
    }

    static const std::vector<std::string>& family_names()
    {
        static const std::vector<std::string> names{"mixed-superlinear",     "additive-superlinear",
                                                    "mixed-logstretched",    "additive-logstretched",
                                                    "mixed-polylog",         "additive-polylog",
                                                    "constant-power"};
        return names;
    }

    void validate() const
    {
        auto need = [](bool ok, const char* what) {
            if (!ok)
                throw InvalidParameters(what);
        };
        switch (degree)
        {
        case DegreeClass::SuperLinear: need(p > 1.0, "phase model needs p > 1"); break;
        case DegreeClass::LogStretched: need(beta > 0.0 && beta < 1.0, "phase model needs beta in (0,1)"); break;
        case DegreeClass::PolyLog: need(sigma > 1.0, "phase model needs sigma > 1"); break;
        }
        if (fitness == FitnessClass::Mixed)
            need(gamma >= 0.0 && std::isfinite(gamma), "phase model needs gamma >= 0");
        switch (tail)
        {
        case WeightTail::Constant: break;
        case WeightTail::PowerLaw: need(alpha > 1.0, "phase model needs alpha > 1"); break;
        case WeightTail::LogStretchedExp: need(nu > 1.0, "phase model needs nu > 1"); break;
        case WeightTail::StretchedExp: need(kappa > 0.0, "phase model needs kappa > 0"); break;
        case WeightTail::PowerLawPlusUpper: need(tau > 0.0 && tau < 1.0, "phase model needs tau in (0,1)"); break;
        case WeightTail::PowerLawPlusLower:
            need(tau_prime > 0.0 && tau_prime < 1.0, "phase model needs tau' in (0,1)");
            break;
        }
        need(a_lower >= 0.0 && a_lower < 1.0, "phase model needs a_lower in [0,1)");
        need(a_upper >= 0.0 && a_upper < 1.0, "phase model needs a_upper in [0,1)");
    }
};

/// Read the exponents off a concrete model. Scale and slowly-varying constants are dropped.
inline PhaseModel phase_model(const FitnessSpec& spec, const WeightDistribution& dist)
{
    PhaseModel m;
    if (auto d = spec.degree.get_if<PowerLaw>())
    {
        m.degree = DegreeClass::SuperLinear;
        m.p = d->p;
    }
    else if (auto d = spec.degree.get_if<LogStretched>())
    {
        m.degree = DegreeClass::LogStretched;
        m.beta = d->beta;
    }
    else if (auto d = spec.degree.get_if<PolyLog>())
    {
        m.degree = DegreeClass::PolyLog;
        m.sigma = d->sigma;
    }
    else
        throw UnsupportedVariant("table degree functions have no phase classification");
    if (spec.weights.additive())
        m.fitness = FitnessClass::Additive;
    else
    {
        m.fitness = FitnessClass::Mixed;
        m.gamma = spec.weights.gamma();
    }
    if (dist.get_if<ConstantLaw>())
        m.tail = WeightTail::Constant;
    else if (auto d = dist.get_if<ParetoLaw>())
    {
        m.tail = WeightTail::PowerLaw;
        m.alpha = d->alpha;
    }
    else if (auto d = dist.get_if<LogStretchedExpLaw>())
    {
        m.tail = WeightTail::LogStretchedExp;
        m.nu = d->nu;
    }
    else if (auto d = dist.get_if<StretchedExpLaw>())
    {
        m.tail = WeightTail::StretchedExp;
        m.kappa = d->kappa;
    }
    else if (auto d = dist.get_if<PowerLawPlusLaw>())
    {
        if (d->c > 0.0)
        {
            m.tail = WeightTail::PowerLawPlusUpper;
            m.tau = d->tau;
        }
        else
        {
            m.tail = WeightTail::PowerLawPlusLower;
            m.tau_prime = d->tau;
        }
    }
    else
        throw UnsupportedVariant("two-type weights have no phase classification");
    return m;
}

struct PhaseVerdict
{
    Verdict verdict = Verdict::Unknown;
    std::string text;
    double margin = 0.0;  // > 0 on the Star side, < 0 on the Path side, 0 in gaps
};

namespace detail {

inline std::string fmt(const char* f, double a)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

inline std::string fmt(const char* f, double a, double b)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

/// lhs against a single threshold: Star above, Path below.
inline PhaseVerdict two_sided(const char* name, double lhs, double rhs)
{
    PhaseVerdict v;
    v.margin = lhs - rhs;
    const char* rel = "=";
    if (lhs > rhs)
    {
        v.verdict = Verdict::Star;
        rel = ">";
    }
    else if (lhs < rhs)
    {
        v.verdict = Verdict::Path;
        rel = "<";
    }
    else
        v.margin = 0.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s (%s=%.3f %s %g)", to_string(v.verdict), name, lhs, rel, rhs);
    v.text = buf;
    return v;
}

inline PhaseVerdict unknown(std::string why)
{
    return {Verdict::Unknown, "Unknown (" + std::move(why) + ")", 0.0};
}

inline PhaseVerdict bounded_star()
{
    return {Verdict::Star, "Star (bounded weights)", std::numeric_limits<double>::infinity()};
}

}  // namespace detail

inline PhaseVerdict classify(const PhaseModel& m)
{
    m.validate();
    const bool mixed = m.fitness == FitnessClass::Mixed;
    const bool constant = m.tail == WeightTail::Constant;
    auto mismatch = [&] { return detail::unknown(std::string("no result for ") + to_string(m.tail) + " weights"); };

    switch (m.degree)
    {
    case DegreeClass::SuperLinear:
        if (constant)
            return detail::bounded_star();
        if (m.tail != WeightTail::PowerLaw)
            return mismatch();
        if (mixed)
            return detail::two_sided("(p-1)(alpha-1)", (m.p - 1.0) * (m.alpha - 1.0),
                                     std::max(m.gamma - (m.gamma - 1.0) / m.p, 1.0));
        return detail::two_sided("p(alpha-1)", m.p * (m.alpha - 1.0), 1.0);

    case DegreeClass::LogStretched:
        if (constant)
            return detail::bounded_star();
        if (mixed)
        {
            if (m.tail != WeightTail::LogStretchedExp)
                return mismatch();
            return detail::two_sided("beta*nu", m.beta * m.nu, 1.0);
        }
        if (m.tail == WeightTail::PowerLawPlusUpper)
        {
            const double lhs = std::max(m.tau, m.beta);
            const double rhs = std::max(1.0 - m.beta, m.a_lower);
            if (lhs > rhs)
                return {Verdict::Star, detail::fmt("Star (max(tau,beta)=%.3f > %g)", lhs, rhs), lhs - rhs};
            return detail::unknown(detail::fmt("max(tau,beta)=%.3f <= %g", lhs, rhs));
        }
        if (m.tail == WeightTail::PowerLawPlusLower)
        {
            const double c1 = m.tau_prime - std::max(m.beta, 1.0 - m.beta);
            const double c2 = std::max(m.tau_prime, m.beta) - m.a_upper;
            if (c1 > 0.0 && c2 > 0.0)
                return {Verdict::Path,
                        detail::fmt("Path (tau'=%.3f > %g", m.tau_prime, std::max(m.beta, 1.0 - m.beta)) +
                            detail::fmt(" and max(tau',beta)=%.3f > %g)", std::max(m.tau_prime, m.beta),
                                        m.a_upper),
                        -std::min(c1, c2)};
            return detail::unknown(detail::fmt("tau'=%.3f, beta=%.3f outside the path region", m.tau_prime, m.beta));
        }
        return mismatch();

    case DegreeClass::PolyLog:
        if (constant)
        {
            if (m.sigma > 2.0)
                return {Verdict::Star, detail::fmt("Star (bounded weights, sigma=%.3f > %g)", m.sigma, 2.0),
                        m.sigma - 2.0};
            return detail::unknown(detail::fmt("bounded weights, sigma=%.3f <= %g", m.sigma, 2.0));
        }
        if (mixed)
        {
            if (m.tail != WeightTail::StretchedExp)
                return mismatch();
            const double lhs = (m.sigma - 1.0) * m.kappa;
            if (lhs > 1.0 + m.kappa)
                return {Verdict::Star, detail::fmt("Star ((sigma-1)kappa=%.3f > %g)", lhs, 1.0 + m.kappa),
                        lhs - 1.0 - m.kappa};
            if (lhs < 1.0)
                return {Verdict::Path, detail::fmt("Path ((sigma-1)kappa=%.3f < %g)", lhs, 1.0), lhs - 1.0};
            return detail::unknown(detail::fmt("(sigma-1)kappa=%.3f in [1, %g]", lhs, 1.0 + m.kappa));
        }
        if (m.tail == WeightTail::LogStretchedExp)
        {
            const double lhs = (m.sigma - 1.0) * (1.0 - 1.0 / m.nu);
            if (lhs > 1.0)
                return {Verdict::Star, detail::fmt("Star ((sigma-1)(1-1/nu)=%.3f > %g)", lhs, 1.0), lhs - 1.0};
            return detail::unknown(detail::fmt("(sigma-1)(1-1/nu)=%.3f <= %g", lhs, 1.0));
        }
        if (m.tail == WeightTail::PowerLaw)
        {
            if (m.alpha < 2.0)
                return {Verdict::Path, detail::fmt("Path (alpha=%.3f < %g)", m.alpha, 2.0), m.alpha - 2.0};
            return detail::unknown(detail::fmt("alpha=%.3f >= %g", m.alpha, 2.0));
        }
        return mismatch();
    }
    return detail::unknown("unclassified");
}

// ---------------------------------------------------------------------------
// Sub-tree predicates
// ---------------------------------------------------------------------------

enum class SubtreeVerdict
{
    InfinitelyOften,
    FinitelyOften,
    Boundary
};

inline const char* to_string(SubtreeVerdict v)
{
    switch (v)
    {
    case SubtreeVerdict::InfinitelyOften: return "InfinitelyOften";
    case SubtreeVerdict::FinitelyOften: return "FinitelyOften";
    default: return "Boundary";
    }
}

/// Signed distance to the sub-tree threshold, positive when T appears
/// infinitely often. Requires a Star verdict.
inline double subtree_margin(const SubtreeSpec& t, const PhaseModel& m)
{
    const PhaseVerdict pv = classify(m);
    if (pv.verdict != Verdict::Star)
        throw NotInStarPhase("sub-tree phase needs a Star verdict, got " + pv.text);
    if (m.degree != DegreeClass::SuperLinear)
        return std::numeric_limits<double>::infinity();
    const auto k = static_cast<double>(t.k());
    if (k == 0.0)
        return std::numeric_limits<double>::infinity();
    if (m.tail == WeightTail::Constant)
    {
        // sum_n mu_n^k with mu_n ~ n^{1-p} diverges iff k(p-1) <= 1; the boundary belongs to this side.
        const double d = 1.0 - k * (m.p - 1.0);
        return d == 0.0 ? std::numeric_limits<double>::min() : d / k;
    }
    const double gv = m.fitness == FitnessClass::Additive ? 1.0 : std::max(m.gamma, 1.0);
    const double z = (m.alpha - 1.0) / gv;
    const G12 g = g1_g2(t, z);
    const double excess = g.g1 - z * g.g2;
    return 1.0 + 1.0 / (k - excess) - m.p;
}

inline SubtreeVerdict subtree_phase(const SubtreeSpec& t, const PhaseModel& m)
{
    const double d = subtree_margin(t, m);
    if (d > 0.0)
        return SubtreeVerdict::InfinitelyOften;
    if (d < 0.0)
        return SubtreeVerdict::FinitelyOften;
    return SubtreeVerdict::Boundary;
}

// ---------------------------------------------------------------------------
// Grid scans
// ---------------------------------------------------------------------------

inline void set_param(PhaseModel& m, const std::string& name, double v)
{
    if (name == "p")
        m.p = v;
    else if (name == "beta")
        m.beta = v;
    else if (name == "sigma")
        m.sigma = v;
    else if (name == "gamma")
        m.gamma = v;
    else if (name == "alpha")
        m.alpha = v;
    else if (name == "nu")
        m.nu = v;
    else if (name == "kappa")
        m.kappa = v;
    else if (name == "tau")
        m.tau = v;
    else if (name == "tau_prime")
        m.tau_prime = v;
    else if (name == "a_lower")
        m.a_lower = v;
    else if (name == "a_upper")
        m.a_upper = v;
    else
        throw InvalidParameters("unknown phase parameter '" + name + "'");
}

struct Axis
{
    std::string param;
    double min = 0.0;
    double max = 0.0;
    std::size_t steps = 1;

    double at(std::size_t i) const
    {
        return steps <= 1 ? min : min + (max - min) * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
};

struct NamedTree
{
    std::string id;
    SubtreeSpec tree;
};

struct GridCell
{
    double x = 0.0;
    double y = 0.0;
    PhaseVerdict phase;
    std::vector<std::string> tree_verdicts;  // "NA" outside the Star region
};

struct GridScan
{
    PhaseModel base;
    Axis x;
    Axis y;
    std::vector<NamedTree> trees;
    std::vector<GridCell> cells;  // row-major: x outer, y inner

    const GridCell& cell(std::size_t i, std::size_t j) const { return cells[i * y.steps + j]; }
};

inline GridScan grid_scan(const PhaseModel& base, const Axis& x, const Axis& y, std::vector<NamedTree> trees = {},
                          unsigned threads = 1)
{
    if (x.steps == 0 || y.steps == 0)
        throw InvalidParameters("grid axes need at least one step");
    if (x.param == y.param)
        throw InvalidParameters("grid axes must differ");
    GridScan g{base, x, y, std::move(trees), {}};
    g.cells.resize(x.steps * y.steps);
    PhaseModel probe = base;
    set_param(probe, x.param, x.min);
    set_param(probe, y.param, y.min);
    parallel_for(g.cells.size(), threads, [&](std::size_t c) {
        const std::size_t i = c / y.steps;
        const std::size_t j = c % y.steps;
        PhaseModel m = base;
        GridCell& cell = g.cells[c];
        cell.x = x.at(i);
        cell.y = y.at(j);
        set_param(m, x.param, cell.x);
        set_param(m, y.param, cell.y);
        cell.phase = classify(m);
        for (const auto& t : g.trees)
            cell.tree_verdicts.push_back(cell.phase.verdict == Verdict::Star ? to_string(subtree_phase(t.tree, m))
                                                                            : "NA");
    });
    return g;
}

/// CSV: param1,param2,verdict,margin then tree_id_i,tree_verdict_i per tree.
inline void write_grid_csv(std::ostream& os, const GridScan& g)
{
    os << "param1,param2,verdict,margin";
    for (std::size_t t = 0; t < g.trees.size(); ++t)
        os << ",tree_id_" << t + 1 << ",tree_verdict_" << t + 1;
    os << '\n';
    char buf[128];
    for (const auto& c : g.cells)
    {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s,%.17g", c.x, c.y, to_string(c.phase.verdict), c.phase.margin);
        os << buf;
        for (std::size_t t = 0; t < g.trees.size(); ++t)
            os << ',' << g.trees[t].id << ',' << c.tree_verdicts[t];
        os << '\n';
    }
}

namespace detail {

using Polyline = std::vector<std::pair<double, double>>;

/// Boundaries of {pred} traced column by column: sign changes between grid
/// rows are refined by bisection in y. The r-th crossing of each column joins
/// the r-th polyline.
template <class Pred>
std::vector<Polyline> trace_boundary(const GridScan& g, Pred pred, std::size_t columns = 200)
{
    std::vector<Polyline> lines;
    const std::size_t ny = std::max<std::size_t>(g.y.steps, 100);
    Axis ys{g.y.param, g.y.min, g.y.max, ny};
    Axis xs{g.x.param, g.x.min, g.x.max, std::max<std::size_t>(columns, 2)};
    for (std::size_t i = 0; i < xs.steps; ++i)
    {
        const double x = xs.at(i);
        std::size_t r = 0;
        bool prev = pred(x, ys.at(0));
        for (std::size_t j = 1; j < ny; ++j)
        {
            const bool cur = pred(x, ys.at(j));
            if (cur == prev)
                continue;
            double lo = ys.at(j - 1), hi = ys.at(j);
            for (int it = 0; it < 40; ++it)
            {
                const double mid = 0.5 * (lo + hi);
                (pred(x, mid) == prev ? lo : hi) = mid;
            }
            if (r >= lines.size())
                lines.emplace_back();
            lines[r].push_back({x, 0.5 * (lo + hi)});
            ++r;
            prev = cur;
        }
    }
    std::erase_if(lines, [](const Polyline& l) { return l.size() < 2; });
    return lines;
}

}  // namespace detail

/// SVG rendering: colored cells, the Star and Path region boundaries, and one
/// boundary per supplied tree.
inline void write_grid_svg(std::ostream& os, const GridScan& g)
{
    const double W = 640, H = 640, L = 70, B = 60, T = 20, R = 20;
    const double pw = W - L - R, ph = H - T - B;
    auto sx = [&](double x) { return g.x.max == g.x.min ? L + pw / 2 : L + (x - g.x.min) / (g.x.max - g.x.min) * pw; };
    auto sy = [&](double y) {
        return g.y.max == g.y.min ? T + ph / 2 : T + ph - (y - g.y.min) / (g.y.max - g.y.min) * ph;
    };
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 "
       << W << ' ' << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const double cw = pw / static_cast<double>(g.x.steps), ch = ph / static_cast<double>(g.y.steps);
    char buf[256];
    for (std::size_t i = 0; i < g.x.steps; ++i)
        for (std::size_t j = 0; j < g.y.steps; ++j)
        {
            const auto& c = g.cell(i, j);
            const char* color = c.phase.verdict == Verdict::Star   ? "#9ecae1"
                                : c.phase.verdict == Verdict::Path ? "#fdae6b"
                                                                   : "#d9d9d9";
            std::snprintf(buf, sizeof buf,
                          "<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" fill=\"%s\"/>\n",
                          L + cw * static_cast<double>(i), T + ph - ch * static_cast<double>(j + 1), cw + 0.5,
                          ch + 0.5, color);
            os << buf;
        }

    auto model_at = [&](double x, double y) {
        PhaseModel m = g.base;
        set_param(m, g.x.param, x);
        set_param(m, g.y.param, y);
        return m;
    };
    auto draw = [&](const std::vector<detail::Polyline>& lines, const char* stroke, const char* dash) {
        for (const auto& l : lines)
        {
            os << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\"";
            if (dash)
                os << " stroke-dasharray=\"" << dash << '"';
            os << " points=\"";
            for (const auto& [x, y] : l)
            {
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", sx(x), sy(y));
                os << buf;
            }
            os << "\"/>\n";
        }
    };
    draw(detail::trace_boundary(g, [&](double x, double y) { return classify(model_at(x, y)).verdict == Verdict::Star; }),
         "black", nullptr);
    draw(detail::trace_boundary(g, [&](double x, double y) { return classify(model_at(x, y)).verdict == Verdict::Path; }),
         "black", "2,2");
    static const char* palette[] = {"#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"};
    for (std::size_t t = 0; t < g.trees.size(); ++t)
    {
        const SubtreeSpec& tree = g.trees[t].tree;
        draw(detail::trace_boundary(g,
                                    [&](double x, double y) {
                                        const PhaseModel m = model_at(x, y);
                                        return classify(m).verdict == Verdict::Star &&
                                               subtree_phase(tree, m) == SubtreeVerdict::InfinitelyOften;
                                    }),
             palette[t % 7], "6,3");
    }

    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    auto text = [&](double x, double y, const std::string& s, const char* anchor) {
        os << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\""
           << anchor << "\">" << s << "</text>\n";
    };
    text(L, H - B + 18, detail::fmt("%g", g.x.min), "start");
    text(L + pw, H - B + 18, detail::fmt("%g", g.x.max), "end");
    text(L + pw / 2, H - B + 40, g.x.param, "middle");
    text(L - 6, T + ph, detail::fmt("%g", g.y.min), "end");
    text(L - 6, T + 10, detail::fmt("%g", g.y.max), "end");
    text(L - 40, T + ph / 2, g.y.param, "middle");
    for (std::size_t t = 0; t < g.trees.size(); ++t)
        os << "<text x=\"" << L + pw - 4 << "\" y=\"" << T + 16 + 14 * static_cast<double>(t)
           << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\" fill=\"" << palette[t % 7] << "\">"
           << g.trees[t].id << "</text>\n";
    os << "</svg>\n";
}

}  // namespace ertf
