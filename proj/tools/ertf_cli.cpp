#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <string>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "ertf/cmj.hpp"
#include "ertf/config.hpp"
#include "ertf/counterexample.hpp"
#include "ertf/grower.hpp"
#include "ertf/phase.hpp"
#include "ertf/series.hpp"
#include "ertf/subtrees.hpp"

namespace {

using namespace ertf;

constexpr int exit_usage = 2;
constexpr int exit_validation = 3;
constexpr int exit_runtime = 1;

std::ofstream open_out(const std::string& path)
{
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    return os;
}

FitnessSpec fitness_of(const RunConfig& c) { return FitnessSpec(parse_degree(c.degree), parse_fitness(c.fitness)); }

int run_grow(const RunConfig& c)
{
    const FitnessSpec spec = fitness_of(c);
    const WeightDistribution dist = parse_weights(c.weights);
    const SubtreeSpec t = SubtreeSpec::from_string(c.tree);
    if (c.n == 0)
        throw InvalidParameters("grow needs n >= 1");
    if (c.anchor != "all" && c.anchor != "hub")
        throw InvalidParameters("anchor must be 'all' or 'hub'");
    Rng rng = Rng::stream(c.seed, 0);
    TreeState state = TreeState::with_root(spec, dist, rng);
    HubTracker hubs(state);
    grow_to(state, dist, c.n, rng, hubs);
    const Tree& tree = state.tree();
    const std::size_t cen = census(tree, t, c.anchor == "hub" ? Anchor::ChildrenOfMaxDegree : Anchor::AllNodes);
    if (!c.out.empty())
    {
        auto os = open_out(c.out);
        write_tree_csv(os, tree);
    }
    if (!c.hub_out.empty())
    {
        auto os = open_out(c.hub_out);
        write_hub_csv(os, hubs.records());
    }
    std::printf("grow n=%zu hub=%u max_degree=%zu hub_changes=%zu census[%s,%s]=%zu\n", tree.size(), hubs.hub(),
                hubs.degree(), hubs.records().size() - 1, c.tree.c_str(), c.anchor.c_str(), cen);
    return 0;
}

int run_cmj(const RunConfig& c)
{
    const FitnessSpec spec = fitness_of(c);
    const WeightDistribution dist = parse_weights(c.weights);
    const InterBirthLaw law = parse_inter_birth(c.law);
    Rng rng = Rng::stream(c.seed, 0);
    if (c.explosion)
    {
        const ExplosionEstimate e = explosion_estimate(spec, dist, law, c.births, rng);
        std::printf("cmj births=%zu tau_k=%.10g tail=%.10g explosion_estimate=%.10g\n", e.taus.size(),
                    e.taus.empty() ? 0.0 : e.taus.back(), e.tail, e.estimate);
        return 0;
    }
    const StopRule stop = c.time ? StopRule::at_time(*c.time, c.births) : StopRule::after_births(c.births);
    const CmjRun run = simulate_births(spec, dist, law, stop, rng);
    if (!c.out.empty())
    {
        auto os = open_out(c.out);
        write_birth_csv(os, run);
    }
    const node_t hub = run.tree.max_degree_node();
    std::printf("cmj births=%zu last_time=%.10g hub=%u max_degree=%zu%s\n", run.tree.size() - 1,
                run.birth_time.back(), hub, run.tree.outdeg(hub), run.truncated ? " truncated" : "");
    return 0;
}

int run_series(const RunConfig& c)
{
    const FitnessSpec spec = fitness_of(c);
    const WeightDistribution dist = parse_weights(c.weights);
    if (c.lo > c.hi || c.hi > 40)
        throw InvalidParameters("series grid needs lo <= hi <= 40");
    McOptions opt;
    opt.samples = c.samples;
    opt.seed = c.seed;
    opt.threads = c.threads;
    const auto grid = power_grid(c.lo, c.hi);
    SeriesReport r;
    if (c.series == "star")
        r = star_series(spec, dist, grid, c.c.value_or(0.5), opt);
    else if (c.series == "path")
        r = path_series(spec, dist, grid, c.c.value_or(2.0), 0.0, opt);
    else if (c.series == "probe")
        r = divergence_probe(spec, dist, 0.0, grid, c.c.value_or(0.5), opt);
    else if (c.series == "tree")
    {
        const SubtreeSpec t = SubtreeSpec::from_string(c.tree);
        std::vector<SeriesTerm> terms;
        for (std::size_t n : grid)
        {
            const McEstimate e = tree_series_term(spec, dist, t, n, opt);
            terms.push_back({n, e.value, e.std_error, e.log_value});
        }
        r = make_report(std::move(terms));
    }
    else
        throw InvalidParameters("series must be star, path, probe or tree");
    if (!c.out.empty())
    {
        auto os = open_out(c.out);
        write_series_csv(os, r);
    }
    std::printf("series %s verdict=%s a=%.4f ci=[%.4f, %.4f] points=%zu\n", c.series.c_str(), to_string(r.verdict),
                r.fit.a, r.fit.ci_low, r.fit.ci_high, r.fit.points);
    return 0;
}

int run_subtree(const RunConfig& c)
{
    const SubtreeSpec t = SubtreeSpec::from_string(c.tree);
    const PhaseModel m = phase_model(c);
    std::printf("%s\n", to_string(subtree_phase(t, m)));
    return 0;
}

int run_phase(const RunConfig& c)
{
    const PhaseModel m = phase_model(c);
    if (c.x_axis.empty() != c.y_axis.empty())
        throw InvalidParameters("grid scans need both --x and --y");
    if (c.x_axis.empty())
    {
        std::printf("%s\n", classify(m).text.c_str());
        return 0;
    }
    std::vector<NamedTree> trees;
    for (const auto& s : c.trees)
        trees.push_back({s, SubtreeSpec::from_string(s)});
    const GridScan g = grid_scan(m, parse_axis(c.x_axis), parse_axis(c.y_axis), std::move(trees), c.threads);
    if (!c.out.empty())
    {
        auto os = open_out(c.out);
        write_grid_csv(os, g);
    }
    if (!c.svg.empty())
    {
        auto os = open_out(c.svg);
        write_grid_svg(os, g);
    }
    std::size_t star = 0, path = 0;
    for (const auto& cell : g.cells)
    {
        star += cell.phase.verdict == Verdict::Star;
        path += cell.phase.verdict == Verdict::Path;
    }
    std::printf("phase grid %zux%zu star=%zu path=%zu unknown=%zu\n", g.x.steps, g.y.steps, star, path,
                g.cells.size() - star - path);
    return 0;
}

int run_counterexample(const RunConfig& c)
{
    const double alpha = c.alpha.value_or(1.5);
    const double p = c.p.value_or(2.5);
    const CounterexampleSpec spec = build_s_sequence(alpha, p, c.k_max.value_or(c.births + 1), c.coin);
    const ClassifierOptions opt{c.theta, c.depth};
    const CounterexampleResult r = simulate_counterexample(spec, c.births, c.replicas, c.seed, opt, c.threads);
    const nlohmann::json j = to_json(spec, r);
    if (!c.out.empty())
    {
        auto os = open_out(c.out);
        os << j.dump(2) << '\n';
    }
    std::printf("%s\n", j.dump().c_str());
    return 0;
}

/// Value of --config (or --config=...) if present.
std::string find_config(int argc, char** argv)
{
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc)
            return argv[i + 1];
        if (std::strncmp(argv[i], "--config=", 9) == 0)
            return argv[i] + 9;
    }
    return {};
}

}  // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    try
    {
        if (const std::string path = find_config(argc, argv); !path.empty())
        {
            std::ifstream in(path);
            if (!in)
                throw InvalidParameters("cannot read config '" + path + "'");
            cfg = run_config_from_json(nlohmann::json::parse(in));
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        std::fprintf(stderr, "error: config: %s\n", e.what());
        return exit_validation;
    }
    catch (const InvalidParameters& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }

    CLI::App app{"Explosive recursive trees with fitness: growth, CMJ simulation, series and phase tools"};
    app.require_subcommand(1);
    std::string config_path;
    bool echo = false;
    app.add_option("--config", config_path, "flat JSON config; flags override it");
    app.add_flag("--echo-config", echo, "print the resolved config as JSON and exit");

    app.add_option("--degree", cfg.degree, "power:p | logstretched:beta | polylog:sigma | table:v0,..,c,q");
    app.add_option("--fitness", cfg.fitness, "mixed[:gamma] | additive");
    app.add_option("--weights", cfg.weights,
                   "constant:w0 | pareto:alpha[,scale] | logstretchedexp:nu[,c] | stretchedexp:kappa[,c] | "
                   "powerlawplus:tau[,c] | twotype:alpha,coin");
    app.add_option("--law", cfg.law, "inter-birth law: exponential | gamma:k | beta:a,b | rayleigh");
    app.add_option("--n", cfg.n, "tree size");
    app.add_option("--births", cfg.births, "number of births");
    app.add_option("--time", cfg.time, "stop time (cmj)");
    app.add_option("--replicas", cfg.replicas, "independent replicas");
    app.add_option("--seed", cfg.seed, "64-bit seed; replica r uses stream (seed, r)");
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--samples", cfg.samples, "Monte Carlo samples per term");
    app.add_option("--tol", cfg.tol, "tail-sum tolerance");
    app.add_option("--series", cfg.series, "star | path | probe | tree");
    app.add_option("--lo", cfg.lo, "grid starts at n = 2^lo");
    app.add_option("--hi", cfg.hi, "grid ends at n = 2^hi");
    app.add_option("--c", cfg.c, "series constant");
    app.add_option("--tree", cfg.tree, "star:k | chain:k | mary:m,l | tuples separated by ';'");
    app.add_option("--anchor", cfg.anchor, "census anchor: all | hub");
    app.add_flag("--explosion", cfg.explosion, "estimate the explosion time (cmj)");
    app.add_option("--family", cfg.family, "phase family");
    app.add_option("--tail", cfg.tail, "weight tail override");
    app.add_option("--p", cfg.p);
    app.add_option("--alpha", cfg.alpha);
    app.add_option("--gamma", cfg.gamma);
    app.add_option("--beta", cfg.beta);
    app.add_option("--nu", cfg.nu);
    app.add_option("--kappa", cfg.kappa);
    app.add_option("--tau", cfg.tau);
    app.add_option("--tau-prime", cfg.tau_prime);
    app.add_option("--sigma", cfg.sigma);
    app.add_option("--a-lower", cfg.a_lower);
    app.add_option("--a-upper", cfg.a_upper);
    app.add_option("--x", cfg.x_axis, "grid axis param:min:max:steps");
    app.add_option("--y", cfg.y_axis, "grid axis param:min:max:steps");
    app.add_option("--trees", cfg.trees, "sub-trees for grid scans");
    app.add_option("--coin", cfg.coin, "probability of type 1 (counterexample)");
    app.add_option("--k-max", cfg.k_max, "length of the s sequence");
    app.add_option("--theta", cfg.theta, "star-like degree fraction");
    app.add_option("--depth", cfg.depth, "path-like depth threshold");
    app.add_option("--out", cfg.out, "primary output file");
    app.add_option("--hub-out", cfg.hub_out, "hub trajectory CSV (grow)");
    app.add_option("--svg", cfg.svg, "SVG rendering (phase grid)");

    for (const char* name : {"grow", "cmj", "series", "subtree", "phase", "counterexample"})
        app.add_subcommand(name)->fallthrough();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_usage;
    }
    cfg.subcommand = app.get_subcommands().front()->get_name();

    if (echo)
    {
        std::printf("%s\n", to_json(cfg).dump().c_str());
        return 0;
    }
    try
    {
        if (cfg.subcommand == "grow")
            return run_grow(cfg);
        if (cfg.subcommand == "cmj")
            return run_cmj(cfg);
        if (cfg.subcommand == "series")
            return run_series(cfg);
        if (cfg.subcommand == "subtree")
            return run_subtree(cfg);
        if (cfg.subcommand == "phase")
            return run_phase(cfg);
        return run_counterexample(cfg);
    }
    catch (const InvalidParameters& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }
    catch (const NotInStarPhase& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_validation;
    }
    catch (const std::exception& e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_runtime;
    }
}
