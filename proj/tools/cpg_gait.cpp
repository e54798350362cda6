// cpg-gait: command line front end for the experiment harness.
//
//   cpg-gait optimize  [--config f] [--seed n] [--out dir] [--optimizer hs|ga|random]
//   cpg-gait compare   [--config f] [--seed n] [--out dir] [--allow-unequal-budget]
//   cpg-gait trace     --genome f [--config f] [--out dir]
//   cpg-gait bench     [--config f] [--function name] [--dim d] [--budget n] [--seeds k]
//   cpg-gait oscillate [--config f] [--duration s] [--dt s] [--out dir]
//
// Exit status: 0 success, 2 invalid input, 1 runtime failure.

#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cpg/experiments.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> seed_count;
    std::string out;
    bool allow_unequal_budget = false;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config, "JSON config or run manifest")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "run this seed only (first seed with --seeds)");
    cmd->add_option("--seeds", o.seed_count, "number of consecutive seeds starting at --seed (default 1)");
    cmd->add_option("--out", o.out, "output directory");
    cmd->add_flag("--allow-unequal-budget", o.allow_unequal_budget,
                  "compare optimizers with different evaluation budgets");
}

cpg::ExperimentConfig resolve(const CommonOptions& o) {
    cpg::ExperimentConfig c = o.config.empty() ? cpg::ExperimentConfig{}
                                               : cpg::load_experiment_config(o.config);
    if (o.seed || o.seed_count) {
        const std::uint64_t first = o.seed.value_or(c.seeds.front());
        c.seeds.assign(o.seed_count.value_or(1), 0);
        std::iota(c.seeds.begin(), c.seeds.end(), first);
    }
    if (!o.out.empty()) c.output_dir = o.out;
    if (o.allow_unequal_budget) c.allow_unequal_budget = true;
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Matsuoka-oscillator gait synthesis with harmony search"};
    app.require_subcommand(1);

    CommonOptions opt;
    std::string optimizer;
    std::string genome_file;
    std::string function;
    std::optional<std::size_t> dimension, budget;
    std::optional<double> duration, dt;

    auto* optimize = app.add_subcommand("optimize", "evolve a gait; writes one directory per seed");
    add_common(optimize, opt);
    optimize->add_option("--optimizer", optimizer, "hs | ga | random");

    auto* compare = app.add_subcommand("compare", "HS against GA on the same seeds");
    add_common(compare, opt);

    auto* trace = app.add_subcommand("trace", "roll out a genome and export its trajectories");
    add_common(trace, opt);
    trace->add_option("--genome", genome_file, "genome JSON (e.g. best_genome.json)")
        ->required()
        ->check(CLI::ExistingFile);

    auto* bench = app.add_subcommand("bench", "optimizer on a benchmark function");
    add_common(bench, opt);
    bench->add_option("--optimizer", optimizer, "hs | ga | random");
    bench->add_option("--function", function, "sphere | rosenbrock | rastrigin");
    bench->add_option("--dim", dimension, "dimension");
    bench->add_option("--budget", budget, "objective evaluations per seed");

    auto* oscillate = app.add_subcommand("oscillate", "free-running oscillator to CSV");
    add_common(oscillate, opt);
    oscillate->add_option("--duration", duration, "seconds");
    oscillate->add_option("--dt", dt, "integration step, at most 0.02 s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        cpg::ExperimentConfig config = resolve(opt);
        if (!optimizer.empty()) config.optimizer = cpg::parse_optimizer(optimizer);
        if (!function.empty()) config.bench.function = function;
        if (dimension) config.bench.dimension = *dimension;
        if (budget) config.bench.budget = *budget;
        if (duration) config.oscillate.duration = *duration;
        if (dt) config.oscillate.dt = *dt;
        config.validate();

        if (*optimize) {
            cpg::run_optimize(config, std::cout);
        } else if (*compare) {
            cpg::run_compare(config, std::cout);
        } else if (*trace) {
            cpg::run_trace(cpg::load_genome(genome_file), config, std::cout);
        } else if (*bench) {
            cpg::run_bench(config, std::cout);
        } else if (*oscillate) {
            cpg::run_oscillate(config, std::cout);
        }
    } catch (const cpg::ParameterError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const cpg::ParseError& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}
