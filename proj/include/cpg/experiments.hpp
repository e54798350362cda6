#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpg/optimize.hpp"
#include "cpg/serialization.hpp"
#include "cpg/simulator.hpp"

namespace cpg {

enum class OptimizerKind { hs, ga, random };

std::string_view optimizer_name(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

/// Settings of the `bench` subcommand.
struct BenchSettings {
    std::string function = "sphere";
    std::size_t dimension = 10;
    /// Total objective evaluations; empty keeps the optimizer block's own budget.
    std::optional<std::size_t> budget;
};

/// Settings of the `oscillate` subcommand.
struct OscillateSettings {
    OscillatorParams params{};
    OscillatorState initial{0.1, 0.0, 0.0, 0.0};
    double duration = 60.0;
    double dt = default_dt;
};

/// Everything one config file can hold. Missing blocks keep their defaults.
struct ExperimentConfig {
    OptimizerKind optimizer = OptimizerKind::hs;
    HsParams hs{};
    GaParams ga{};
    std::size_t random_budget = 760;
    SimConfig sim{};
    SearchBounds bounds = SearchBounds::gait_defaults();
    std::vector<std::uint64_t> seeds{1};
    std::filesystem::path output_dir = "runs";
    bool allow_unequal_budget = false;
    BenchSettings bench{};
    OscillateSettings oscillate{};

    /// Throws ParameterError.
    void validate() const;
    /// Objective evaluations of the selected optimizer for one seed.
    std::size_t budget(OptimizerKind kind) const;
};

/// Parses a config (or a run manifest, which is a config plus result fields).
ExperimentConfig experiment_config_from(const Json& doc, const std::string& origin = "");
ExperimentConfig load_experiment_config(const std::filesystem::path& file);
/// Full config echo; `experiment_config_from(to_json(c))` reproduces c except output_dir.
Json to_json(const ExperimentConfig& c);

/// Outcome of one optimizer run on one seed.
struct SeedRun {
    std::uint64_t seed = 0;
    OptimizerKind optimizer = OptimizerKind::hs;
    OptimizationResult result;
    std::filesystem::path directory;
};

/// Runs one seed against the gait objective without touching the filesystem.
OptimizationResult optimize_gait(const ExperimentConfig& config, OptimizerKind kind,
                                 std::uint64_t seed);

/// `eval_index,best_fitness,mean_fitness` (hs, random) or `generation,...` (ga).
std::string history_csv(const OptimizationResult& result, OptimizerKind kind);

/// One subdirectory `seed_<n>` per seed under output_dir holding best_genome.json,
/// history.csv and manifest.json. The manifest re-runs that seed alone.
std::vector<SeedRun> run_optimize(const ExperimentConfig& config, std::ostream& log);

struct CompareRow {
    std::uint64_t seed;
    double hs_best;
    double ga_best;
};

struct CompareReport {
    std::vector<CompareRow> rows;
    double hs_median = 0.0;
    double ga_median = 0.0;
    std::size_t hs_wins = 0;  ///< hs_best > ga_best
    std::size_t ga_wins = 0;
    std::size_t ties = 0;
    std::size_t hs_budget = 0;
    std::size_t ga_budget = 0;
};

/// HS and GA on the same seeds. Budgets must match unless allow_unequal_budget is set.
/// Writes hs/ and ga/ run directories plus compare.csv and summary.json under output_dir.
CompareReport run_compare(const ExperimentConfig& config, std::ostream& log);

/// Rollout with trace retention; writes trace.csv, gait.csv and result.json under
/// output_dir and prints a summary line.
SimResult run_trace(const Genome& genome, const ExperimentConfig& config, std::ostream& log);

struct BenchReport {
    std::string function;
    std::vector<std::pair<std::uint64_t, double>> best;  ///< (seed, best value)
    double median = 0.0;
    std::size_t evaluations = 0;  ///< per seed
};

/// Optimizer on a benchmark function; writes bench.csv (`seed,best` rows, then `median,<v>`).
BenchReport run_bench(const ExperimentConfig& config, std::ostream& log);
std::string bench_csv(const BenchReport& report);

/// Raw oscillator run; writes oscillator.csv and prints the cycle analysis.
OscillationReport run_oscillate(const ExperimentConfig& config, std::ostream& log);

double median(std::vector<double> values);

}  // namespace cpg
