#include "cpg/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cpg/benchmarks.hpp"

namespace cpg {

namespace fs = std::filesystem;

std::string_view optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::hs: return "hs";
        case OptimizerKind::ga: return "ga";
        case OptimizerKind::random: return "random";
    }
    return "?";
}

OptimizerKind parse_optimizer(std::string_view name) {
    if (name == "hs") return OptimizerKind::hs;
    if (name == "ga") return OptimizerKind::ga;
    if (name == "random") return OptimizerKind::random;
    throw ParameterError(fmt::format("unknown optimizer '{}' (hs|ga|random)", name));
}

void ExperimentConfig::validate() const {
    if (seeds.empty()) throw ParameterError("at least one seed is required");
    hs.validate();
    ga.validate();
    if (random_budget < 10) throw ParameterError(fmt::format("random budget {} < 10", random_budget));
    sim.validate();
    if (bench.dimension < 1) throw ParameterError("bench dimension must be at least 1");
    oscillate.params.validate();
    if (!(oscillate.duration > 0.0)) throw ParameterError("oscillate duration must be positive");
    if (!(oscillate.dt > 0.0 && oscillate.dt <= default_dt)) {
        throw ParameterError(fmt::format("oscillate dt {} not in (0, {}]", oscillate.dt, default_dt));
    }
}

std::size_t ExperimentConfig::budget(OptimizerKind kind) const {
    switch (kind) {
        case OptimizerKind::hs: return hs.hms + hs.ni;
        case OptimizerKind::ga: return ga.budget();
        case OptimizerKind::random: return random_budget;
    }
    return 0;
}

// ---------------------------------------------------------------------------------------
// Config files

ExperimentConfig experiment_config_from(const Json& doc, const std::string& origin) {
    const JsonReader in(doc, origin);
    // Manifest-only members are accepted and ignored.
    in.only({"optimizer", "seeds", "output_dir", "allow_unequal_budget", "hs", "ga", "random",
             "sim", "bounds", "bench", "oscillate", "evaluations", "best_fitness", "command"});

    ExperimentConfig c;
    const auto param = [&](const std::string& key, auto&& build) {
        try {
            build();
        } catch (const ParameterError& e) {
            throw ParseError(fmt::format("{}: {}", in.path(key), e.what()));
        }
    };
    param("optimizer", [&] { c.optimizer = parse_optimizer(in.text("optimizer", "hs")); });
    if (in.has("seeds")) {
        const Json& seeds = in.raw("seeds");
        if (!seeds.is_array()) throw ParseError(fmt::format("{}: expected an array", in.path("seeds")));
        c.seeds.clear();
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            if (!seeds[i].is_number_integer() || seeds[i].get<long long>() < 0) {
                throw ParseError(fmt::format("{}[{}]: expected a non-negative integer", in.path("seeds"), i));
            }
            c.seeds.push_back(seeds[i].get<std::uint64_t>());
        }
    }
    c.output_dir = in.text("output_dir", c.output_dir.string());
    c.allow_unequal_budget = in.flag("allow_unequal_budget", c.allow_unequal_budget);
    if (in.has("hs")) c.hs = hs_params_from(in.object("hs"));
    if (in.has("ga")) c.ga = ga_params_from(in.object("ga"));
    if (in.has("random")) {
        const JsonReader r = in.object("random");
        r.only({"budget"});
        c.random_budget = r.count("budget", c.random_budget);
    }
    if (in.has("sim")) c.sim = sim_config_from(in.object("sim"));
    if (in.has("bounds")) c.bounds = search_bounds_from(in.raw("bounds"), in.path("bounds"));
    if (in.has("bench")) {
        const JsonReader b = in.object("bench");
        b.only({"function", "dimension", "budget"});
        c.bench.function = b.text("function", c.bench.function);
        c.bench.dimension = b.count("dimension", c.bench.dimension);
        if (b.has("budget")) c.bench.budget = b.count("budget", 0);
    }
    if (in.has("oscillate")) {
        const JsonReader o = in.object("oscillate");
        o.only({"params", "initial", "duration", "dt"});
        if (o.has("params")) c.oscillate.params = oscillator_params_from(o.object("params"));
        if (o.has("initial")) {
            const JsonReader s = o.object("initial");
            s.only({"x1", "v1", "x2", "v2"});
            c.oscillate.initial = {s.number("x1", 0.0), s.number("v1", 0.0), s.number("x2", 0.0),
                                   s.number("v2", 0.0)};
        }
        c.oscillate.duration = o.number("duration", c.oscillate.duration);
        c.oscillate.dt = o.number("dt", c.oscillate.dt);
    }
    param("", [&] { c.validate(); });
    return c;
}

ExperimentConfig load_experiment_config(const fs::path& file) {
    return experiment_config_from(read_json_file(file), file.string());
}

Json to_json(const ExperimentConfig& c) {
    Json seeds = Json::array();
    for (std::uint64_t s : c.seeds) seeds.push_back(s);
    Json bench{{"function", c.bench.function}, {"dimension", c.bench.dimension}};
    if (c.bench.budget) bench["budget"] = *c.bench.budget;
    const OscillatorState& s0 = c.oscillate.initial;
    return Json{
        {"optimizer", optimizer_name(c.optimizer)},
        {"seeds", seeds},
        {"allow_unequal_budget", c.allow_unequal_budget},
        {"hs", to_json(c.hs)},
        {"ga", to_json(c.ga)},
        {"random", Json{{"budget", c.random_budget}}},
        {"sim", to_json(c.sim)},
        {"bounds", to_json(c.bounds)},
        {"bench", bench},
        {"oscillate",
         Json{{"params", to_json(c.oscillate.params)},
              {"initial", Json{{"x1", s0.x1}, {"v1", s0.v1}, {"x2", s0.x2}, {"v2", s0.v2}}},
              {"duration", c.oscillate.duration},
              {"dt", c.oscillate.dt}}},
    };
}

// ---------------------------------------------------------------------------------------
// Optimizer runs

namespace {

OptimizationResult run_optimizer(const Objective& objective, const SearchBounds& bounds,
                                 const ExperimentConfig& config, OptimizerKind kind,
                                 std::uint64_t seed) {
    switch (kind) {
        case OptimizerKind::hs: {
            HsParams p = config.hs;
            p.seed = seed;
            return hs_optimize(objective, bounds, p);
        }
        case OptimizerKind::ga: {
            GaParams p = config.ga;
            p.seed = seed;
            return ga_optimize(objective, bounds, p);
        }
        case OptimizerKind::random:
            return random_search(objective, bounds, config.random_budget, seed);
    }
    throw ParameterError("unknown optimizer");
}

void make_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError(fmt::format("{}: {}", dir.string(), ec.message()));
}

SeedRun write_seed_run(const ExperimentConfig& config, OptimizerKind kind, std::uint64_t seed,
                       const fs::path& root, std::ostream& log) {
    SeedRun run;
    run.seed = seed;
    run.optimizer = kind;
    run.directory = root / fmt::format("seed_{}", seed);
    run.result = optimize_gait(config, kind, seed);
    make_directory(run.directory);

    const Genome best = Genome::from(run.result.best);
    write_json_file(run.directory / "best_genome.json",
                    Json{{"genome", to_json(best)},
                         {"fitness", run.result.best_fitness},
                         {"optimizer", optimizer_name(kind)},
                         {"seed", seed},
                         {"tau_unit", tau_unit_name(config.sim.tau_unit)}});
    write_text_file(run.directory / "history.csv", history_csv(run.result, kind));

    ExperimentConfig single = config;
    single.optimizer = kind;
    single.seeds = {seed};
    single.hs.seed = seed;
    single.ga.seed = seed;
    Json manifest = to_json(single);
    manifest["command"] = "optimize";
    manifest["evaluations"] = run.result.evaluations;
    manifest["best_fitness"] = run.result.best_fitness;
    write_json_file(run.directory / "manifest.json", manifest);

    fmt::print(log, "{} seed {}: best fitness {:.6f} after {} evaluations -> {}\n",
               optimizer_name(kind), seed, run.result.best_fitness, run.result.evaluations,
               run.directory.string());
    return run;
}

}  // namespace

OptimizationResult optimize_gait(const ExperimentConfig& config, OptimizerKind kind,
                                 std::uint64_t seed) {
    config.validate();
    if (config.bounds.size() != genome_size) {
        throw ParameterError(fmt::format("gait bounds need {} genes, got {}", genome_size,
                                         config.bounds.size()));
    }
    return run_optimizer(gait_objective(config.sim, config.bounds), config.bounds, config, kind, seed);
}

std::string history_csv(const OptimizationResult& result, OptimizerKind kind) {
    std::string out = kind == OptimizerKind::ga ? "generation,best_fitness,mean_fitness\n"
                                                : "eval_index,best_fitness,mean_fitness\n";
    for (const HistoryPoint& p : result.history) {
        out += fmt::format("{},{},{}\n", p.index, p.best, p.mean);
    }
    return out;
}

std::vector<SeedRun> run_optimize(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    std::vector<SeedRun> runs;
    for (std::uint64_t seed : config.seeds) {
        runs.push_back(write_seed_run(config, config.optimizer, seed, config.output_dir, log));
    }
    return runs;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ParameterError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

CompareReport run_compare(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    CompareReport report;
    report.hs_budget = config.budget(OptimizerKind::hs);
    report.ga_budget = config.budget(OptimizerKind::ga);
    if (report.hs_budget != report.ga_budget && !config.allow_unequal_budget) {
        throw ParameterError(fmt::format(
            "unequal budgets: hs hms+ni = {}, ga population*generations = {} "
            "(pass --allow-unequal-budget to compare anyway)",
            report.hs_budget, report.ga_budget));
    }

    std::vector<double> hs_best, ga_best;
    for (std::uint64_t seed : config.seeds) {
        const SeedRun hs = write_seed_run(config, OptimizerKind::hs, seed, config.output_dir / "hs", log);
        const SeedRun ga = write_seed_run(config, OptimizerKind::ga, seed, config.output_dir / "ga", log);
        report.rows.push_back({seed, hs.result.best_fitness, ga.result.best_fitness});
        hs_best.push_back(hs.result.best_fitness);
        ga_best.push_back(ga.result.best_fitness);
        if (hs.result.best_fitness > ga.result.best_fitness) {
            ++report.hs_wins;
        } else if (hs.result.best_fitness < ga.result.best_fitness) {
            ++report.ga_wins;
        } else {
            ++report.ties;
        }
    }
    report.hs_median = median(hs_best);
    report.ga_median = median(ga_best);

    std::string csv = "seed,hs_best,ga_best,winner\n";
    for (const CompareRow& r : report.rows) {
        csv += fmt::format("{},{},{},{}\n", r.seed, r.hs_best, r.ga_best,
                           r.hs_best > r.ga_best ? "hs" : r.hs_best < r.ga_best ? "ga" : "tie");
    }
    write_text_file(config.output_dir / "compare.csv", csv);
    write_json_file(config.output_dir / "summary.json",
                    Json{{"seeds", report.rows.size()},
                         {"hs_budget", report.hs_budget},
                         {"ga_budget", report.ga_budget},
                         {"hs_median", report.hs_median},
                         {"ga_median", report.ga_median},
                         {"hs_wins", report.hs_wins},
                         {"ga_wins", report.ga_wins},
                         {"ties", report.ties}});
    fmt::print(log, "median best: hs {:.6f} ({} evals), ga {:.6f} ({} evals); wins hs {} ga {} ties {}\n",
               report.hs_median, report.hs_budget, report.ga_median, report.ga_budget,
               report.hs_wins, report.ga_wins, report.ties);
    return report;
}

// ---------------------------------------------------------------------------------------

SimResult run_trace(const Genome& genome, const ExperimentConfig& config, std::ostream& log) {
    config.sim.validate();
    SimResult result = trace(genome, config.sim, config.bounds);
    make_directory(config.output_dir);

    std::ostringstream trace_out;
    write_trace_csv(trace_out, *result.trace, config.sim.tick_rate);
    write_text_file(config.output_dir / "trace.csv", trace_out.str());

    std::ostringstream gait_out;
    write_gait_csv(gait_out, result.trace->frames, config.sim.dt());
    write_text_file(config.output_dir / "gait.csv", gait_out.str());

    Json summary = to_json(result);
    summary["sim"] = to_json(config.sim);
    summary["seed"] = config.sim.seed;
    summary["genome"] = to_json(genome);
    write_json_file(config.output_dir / "result.json", summary);

    fmt::print(log, "x={:.6f} fitness={:.6f} fell={}\n", result.x, result.fitness, result.fell);
    return result;
}

BenchReport run_bench(const ExperimentConfig& config, std::ostream& log) {
    config.validate();
    const BenchmarkFunction fn = benchmark_objective(config.bench.function, config.bench.dimension);
    ExperimentConfig c = config;
    if (const auto budget = config.bench.budget) {
        switch (config.optimizer) {
            case OptimizerKind::hs:
                if (*budget < c.hs.hms) {
                    throw ParameterError(fmt::format("budget {} below hms {}", *budget, c.hs.hms));
                }
                c.hs.ni = *budget - c.hs.hms;
                break;
            case OptimizerKind::ga:
                if (*budget % c.ga.population != 0 || *budget == 0) {
                    throw ParameterError(fmt::format("budget {} is not a positive multiple of population {}",
                                                     *budget, c.ga.population));
                }
                c.ga.generations = *budget / c.ga.population;
                break;
            case OptimizerKind::random: c.random_budget = *budget; break;
        }
    }
    c.validate();

    BenchReport report;
    report.function = fn.name;
    report.evaluations = c.budget(c.optimizer);
    std::vector<double> values;
    for (std::uint64_t seed : c.seeds) {
        const OptimizationResult r = run_optimizer(fn.objective, fn.bounds, c, c.optimizer, seed);
        report.best.emplace_back(seed, r.best_fitness);
        values.push_back(r.best_fitness);
    }
    report.median = median(values);

    make_directory(c.output_dir);
    write_text_file(c.output_dir / "bench.csv", bench_csv(report));
    fmt::print(log, "{} {}-d, {} on {} seeds x {} evals: median best {:.6g}\n", report.function,
               c.bench.dimension, optimizer_name(c.optimizer), c.seeds.size(), report.evaluations,
               report.median);
    return report;
}

std::string bench_csv(const BenchReport& report) {
    std::string out = "seed,best\n";
    for (const auto& [seed, best] : report.best) out += fmt::format("{},{}\n", seed, best);
    out += fmt::format("median,{}\n", report.median);
    return out;
}

OscillationReport run_oscillate(const ExperimentConfig& config, std::ostream& log) {
    const OscillateSettings& o = config.oscillate;
    o.params.validate();
    const auto series = simulate(o.params, o.initial, {}, o.duration, o.dt);
    make_directory(config.output_dir);
    std::ostringstream csv;
    write_oscillator_csv(csv, series, o.dt);
    write_text_file(config.output_dir / "oscillator.csv", csv.str());

    const OscillationReport report = analyze(series, o.dt);
    if (report.period) {
        fmt::print(log, "sustained={} cycles={} period={:.6f} amplitude={:.6f} phase={:.4f}\n",
                   report.sustained, report.cycles, *report.period, report.amplitude,
                   report.phase_difference);
    } else {
        fmt::print(log, "sustained=false cycles={} (not oscillating)\n", report.cycles);
    }
    return report;
}

}  // namespace cpg
