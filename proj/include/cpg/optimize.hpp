#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cpg/controller.hpp"
#include "cpg/oscillator.hpp"
#include "cpg/random.hpp"

namespace cpg {

using Vector = std::vector<double>;

/// Fitness to maximise.
using Objective = std::function<double(std::span<const double>)>;

struct Interval {
    double lower;
    double upper;
};

/// Per-variable box constraints.
class SearchBounds {
public:
    SearchBounds() = default;
    /// Throws ParameterError unless lower < upper (both finite) for every entry.
    explicit SearchBounds(std::vector<Interval> intervals);

    /// Box of `dimension` copies of [lower, upper].
    static SearchBounds uniform(std::size_t dimension, double lower, double upper);
    /// Initialisation ranges for the ten gait parameters.
    static SearchBounds gait_defaults();

    std::size_t size() const { return intervals_.size(); }
    const Interval& operator[](std::size_t i) const { return intervals_[i]; }
    const std::vector<Interval>& intervals() const { return intervals_; }
    bool contains(std::span<const double> values) const;
    /// Throws ParameterError naming the first offending component.
    void check(std::span<const double> values) const;

private:
    std::vector<Interval> intervals_;
};

inline constexpr std::size_t genome_size = 10;

/// Ten gait parameters in harmony-vector order.
enum class Gene { tau1 = 0, tau2, alpha, beta, gamma, c, w11, w12, b1, b2 };

std::string_view gene_name(Gene gene);
std::string_view gene_name(std::size_t index);

/// Harmony / chromosome vector: oscillator constants followed by network weights and biases.
struct Genome {
    std::array<double, genome_size> values{};

    static Genome from(std::span<const double> values);
    double operator[](Gene g) const { return values[static_cast<std::size_t>(g)]; }
    double& operator[](Gene g) { return values[static_cast<std::size_t>(g)]; }

    /// Oscillator constants; the two time-constant genes are multiplied by `tau_scale`
    /// (e.g. seconds per tick when they are expressed in simulation steps).
    OscillatorParams oscillator(double tau_scale = 1.0) const;
    NetworkParams network() const;
    std::span<const double> span() const { return values; }
};

struct HistoryPoint {
    std::size_t index;   ///< evaluation count (HS) or generation (GA)
    double best;         ///< best fitness seen so far
    double mean;         ///< mean fitness of the memory / population
};

using ProgressSink = std::function<void(const HistoryPoint&)>;

struct OptimizationResult {
    Vector best;
    double best_fitness = 0.0;
    std::vector<HistoryPoint> history;
    std::size_t evaluations = 0;
};

// ---------------------------------------------------------------------------------------
// Harmony search

enum class PitchMode {
    full_range,    ///< pitch adjustment redraws uniformly from the whole interval
    neighborhood,  ///< pitch adjustment moves by +-bandwidth*(upper-lower)
};

std::string_view pitch_mode_name(PitchMode mode);
PitchMode parse_pitch_mode(std::string_view name);

struct HsParams {
    std::size_t hms = 10;
    double hmcr = 0.9;
    double par = 0.3;
    std::size_t ni = 750;
    std::uint64_t seed = 1;
    PitchMode pitch_mode = PitchMode::full_range;
    double bandwidth = 0.01;  ///< fraction of the range, neighborhood mode only

    void validate() const;
};

/// The harmony memory: hms solution vectors plus their fitness, with the worst row cached.
class HarmonyMemory {
public:
    HarmonyMemory(std::vector<Vector> rows);

    std::size_t size() const { return rows_.size(); }
    std::size_t dimension() const { return rows_.front().size(); }
    const Vector& row(std::size_t i) const { return rows_[i]; }
    double fitness(std::size_t i) const { return fitness_[i]; }
    std::span<const double> fitness() const { return fitness_; }

    /// Row with minimal fitness, lowest index on ties.
    std::size_t worst_index() const { return worst_; }
    /// Row with maximal fitness, lowest index on ties.
    std::size_t best_index() const;
    double mean_fitness() const;

    /// Stores an evaluated fitness for row i (initialisation); NaN is stored as -inf.
    void set_fitness(std::size_t i, double fitness);

    /// Replaces the worst row if `fitness` is strictly better. NaN counts as -inf.
    bool update(std::span<const double> candidate, double fitness);

private:
    void refresh_worst();

    std::vector<Vector> rows_;
    std::vector<double> fitness_;
    std::size_t worst_ = 0;
};

/// hms vectors drawn uniformly from the bounds; fitness set to -inf.
HarmonyMemory init_memory(const SearchBounds& bounds, std::size_t hms, Rng& rng);

/// One improvisation: per component, memory consideration with probability hmcr (followed by
/// pitch adjustment with probability par) or a uniform draw otherwise.
Vector improvise(const HarmonyMemory& hm, const SearchBounds& bounds, double hmcr, double par,
                 Rng& rng, PitchMode mode = PitchMode::full_range, double bandwidth = 0.01);

/// Harmony search: hms initial evaluations followed by ni improvisations.
OptimizationResult hs_optimize(const Objective& objective, const SearchBounds& bounds,
                               const HsParams& params, const ProgressSink& progress = {});

/// Uniform random search with the same budget accounting as HS (hmcr = 0).
OptimizationResult random_search(const Objective& objective, const SearchBounds& bounds,
                                 std::size_t budget, std::uint64_t seed,
                                 const ProgressSink& progress = {});

// ---------------------------------------------------------------------------------------
// Genetic algorithm baseline

struct GaParams {
    std::size_t population = 200;
    std::size_t generations = 10;
    double crossover_rate = 0.5;  ///< per-gene probability of taking the second parent's gene
    double mutation_rate = 0.1;   ///< per-gene probability of Gaussian mutation
    std::size_t tournament_size = 3;
    std::uint64_t seed = 1;

    void validate() const;
    std::size_t budget() const { return population * generations; }
};

/// Relative mutation step: sigma = 5% of each variable's range.
inline constexpr double mutation_sigma_fraction = 0.05;

/// Generational GA with tournament selection, uniform crossover, clipped Gaussian mutation
/// and one elite. Evaluates exactly population * generations candidates.
OptimizationResult ga_optimize(const Objective& objective, const SearchBounds& bounds,
                               const GaParams& params, const ProgressSink& progress = {});

}  // namespace cpg
