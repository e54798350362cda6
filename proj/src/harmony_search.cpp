#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cpg/optimize.hpp"

namespace cpg {

namespace {
constexpr double minus_infinity = -std::numeric_limits<double>::infinity();

double sanitize(double fitness) { return std::isnan(fitness) ? minus_infinity : fitness; }
}  // namespace

SearchBounds::SearchBounds(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
    if (intervals_.empty()) throw ParameterError("search bounds are empty");
    for (std::size_t i = 0; i < intervals_.size(); ++i) {
        const Interval& iv = intervals_[i];
        if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || !(iv.lower < iv.upper)) {
            throw ParameterError(fmt::format("bound {} must satisfy lower < upper, got [{}, {}]", i,
                                             iv.lower, iv.upper));
        }
    }
}

SearchBounds SearchBounds::uniform(std::size_t dimension, double lower, double upper) {
    return SearchBounds(std::vector<Interval>(dimension, Interval{lower, upper}));
}

SearchBounds SearchBounds::gait_defaults() {
    // c: [2, 4].
    return SearchBounds({
        {0.0, 25.0},     // tau1
        {0.0, 25.0},     // tau2
        {-5.0, 5.0},     // alpha
        {-5.0, 5.0},     // beta
        {-5.0, 5.0},     // gamma
        {2.0, 4.0},      // c
        {-4.0, 1.0},     // w11
        {-5.0, 0.0},     // w12
        {-95.0, 20.0},   // b1
        {-125.0, -5.0},  // b2
    });
}

bool SearchBounds::contains(std::span<const double> values) const {
    if (values.size() != intervals_.size()) return false;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= intervals_[i].lower && values[i] <= intervals_[i].upper)) return false;
    }
    return true;
}

void SearchBounds::check(std::span<const double> values) const {
    if (values.size() != intervals_.size()) {
        throw ParameterError(fmt::format("expected {} values, got {}", intervals_.size(), values.size()));
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= intervals_[i].lower && values[i] <= intervals_[i].upper)) {
            const std::string name = intervals_.size() == genome_size
                                         ? std::string(gene_name(i))
                                         : fmt::format("x{}", i);
            throw ParameterError(fmt::format("{}={} outside [{}, {}]", name, values[i],
                                             intervals_[i].lower, intervals_[i].upper));
        }
    }
}

std::string_view gene_name(Gene gene) { return gene_name(static_cast<std::size_t>(gene)); }

std::string_view gene_name(std::size_t index) {
    static constexpr std::array<std::string_view, genome_size> names{
        "tau1", "tau2", "alpha", "beta", "gamma", "c", "w11", "w12", "b1", "b2"};
    return index < names.size() ? names[index] : std::string_view{"?"};
}

Genome Genome::from(std::span<const double> values) {
    if (values.size() != genome_size) {
        throw ParameterError(fmt::format("genome needs {} values, got {}", genome_size, values.size()));
    }
    Genome g;
    std::copy(values.begin(), values.end(), g.values.begin());
    return g;
}

OscillatorParams Genome::oscillator(double tau_scale) const {
    OscillatorParams p;
    p.tau1 = (*this)[Gene::tau1] * tau_scale;
    p.tau2 = (*this)[Gene::tau2] * tau_scale;
    p.alpha = (*this)[Gene::alpha];
    p.beta = (*this)[Gene::beta];
    p.gamma = (*this)[Gene::gamma];
    p.c = (*this)[Gene::c];
    return p;
}

NetworkParams Genome::network() const {
    return {(*this)[Gene::w11], (*this)[Gene::w12], (*this)[Gene::b1], (*this)[Gene::b2]};
}

std::string_view pitch_mode_name(PitchMode mode) {
    return mode == PitchMode::full_range ? "full_range" : "neighborhood";
}

PitchMode parse_pitch_mode(std::string_view name) {
    if (name == "full_range") return PitchMode::full_range;
    if (name == "neighborhood") return PitchMode::neighborhood;
    throw ParameterError(fmt::format("unknown pitch mode '{}'", name));
}

void HsParams::validate() const {
    if (hms < 2) throw ParameterError(fmt::format("hms must be at least 2, got {}", hms));
    if (!(hmcr >= 0.0 && hmcr <= 1.0)) throw ParameterError(fmt::format("hmcr {} not in [0,1]", hmcr));
    if (!(par >= 0.0 && par <= 1.0)) throw ParameterError(fmt::format("par {} not in [0,1]", par));
    if (!(bandwidth > 0.0 && bandwidth <= 1.0)) {
        throw ParameterError(fmt::format("bandwidth {} not in (0,1]", bandwidth));
    }
}

HarmonyMemory::HarmonyMemory(std::vector<Vector> rows)
    : rows_(std::move(rows)), fitness_(rows_.size(), minus_infinity) {
    if (rows_.size() < 2) throw ParameterError("harmony memory needs at least two rows");
    for (const Vector& r : rows_) {
        if (r.size() != rows_.front().size() || r.empty()) {
            throw ParameterError("harmony memory rows must share a non-zero dimension");
        }
    }
}

std::size_t HarmonyMemory::best_index() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < fitness_.size(); ++i) {
        if (fitness_[i] > fitness_[best]) best = i;
    }
    return best;
}

double HarmonyMemory::mean_fitness() const {
    double sum = 0.0;
    for (double f : fitness_) sum += f;
    return sum / static_cast<double>(fitness_.size());
}

void HarmonyMemory::set_fitness(std::size_t i, double fitness) {
    fitness_.at(i) = sanitize(fitness);
    refresh_worst();
}

bool HarmonyMemory::update(std::span<const double> candidate, double fitness) {
    if (candidate.size() != dimension()) {
        throw ParameterError(fmt::format("candidate has {} components, memory has {}",
                                         candidate.size(), dimension()));
    }
    fitness = sanitize(fitness);
    if (!(fitness > fitness_[worst_])) return false;
    rows_[worst_].assign(candidate.begin(), candidate.end());
    fitness_[worst_] = fitness;
    refresh_worst();
    return true;
}

void HarmonyMemory::refresh_worst() {
    worst_ = 0;
    for (std::size_t i = 1; i < fitness_.size(); ++i) {
        if (fitness_[i] < fitness_[worst_]) worst_ = i;
    }
}

HarmonyMemory init_memory(const SearchBounds& bounds, std::size_t hms, Rng& rng) {
    if (bounds.size() == 0) throw ParameterError("search bounds are empty");
    std::vector<Vector> rows(hms, Vector(bounds.size()));
    for (Vector& row : rows) {
        for (std::size_t i = 0; i < bounds.size(); ++i) {
            row[i] = rng.uniform(bounds[i].lower, bounds[i].upper);
        }
    }
    return HarmonyMemory(std::move(rows));
}

Vector improvise(const HarmonyMemory& hm, const SearchBounds& bounds, double hmcr, double par,
                 Rng& rng, PitchMode mode, double bandwidth) {
    Vector harmony(bounds.size());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const Interval& iv = bounds[i];
        if (rng.unit() < hmcr) {
            double value = hm.row(rng.index(hm.size()))[i];
            if (rng.unit() < par) {
                if (mode == PitchMode::full_range) {
                    value = rng.uniform(iv.lower, iv.upper);
                } else {
                    const double width = bandwidth * (iv.upper - iv.lower);
                    value = std::clamp(value + width * rng.uniform(-1.0, 1.0), iv.lower, iv.upper);
                }
            }
            harmony[i] = value;
        } else {
            harmony[i] = rng.uniform(iv.lower, iv.upper);
        }
    }
    return harmony;
}

OptimizationResult hs_optimize(const Objective& objective, const SearchBounds& bounds,
                               const HsParams& params, const ProgressSink& progress) {
    params.validate();
    Rng rng(params.seed);
    HarmonyMemory hm = init_memory(bounds, params.hms, rng);

    OptimizationResult result;
    for (std::size_t i = 0; i < hm.size(); ++i) {
        hm.set_fitness(i, objective(hm.row(i)));
        ++result.evaluations;
    }
    auto record = [&] {
        HistoryPoint point{result.evaluations, hm.fitness(hm.best_index()), hm.mean_fitness()};
        result.history.push_back(point);
        if (progress) progress(point);
    };
    record();

    for (std::size_t k = 0; k < params.ni; ++k) {
        const Vector candidate =
            improvise(hm, bounds, params.hmcr, params.par, rng, params.pitch_mode, params.bandwidth);
        const double fitness = objective(candidate);
        ++result.evaluations;
        hm.update(candidate, fitness);
        record();
    }

    // The best row is never the one replaced, so the memory's best is the best ever seen.
    const std::size_t best = hm.best_index();
    result.best = hm.row(best);
    result.best_fitness = hm.fitness(best);
    return result;
}

OptimizationResult random_search(const Objective& objective, const SearchBounds& bounds,
                                 std::size_t budget, std::uint64_t seed,
                                 const ProgressSink& progress) {
    HsParams params;
    params.hms = 10;
    if (budget < params.hms) throw ParameterError(fmt::format("random search budget {} < 10", budget));
    params.ni = budget - params.hms;
    params.hmcr = 0.0;
    params.par = 0.0;
    params.seed = seed;
    return hs_optimize(objective, bounds, params, progress);
}

}  // namespace cpg
