#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cpg/optimize.hpp"

namespace cpg {

void GaParams::validate() const {
    if (population < 2) throw ParameterError(fmt::format("population must be at least 2, got {}", population));
    if (generations < 1) throw ParameterError("generations must be at least 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
        throw ParameterError(fmt::format("crossover rate {} not in [0,1]", crossover_rate));
    }
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
        throw ParameterError(fmt::format("mutation rate {} not in [0,1]", mutation_rate));
    }
    if (tournament_size < 1) throw ParameterError("tournament size must be at least 1");
}

namespace {

struct Individual {
    Vector genes;
    double fitness = -std::numeric_limits<double>::infinity();
};

double sanitize(double f) { return std::isnan(f) ? -std::numeric_limits<double>::infinity() : f; }

const Individual& tournament(const std::vector<Individual>& pop, std::size_t size, Rng& rng) {
    const Individual* winner = &pop[rng.index(pop.size())];
    for (std::size_t k = 1; k < size; ++k) {
        const Individual& challenger = pop[rng.index(pop.size())];
        if (challenger.fitness > winner->fitness) winner = &challenger;
    }
    return *winner;
}

}  // namespace

OptimizationResult ga_optimize(const Objective& objective, const SearchBounds& bounds,
                               const GaParams& params, const ProgressSink& progress) {
    params.validate();
    if (bounds.size() == 0) throw ParameterError("search bounds are empty");
    Rng rng(params.seed);
    const std::size_t dim = bounds.size();

    OptimizationResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();

    std::vector<Individual> population(params.population);
    for (Individual& ind : population) {
        ind.genes.resize(dim);
        for (std::size_t i = 0; i < dim; ++i) ind.genes[i] = rng.uniform(bounds[i].lower, bounds[i].upper);
    }

    for (std::size_t gen = 0; gen < params.generations; ++gen) {
        if (gen > 0) {
            const auto elite = std::max_element(
                population.begin(), population.end(),
                [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; });
            std::vector<Individual> next;
            next.reserve(params.population);
            next.push_back(*elite);
            while (next.size() < params.population) {
                const Individual& a = tournament(population, params.tournament_size, rng);
                const Individual& b = tournament(population, params.tournament_size, rng);
                Individual child{a.genes};
                for (std::size_t i = 0; i < dim; ++i) {
                    if (rng.unit() < params.crossover_rate) child.genes[i] = b.genes[i];
                    if (rng.unit() < params.mutation_rate) {
                        const double sigma = mutation_sigma_fraction * (bounds[i].upper - bounds[i].lower);
                        child.genes[i] = std::clamp(child.genes[i] + rng.normal(0.0, sigma),
                                                    bounds[i].lower, bounds[i].upper);
                    }
                }
                next.push_back(std::move(child));
            }
            population = std::move(next);
        }

        double sum = 0.0;
        for (Individual& ind : population) {
            ind.fitness = sanitize(objective(ind.genes));
            ++result.evaluations;
            sum += ind.fitness;
            if (ind.fitness > result.best_fitness || result.best.empty()) {
                result.best_fitness = ind.fitness;
                result.best = ind.genes;
            }
        }
        HistoryPoint point{gen, result.best_fitness, sum / static_cast<double>(population.size())};
        result.history.push_back(point);
        if (progress) progress(point);
    }
    return result;
}

}  // namespace cpg
