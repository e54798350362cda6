#include "cpg/benchmarks.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace cpg {

double sphere(std::span<const double> x) {
    double sum = 0.0;
    for (double v : x) sum += v * v;
    return -sum;
}

double rosenbrock(std::span<const double> x) {
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        sum += 100.0 * a * a + b * b;
    }
    return -sum;
}

double rastrigin(std::span<const double> x) {
    double sum = 10.0 * static_cast<double>(x.size());
    for (double v : x) sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return -sum;
}

std::vector<BenchmarkFunction> benchmark_objectives(std::size_t dimension) {
    if (dimension == 0) throw ParameterError("benchmark dimension must be positive");
    return {
        {"sphere", sphere, SearchBounds::uniform(dimension, -5.0, 5.0)},
        {"rosenbrock", rosenbrock, SearchBounds::uniform(dimension, -5.0, 10.0)},
        {"rastrigin", rastrigin, SearchBounds::uniform(dimension, -5.12, 5.12)},
    };
}

BenchmarkFunction benchmark_objective(std::string_view name, std::size_t dimension) {
    for (BenchmarkFunction& f : benchmark_objectives(dimension)) {
        if (f.name == name) return f;
    }
    throw ParameterError(fmt::format("unknown benchmark function '{}'", name));
}

}  // namespace cpg
