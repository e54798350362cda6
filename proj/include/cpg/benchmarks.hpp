#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cpg/optimize.hpp"

namespace cpg {

/// Classic minimisation test function, negated so that the optimizers maximise it.
struct BenchmarkFunction {
    std::string name;
    Objective objective;
    SearchBounds bounds;
};

/// sphere:     -sum x_i^2,                                  x in [-5, 5]^d
/// rosenbrock: -sum 100 (x_{i+1} - x_i^2)^2 + (1 - x_i)^2,   x in [-5, 10]^d
/// rastrigin:  -(10 d + sum x_i^2 - 10 cos(2 pi x_i)),      x in [-5.12, 5.12]^d
/// All have a global maximum of 0.
std::vector<BenchmarkFunction> benchmark_objectives(std::size_t dimension);

/// Throws ParameterError for an unknown name.
BenchmarkFunction benchmark_objective(std::string_view name, std::size_t dimension);

double sphere(std::span<const double> x);
double rosenbrock(std::span<const double> x);
double rastrigin(std::span<const double> x);

}  // namespace cpg
