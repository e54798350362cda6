#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cpg {

/// SplitMix64 finaliser; used to derive independent child seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded generator shared by the optimizers and the noisy simulator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix_seed(seed)) {}

    /// Uniform in [0, 1).
    double unit() { return std::generate_canonical<double, 53>(engine_); }
    double uniform(double lower, double upper) { return lower + (upper - lower) * unit(); }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace cpg
