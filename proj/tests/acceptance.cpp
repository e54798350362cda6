// Acceptance suite: one PASS/FAIL line per criterion. Exit status is non-zero if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/format.h>

#include "cpg/benchmarks.hpp"
#include "cpg/controller.hpp"
#include "cpg/experiments.hpp"
#include "cpg/optimize.hpp"
#include "cpg/oscillator.hpp"
#include "cpg/simulator.hpp"

namespace fs = std::filesystem;
using namespace cpg;

namespace {

// Tolerances and thresholds, pinned.
constexpr double c1_tolerance = 1e-4;
constexpr double c1_order_ratio = 8.0;
constexpr double c1_seconds = 1.0;
constexpr double c2_phase_lo = 0.4, c2_phase_hi = 0.6;
constexpr double c2_period_rel = 0.02;
constexpr std::size_t c2_cycles = 10;
constexpr double c2_seconds = 5.0;
constexpr std::size_t c3_genomes = 10000;
constexpr std::size_t c3_ticks = 100;
constexpr double c3_seconds = 10.0;
constexpr double c4_tolerance = 0.01;
constexpr std::size_t c4_improvisations = 100000;
constexpr std::size_t c4_sequences = 10000;
constexpr double c5_threshold = -0.1;
constexpr double c5_fraction = 0.9;
constexpr std::size_t c5_seeds = 20;
constexpr std::size_t c5_budget = 5010;
constexpr double c5_seconds = 30.0;
constexpr double c6_tolerance = 1e-12;
constexpr std::size_t c7_seeds = 10;
constexpr std::size_t c7_walkers = 7;
constexpr double c7_min_x = 0.5;
constexpr std::size_t c7_wins = 6;
constexpr double c7_seconds = 600.0;
constexpr double c8_autocorr = 0.9;
constexpr double c8_rms_deg = 2.0;
constexpr double c8_torso_p2p = 0.001;

int failures = 0;

void report(int id, bool pass, const std::string& title, const std::string& detail) {
    if (!pass) ++failures;
    fmt::print("criterion {} [{}] {}: {}\n", id, pass ? "PASS" : "FAIL", title, detail);
    std::cout.flush();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------------------------------
// Oscillator oracle: an array-based RK4 written directly from the closed-form equations.

using Vec4 = std::array<double, 4>;  // x1, v1, x2, v2

Vec4 oracle_rate(const Vec4& s, const OscillatorParams& p) {
    const auto pos = [](double v) { return v > 0 ? v : 0; };
    return {(p.c - s[0] - p.beta * s[1] - p.gamma * pos(s[2])) / p.tau1,
            (pos(s[0]) - s[1]) / p.tau2,
            (p.c - s[2] - p.beta * s[3] - p.gamma * pos(s[0])) / p.tau1,
            (pos(s[2]) - s[3]) / p.tau2};
}

Vec4 oracle_run(const OscillatorParams& p, Vec4 s, double duration, double h,
                std::vector<Vec4>* samples = nullptr) {
    const auto n = static_cast<std::size_t>(std::llround(duration / h));
    const auto axpy = [](const Vec4& a, const Vec4& b, double k) {
        return Vec4{a[0] + k * b[0], a[1] + k * b[1], a[2] + k * b[2], a[3] + k * b[3]};
    };
    if (samples) samples->push_back(s);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec4 k1 = oracle_rate(s, p);
        const Vec4 k2 = oracle_rate(axpy(s, k1, h / 2), p);
        const Vec4 k3 = oracle_rate(axpy(s, k2, h / 2), p);
        const Vec4 k4 = oracle_rate(axpy(s, k3, h), p);
        for (int j = 0; j < 4; ++j) s[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
        if (samples) samples->push_back(s);
    }
    return s;
}

double max_diff(const OscillatorState& a, const Vec4& b) {
    return std::max({std::abs(a.x1 - b[0]), std::abs(a.v1 - b[1]), std::abs(a.x2 - b[2]),
                     std::abs(a.v2 - b[3])});
}

// Upward zero crossings of y1 - y2 with linear interpolation (times in seconds).
std::vector<double> oracle_crossings(const std::vector<Vec4>& s, double h, std::size_t from) {
    std::vector<double> out;
    const auto d = [&](std::size_t i) { return std::max(s[i][0], 0.0) - std::max(s[i][2], 0.0); };
    for (std::size_t i = std::max<std::size_t>(from, 1); i < s.size(); ++i) {
        const double a = d(i - 1), b = d(i);
        if (a < 0 && b >= 0) out.push_back((static_cast<double>(i - 1) + a / (a - b)) * h);
    }
    return out;
}

// Max-norm distance over the whole trajectory to an oracle run at dt/100.
double trajectory_error(const OscillatorParams& p, const Vec4& init, double horizon, double dt) {
    const auto series = simulate(p, {init[0], init[1], init[2], init[3]}, {}, horizon, dt);
    std::vector<Vec4> fine;
    oracle_run(p, init, horizon, dt / 100, &fine);
    double worst = 0.0;
    for (std::size_t k = 0; k < series.size(); ++k) worst = std::max(worst, max_diff(series[k], fine[100 * k]));
    return worst;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const OscillatorParams p;
    const Vec4 init{0.1, 0.0, 0.0, 0.0};
    const double horizon = 15.0;
    const double e1 = trajectory_error(p, init, horizon, 0.02);
    const double e2 = trajectory_error(p, init, horizon, 0.01);
    const double ratio = e1 / e2;
    const double elapsed = seconds_since(t0);
    report(1, e1 <= c1_tolerance && ratio >= c1_order_ratio && elapsed < c1_seconds,
           "oscillator correctness",
           fmt::format("max-norm error {:.3e} (<= {:.0e}), halving ratio {:.2f} (>= {}), {:.3f} s",
                       e1, c1_tolerance, ratio, c1_order_ratio, elapsed));
}

void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    const OscillatorParams p;
    const double duration = 80.0, dt = 0.02, h = 0.0002;
    const auto series = simulate(p, {0.1, 0.0, 0.0, 0.0}, {}, duration, dt);
    const OscillationReport r = analyze(series, dt);

    std::vector<Vec4> fine;
    oracle_run(p, {0.1, 0.0, 0.0, 0.0}, duration, h, &fine);
    const auto cross = oracle_crossings(fine, h, static_cast<std::size_t>(0.2 * fine.size()));
    const double oracle_period =
        cross.size() >= 2 ? (cross.back() - cross.front()) / static_cast<double>(cross.size() - 1) : NAN;

    bool stable = r.cycle_periods.size() >= c2_cycles;
    double worst = 0.0;
    if (stable) {
        for (std::size_t i = r.cycle_periods.size() - c2_cycles; i < r.cycle_periods.size(); ++i) {
            worst = std::max(worst, std::abs(r.cycle_periods[i] - oracle_period) / oracle_period);
        }
        stable = worst <= c2_period_rel;
    }
    const bool phase_ok = r.phase_difference >= c2_phase_lo && r.phase_difference <= c2_phase_hi;
    const double elapsed = seconds_since(t0);
    report(2, r.sustained && phase_ok && stable && elapsed < c2_seconds,
           "sustained antiphase oscillation",
           fmt::format("sustained={} phase={:.4f} period={:.4f} s vs oracle {:.4f} s, worst of last {} "
                       "cycles {:.3f}% (<= 2%), {:.2f} s",
                       r.sustained, r.phase_difference, r.period.value_or(NAN), oracle_period,
                       c2_cycles, 100 * worst, elapsed));
}

JointAngles mirror(const JointAngles& a) {
    return {a.hip_r, a.knee_r, a.ankle_r, a.hip_l, a.knee_l, a.ankle_l};
}

void criterion_3() {
    const auto t0 = std::chrono::steady_clock::now();
    const SearchBounds bounds = SearchBounds::gait_defaults();
    Rng rng(2024);
    std::size_t frames = 0, out_of_range = 0, parallel_checked = 0, parallel_bad = 0, swap_bad = 0;
    const ControllerConfig cfg{};
    for (std::size_t g = 0; g < c3_genomes; ++g) {
        Genome genome;
        for (std::size_t i = 0; i < genome_size; ++i) {
            genome.values[i] = rng.uniform(bounds[i].lower, bounds[i].upper);
        }
        OscillatorParams osc = genome.oscillator(1.0 / 50.0);
        if (osc.tau1 <= min_time_constant || osc.tau2 <= min_time_constant) continue;
        const NetworkParams net = genome.network();
        Controller ctl(osc, net, cfg);
        for (std::size_t k = 0; k < c3_ticks; ++k) {
            const OscillatorState before = ctl.state();
            GaitFrame frame = GaitFrame::neutral();
            try {
                frame = ctl.tick();
            } catch (const DivergenceError&) {
                break;
            }
            ++frames;
            for (std::size_t j = 0; j < joint_count; ++j) {
                const auto joint = static_cast<Joint>(j);
                const JointLimit lim = joint_limit(joint);
                if (!(frame[joint] >= lim.lower && frame[joint] <= lim.upper)) ++out_of_range;
            }
            // Foot-parallel identity on the pre-clamp commands of legs whose hip and knee are
            // inside their ranges (the ankle is then exactly -(hip + knee)).
            const JointAngles raw = joint_commands(ctl.state(), net, cfg);
            for (auto [h, k, a] : {std::array{raw.hip_l, raw.knee_l, raw.ankle_l},
                                    std::array{raw.hip_r, raw.knee_r, raw.ankle_r}}) {
                if (h >= hip_limit.lower && h <= hip_limit.upper && k >= knee_limit.lower &&
                    k <= knee_limit.upper) {
                    ++parallel_checked;
                    if (h + k + a != 0.0) ++parallel_bad;
                }
            }
            // Bilateral swap: exchanging the oscillator neurons exchanges the legs exactly.
            if (!(joint_commands(before.swapped(), net, cfg) == mirror(joint_commands(before, net, cfg)))) {
                ++swap_bad;
            }
        }
    }
    const double elapsed = seconds_since(t0);
    report(3, out_of_range == 0 && parallel_bad == 0 && parallel_checked > 0 && swap_bad == 0 &&
                  elapsed < c3_seconds,
           "controller invariants",
           fmt::format("{} frames from {} genomes: {} out of range, foot-parallel {}/{} exact, "
                       "{} swap mismatches, {:.2f} s",
                       frames, c3_genomes, out_of_range, parallel_checked - parallel_bad,
                       parallel_checked, swap_bad, elapsed));
}

void criterion_4() {
    // Improvisation proportions against a sentinel-marked memory.
    const std::size_t dim = 10, hms = 10;
    const SearchBounds bounds = SearchBounds::uniform(dim, 0.0, 1.0);
    std::vector<Vector> rows(hms, Vector(dim));
    for (std::size_t r = 0; r < hms; ++r) {
        for (std::size_t i = 0; i < dim; ++i) rows[r][i] = 0.5 + 1e-9 * static_cast<double>(r * dim + i + 1);
    }
    const HarmonyMemory hm(rows);
    Rng rng(7);
    std::size_t from_memory = 0, total = 0;
    for (std::size_t n = 0; n < c4_improvisations; ++n) {
        const Vector v = improvise(hm, bounds, 0.9, 0.3, rng);
        for (std::size_t i = 0; i < dim; ++i) {
            ++total;
            for (std::size_t r = 0; r < hms; ++r) {
                if (v[i] == rows[r][i]) {
                    ++from_memory;
                    break;
                }
            }
        }
    }
    const double fraction = static_cast<double>(from_memory) / static_cast<double>(total);
    const bool proportion_ok = std::abs(fraction - 0.9 * 0.7) <= c4_tolerance;

    // Memory update against a linear-scan oracle.
    Rng seq(11);
    std::size_t mismatches = 0;
    for (std::size_t s = 0; s < c4_sequences; ++s) {
        const std::size_t size = 2 + seq.index(8);
        std::vector<Vector> init(size, Vector{0.0});
        for (std::size_t r = 0; r < size; ++r) init[r][0] = static_cast<double>(r);
        HarmonyMemory mem(init);
        std::vector<double> fit(size);
        std::vector<double> val(size);
        for (std::size_t r = 0; r < size; ++r) {
            fit[r] = static_cast<double>(seq.index(5));
            val[r] = static_cast<double>(r);
            mem.set_fitness(r, fit[r]);
        }
        for (std::size_t u = 0; u < 20; ++u) {
            double f = static_cast<double>(seq.index(7));
            if (seq.index(10) == 0) f = NAN;
            const double candidate = 100.0 + static_cast<double>(u);
            std::size_t worst = 0;
            for (std::size_t r = 1; r < size; ++r) {
                if (fit[r] < fit[worst]) worst = r;
            }
            const bool expect = !std::isnan(f) && f > fit[worst];
            if (expect) {
                fit[worst] = f;
                val[worst] = candidate;
            }
            const bool got = mem.update(Vector{candidate}, f);
            std::size_t oracle_worst = 0;
            for (std::size_t r = 1; r < size; ++r) {
                if (fit[r] < fit[oracle_worst]) oracle_worst = r;
            }
            bool same = got == expect && mem.worst_index() == oracle_worst;
            for (std::size_t r = 0; r < size; ++r) {
                same = same && mem.fitness(r) == fit[r] && mem.row(r)[0] == val[r];
            }
            if (!same) ++mismatches;
        }
    }

    // Budget exactness.
    bool budget_ok = true;
    for (auto [h, ni] : {std::pair<std::size_t, std::size_t>{2, 0}, {5, 10}, {10, 750}, {17, 33}}) {
        std::size_t calls = 0;
        HsParams p;
        p.hms = h;
        p.ni = ni;
        const auto r = hs_optimize([&](std::span<const double> x) { ++calls; return sphere(x); },
                                   SearchBounds::uniform(3, -1, 1), p);
        budget_ok = budget_ok && calls == h + ni && r.evaluations == h + ni;
    }
    report(4, proportion_ok && mismatches == 0 && budget_ok, "harmony search mechanics",
           fmt::format("memory-sourced fraction {:.4f} (0.63 +- {}), {} update mismatches over {} "
                       "sequences, budget exact: {}",
                       fraction, c4_tolerance, mismatches, c4_sequences, budget_ok));
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    const BenchmarkFunction fn = benchmark_objective("sphere", 10);
    HsParams p;
    p.hms = 10;
    p.hmcr = 0.9;
    p.par = 0.3;
    p.ni = c5_budget - p.hms;
    std::vector<double> hs, rnd;
    std::size_t reached = 0;
    for (std::uint64_t seed = 1; seed <= c5_seeds; ++seed) {
        p.seed = seed;
        const double best = hs_optimize(fn.objective, fn.bounds, p).best_fitness;
        hs.push_back(best);
        if (best >= c5_threshold) ++reached;
        rnd.push_back(random_search(fn.objective, fn.bounds, c5_budget, seed).best_fitness);
    }
    const double elapsed = seconds_since(t0);
    const double fraction = static_cast<double>(reached) / static_cast<double>(c5_seeds);
    const double hs_med = median(hs), rnd_med = median(rnd);
    report(5, fraction >= c5_fraction && hs_med > rnd_med && elapsed < c5_seconds,
           "optimizer sanity (sphere)",
           fmt::format("{}/{} seeds reach >= {} (need {:.0f}%), median best {:.4f}, random median "
                       "{:.4f}, {:.2f} s",
                       reached, c5_seeds, c5_threshold, 100 * c5_fraction, hs_med, rnd_med, elapsed));

    // Informational: the neighborhood pitch-adjustment variant on the same budget.
    p.pitch_mode = PitchMode::neighborhood;
    std::size_t nb_reached = 0;
    std::vector<double> nb;
    for (std::uint64_t seed = 1; seed <= c5_seeds; ++seed) {
        p.seed = seed;
        nb.push_back(hs_optimize(fn.objective, fn.bounds, p).best_fitness);
        if (nb.back() >= c5_threshold) ++nb_reached;
    }
    fmt::print("  info: neighborhood pitch mode (bandwidth {}) reaches {}/{} seeds, median {:.4g}\n",
               p.bandwidth, nb_reached, c5_seeds, median(nb));
}

void criterion_6() {
    const double a = fitness(5.3, 0.0, 15.0, 15.0, false);
    const double b = fitness(2.5, 0.5, 10.0, 15.0, true);
    const double c = fitness(1.0, 0.0, 15.0, 15.0, true);
    const bool ok = std::abs(a - 5.3) <= c6_tolerance && std::abs(b - 0.4) <= c6_tolerance &&
                    std::abs(c - 1.0 / fitness_epsilon) <= c6_tolerance;
    report(6, ok, "fitness formula",
           fmt::format("completed (5.3, 0) -> {:.15g}; fallen (2.5, 0.5) at 10/15 -> {:.15g}; "
                       "fallen at t=duration -> {:.15g} (1/eps = {})",
                       a, b, c, 1.0 / fitness_epsilon));
}

struct Evolved {
    Genome genome;
    double fitness = -INFINITY;
};

Evolved criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.hs = HsParams{};  // hms 10, ni 750
    cfg.ga.population = 76;
    cfg.ga.generations = 10;
    const std::size_t budget = cfg.budget(OptimizerKind::hs);
    const bool matched = budget == cfg.budget(OptimizerKind::ga) && budget == 760;

    std::size_t walkers = 0, hs_not_worse = 0;
    std::vector<double> hs_best, ga_best;
    Evolved best;
    for (std::uint64_t seed = 1; seed <= c7_seeds; ++seed) {
        const OptimizationResult hs = optimize_gait(cfg, OptimizerKind::hs, seed);
        const OptimizationResult ga = optimize_gait(cfg, OptimizerKind::ga, seed);
        const Genome g = Genome::from(hs.best);
        const SimResult r = rollout(g, cfg.sim);
        if (!r.fell && r.x > c7_min_x) ++walkers;
        if (ga.best_fitness <= hs.best_fitness) ++hs_not_worse;
        hs_best.push_back(hs.best_fitness);
        ga_best.push_back(ga.best_fitness);
        if (hs.best_fitness > best.fitness) best = {g, hs.best_fitness};
        fmt::print("  seed {:2}: hs {:8.4f} (fell={}, x={:.3f}), ga {:8.4f}\n", seed, hs.best_fitness,
                   r.fell, r.x, ga.best_fitness);
    }
    const double elapsed = seconds_since(t0);
    report(7, matched && walkers >= c7_walkers && hs_not_worse >= c7_wins && elapsed < c7_seconds,
           "end-to-end gait evolution",
           fmt::format("{}/{} HS seeds walk 15 s with x > {} m (need {}); GA <= HS on {}/{} seeds "
                       "(need {}); medians hs {:.4f} ga {:.4f}; budget {} each; {:.1f} s",
                       walkers, c7_seeds, c7_min_x, c7_walkers, hs_not_worse, c7_seeds, c7_wins,
                       median(hs_best), median(ga_best), budget, elapsed));
    return best;
}

// ---------------------------------------------------------------------------------------
// Trajectory shape oracles.

double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return saa > 0 && sbb > 0 ? sab / std::sqrt(saa * sbb) : 0.0;
}

// Highest autocorrelation at lags past the first negative lobe, up to half the series.
double autocorr_peak(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::size_t lag = 1;
    while (lag < n / 2 && pearson({x.data(), n - lag}, {x.data() + lag, n - lag}) >= 0) ++lag;
    double peak = -1;
    for (; lag < n / 2; ++lag) {
        peak = std::max(peak, pearson({x.data(), n - lag}, {x.data() + lag, n - lag}));
    }
    return peak;
}

// Period in ticks from upward mean crossings with linear interpolation.
double crossing_period(const std::vector<double>& x) {
    const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> up;
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = x[i - 1] - m, b = x[i] - m;
        if (a < 0 && b >= 0) up.push_back(static_cast<double>(i - 1) + a / (a - b));
    }
    if (up.size() < 2) return NAN;
    return (up.back() - up.front()) / static_cast<double>(up.size() - 1);
}

// RMS of right(t) - left(t + P/2), with left evaluated on its phase-folded profile
// (samples from all cycles sorted by phase, linear interpolation between them).
double half_period_rms(const std::vector<double>& left, const std::vector<double>& right, double period) {
    std::vector<std::pair<double, double>> profile;
    for (std::size_t k = 0; k < left.size(); ++k) {
        profile.emplace_back(std::fmod(static_cast<double>(k), period) / period, left[k]);
    }
    std::sort(profile.begin(), profile.end());
    const auto at = [&](double phase) {
        phase -= std::floor(phase);
        auto hi = std::lower_bound(profile.begin(), profile.end(), std::pair<double, double>{phase, -INFINITY});
        const auto& b = hi == profile.end() ? profile.front() : *hi;
        const auto& a = hi == profile.begin() ? profile.back() : *(hi - 1);
        double pa = a.first, pb = b.first;
        if (pa > phase) pa -= 1;
        if (pb < phase) pb += 1;
        return pb > pa ? a.second + (b.second - a.second) * (phase - pa) / (pb - pa) : a.second;
    };
    double sum = 0;
    for (std::size_t k = 0; k < right.size(); ++k) {
        const double diff = right[k] - at(static_cast<double>(k) / period + 0.5);
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(right.size()));
}

void criterion_8(const Evolved& best) {
    const SimConfig sim;
    const SimResult r = trace(best.genome, sim);
    const Trace& tr = *r.trace;
    const std::size_t start = sim.lock_ticks() + sim.tick_rate;  // skip the first second of motion
    std::vector<double> hip_l, hip_r, knee_l, knee_r, torso;
    for (std::size_t k = start; k < tr.frames.size(); ++k) {
        hip_l.push_back(tr.frames[k][Joint::hip_l]);
        hip_r.push_back(tr.frames[k][Joint::hip_r]);
        knee_l.push_back(tr.frames[k][Joint::knee_l]);
        knee_r.push_back(tr.frames[k][Joint::knee_r]);
        torso.push_back(tr.torso_height[k]);
    }
    if (hip_l.size() < 100) {
        report(8, false, "trajectory shape", fmt::format("trace too short ({} samples)", hip_l.size()));
        return;
    }
    const double ac = std::min({autocorr_peak(hip_l), autocorr_peak(hip_r), autocorr_peak(knee_l),
                                autocorr_peak(knee_r)});
    const double period = crossing_period(hip_l);
    const double rms = std::max(half_period_rms(hip_l, hip_r, period), half_period_rms(knee_l, knee_r, period));
    const auto [lo, hi] = std::minmax_element(torso.begin(), torso.end());
    const double p2p = *hi - *lo;
    report(8, ac > c8_autocorr && rms <= c8_rms_deg && p2p > c8_torso_p2p, "trajectory shape",
           fmt::format("best gait (fitness {:.4f}, fell={}): min autocorrelation peak {:.4f} (> {}), "
                       "period {:.3f} ticks, half-period L/R RMS {:.3f} deg (<= {}), torso "
                       "peak-to-peak {:.2f} mm (> 1)",
                       best.fitness, r.fell, ac, c8_autocorr, period / sim.tick_rate * sim.tick_rate, rms,
                       c8_rms_deg, 1000 * p2p));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void criterion_9() {
    const fs::path root = fs::temp_directory_path() / fmt::format("cpg_acceptance_{}", ::getpid());
    fs::remove_all(root);
    std::ostringstream log;
    bool identical = true;
    std::size_t files = 0;

    ExperimentConfig cfg;
    cfg.seeds = {4, 5};
    cfg.output_dir = root / "first";
    for (OptimizerKind kind : {OptimizerKind::hs, OptimizerKind::ga, OptimizerKind::random}) {
        cfg.optimizer = kind;
        cfg.ga.population = 38;
        cfg.ga.generations = 5;
        cfg.output_dir = root / "first" / std::string(optimizer_name(kind));
        for (const SeedRun& run : run_optimize(cfg, log)) {
            ExperimentConfig again = load_experiment_config(run.directory / "manifest.json");
            again.output_dir = root / "second" / std::string(optimizer_name(kind));
            const SeedRun rerun = run_optimize(again, log).front();
            for (const char* name : {"history.csv", "best_genome.json", "manifest.json"}) {
                ++files;
                identical = identical && slurp(run.directory / name) == slurp(rerun.directory / name) &&
                            !slurp(run.directory / name).empty();
            }
            // Trace artifacts of the evolved genome, written twice from the same manifest.
            ExperimentConfig tr = again;
            tr.output_dir = run.directory / "trace_a";
            run_trace(load_genome(run.directory / "best_genome.json"), tr, log);
            tr.output_dir = run.directory / "trace_b";
            run_trace(load_genome(rerun.directory / "best_genome.json"), tr, log);
            for (const char* name : {"trace.csv", "gait.csv", "result.json"}) {
                ++files;
                identical = identical && slurp(run.directory / "trace_a" / name) ==
                                             slurp(run.directory / "trace_b" / name);
            }
        }
    }
    fs::remove_all(root);
    report(9, identical, "reproducibility",
           fmt::format("{} artifact pairs re-generated from manifests, byte-identical: {}", files, identical));
}

}  // namespace

int main() {
    fmt::print("acceptance suite\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    const Evolved best = criterion_7();
    criterion_8(best);
    criterion_9();
    fmt::print("{} of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
