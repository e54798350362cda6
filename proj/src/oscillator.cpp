#include "cpg/oscillator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cpg {

void OscillatorParams::validate() const {
    for (double v : {tau1, tau2, beta, gamma, alpha, c}) {
        if (!std::isfinite(v)) throw ParameterError("oscillator parameter is not finite");
    }
    if (!(tau1 > min_time_constant) || !(tau2 > min_time_constant)) {
        throw ParameterError(
            fmt::format("oscillator time constants must exceed {}: tau1={}, tau2={}",
                        min_time_constant, tau1, tau2));
    }
}

bool OscillatorState::finite() const {
    return std::isfinite(x1) && std::isfinite(v1) && std::isfinite(x2) && std::isfinite(v2);
}

DivergenceError::DivergenceError(const OscillatorState& state, std::size_t tick)
    : std::runtime_error(fmt::format("oscillator diverged at tick {}: x1={} v1={} x2={} v2={}",
                                     tick, state.x1, state.v1, state.x2, state.v2)),
      state_(state),
      tick_(tick) {}

namespace {

// Both neurons go through the same expression so that exchanging them commutes exactly.
inline double membrane_rate(double x, double v, double other_x, double uf,
                            const OscillatorParams& p) {
    return (p.c - x - p.beta * v - p.gamma * rectify(other_x) - p.alpha * uf) / p.tau1;
}

inline double adaptation_rate(double x, double v, const OscillatorParams& p) {
    return (rectify(x) - v) / p.tau2;
}

inline OscillatorRate rate(const OscillatorState& s, const OscillatorParams& p,
                           const FeedbackSignal& fb) {
    return {membrane_rate(s.x1, s.v1, s.x2, fb.uf1, p), adaptation_rate(s.x1, s.v1, p),
            membrane_rate(s.x2, s.v2, s.x1, fb.uf2, p), adaptation_rate(s.x2, s.v2, p)};
}

inline OscillatorState axpy(const OscillatorState& s, double h, const OscillatorRate& k) {
    return {s.x1 + h * k.x1, s.v1 + h * k.v1, s.x2 + h * k.x2, s.v2 + h * k.v2};
}

inline double rk4_combine(double y, double dt, double k1, double k2, double k3, double k4) {
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Which neurons are in their linear ([x]^+ = x) region. Within one segment the regions are
// held fixed, so the vector field is affine and RK4 keeps its full order.
struct Regions {
    bool on1;
    bool on2;
};

inline double gate(double x, bool on) { return on ? x : 0.0; }

inline OscillatorRate frozen_rate(const OscillatorState& s, const OscillatorParams& p,
                                  const FeedbackSignal& fb, Regions r) {
    return {(p.c - s.x1 - p.beta * s.v1 - p.gamma * gate(s.x2, r.on2) - p.alpha * fb.uf1) / p.tau1,
            (gate(s.x1, r.on1) - s.v1) / p.tau2,
            (p.c - s.x2 - p.beta * s.v2 - p.gamma * gate(s.x1, r.on1) - p.alpha * fb.uf2) / p.tau1,
            (gate(s.x2, r.on2) - s.v2) / p.tau2};
}

OscillatorState frozen_rk4(const OscillatorState& s, const OscillatorParams& p,
                           const FeedbackSignal& fb, Regions r, double h) {
    const double half = 0.5 * h;
    const OscillatorRate k1 = frozen_rate(s, p, fb, r);
    const OscillatorRate k2 = frozen_rate(axpy(s, half, k1), p, fb, r);
    const OscillatorRate k3 = frozen_rate(axpy(s, half, k2), p, fb, r);
    const OscillatorRate k4 = frozen_rate(axpy(s, h, k3), p, fb, r);
    return {rk4_combine(s.x1, h, k1.x1, k2.x1, k3.x1, k4.x1),
            rk4_combine(s.v1, h, k1.v1, k2.v1, k3.v1, k4.v1),
            rk4_combine(s.x2, h, k1.x2, k2.x2, k3.x2, k4.x2),
            rk4_combine(s.v2, h, k1.v2, k2.v2, k3.v2, k4.v2)};
}

// A neuron sitting exactly at zero belongs to the region it is heading into.
Regions classify(const OscillatorState& s, const OscillatorParams& p, const FeedbackSignal& fb) {
    const OscillatorRate d = rate(s, p, fb);
    return {s.x1 > 0.0 || (s.x1 == 0.0 && d.x1 > 0.0), s.x2 > 0.0 || (s.x2 == 0.0 && d.x2 > 0.0)};
}

// Time within (0, h] at which membrane `first ? x1 : x2` of the frozen flow reaches zero,
// by Illinois regula falsi. The caller guarantees a sign change over [0, h].
double crossing_time(const OscillatorState& s, const OscillatorParams& p, const FeedbackSignal& fb,
                     Regions r, double h, bool first) {
    const auto g = [&](double t) {
        const OscillatorState e = frozen_rk4(s, p, fb, r, t);
        return first ? e.x1 : e.x2;
    };
    double a = 0.0, fa = first ? s.x1 : s.x2;
    double b = h, fb_ = g(h);
    int side = 0;
    for (int it = 0; it < 100 && b - a > 1e-15 * h; ++it) {
        const double c = (a * fb_ - b * fa) / (fb_ - fa);
        if (!(c > a && c < b)) break;
        const double fc = g(c);
        if (fc == 0.0) return c;
        if ((fc > 0.0) == (fb_ > 0.0)) {
            b = c;
            fb_ = fc;
            if (side == -1) fa *= 0.5;
            side = -1;
        } else {
            a = c;
            fa = fc;
            if (side == 1) fb_ *= 0.5;
            side = 1;
        }
    }
    return b;
}

}  // namespace

OscillatorRate derivatives(const OscillatorState& state, const OscillatorParams& params,
                           const FeedbackSignal& fb) {
    params.validate();
    return rate(state, params, fb);
}

OscillatorState step(const OscillatorState& state, const OscillatorParams& params,
                     const FeedbackSignal& fb, double dt) {
    params.validate();
    if (!(dt > 0.0) || dt > default_dt * (1.0 + 1e-12)) {
        throw ParameterError(fmt::format("integration step must lie in (0, 0.02], got {}", dt));
    }
    if (!state.finite()) throw DivergenceError(state, 0);

    // RK4 in segments split where a membrane state crosses zero (the rectifier kink).
    constexpr int max_segments = 8;
    OscillatorState s = state;
    double remaining = dt;
    for (int segment = 0; remaining > 0.0; ++segment) {
        const Regions r = classify(s, params, fb);
        const OscillatorState trial = frozen_rk4(s, params, fb, r, remaining);
        const bool cross1 = r.on1 ? trial.x1 < 0.0 : trial.x1 > 0.0;
        const bool cross2 = r.on2 ? trial.x2 < 0.0 : trial.x2 > 0.0;
        if ((!cross1 && !cross2) || segment + 1 == max_segments || !trial.finite()) {
            s = trial;
            break;
        }
        const double inf = std::numeric_limits<double>::infinity();
        const double t1 = cross1 ? crossing_time(s, params, fb, r, remaining, true) : inf;
        const double t2 = cross2 ? crossing_time(s, params, fb, r, remaining, false) : inf;
        const double t = std::min(t1, t2);
        if (!(t > 0.0) || t >= remaining) {
            s = trial;
            break;
        }
        s = frozen_rk4(s, params, fb, r, t);
        if (t1 == t) s.x1 = 0.0;
        if (t2 == t) s.x2 = 0.0;
        remaining -= t;
    }
    if (!s.finite()) throw DivergenceError(s, 0);
    return s;
}

std::size_t tick_count(double duration, double dt) {
    if (!(duration > 0.0) || !(dt > 0.0)) {
        throw ParameterError(fmt::format("duration and dt must be positive ({}, {})", duration, dt));
    }
    const double ratio = duration / dt;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
        return static_cast<std::size_t>(nearest);
    }
    return static_cast<std::size_t>(std::ceil(ratio));
}

std::vector<OscillatorState> simulate(const OscillatorParams& params,
                                      const OscillatorState& initial,
                                      const FeedbackSource& feedback, double duration,
                                      double dt) {
    params.validate();
    const std::size_t ticks = tick_count(duration, dt);
    std::vector<OscillatorState> series;
    series.reserve(ticks + 1);
    series.push_back(initial);
    OscillatorState state = initial;
    for (std::size_t k = 0; k < ticks; ++k) {
        const FeedbackSignal fb = feedback ? feedback(k, static_cast<double>(k) * dt)
                                           : FeedbackSignal{};
        try {
            state = step(state, params, fb, dt);
        } catch (const DivergenceError& e) {
            throw DivergenceError(e.state(), k + 1);
        }
        series.push_back(state);
    }
    return series;
}

namespace {

struct Peak {
    double time;
    double value;
};

// Maximum of y over [first, last) with parabolic refinement of its time.
Peak find_peak(const std::vector<double>& y, std::size_t first, std::size_t last, double dt) {
    std::size_t best = first;
    for (std::size_t k = first; k < last; ++k) {
        if (y[k] > y[best]) best = k;
    }
    double offset = 0.0;
    if (best > 0 && best + 1 < y.size()) {
        const double a = y[best - 1], b = y[best], c = y[best + 1];
        const double curvature = a - 2.0 * b + c;
        if (curvature < 0.0) offset = std::clamp(0.5 * (a - c) / curvature, -0.5, 0.5);
    }
    return {(static_cast<double>(best) + offset) * dt, y[best]};
}

}  // namespace

OscillationReport analyze(std::span<const OscillatorState> series, double dt) {
    OscillationReport report;
    const std::size_t n = series.size();
    const auto start = static_cast<std::size_t>(std::floor(transient_fraction * static_cast<double>(n)));
    if (n < 3 || start + 2 >= n) return report;

    std::vector<double> y1(n), y2(n);
    for (std::size_t k = 0; k < n; ++k) {
        y1[k] = rectify(series[k].x1);
        y2[k] = rectify(series[k].x2);
    }

    // Upward zero crossings of y1 - y2, linearly interpolated.
    std::vector<double> crossings;
    std::vector<std::size_t> crossing_ticks;
    for (std::size_t k = start + 1; k < n; ++k) {
        const double prev = y1[k - 1] - y2[k - 1];
        const double curr = y1[k] - y2[k];
        if (prev < 0.0 && curr >= 0.0) {
            const double frac = -prev / (curr - prev);
            crossings.push_back((static_cast<double>(k - 1) + frac) * dt);
            crossing_ticks.push_back(k);
        }
    }
    if (crossings.size() < 2) return report;
    report.cycles = crossings.size() - 1;

    for (std::size_t j = 0; j + 1 < crossings.size(); ++j) {
        report.cycle_periods.push_back(crossings[j + 1] - crossings[j]);
    }
    double period = 0.0;
    for (double p : report.cycle_periods) period += p;
    period /= static_cast<double>(report.cycle_periods.size());

    std::vector<double> phases;
    for (std::size_t j = 0; j + 1 < crossing_ticks.size(); ++j) {
        const Peak p1 = find_peak(y1, crossing_ticks[j], crossing_ticks[j + 1], dt);
        report.cycle_amplitudes.push_back(p1.value);
        const auto search_begin = static_cast<std::size_t>(std::ceil(p1.time / dt));
        const auto search_end = static_cast<std::size_t>(std::ceil((p1.time + period) / dt));
        if (search_end >= n || search_begin >= search_end) continue;
        const Peak p2 = find_peak(y2, search_begin, search_end, dt);
        double phase = (p2.time - p1.time) / period;
        phase -= std::floor(phase);
        phases.push_back(phase);
    }

    if (report.cycles < min_cycles) return report;

    report.period = period;
    double amp = 0.0;
    for (double a : report.cycle_amplitudes) amp += a;
    report.amplitude = amp / static_cast<double>(report.cycle_amplitudes.size());
    if (!phases.empty()) {
        double sum = 0.0;
        for (double p : phases) sum += p;
        report.phase_difference = sum / static_cast<double>(phases.size());
    }
    const double first = report.cycle_amplitudes.front();
    const double last = report.cycle_amplitudes.back();
    report.sustained = first > 0.0 && last >= sustained_ratio * first;
    return report;
}

void write_oscillator_csv(std::ostream& out, std::span<const OscillatorState> series, double dt) {
    out << "t,x1,v1,x2,v2,y1,y2\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        fmt::print(out, "{:.4f},{:.8f},{:.8f},{:.8f},{:.8f},{:.8f},{:.8f}\n",
                   static_cast<double>(k) * dt, s.x1, s.v1, s.x2, s.v2, rectify(s.x1),
                   rectify(s.x2));
    }
}

}  // namespace cpg
