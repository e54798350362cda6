#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "cpg/error.hpp"

namespace cpg {

/// Constants of the two-neuron Matsuoka oscillator.
struct OscillatorParams {
    double tau1 = 0.5;   ///< rise time constant [s]
    double tau2 = 1.0;   ///< adaptation time constant [s]
    double beta = 2.5;   ///< adaptation intensity
    double gamma = 2.5;  ///< mutual inhibition
    double alpha = 0.0;  ///< feedback gain
    double c = 1.0;      ///< tonic input

    /// Throws ParameterError unless both time constants exceed 1e-6 and all values are finite.
    void validate() const;
};

inline constexpr double min_time_constant = 1e-6;

/// Membrane (x) and adaptation (v) states of both neurons.
struct OscillatorState {
    double x1 = 0.0;
    double v1 = 0.0;
    double x2 = 0.0;
    double v2 = 0.0;

    bool finite() const;
    /// Same state with the neuron indices exchanged.
    OscillatorState swapped() const { return {x2, v2, x1, v1}; }
    friend bool operator==(const OscillatorState&, const OscillatorState&) = default;
};

/// Time derivative of an OscillatorState (per second).
using OscillatorRate = OscillatorState;

struct FeedbackSignal {
    double uf1 = 0.0;
    double uf2 = 0.0;

    FeedbackSignal swapped() const { return {uf2, uf1}; }
};

/// Integration produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const OscillatorState& state, std::size_t tick);

    const OscillatorState& state() const noexcept { return state_; }
    std::size_t tick() const noexcept { return tick_; }

private:
    OscillatorState state_;
    std::size_t tick_;
};

/// Default integration step, one 50 Hz tick.
inline constexpr double default_dt = 0.02;

inline double rectify(double x) { return x > 0.0 ? x : 0.0; }

/// Right-hand side of the coupled Matsuoka equations.
OscillatorRate derivatives(const OscillatorState& state, const OscillatorParams& params,
                           const FeedbackSignal& fb);

/// One classical RK4 step with the feedback held constant over the step.
/// Requires 0 < dt <= 0.02; throws DivergenceError if the result is not finite.
OscillatorState step(const OscillatorState& state, const OscillatorParams& params,
                     const FeedbackSignal& fb, double dt);

/// Feedback provider indexed by tick (time = tick * dt).
using FeedbackSource = std::function<FeedbackSignal(std::size_t tick, double t)>;

/// Number of integration steps that cover `duration` at `dt`, tolerating round-off
/// when dt divides duration.
std::size_t tick_count(double duration, double dt);

/// Integrates from `initial`; returns tick_count(duration, dt) + 1 states including the
/// initial one. A null feedback source means zero feedback.
std::vector<OscillatorState> simulate(const OscillatorParams& params,
                                      const OscillatorState& initial,
                                      const FeedbackSource& feedback, double duration,
                                      double dt = default_dt);

struct OscillationReport {
    bool sustained = false;
    std::size_t cycles = 0;
    std::optional<double> period;  ///< mean cycle length [s]; empty when not oscillating
    double amplitude = 0.0;        ///< mean per-cycle peak of [x1]^+
    double phase_difference = 0.0; ///< x2 peak lag behind x1 peak, fraction of a period
    std::vector<double> cycle_periods;
    std::vector<double> cycle_amplitudes;
};

/// Fraction of the series discarded as start-up transient before analysis.
inline constexpr double transient_fraction = 0.2;
/// Last-to-first cycle amplitude ratio required to call an oscillation sustained.
inline constexpr double sustained_ratio = 0.9;
inline constexpr std::size_t min_cycles = 4;

/// Cycle analysis on d = [x1]^+ - [x2]^+ after dropping the first 20% of the series.
/// Fewer than four cycles yields a report with sustained == false and no period.
OscillationReport analyze(std::span<const OscillatorState> series, double dt);

/// CSV with header `t,x1,v1,x2,v2,y1,y2`, one row per sample.
void write_oscillator_csv(std::ostream& out, std::span<const OscillatorState> series,
                          double dt);

}  // namespace cpg
