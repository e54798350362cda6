#include "cpg/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cpg {

namespace {
constexpr double deg2rad = std::numbers::pi / 180.0;
}

void SimConfig::validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
        throw ParameterError(fmt::format("duration must be positive, got {}", duration));
    }
    if (!(lock_phase >= 0.0 && lock_phase < duration)) {
        throw ParameterError(fmt::format("lock phase {} must lie in [0, duration)", lock_phase));
    }
    if (!(tick_rate >= 1.0 / default_dt * (1.0 - 1e-12)) || !std::isfinite(tick_rate)) {
        throw ParameterError(fmt::format("tick rate must be at least 50 Hz, got {}", tick_rate));
    }
    if (!(thigh_length > 0.0) || !(shank_length > 0.0)) {
        throw ParameterError("segment lengths must be positive");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw ParameterError(fmt::format("noise_std must be non-negative, got {}", noise_std));
    }
    if (resamples < 1) throw ParameterError("resamples must be at least 1");
    if (!(fall_height_ratio > 0.0 && fall_height_ratio < 1.0)) {
        throw ParameterError("fall_height_ratio must lie in (0, 1)");
    }
    if (fall_ticks < 1) throw ParameterError("fall_ticks must be at least 1");
    if (!(frozen_timeout > 0.0)) throw ParameterError("frozen_timeout must be positive");
    if (!(joint_speed >= 0.0)) throw ParameterError("joint_speed must be non-negative");
    if (!(step_clearance >= 0.0) || !std::isfinite(step_clearance)) {
        throw ParameterError("step_clearance must be non-negative");
    }
    if (!std::isfinite(controller.feedback_scale)) throw ParameterError("feedback scale is not finite");
}

std::size_t SimConfig::ticks() const { return tick_count(duration, dt()); }

std::size_t SimConfig::lock_ticks() const {
    return static_cast<std::size_t>(std::llround(lock_phase * tick_rate));
}

double fitness(double x, double y, double current_time, double duration, bool fell,
               double epsilon) {
    if (!fell) return x - y;
    return (x - y) / std::max(duration - current_time, epsilon);
}

std::string_view fall_cause_name(FallCause cause) {
    switch (cause) {
        case FallCause::none: return "none";
        case FallCause::low_torso: return "low_torso";
        case FallCause::frozen_gait: return "frozen_gait";
        case FallCause::divergence: return "divergence";
        case FallCause::invalid_oscillator: return "invalid_oscillator";
    }
    return "?";
}

// ---------------------------------------------------------------------------------------

PlanarWalker::PlanarWalker(double thigh_length, double shank_length, double clearance)
    : thigh_(thigh_length), shank_(shank_length), clearance_(clearance) {
    if (!(thigh_ > 0.0) || !(shank_ > 0.0)) throw ParameterError("segment lengths must be positive");
    if (!(clearance_ >= 0.0)) throw ParameterError("step clearance must be non-negative");
}

double PlanarWalker::reach(double hip_deg, double knee_deg) const {
    return thigh_ * std::sin(hip_deg * deg2rad) + shank_ * std::sin((hip_deg + knee_deg) * deg2rad);
}

double PlanarWalker::extent(double hip_deg, double knee_deg) const {
    return thigh_ * std::cos(hip_deg * deg2rad) + shank_ * std::cos((hip_deg + knee_deg) * deg2rad);
}

PlanarWalker::LegAngles PlanarWalker::leg_angles(const GaitFrame& frame, Leg leg) {
    return leg == Leg::left ? LegAngles{frame[Joint::hip_l], frame[Joint::knee_l]}
                            : LegAngles{frame[Joint::hip_r], frame[Joint::knee_r]};
}

namespace {
Leg other(Leg leg) { return leg == Leg::left ? Leg::right : Leg::left; }
}  // namespace

void PlanarWalker::reset(const GaitFrame& frame, double hip_x) {
    const LegAngles left = leg_angles(frame, Leg::left);
    const LegAngles right = leg_angles(frame, Leg::right);
    const double el = extent(left), er = extent(right);
    if (el != er) {
        stance_ = el > er ? Leg::left : Leg::right;
    } else {
        stance_ = reach(right) > reach(left) ? Leg::right : Leg::left;
    }
    const LegAngles st = leg_angles(frame, stance_);
    const LegAngles sw = leg_angles(frame, other(stance_));
    hip_x_ = hip_x;
    foot_x_ = hip_x + reach(st);
    stance_angles_ = st;
    swing_x_ = hip_x + reach(sw);
    swing_height_ = extent(st) - extent(sw);
    lifted_ = swing_height_ > 0.0 && swing_height_ >= clearance_;
}

bool PlanarWalker::advance(const GaitFrame& frame) {
    const LegAngles st = leg_angles(frame, stance_);
    const LegAngles sw = leg_angles(frame, other(stance_));
    hip_x_ = foot_x_ - reach(st);
    stance_angles_ = st;

    const double swing_x = hip_x_ + reach(sw);
    const double swing_z = extent(st) - extent(sw);
    // Touchdown: a lifted swing foot gets back to the ground (or would go below it) while
    // moving forward.
    const bool touchdown = lifted_ && swing_z <= 0.0 && swing_x > swing_x_;
    if (touchdown) {
        stance_ = other(stance_);
        foot_x_ = swing_x;
        stance_angles_ = sw;
        swing_x_ = hip_x_ + reach(st);
        swing_height_ = -swing_z;
        lifted_ = swing_height_ > 0.0 && swing_height_ >= clearance_;
        ++exchanges_;
        return true;
    }
    swing_x_ = swing_x;
    swing_height_ = swing_z;
    if (swing_z > 0.0 && swing_z >= clearance_) lifted_ = true;
    return false;
}

// ---------------------------------------------------------------------------------------

SimResult rollout(const Genome& genome, const SimConfig& config, bool retain_trace,
                  const SearchBounds& bounds) {
    config.validate();
    bounds.check(genome.span());

    const std::size_t ticks = config.ticks();
    const std::size_t lock_ticks = config.lock_ticks();
    const auto frozen_ticks = static_cast<std::size_t>(std::llround(config.frozen_timeout * config.tick_rate));
    const double low_torso = config.fall_height_ratio * config.leg_length();

    SimResult result;
    if (retain_trace) {
        result.trace.emplace();
        result.trace->frames.reserve(ticks);
        result.trace->torso_height.reserve(ticks);
        result.trace->x.reserve(ticks);
        result.trace->y.reserve(ticks);
    }

    auto finish = [&](bool fell, double time, FallCause cause) {
        result.fell = fell;
        result.cause = cause;
        if (fell) result.fall_time = time;
        result.fitness = fitness(result.x, result.y, fell ? time : config.duration,
                                 config.duration, fell);
        return result;
    };

    ControllerConfig controller_config = config.controller;
    controller_config.dt = config.dt();
    std::optional<Controller> controller;
    try {
        controller.emplace(genome.oscillator(config.tau_scale()), genome.network(), controller_config);
    } catch (const ParameterError&) {
        // Time constants at the very edge of the search box; the robot never moves.
        return finish(true, config.lock_phase, FallCause::invalid_oscillator);
    }

    PlanarWalker walker(config.thigh_length, config.shank_length, config.step_clearance);
    const GaitFrame neutral = GaitFrame::neutral();
    walker.reset(neutral);
    // Joint angles the servos have actually reached.
    JointAngles servo = neutral.angles();
    const double max_move = config.joint_speed > 0.0 ? config.joint_speed * config.dt()
                                                     : std::numeric_limits<double>::infinity();

    Rng noise(config.seed);
    const bool noisy = config.noise_std > 0.0;
    double heading = 0.0;
    double y_signed = 0.0;
    std::size_t low_count = 0;
    std::size_t last_exchange = lock_ticks;

    for (std::size_t k = 1; k <= ticks; ++k) {
        const double t = static_cast<double>(k) / config.tick_rate;
        const bool locked = k <= lock_ticks;
        JointAngles perturbation{};
        GaitFrame frame = neutral;
        try {
            if (locked) {
                if (config.lock_mode == LockMode::warm_up) controller->tick_holding(neutral);
            } else {
                if (noisy) {
                    for (std::size_t j = 0; j < joint_count; ++j) {
                        perturbation[static_cast<Joint>(j)] = noise.normal(0.0, config.noise_std);
                    }
                }
                frame = controller->tick(noisy ? &perturbation : nullptr);
            }
        } catch (const DivergenceError&) {
            return finish(true, std::max(t, config.lock_phase), FallCause::divergence);
        }

        for (std::size_t j = 0; j < joint_count; ++j) {
            const auto joint = static_cast<Joint>(j);
            servo[joint] += std::clamp(frame[joint] - servo[joint], -max_move, max_move);
        }
        const GaitFrame posture = clamp_frame(servo);

        const double previous_hip = walker.hip_x();
        if (!locked && k == lock_ticks + 1) {
            // Assume the first posture in place instead of jumping to it.
            walker.reset(posture, previous_hip);
        } else {
            walker.advance(posture);
        }
        const double dx = walker.hip_x() - previous_hip;
        result.x += dx * std::cos(heading);
        y_signed += dx * std::sin(heading);
        result.y = std::abs(y_signed);
        if (noisy) {
            heading += config.yaw_coupling * (perturbation.hip_l - perturbation.hip_r) * deg2rad;
        }
        if (walker.exchanges() != result.exchanges) {
            result.exchanges = walker.exchanges();
            last_exchange = k;
        }

        const double torso = walker.torso_height();
        if (retain_trace) {
            result.trace->frames.push_back(frame);
            result.trace->torso_height.push_back(torso);
            result.trace->x.push_back(result.x);
            result.trace->y.push_back(y_signed);
        }
        if (locked) continue;

        if (torso <= 0.0) return finish(true, t, FallCause::low_torso);
        low_count = torso < low_torso ? low_count + 1 : 0;
        if (low_count >= config.fall_ticks) return finish(true, t, FallCause::low_torso);
        if (k - last_exchange >= frozen_ticks) return finish(true, t, FallCause::frozen_gait);
    }
    return finish(false, config.duration, FallCause::none);
}

std::uint64_t rollout_seed(std::uint64_t base, std::size_t index) {
    if (index == 0) return base;
    return mix_seed(base ^ mix_seed(static_cast<std::uint64_t>(index) + 1));
}

double evaluate(const Genome& genome, const SimConfig& config, const SearchBounds& bounds) {
    config.validate();
    if (config.resamples == 1 || config.noise_std == 0.0) {
        return rollout(genome, config, false, bounds).fitness;
    }
    std::vector<double> scores(config.resamples);
    for (std::size_t i = 0; i < config.resamples; ++i) {
        SimConfig one = config;
        one.seed = rollout_seed(config.seed, i);
        scores[i] = rollout(genome, one, false, bounds).fitness;
    }
    double sum = 0.0;
    for (double s : scores) sum += s;
    return sum / static_cast<double>(scores.size());
}

SimResult trace(const Genome& genome, const SimConfig& config, const SearchBounds& bounds) {
    return rollout(genome, config, true, bounds);
}

void write_trace_csv(std::ostream& out, const Trace& trace, double tick_rate) {
    out << "t,hip_l,knee_l,ankle_l,hip_r,knee_r,ankle_r,torso_z,x,y\n";
    for (std::size_t k = 0; k < trace.frames.size(); ++k) {
        const JointAngles& a = trace.frames[k].angles();
        fmt::print(out, "{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                   static_cast<double>(k + 1) / tick_rate, a.hip_l, a.knee_l, a.ankle_l, a.hip_r,
                   a.knee_r, a.ankle_r, trace.torso_height[k], trace.x[k], trace.y[k]);
    }
}

Objective gait_objective(const SimConfig& config, const SearchBounds& bounds) {
    config.validate();
    return [config, bounds](std::span<const double> values) {
        return evaluate(Genome::from(values), config, bounds);
    };
}

}  // namespace cpg
