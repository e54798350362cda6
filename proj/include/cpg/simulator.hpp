#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "cpg/controller.hpp"
#include "cpg/optimize.hpp"

namespace cpg {

enum class LockMode {
    warm_up,  ///< oscillator runs while the posture is held neutral
    frozen,   ///< oscillator and posture both held
};

/// Unit of the genome's time-constant genes.
enum class TauUnit {
    ticks,    ///< simulation steps (1 / tick_rate seconds each)
    seconds,
};

struct SimConfig {
    double duration = 15.0;     ///< episode length [s]
    double lock_phase = 3.0;    ///< initial posture hold [s]
    double tick_rate = 50.0;    ///< control and integration rate [Hz]
    double thigh_length = 0.12; ///< [m]
    double shank_length = 0.12; ///< [m]
    double noise_std = 0.0;     ///< Gaussian noise on every commanded angle [deg]
    std::size_t resamples = 1;
    std::uint64_t seed = 0;

    // Fall predicate.
    double fall_height_ratio = 0.6;  ///< torso below this fraction of leg length ...
    std::size_t fall_ticks = 5;      ///< ... for this many consecutive ticks
    double frozen_timeout = 5.0;     ///< [s] without a support exchange

    LockMode lock_mode = LockMode::warm_up;
    TauUnit tau_unit = TauUnit::ticks;
    /// Heading change per degree of left/right hip noise difference.
    double yaw_coupling = 0.1;
    /// Joint servo speed limit [deg/s]; the walker follows the commands at most this fast.
    /// 0 disables the limit.
    double joint_speed = 300.0;
    /// Height the swing foot must reach before its next touchdown counts as a step [m].
    double step_clearance = 0.005;
    ControllerConfig controller{};

    /// Throws ParameterError. tick_rate must be at least 50 Hz (the oscillator step bound).
    void validate() const;
    double dt() const { return 1.0 / tick_rate; }
    double leg_length() const { return thigh_length + shank_length; }
    double tau_scale() const { return tau_unit == TauUnit::ticks ? dt() : 1.0; }
    std::size_t ticks() const;
    std::size_t lock_ticks() const;
};

/// Guard on the remaining-time denominator of the fall punishment: one 50 Hz tick.
inline constexpr double fitness_epsilon = 0.02;

/// Walking fitness. Completed: x - y. Fallen: (x - y) / max(duration - current_time, eps).
double fitness(double x, double y, double current_time, double duration, bool fell,
               double epsilon = fitness_epsilon);

enum class Leg { left = 0, right = 1 };

/// Sagittal-plane kinematic biped. The stance foot is pinned to the ground; the hip follows
/// from the stance leg's joint angles and support passes to the swing foot when it comes
/// back down to the ground moving forward, after having been lifted at least `clearance`.
class PlanarWalker {
public:
    PlanarWalker(double thigh_length, double shank_length, double clearance = 0.0);

    /// Places the robot at hip_x with the given posture. Stance is the lower foot; on a tie
    /// the leading foot.
    void reset(const GaitFrame& frame, double hip_x = 0.0);
    /// Applies the next posture. Returns true if support changed legs this tick.
    bool advance(const GaitFrame& frame);

    double hip_x() const { return hip_x_; }
    /// Torso height: vertical extent of the stance leg.
    double torso_height() const { return extent(stance_angles_); }
    Leg stance() const { return stance_; }
    double stance_foot_x() const { return foot_x_; }
    /// Height of the swing foot above the ground.
    double swing_height() const { return swing_height_; }
    std::size_t exchanges() const { return exchanges_; }

    /// Forward offset of the foot from the hip [m].
    double reach(double hip_deg, double knee_deg) const;
    /// Downward offset of the foot from the hip [m].
    double extent(double hip_deg, double knee_deg) const;

private:
    struct LegAngles {
        double hip;
        double knee;
    };
    static LegAngles leg_angles(const GaitFrame& frame, Leg leg);
    double extent(LegAngles a) const { return extent(a.hip, a.knee); }
    double reach(LegAngles a) const { return reach(a.hip, a.knee); }

    double thigh_;
    double shank_;
    Leg stance_ = Leg::left;
    double foot_x_ = 0.0;
    double hip_x_ = 0.0;
    double swing_height_ = 0.0;
    double swing_x_ = 0.0;
    double clearance_;
    bool lifted_ = false;
    LegAngles stance_angles_{0.0, 0.0};
    std::size_t exchanges_ = 0;
};

/// Per-tick record for ticks 1..N (t = k / tick_rate).
struct Trace {
    std::vector<GaitFrame> frames;
    std::vector<double> torso_height;
    std::vector<double> x;
    std::vector<double> y;  ///< signed lateral position
};

enum class FallCause { none, low_torso, frozen_gait, divergence, invalid_oscillator };

struct SimResult {
    double x = 0.0;       ///< forward displacement of the hip [m]
    double y = 0.0;       ///< absolute lateral deviation [m]
    bool fell = false;
    std::optional<double> fall_time;
    FallCause cause = FallCause::none;
    double fitness = 0.0;
    std::size_t exchanges = 0;
    std::optional<Trace> trace;
};

std::string_view fall_cause_name(FallCause cause);

/// One episode. Throws ParameterError if the genome is outside `bounds` or the config is
/// invalid; oscillator failures end the episode as a fall.
SimResult rollout(const Genome& genome, const SimConfig& config, bool retain_trace = false,
                  const SearchBounds& bounds = SearchBounds::gait_defaults());

/// Seed of the i-th resampled rollout; the first one uses the base seed.
std::uint64_t rollout_seed(std::uint64_t base, std::size_t index);

/// Mean fitness over config.resamples rollouts with derived seeds.
double evaluate(const Genome& genome, const SimConfig& config,
                const SearchBounds& bounds = SearchBounds::gait_defaults());

/// Rollout with the per-tick trace retained.
SimResult trace(const Genome& genome, const SimConfig& config,
                const SearchBounds& bounds = SearchBounds::gait_defaults());

/// `t,hip_l,knee_l,ankle_l,hip_r,knee_r,ankle_r,torso_z,x,y`, one row per tick.
void write_trace_csv(std::ostream& out, const Trace& trace, double tick_rate);

/// Objective adapter for the optimizers.
Objective gait_objective(const SimConfig& config,
                         const SearchBounds& bounds = SearchBounds::gait_defaults());

}  // namespace cpg
