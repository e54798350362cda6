#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "cpg/oscillator.hpp"

namespace cpg {

/// Weights and biases of the single-layer PureLin network. The right-leg neurons mirror
/// the left ones (w22 = w11, w21 = w12, b4 = b1, b3 = b2), so only four values exist.
struct NetworkParams {
    double w11 = 0.0;  ///< oscillator output -> hip [deg per unit]
    double w12 = 0.0;  ///< oscillator output -> knee [deg per unit]
    double b1 = 0.0;   ///< hip bias [deg]
    double b2 = 0.0;   ///< knee bias [deg]

    void validate() const;
};

/// Pitch angle interval of one joint, degrees.
struct JointLimit {
    double lower;
    double upper;
};

// Sagittal joint ranges of the robot's legs.
inline constexpr JointLimit hip_limit{-100.0, 25.0};
inline constexpr JointLimit knee_limit{-130.0, 0.0};
inline constexpr JointLimit ankle_limit{-75.0, 55.0};

enum class Joint { hip_l = 0, knee_l, ankle_l, hip_r, knee_r, ankle_r };
inline constexpr std::size_t joint_count = 6;

std::string_view joint_name(Joint joint);
JointLimit joint_limit(Joint joint);

/// Six pitch angles in degrees, not necessarily within limits.
struct JointAngles {
    double hip_l = 0.0;
    double knee_l = 0.0;
    double ankle_l = 0.0;
    double hip_r = 0.0;
    double knee_r = 0.0;
    double ankle_r = 0.0;

    double& operator[](Joint j);
    double operator[](Joint j) const;
    friend bool operator==(const JointAngles&, const JointAngles&) = default;
};

/// Raw network output before the ankle is derived and limits are applied.
struct LegCommands {
    double hip_l;
    double knee_l;
    double hip_r;
    double knee_r;
    friend bool operator==(const LegCommands&, const LegCommands&) = default;
};

/// One 50 Hz sample of commanded leg angles. Always within the joint limits; the only
/// way to build one is clamp_frame (or neutral()).
class GaitFrame {
public:
    /// All joints at zero: upright stance with the feet flat.
    static GaitFrame neutral() { return GaitFrame{}; }

    const JointAngles& angles() const { return angles_; }
    double operator[](Joint j) const { return angles_[j]; }
    bool saturated(Joint j) const { return saturated_[static_cast<std::size_t>(j)]; }
    bool any_saturated() const;

    friend GaitFrame clamp_frame(const JointAngles& raw);

private:
    GaitFrame() = default;

    JointAngles angles_{};
    std::array<bool, joint_count> saturated_{};
};

/// PureLin layer: hip = w11*y + b1, knee = w12*y + b2 per leg, y1 driving the left leg.
LegCommands network_output(double y1, double y2, const NetworkParams& net);

/// Ankle pitch that keeps the sole parallel to the ground, clamped to the ankle range.
double derive_ankle(double hip, double knee);

/// Saturates every joint into its range and records which ones were clipped.
/// Throws ParameterError on NaN input.
GaitFrame clamp_frame(const JointAngles& raw);

/// Hip feedback into the oscillator: uf1 = scale*hip_l, uf2 = scale*hip_r.
FeedbackSignal feedback_from_frame(const GaitFrame& frame, double scale);

/// Degrees-to-feedback normalisation used by default.
inline constexpr double default_feedback_scale = 1.0 / 90.0;

struct ControllerConfig {
    double feedback_scale = default_feedback_scale;
    /// Feed [x_i]^+ into the joint neurons; false feeds raw x_i.
    bool rectified_input = true;
    double dt = default_dt;
    /// The oscillator is integrated in substeps no longer than this fraction of its smaller
    /// time constant (at most max_substeps per tick) so that fast genomes stay resolved.
    double substep_ratio = 0.5;
    std::size_t max_substeps = 64;
    /// Small asymmetry so that the pair leaves the symmetric equilibrium.
    OscillatorState initial_state{0.1, 0.0, 0.0, 0.0};
};

/// Raw (pre-clamp) joint commands for the given oscillator state. Ankles come from the
/// clamped hip/knee values so that hip + knee + ankle = 0 whenever the ankle is in range.
/// `perturbation` is added to every command before clamping.
JointAngles joint_commands(const OscillatorState& state, const NetworkParams& net,
                           const ControllerConfig& config,
                           const JointAngles* perturbation = nullptr);

/// Number of oscillator substeps per controller tick for these time constants.
std::size_t substeps(const OscillatorParams& osc, const ControllerConfig& config);

/// Advances the oscillator by one controller tick (config.dt) using substeps().
OscillatorState advance_oscillator(const OscillatorState& state, const OscillatorParams& osc,
                                   const FeedbackSignal& fb, const ControllerConfig& config);

struct ControllerStep {
    OscillatorState state;
    GaitFrame frame;
};

/// feedback from `previous` -> one oscillator step -> network -> ankles -> limits.
ControllerStep controller_tick(const OscillatorState& state, const OscillatorParams& osc,
                               const NetworkParams& net, const GaitFrame& previous,
                               const ControllerConfig& config = {},
                               const JointAngles* perturbation = nullptr);

/// Closed-loop CPG controller holding its own oscillator state and last frame.
class Controller {
public:
    Controller(const OscillatorParams& osc, const NetworkParams& net,
               const ControllerConfig& config = {});

    /// Advances one tick and returns the new frame.
    const GaitFrame& tick(const JointAngles* perturbation = nullptr);
    /// Advances the oscillator only, with feedback computed from `held` (lock phase).
    void tick_holding(const GaitFrame& held);

    const OscillatorState& state() const { return state_; }
    const GaitFrame& frame() const { return frame_; }
    const OscillatorParams& oscillator() const { return osc_; }
    const NetworkParams& network() const { return net_; }
    const ControllerConfig& config() const { return config_; }

private:
    OscillatorParams osc_;
    NetworkParams net_;
    ControllerConfig config_;
    OscillatorState state_;
    GaitFrame frame_ = GaitFrame::neutral();
};

/// Gait CSV with header `t,hip_l,knee_l,ankle_l,hip_r,knee_r,ankle_r`; the first row is
/// stamped `t0 + dt`.
void write_gait_csv(std::ostream& out, std::span<const GaitFrame> frames, double dt,
                    double t0 = 0.0);

}  // namespace cpg
