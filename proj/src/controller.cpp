#include "cpg/controller.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace cpg {

void NetworkParams::validate() const {
    for (double v : {w11, w12, b1, b2}) {
        if (!std::isfinite(v)) throw ParameterError("network parameter is not finite");
    }
}

std::string_view joint_name(Joint joint) {
    switch (joint) {
        case Joint::hip_l: return "hip_l";
        case Joint::knee_l: return "knee_l";
        case Joint::ankle_l: return "ankle_l";
        case Joint::hip_r: return "hip_r";
        case Joint::knee_r: return "knee_r";
        case Joint::ankle_r: return "ankle_r";
    }
    return "?";
}

JointLimit joint_limit(Joint joint) {
    switch (joint) {
        case Joint::hip_l:
        case Joint::hip_r: return hip_limit;
        case Joint::knee_l:
        case Joint::knee_r: return knee_limit;
        case Joint::ankle_l:
        case Joint::ankle_r: return ankle_limit;
    }
    return hip_limit;
}

double& JointAngles::operator[](Joint j) {
    switch (j) {
        case Joint::hip_l: return hip_l;
        case Joint::knee_l: return knee_l;
        case Joint::ankle_l: return ankle_l;
        case Joint::hip_r: return hip_r;
        case Joint::knee_r: return knee_r;
        case Joint::ankle_r: return ankle_r;
    }
    return hip_l;
}

double JointAngles::operator[](Joint j) const {
    return const_cast<JointAngles&>(*this)[j];
}

bool GaitFrame::any_saturated() const {
    return std::any_of(saturated_.begin(), saturated_.end(), [](bool b) { return b; });
}

LegCommands network_output(double y1, double y2, const NetworkParams& net) {
    return {net.w11 * y1 + net.b1, net.w12 * y1 + net.b2, net.w11 * y2 + net.b1,
            net.w12 * y2 + net.b2};
}

double derive_ankle(double hip, double knee) {
    return std::clamp(-(hip + knee), ankle_limit.lower, ankle_limit.upper);
}

GaitFrame clamp_frame(const JointAngles& raw) {
    GaitFrame frame;
    for (std::size_t i = 0; i < joint_count; ++i) {
        const auto joint = static_cast<Joint>(i);
        const double value = raw[joint];
        if (std::isnan(value)) {
            throw ParameterError(fmt::format("NaN command for joint {}", joint_name(joint)));
        }
        const JointLimit lim = joint_limit(joint);
        const double clamped = std::clamp(value, lim.lower, lim.upper);
        frame.angles_[joint] = clamped;
        frame.saturated_[i] = clamped != value;
    }
    return frame;
}

FeedbackSignal feedback_from_frame(const GaitFrame& frame, double scale) {
    return {scale * frame[Joint::hip_l], scale * frame[Joint::hip_r]};
}

JointAngles joint_commands(const OscillatorState& state, const NetworkParams& net,
                           const ControllerConfig& config, const JointAngles* perturbation) {
    const double y1 = config.rectified_input ? rectify(state.x1) : state.x1;
    const double y2 = config.rectified_input ? rectify(state.x2) : state.x2;
    LegCommands legs = network_output(y1, y2, net);
    if (perturbation != nullptr) {
        legs.hip_l += perturbation->hip_l;
        legs.knee_l += perturbation->knee_l;
        legs.hip_r += perturbation->hip_r;
        legs.knee_r += perturbation->knee_r;
    }

    JointAngles raw{legs.hip_l, legs.knee_l, 0.0, legs.hip_r, legs.knee_r, 0.0};
    // Ankle from the hip/knee values the robot will actually hold.
    const auto hold = [](double v, JointLimit lim) { return std::clamp(v, lim.lower, lim.upper); };
    raw.ankle_l = -(hold(legs.hip_l, hip_limit) + hold(legs.knee_l, knee_limit));
    raw.ankle_r = -(hold(legs.hip_r, hip_limit) + hold(legs.knee_r, knee_limit));
    if (perturbation != nullptr) {
        raw.ankle_l += perturbation->ankle_l;
        raw.ankle_r += perturbation->ankle_r;
    }
    return raw;
}

std::size_t substeps(const OscillatorParams& osc, const ControllerConfig& config) {
    const double limit = config.substep_ratio * std::min(osc.tau1, osc.tau2);
    if (!(limit > 0.0)) return std::max<std::size_t>(config.max_substeps, 1);
    const double n = std::ceil(config.dt / limit);
    return std::clamp<std::size_t>(n < 1e9 ? static_cast<std::size_t>(n) : config.max_substeps, 1,
                                   std::max<std::size_t>(config.max_substeps, 1));
}

OscillatorState advance_oscillator(const OscillatorState& state, const OscillatorParams& osc,
                                   const FeedbackSignal& fb, const ControllerConfig& config) {
    const std::size_t n = substeps(osc, config);
    const double h = config.dt / static_cast<double>(n);
    OscillatorState s = state;
    for (std::size_t i = 0; i < n; ++i) s = step(s, osc, fb, h);
    return s;
}

ControllerStep controller_tick(const OscillatorState& state, const OscillatorParams& osc,
                               const NetworkParams& net, const GaitFrame& previous,
                               const ControllerConfig& config, const JointAngles* perturbation) {
    const FeedbackSignal fb = feedback_from_frame(previous, config.feedback_scale);
    const OscillatorState next = advance_oscillator(state, osc, fb, config);
    return {next, clamp_frame(joint_commands(next, net, config, perturbation))};
}

Controller::Controller(const OscillatorParams& osc, const NetworkParams& net,
                       const ControllerConfig& config)
    : osc_(osc), net_(net), config_(config), state_(config.initial_state) {
    osc_.validate();
    net_.validate();
}

const GaitFrame& Controller::tick(const JointAngles* perturbation) {
    ControllerStep next = controller_tick(state_, osc_, net_, frame_, config_, perturbation);
    state_ = next.state;
    frame_ = next.frame;
    return frame_;
}

void Controller::tick_holding(const GaitFrame& held) {
    state_ = advance_oscillator(state_, osc_, feedback_from_frame(held, config_.feedback_scale), config_);
    frame_ = held;
}

void write_gait_csv(std::ostream& out, std::span<const GaitFrame> frames, double dt, double t0) {
    out << "t,hip_l,knee_l,ankle_l,hip_r,knee_r,ankle_r\n";
    for (std::size_t k = 0; k < frames.size(); ++k) {
        const JointAngles& a = frames[k].angles();
        fmt::print(out, "{:.4f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                   t0 + static_cast<double>(k + 1) * dt, a.hip_l, a.knee_l, a.ankle_l, a.hip_r,
                   a.knee_r, a.ankle_r);
    }
}

}  // namespace cpg
