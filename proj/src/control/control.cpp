#include "exogait/control/control.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "exogait/core.hpp"

namespace exogait::control {

std::pair<ControlCommand, ControllerState> basic_step(const fuzzy::PhaseEstimate& est,
                                                      ControllerState state,
                                                      const StepConfig& config,
                                                      double t_ms) {
    ControlCommand cmd;
    cmd.t_ms = t_ms;
    if (est.selected == fuzzy::GaitPhase::Unknown) return {cmd, state};

    const bool entered = est.selected != state.last_phase;
    state.last_phase = est.selected;

    if (state.mode == ControllerMode::Executing) {
        if (entered && est.selected == config.completion_phase) {
            state.mode = ControllerMode::Idle;
        }
        return {cmd, state};
    }
    if (entered && est.selected == config.trigger_phase) {
        cmd.kind = CommandKind::TriggerStep;
        cmd.side = config.swing_side;
        state.mode = ControllerMode::Executing;
        state.executing_side = config.swing_side;
        state.last_step_t_ms = t_ms;
    }
    return {cmd, state};
}

void SafetyMonitor::push(const protocol::SensorFrame& frame,
                         const biomech::GrfVector& grf_left,
                         const biomech::GrfVector& grf_right) {
    if (!any_) {
        first_t_ms_ = frame.t_ms;
        any_ = true;
    }
    last_t_ms_ = frame.t_ms;
    grf_left_ = grf_left;
    grf_right_ = grf_right;

    for (int side = 0; side < 2; ++side) {
        const auto& slot = frame.slots[2 + side];
        if (!slot) continue;
        (side == 0 ? pitch_left_ : pitch_right_) = slot->euler_deg.y;
        const auto& fsr = std::get<protocol::InsoleSlotData>(slot->data).fsr_raw;
        const double total = fsr[0] + fsr[1] + fsr[2];
        FootTracker& foot = feet_[side];
        const bool contact = total >= contact_epsilon_;
        if (contact && !foot.in_stance) {
            // Stance onset: restart the forward-movement evidence window.
            foot.peak_forward_accel = 0.0;
        }
        foot.in_stance = contact;
        foot.peak_forward_accel = std::max(foot.peak_forward_accel, slot->accel.x);
    }
}

double SafetyMonitor::history_span_ms() const { return any_ ? last_t_ms_ - first_t_ms_ : 0.0; }

SafetyRecord SafetyMonitor::check(const SafetyConfig& config) const {
    SafetyRecord rec;
    if (grf_left_ && grf_right_) {
        rec.crutch_contact_left = grf_left_->f_axial >= config.crutch_contact_threshold_n;
        rec.crutch_contact_right = grf_right_->f_axial >= config.crutch_contact_threshold_n;
        rec.crutch_incl_left_ok = grf_left_->inclination_deg >= config.crutch_incl_range_deg[0] &&
                                  grf_left_->inclination_deg <= config.crutch_incl_range_deg[1];
        rec.crutch_incl_right_ok = grf_right_->inclination_deg >= config.crutch_incl_range_deg[0] &&
                                   grf_right_->inclination_deg <= config.crutch_incl_range_deg[1];
    }
    rec.forward_motion_left = feet_[0].peak_forward_accel >= config.forward_accel_threshold;
    rec.forward_motion_right = feet_[1].peak_forward_accel >= config.forward_accel_threshold;
    if (pitch_left_) {
        rec.insole_pitch_left_ok = *pitch_left_ >= config.insole_pitch_range_deg[0] &&
                                   *pitch_left_ <= config.insole_pitch_range_deg[1];
    }
    if (pitch_right_) {
        rec.insole_pitch_right_ok = *pitch_right_ >= config.insole_pitch_range_deg[0] &&
                                    *pitch_right_ <= config.insole_pitch_range_deg[1];
    }
    return rec;
}

std::pair<bool, SafetyRecord> safety_check(const SafetyMonitor& monitor,
                                           const SafetyConfig& config) {
    if (monitor.history_span_ms() < config.history_s * 1000.0) {
        throw control_error("safety check requires at least one step duration of history");
    }
    const SafetyRecord rec = monitor.check(config);
    return {rec.pass(), rec};
}

ControlCommand SafeStepController::update(const fuzzy::PhaseEstimate& est,
                                          const protocol::SensorFrame& frame,
                                          const biomech::GrfVector& grf_left,
                                          const biomech::GrfVector& grf_right) {
    monitor_.push(frame, grf_left, grf_right);

    ControlCommand cmd;
    cmd.t_ms = frame.t_ms;
    if (est.selected != fuzzy::GaitPhase::Unknown) {
        const bool entered = est.selected != state_.last_phase;
        state_.last_phase = est.selected;

        const bool warmed = monitor_.history_span_ms() >= safety_.history_s * 1000.0;
        if (warmed) last_safety_ = monitor_.check(safety_);

        switch (state_.mode) {
            case ControllerMode::Executing:
                if (entered && est.selected == step_.completion_phase) {
                    state_.mode = ControllerMode::Idle;
                }
                break;
            case ControllerMode::Idle:
                if (entered && est.selected == step_.trigger_phase) {
                    if (warmed && last_safety_.pass()) {
                        cmd.kind = CommandKind::TriggerStep;
                        cmd.side = step_.swing_side;
                        state_.mode = ControllerMode::Executing;
                        state_.executing_side = step_.swing_side;
                        state_.last_step_t_ms = frame.t_ms;
                    } else {
                        state_.mode = ControllerMode::Armed;
                    }
                }
                break;
            case ControllerMode::Armed:
                if (warmed && last_safety_.pass()) {
                    cmd.kind = CommandKind::TriggerStep;
                    cmd.side = step_.swing_side;
                    state_.mode = ControllerMode::Executing;
                    state_.executing_side = step_.swing_side;
                    state_.last_step_t_ms = frame.t_ms;
                }
                break;
        }
    }
    return cmd;
}

ControlCommand adaptive_multiplier(const biomech::GrfVector& grf_left,
                                   const biomech::GrfVector& grf_right,
                                   const AssistConfig& config, double t_ms) {
    const double f = std::max(grf_left.f_axial, grf_right.f_axial);
    const double incl = 0.5 * (grf_left.inclination_deg + grf_right.inclination_deg);
    const double m = config.g0 + config.k_f * (f / config.f_ref_n - 1.0) -
                     config.incl_speed_gain * (incl - config.nominal_incl_deg) * 0.01;
    ControlCommand cmd;
    cmd.kind = CommandKind::SetAssistMultiplier;
    cmd.value = std::clamp(m, config.g_min, config.g_max);
    cmd.t_ms = t_ms;
    return cmd;
}

SafetyConfig safety_config_from_json(const nlohmann::json& doc) {
    SafetyConfig c;
    c.crutch_contact_threshold_n = doc.value("crutch_contact_threshold_n", c.crutch_contact_threshold_n);
    c.forward_accel_threshold = doc.value("forward_accel_threshold", c.forward_accel_threshold);
    if (doc.contains("crutch_incl_range_deg")) {
        c.crutch_incl_range_deg[0] = doc.at("crutch_incl_range_deg").at(0).get<double>();
        c.crutch_incl_range_deg[1] = doc.at("crutch_incl_range_deg").at(1).get<double>();
    }
    if (doc.contains("insole_pitch_range_deg")) {
        c.insole_pitch_range_deg[0] = doc.at("insole_pitch_range_deg").at(0).get<double>();
        c.insole_pitch_range_deg[1] = doc.at("insole_pitch_range_deg").at(1).get<double>();
    }
    c.history_s = doc.value("history_s", c.history_s);
    if (c.crutch_incl_range_deg[0] >= c.crutch_incl_range_deg[1] ||
        c.insole_pitch_range_deg[0] >= c.insole_pitch_range_deg[1]) {
        throw control_error("safety ranges must have lo < hi");
    }
    return c;
}

AssistConfig assist_config_from_json(const nlohmann::json& doc) {
    AssistConfig c;
    c.g0 = doc.value("g0", c.g0);
    c.k_f = doc.value("k_f", c.k_f);
    c.f_ref_n = doc.value("f_ref_n", c.f_ref_n);
    c.g_min = doc.value("g_min", c.g_min);
    c.g_max = doc.value("g_max", c.g_max);
    c.incl_speed_gain = doc.value("incl_speed_gain", c.incl_speed_gain);
    c.nominal_incl_deg = doc.value("nominal_incl_deg", c.nominal_incl_deg);
    if (!(c.f_ref_n > 0.0)) throw control_error("f_ref_n must be positive");
    if (c.g_min > c.g0 || c.g0 > c.g_max) throw control_error("need g_min <= g0 <= g_max");
    return c;
}

std::size_t write_command_log(const std::vector<ControlCommand>& commands,
                              std::ostream& sink) {
    sink << "t_ms,kind,side_or_value\n";
    std::size_t rows = 0;
    for (const auto& c : commands) {
        switch (c.kind) {
            case CommandKind::TriggerStep:
                sink << format_num(c.t_ms) << ",trigger_step,"
                     << (c.side == biomech::EventSide::Left ? "left" : "right") << "\n";
                break;
            case CommandKind::Halt:
                sink << format_num(c.t_ms) << ",halt,\n";
                break;
            case CommandKind::SetAssistMultiplier:
                sink << format_num(c.t_ms) << ",set_assist_multiplier," << format_num(c.value)
                     << "\n";
                break;
            case CommandKind::NoOp:
                continue;
        }
        ++rows;
    }
    return rows;
}

StepConfig step_config_from_json(const nlohmann::json& doc) {
    StepConfig c;
    if (doc.contains("trigger_phase")) {
        c.trigger_phase = fuzzy::phase_from_name(doc.at("trigger_phase").get<std::string>());
    }
    if (doc.contains("completion_phase")) {
        c.completion_phase = fuzzy::phase_from_name(doc.at("completion_phase").get<std::string>());
    }
    if (doc.contains("swing_side")) {
        c.swing_side = doc.at("swing_side").get<std::string>() == "left"
                           ? biomech::EventSide::Left
                           : biomech::EventSide::Right;
    }
    return c;
}

}  // namespace exogait::control
