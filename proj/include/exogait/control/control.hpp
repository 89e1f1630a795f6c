#pragma once

#include <deque>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "exogait/biomech/biomech.hpp"
#include "exogait/fuzzy/fuzzy.hpp"
#include "exogait/protocol/types.hpp"

namespace exogait::control {

struct control_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SafetyConfig {
    double crutch_contact_threshold_n = 20.0;
    double forward_accel_threshold = 0.5;        // m/s^2
    double crutch_incl_range_deg[2] = {0.0, 45.0};
    double insole_pitch_range_deg[2] = {-20.0, 20.0};
    double history_s = 3.33;  // minimum history before checks are meaningful
};

struct AssistConfig {
    double g0 = 1.0;               // baseline multiplier
    double k_f = 0.5;              // sensitivity per unit F/F_ref
    double f_ref_n = 100.0;
    double g_min = 0.5;
    double g_max = 2.0;
    double incl_speed_gain = 1.0;  // per degree of inclination deviation, in percent
    double nominal_incl_deg = 15.0;
};

struct StepConfig {
    fuzzy::GaitPhase trigger_phase = fuzzy::GaitPhase::TerminalStance;
    fuzzy::GaitPhase completion_phase = fuzzy::GaitPhase::TerminalSwing;
    biomech::EventSide swing_side = biomech::EventSide::Right;
};

enum class CommandKind { TriggerStep, Halt, SetAssistMultiplier, NoOp };

struct ControlCommand {
    CommandKind kind = CommandKind::NoOp;
    biomech::EventSide side = biomech::EventSide::Right;  // TriggerStep only
    double value = 0.0;                                   // SetAssistMultiplier only
    double t_ms = 0.0;
};

enum class ControllerMode { Idle, Armed, Executing };

struct ControllerState {
    ControllerMode mode = ControllerMode::Idle;
    biomech::EventSide executing_side = biomech::EventSide::Right;
    fuzzy::GaitPhase last_phase = fuzzy::GaitPhase::Unknown;
    double last_step_t_ms = -1.0;
};

/// Per-predicate outcome of one safety evaluation.
struct SafetyRecord {
    bool crutch_contact_left = false;
    bool crutch_contact_right = false;
    bool forward_motion_left = false;
    bool forward_motion_right = false;
    bool crutch_incl_left_ok = false;
    bool crutch_incl_right_ok = false;
    bool insole_pitch_left_ok = false;
    bool insole_pitch_right_ok = false;

    bool pass() const {
        return crutch_contact_left && crutch_contact_right && forward_motion_left &&
               forward_motion_right && crutch_incl_left_ok && crutch_incl_right_ok &&
               insole_pitch_left_ok && insole_pitch_right_ok;
    }
};

/// Gait-phase-triggered stepping: one TriggerStep when the committed phase
/// enters the trigger phase, back to Idle when the completion phase commits.
/// Unknown phases are ignored.
std::pair<ControlCommand, ControllerState> basic_step(const fuzzy::PhaseEstimate& est,
                                                      ControllerState state,
                                                      const StepConfig& config,
                                                      double t_ms);

/// Bounded history of frame-derived safety evidence. Tracks, per insole, the
/// peak forward acceleration since the foot's last stance onset.
class SafetyMonitor {
  public:
    explicit SafetyMonitor(double contact_epsilon = fuzzy::kDefaultContactEpsilon)
        : contact_epsilon_(contact_epsilon) {}

    void push(const protocol::SensorFrame& frame, const biomech::GrfVector& grf_left,
              const biomech::GrfVector& grf_right);

    /// Span of pushed history in milliseconds (0 when empty).
    double history_span_ms() const;

    SafetyRecord check(const SafetyConfig& config) const;

  private:
    struct FootTracker {
        bool in_stance = false;
        double peak_forward_accel = 0.0;
    };

    double contact_epsilon_;
    double first_t_ms_ = 0.0;
    double last_t_ms_ = 0.0;
    bool any_ = false;
    FootTracker feet_[2];
    std::optional<biomech::GrfVector> grf_left_, grf_right_;
    std::optional<double> pitch_left_, pitch_right_;
};

/// Evaluates the five safety predicates against the most recent evidence.
/// Throws control_error until the monitor has seen at least one step
/// duration of history.
std::pair<bool, SafetyRecord> safety_check(const SafetyMonitor& monitor,
                                           const SafetyConfig& config);

/// basic_step gated by safety_check: a trigger with failing safety latches
/// Armed and fires at the first later frame that passes.
class SafeStepController {
  public:
    SafeStepController(const StepConfig& step, const SafetyConfig& safety,
                       double contact_epsilon = fuzzy::kDefaultContactEpsilon)
        : step_(step), safety_(safety), monitor_(contact_epsilon) {}

    ControlCommand update(const fuzzy::PhaseEstimate& est, const protocol::SensorFrame& frame,
                          const biomech::GrfVector& grf_left,
                          const biomech::GrfVector& grf_right);

    const ControllerState& state() const { return state_; }
    const SafetyRecord& last_safety() const { return last_safety_; }

  private:
    StepConfig step_;
    SafetyConfig safety_;
    SafetyMonitor monitor_;
    ControllerState state_;
    SafetyRecord last_safety_;
};

/// Proportional assist multiplier: rises with crutch load, falls as the mean
/// inclination exceeds nominal, clamped to [g_min, g_max].
ControlCommand adaptive_multiplier(const biomech::GrfVector& grf_left,
                                   const biomech::GrfVector& grf_right,
                                   const AssistConfig& config, double t_ms = 0.0);

SafetyConfig safety_config_from_json(const nlohmann::json& doc);
AssistConfig assist_config_from_json(const nlohmann::json& doc);
StepConfig step_config_from_json(const nlohmann::json& doc);

/// Command log as CSV (t_ms, kind, side or multiplier value). NoOps are
/// skipped. Returns the number of rows written.
std::size_t write_command_log(const std::vector<ControlCommand>& commands, std::ostream& sink);

}  // namespace exogait::control
