#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "exogait/biomech/biomech.hpp"
#include "exogait/fuzzy/fuzzy.hpp"
#include "exogait/protocol/types.hpp"

namespace exogait::sim {

struct sim_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trial specification. The timeline is a lead-in (mid-swing + terminal
/// swing) followed by n_strides full gait cycles, so every stride carries a
/// complete heel-strike transient.
struct GaitProfile {
    double step_duration_s = 3.33;   // one full gait cycle
    int n_strides = 10;
    std::array<double, 8> phase_fractions = {0.125, 0.125, 0.125, 0.125,
                                             0.125, 0.125, 0.125, 0.125};
    double fsr_amplitude = 3000.0;   // counts at full loading
    double crutch_peak_n = 150.0;    // peak axial force
    double crutch_inclination_deg = 3.0;
    double rate_hz = 130.0;
    double ramp_ms = 60.0;           // raised-cosine blending across phase boundaries
    double heel_attack_ms = 45.0;    // heel-strike loading transient rise time
};

struct NoiseModel {
    double fsr_noise_sd = 0.0;           // counts
    double saturation_ceiling_frac = 0.8; // of the 12-bit full scale
    double imu_angle_noise_deg = 0.0;
    std::uint32_t seed = 1;
};

struct TransportModel {
    double drop_prob = 0.0;
    double jitter_ms_sd = 0.0;
    double reorder_prob = 0.0;
    std::uint32_t seed = 1;
};

/// A generated trial with every ground-truth quantity the validation
/// pipeline is checked against.
struct LabeledTrial {
    std::vector<protocol::SensorFrame> frames;
    std::vector<fuzzy::GaitPhase> labels;             // per frame
    std::vector<biomech::GaitEvent> events;           // heel strikes + toe-offs
    std::array<std::vector<biomech::CopSample>, 2> cop_truth;  // left, right insole
    std::array<std::vector<biomech::GrfVector>, 2> grf_truth;  // left, right crutch
    double rate_hz = 130.0;
    double lead_in_s = 0.0;
    biomech::InsoleGeometry geometry;
    biomech::LoadCalibration calibration;
    GaitProfile profile;
};

LabeledTrial generate_trial(const GaitProfile& profile, const NoiseModel& noise);

/// Converts the trial frames into per-device packet streams and pushes them
/// through a lossy transport: independent drops, Gaussian timestamp jitter,
/// adjacent swaps. Deterministic given the transport seed.
std::array<std::vector<protocol::SensorPacket>, protocol::kNumDevices> emit_packets(
    const LabeledTrial& trial, const TransportModel& transport);

struct TruthReport {
    int stride_count = 0;
    std::map<fuzzy::GaitPhase, int> phase_frame_counts;  // steady-state cycles only
    std::vector<double> heel_strike_t_ms_left;
    std::vector<double> heel_strike_t_ms_right;
    std::vector<double> toe_off_t_ms_left;
    std::vector<double> toe_off_t_ms_right;
};

TruthReport truth_report(const LabeledTrial& trial);

GaitProfile profile_from_json(const nlohmann::json& doc);
NoiseModel noise_from_json(const nlohmann::json& doc);
TransportModel transport_from_json(const nlohmann::json& doc);
nlohmann::json profile_to_json(const GaitProfile& p);
nlohmann::json noise_to_json(const NoiseModel& n);
nlohmann::json transport_to_json(const TransportModel& t);

}  // namespace exogait::sim
