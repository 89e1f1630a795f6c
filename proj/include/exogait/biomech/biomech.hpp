#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "exogait/core.hpp"

namespace exogait::biomech {

enum class BiomechErrorKind {
    NonUnitQuaternion,
    EmptySignal,
};

struct biomech_error : std::runtime_error {
    BiomechErrorKind kind;
    biomech_error(BiomechErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

/// Sensor coordinates on the insole, millimeters. y runs heel-to-toe
/// (anteroposterior), x mediolateral. Shipped defaults are placeholders;
/// calibrate to the actual insole build.
struct InsoleGeometry {
    double y_h = 30.0, y_m1 = 180.0, y_m5 = 160.0;
    double x_h = 0.0, x_m1 = -20.0, x_m5 = 20.0;
    std::string size_label = "medium";
};

InsoleGeometry geometry_preset(const std::string& size_label);
InsoleGeometry geometry_from_json(const nlohmann::json& doc);
nlohmann::json geometry_to_json(const InsoleGeometry& g);

struct CopSample {
    double y_mm = 0.0;
    double x_mm = 0.0;
    double f_total = 0.0;
    bool valid = false;
};

inline constexpr double kCopContactEpsilon = 40.0;  // counts, matches the classifier

/// Force-weighted sensor-coordinate average. Invalid (all-zero) samples are
/// flagged, not thrown.
CopSample cop(const std::array<double, 3>& fsr, const InsoleGeometry& geom,
              double contact_epsilon = kCopContactEpsilon);

struct LoadCalibration {
    double tare = 0.0;       // counts
    double gain = 0.005;     // N per count
};

LoadCalibration calibration_from_json(const nlohmann::json& doc);
nlohmann::json calibration_to_json(const LoadCalibration& cal);

inline double calibrate_load(double raw_counts, const LoadCalibration& cal) {
    return (raw_counts - cal.tare) * cal.gain;
}

/// A crutch ground reaction force resolved into world components.
struct GrfVector {
    double f_axial = 0.0;         // N along the shaft
    Vec3 f_world;                 // x anteroposterior, y mediolateral, z vertical
    double inclination_deg = 0.0; // shaft vs world vertical
};

/// The shaft axis is the sensor-frame +z rotated into the world frame.
GrfVector decompose_grf(double f_axial_n, const Quat& orientation);

enum class EventKind { HeelStrike, ToeOff };
enum class EventSide { Left, Right };

struct GaitEvent {
    EventKind kind;
    EventSide side;
    double t_ms;
    std::int64_t frame_index;
};

struct HeelStrikeConfig {
    double prominence_frac = 0.2;   // of the trial's dynamic range
    double refractory_ms = 500.0;
};

/// Local maxima of the (pre-filtered) heel channel with prominence and
/// refractory gating. When two candidates fall within the refractory period
/// the larger one survives.
std::vector<GaitEvent> detect_heel_strikes(const std::vector<double>& heel_fsr,
                                           double rate_hz, EventSide side,
                                           const HeelStrikeConfig& config = {});

struct ToeOffConfig {
    double threshold = 0.1;         // on the per-trial normalized forefoot maximum
    double refractory_ms = 500.0;
};

/// Falling crossings of max(m1, m5), normalized per trial, that stay below
/// the threshold for at least the refractory period.
std::vector<GaitEvent> detect_toe_offs(const std::vector<double>& m1,
                                       const std::vector<double>& m5,
                                       double rate_hz, EventSide side,
                                       const ToeOffConfig& config = {});

/// Seconds between consecutive heel strikes, per side.
std::map<EventSide, std::vector<double>> stride_durations(
    const std::vector<GaitEvent>& events);

}  // namespace exogait::biomech
