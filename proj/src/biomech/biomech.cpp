#include "exogait/biomech/biomech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace exogait::biomech {

InsoleGeometry geometry_preset(const std::string& size_label) {
    InsoleGeometry g;
    g.size_label = size_label;
    if (size_label == "small") {
        g.y_m1 = 160.0;
        g.y_m5 = 145.0;
    } else if (size_label == "large") {
        g.y_m1 = 185.0;
        g.y_m5 = 165.0;
    } else if (size_label != "medium") {
        throw std::invalid_argument("unknown insole size '" + size_label + "'");
    }
    return g;
}

InsoleGeometry geometry_from_json(const nlohmann::json& doc) {
    InsoleGeometry g;
    if (doc.contains("size_label")) g = geometry_preset(doc.at("size_label").get<std::string>());
    g.y_h = doc.value("y_h", g.y_h);
    g.y_m1 = doc.value("y_m1", g.y_m1);
    g.y_m5 = doc.value("y_m5", g.y_m5);
    g.x_h = doc.value("x_h", g.x_h);
    g.x_m1 = doc.value("x_m1", g.x_m1);
    g.x_m5 = doc.value("x_m5", g.x_m5);
    if (!(g.y_m1 > g.y_h) || !(g.y_m5 > g.y_h)) {
        throw std::invalid_argument("metatarsal sensors must sit anterior to the heel");
    }
    return g;
}

nlohmann::json geometry_to_json(const InsoleGeometry& g) {
    return {{"size_label", g.size_label}, {"y_h", g.y_h},   {"y_m1", g.y_m1},
            {"y_m5", g.y_m5},             {"x_h", g.x_h},   {"x_m1", g.x_m1},
            {"x_m5", g.x_m5}};
}

LoadCalibration calibration_from_json(const nlohmann::json& doc) {
    LoadCalibration cal;
    cal.tare = doc.value("tare", cal.tare);
    cal.gain = doc.value("gain", cal.gain);
    if (!(cal.gain > 0.0)) throw std::invalid_argument("calibration gain must be positive");
    return cal;
}

nlohmann::json calibration_to_json(const LoadCalibration& cal) {
    return {{"tare", cal.tare}, {"gain", cal.gain}};
}

CopSample cop(const std::array<double, 3>& fsr, const InsoleGeometry& geom,
              double contact_epsilon) {
    CopSample s;
    s.f_total = fsr[0] + fsr[1] + fsr[2];
    if (s.f_total < contact_epsilon || s.f_total <= 0.0) return s;
    s.valid = true;
    s.y_mm = (geom.y_h * fsr[0] + geom.y_m1 * fsr[1] + geom.y_m5 * fsr[2]) / s.f_total;
    s.x_mm = (geom.x_h * fsr[0] + geom.x_m1 * fsr[1] + geom.x_m5 * fsr[2]) / s.f_total;
    return s;
}

GrfVector decompose_grf(double f_axial_n, const Quat& orientation) {
    if (std::abs(orientation.norm() - 1.0) > 1e-6) {
        throw biomech_error(BiomechErrorKind::NonUnitQuaternion,
                            "orientation quaternion is not unit length");
    }
    if (f_axial_n < 0.0) throw std::invalid_argument("axial force must be non-negative");

    GrfVector g;
    g.f_axial = f_axial_n;
    const Vec3 axis_world = orientation.rotate({0.0, 0.0, 1.0});
    g.f_world = f_axial_n * axis_world;
    g.inclination_deg = rad_to_deg(std::acos(std::clamp(axis_world.z, -1.0, 1.0)));
    return g;
}

namespace {

// Peak prominence bounded by higher terrain: height above the larger of the
// two valley floors between this peak and the nearest higher sample (or the
// signal edge) on each side.
double prominence(const std::vector<double>& x, std::size_t peak) {
    double left_min = x[peak];
    for (std::size_t i = peak; i-- > 0;) {
        left_min = std::min(left_min, x[i]);
        if (x[i] > x[peak]) break;
    }
    double right_min = x[peak];
    for (std::size_t i = peak + 1; i < x.size(); ++i) {
        right_min = std::min(right_min, x[i]);
        if (x[i] > x[peak]) break;
    }
    return x[peak] - std::max(left_min, right_min);
}

}  // namespace

std::vector<GaitEvent> detect_heel_strikes(const std::vector<double>& heel_fsr,
                                           double rate_hz, EventSide side,
                                           const HeelStrikeConfig& config) {
    if (heel_fsr.empty()) {
        throw biomech_error(BiomechErrorKind::EmptySignal, "heel signal is empty");
    }
    const auto [mn_it, mx_it] = std::minmax_element(heel_fsr.begin(), heel_fsr.end());
    const double range = *mx_it - *mn_it;
    if (range <= 0.0) return {};

    // Local maxima; a flat plateau counts once, at its center.
    std::vector<std::size_t> candidates;
    std::size_t i = 1;
    while (i + 1 < heel_fsr.size()) {
        if (heel_fsr[i] > heel_fsr[i - 1]) {
            std::size_t j = i;
            while (j + 1 < heel_fsr.size() && heel_fsr[j + 1] == heel_fsr[i]) ++j;
            if (j + 1 < heel_fsr.size() && heel_fsr[j + 1] < heel_fsr[i]) {
                candidates.push_back((i + j) / 2);
            }
            i = j + 1;
        } else {
            ++i;
        }
    }

    std::vector<std::size_t> prominent;
    for (std::size_t p : candidates) {
        if (prominence(heel_fsr, p) >= config.prominence_frac * range) prominent.push_back(p);
    }

    // Refractory gating: taller peaks win.
    std::sort(prominent.begin(), prominent.end(),
              [&](std::size_t a, std::size_t b) {
                  return heel_fsr[a] > heel_fsr[b] || (heel_fsr[a] == heel_fsr[b] && a < b);
              });
    const double refractory_samples = config.refractory_ms * rate_hz / 1000.0;
    std::vector<std::size_t> kept;
    for (std::size_t p : prominent) {
        const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t q) {
            return std::abs(static_cast<double>(p) - static_cast<double>(q)) < refractory_samples;
        });
        if (clear) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<GaitEvent> events;
    events.reserve(kept.size());
    for (std::size_t p : kept) {
        events.push_back({EventKind::HeelStrike, side,
                          static_cast<double>(p) / rate_hz * 1000.0,
                          static_cast<std::int64_t>(p)});
    }
    return events;
}

std::vector<GaitEvent> detect_toe_offs(const std::vector<double>& m1,
                                       const std::vector<double>& m5,
                                       double rate_hz, EventSide side,
                                       const ToeOffConfig& config) {
    if (m1.empty() || m5.empty()) {
        throw biomech_error(BiomechErrorKind::EmptySignal, "forefoot signal is empty");
    }
    if (m1.size() != m5.size()) {
        throw std::invalid_argument("m1 and m5 must have equal length");
    }

    std::vector<double> s(m1.size());
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::max(m1[i], m5[i]);
    const auto [mn_it, mx_it] = std::minmax_element(s.begin(), s.end());
    const double range = *mx_it - *mn_it;
    if (range <= 0.0) return {};
    for (double& v : s) v = (v - *mn_it) / range;

    const auto refractory = static_cast<std::size_t>(
        std::llround(config.refractory_ms * rate_hz / 1000.0));

    std::vector<GaitEvent> events;
    bool above = s[0] >= config.threshold;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] >= config.threshold) {
            above = true;
            continue;
        }
        if (!above) continue;
        // Falling crossing; keep it only if the signal stays below the
        // threshold for the whole refractory window (or to the end).
        bool stays = true;
        for (std::size_t j = i + 1; j < std::min(s.size(), i + refractory); ++j) {
            if (s[j] >= config.threshold) {
                stays = false;
                break;
            }
        }
        if (stays) {
            events.push_back({EventKind::ToeOff, side,
                              static_cast<double>(i) / rate_hz * 1000.0,
                              static_cast<std::int64_t>(i)});
        }
        above = false;
    }
    return events;
}

std::map<EventSide, std::vector<double>> stride_durations(
    const std::vector<GaitEvent>& events) {
    std::map<EventSide, std::vector<double>> out;
    std::map<EventSide, double> last;
    for (const GaitEvent& e : events) {
        if (e.kind != EventKind::HeelStrike) continue;
        if (auto it = last.find(e.side); it != last.end()) {
            out[e.side].push_back((e.t_ms - it->second) / 1000.0);
        }
        last[e.side] = e.t_ms;
    }
    return out;
}

}  // namespace exogait::biomech
