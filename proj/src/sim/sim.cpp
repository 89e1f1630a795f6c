#include "exogait/sim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace exogait::sim {

namespace {

using biomech::EventKind;
using biomech::EventSide;
using biomech::GaitEvent;
using fuzzy::GaitPhase;
using protocol::DeviceId;

// Loading weight per (phase, channel), channel order LH, L5M, L1M, RH, R5M,
// R1M. The heel columns are placeholders: heel channels follow the strike
// transients below. Secondary loaded sensors sit at 0.65 so the rule whose
// pattern is a superset of a competitor's always keeps its extra sensors
// strictly hotter; that margin is what makes the min-rule robust to noise.
constexpr double kSecondary = 0.65;
constexpr std::array<std::array<double, 6>, 8> kWeights = {{
    // LH    L5M        L1M        RH   R5M  R1M
    {0.0, kSecondary, kSecondary, 1.0, 0.0, 1.0},  // heel strike
    {0.0, 0.0, 1.0, 1.0, 1.0, 0.0},                // loading response
    {0.0, 0.0, 0.0, 1.0, 1.0, 1.0},                // mid stance
    {1.0, 0.0, 0.0, 0.0, 1.0, kSecondary},         // terminal stance
    {1.0, 0.0, 0.0, 0.0, 0.0, 1.0},                // pre swing
    {1.0, kSecondary, kSecondary, 0.0, 1.0, 0.0},  // initial swing
    {1.0, kSecondary, kSecondary, 0.0, 0.0, 0.0},  // mid swing
    {0.0, 1.0, 1.0, 0.0, 0.0, 0.0},                // terminal swing
}};

double raised_cos(double x) {  // 0 -> 0, 1 -> 1, flat at both ends
    return (1.0 - std::cos(kPi * std::clamp(x, 0.0, 1.0))) * 0.5;
}

double ease(double from, double to, double x) {
    return from + (to - from) * raised_cos(std::clamp(x, 0.0, 1.0));
}

struct Timeline {
    double cycle;
    double lead;
    double total;
    std::array<double, 9> b;  // cumulative phase boundaries within a cycle
    int n_strides;
    double ramp;
    double attack;

    // Maps absolute time onto (cycle index, cycle-local time); the lead-in
    // is the tail (mid-swing onward) of virtual cycle -1.
    void locate(double t, int& k, double& u) const {
        k = static_cast<int>(std::floor((t - lead) / cycle));
        k = std::clamp(k, -1, n_strides - 1);
        u = t - lead - static_cast<double>(k) * cycle;
        u = std::clamp(u, 0.0, cycle);
    }

    int phase_at(double u) const {
        for (int p = 7; p >= 0; --p) {
            if (u >= b[p]) return p;
        }
        return 0;
    }
};

Timeline make_timeline(const GaitProfile& p) {
    Timeline tl;
    tl.cycle = p.step_duration_s * 1000.0;
    tl.b[0] = 0.0;
    for (int i = 0; i < 8; ++i) tl.b[i + 1] = tl.b[i] + p.phase_fractions[i] * tl.cycle;
    tl.lead = tl.b[8] - tl.b[6];  // mid-swing + terminal swing
    tl.total = tl.lead + p.n_strides * tl.cycle;
    tl.n_strides = p.n_strides;
    tl.ramp = p.ramp_ms;
    tl.attack = p.heel_attack_ms;
    return tl;
}

// Pattern-driven channels: phase weights blended with raised-cosine ramps
// centered on each boundary. The final cycle does not blend toward the
// nonexistent next stride.
double generic_activation(const Timeline& tl, int channel, int k, double u) {
    const int p = tl.phase_at(u);
    const double w = kWeights[p][channel];
    const double r = tl.ramp * 0.5;
    const double d0 = u - tl.b[p];
    const double d1 = tl.b[p + 1] - u;
    if (d0 < r && !(k == -1 && p == 6)) {  // the trial opens mid-swing, ramp-free
        const int prev = p == 0 ? 7 : p - 1;
        const double x = (d0 + r) / tl.ramp;
        return kWeights[prev][channel] + (w - kWeights[prev][channel]) * raised_cos(x);
    }
    if (d1 < r) {
        if (p == 7 && k == tl.n_strides - 1) return w;
        const int next = p == 7 ? 0 : p + 1;
        const double x = (r - d1) / tl.ramp;
        return w + (kWeights[next][channel] - w) * raised_cos(x);
    }
    return w;
}

// Heel strike transient: raised-cosine attack peaking exactly at the strike
// instant, a mirrored 0.2 drop over the first attack-length of stance (the
// contrast keeps noise prominences on the stance plateau well under the
// detector threshold), then slow eases and a ramp release.
double right_heel_activation(const Timeline& tl, int k, double u) {
    double v = 0.0;
    if (u <= tl.b[3] + tl.ramp * 0.5 && k >= 0) {
        double base;
        if (u < tl.attack) {
            base = 0.8 + 0.2 * (1.0 + std::cos(kPi * u / tl.attack)) * 0.5;
        } else if (u < tl.b[1]) {
            base = ease(0.8, 0.78, (u - tl.attack) / (tl.b[1] - tl.attack));
        } else if (u < tl.b[2]) {
            base = ease(0.78, 0.7, (u - tl.b[1]) / (tl.b[2] - tl.b[1]));
        } else {
            base = ease(0.7, 0.62, (u - tl.b[2]) / (tl.b[3] - tl.b[2]));
        }
        double release = 1.0;
        if (u > tl.b[3] - tl.ramp * 0.5) {
            release = 1.0 - raised_cos((u - (tl.b[3] - tl.ramp * 0.5)) / tl.ramp);
        }
        v = base * release;
    }
    // Attack of the next stride's strike, truncated after the last stride.
    if (u >= tl.cycle - tl.attack && k + 1 <= tl.n_strides - 1) {
        v = std::max(v, (1.0 + std::cos(kPi * (tl.cycle - u) / tl.attack)) * 0.5);
    }
    return v;
}

double left_heel_activation(const Timeline& tl, int k, double u) {
    double v = 0.0;
    if (u >= tl.b[3] - tl.attack && u < tl.b[3] && k >= 0) {
        v = (1.0 + std::cos(kPi * (tl.b[3] - u) / tl.attack)) * 0.5;
    } else if (u >= tl.b[3]) {
        double base;
        const double w = u - tl.b[3];
        if (w < tl.attack) {
            base = 0.8 + 0.2 * (1.0 + std::cos(kPi * w / tl.attack)) * 0.5;
        } else if (u < tl.b[4]) {
            base = ease(0.8, 0.79, (u - tl.b[3] - tl.attack) / (tl.b[4] - tl.b[3] - tl.attack));
        } else if (u < tl.b[5]) {
            base = ease(0.79, 0.785, (u - tl.b[4]) / (tl.b[5] - tl.b[4]));
        } else if (u < tl.b[6]) {
            base = ease(0.785, 0.78, (u - tl.b[5]) / (tl.b[6] - tl.b[5]));
        } else {
            base = 0.78;
        }
        double release = 1.0;
        if (u > tl.b[7] - tl.ramp * 0.5) {
            release = 1.0 - raised_cos((u - (tl.b[7] - tl.ramp * 0.5)) / tl.ramp);
        }
        v = u < tl.b[7] + tl.ramp * 0.5 ? base * release : 0.0;
    }
    return v;
}

double activation(const Timeline& tl, int channel, double t) {
    int k;
    double u;
    tl.locate(t, k, u);
    if (channel == fuzzy::LH) return left_heel_activation(tl, k, u);
    if (channel == fuzzy::RH) return right_heel_activation(tl, k, u);
    return generic_activation(tl, channel, k, u);
}

// Crutch axial force: raised-cosine bumps synchronized to the contralateral
// stance, widened so both crutches overlap around each strike.
double crutch_force(const Timeline& tl, EventSide crutch, double t, double peak) {
    int k;
    double u;
    tl.locate(t, k, u);
    const double w = tl.cycle / 8.0;  // widening beyond the stance window
    double start, span;
    if (crutch == EventSide::Left) {  // right foot stance: [b0, b3]
        start = -w;
        span = tl.b[3] + 2.0 * w;
    } else {  // left foot stance: [b3, b7]
        start = tl.b[3] - w;
        span = tl.b[7] - tl.b[3] + 2.0 * w;
    }
    double v = 0.0;
    for (double shift : {0.0, -tl.cycle, tl.cycle}) {
        const double x = (u + shift - start) / span;
        // shift -cycle evaluates the next stride's bump reaching back across
        // the cycle edge, +cycle the previous stride's tail.
        const int bump_cycle = k + (shift < 0.0 ? 1 : (shift > 0.0 ? -1 : 0));
        if (x > 0.0 && x < 1.0 && bump_cycle <= tl.n_strides - 1) {
            v = std::max(v, std::sin(kPi * x) * std::sin(kPi * x));
        }
    }
    return peak * v;
}

void validate(const GaitProfile& p, const NoiseModel& n) {
    double sum = 0.0;
    for (double f : p.phase_fractions) {
        if (f < 0.0) throw sim_error("phase fractions must be non-negative");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw sim_error("phase fractions must sum to 1");
    if (!(p.rate_hz > 0.0) || p.rate_hz > 1000.0) throw sim_error("rate_hz must lie in (0, 1000]");
    if (p.n_strides < 1) throw sim_error("n_strides must be at least 1");
    if (!(p.step_duration_s > 0.0)) throw sim_error("step_duration_s must be positive");
    if (!(p.fsr_amplitude > 0.0)) throw sim_error("fsr_amplitude must be positive");
    if (p.crutch_peak_n < 0.0) throw sim_error("crutch_peak_n must be non-negative");
    if (!(n.saturation_ceiling_frac > 0.0) || n.saturation_ceiling_frac > 1.0) {
        throw sim_error("saturation_ceiling_frac must lie in (0, 1]");
    }
    for (double f : p.phase_fractions) {
        if (f * p.step_duration_s * 1000.0 < p.ramp_ms) {
            throw sim_error("phase segments must be longer than the boundary ramp");
        }
    }
}

}  // namespace

LabeledTrial generate_trial(const GaitProfile& profile, const NoiseModel& noise) {
    validate(profile, noise);
    const Timeline tl = make_timeline(profile);
    const double period = 1000.0 / profile.rate_hz;
    const auto n_frames = static_cast<std::int64_t>(std::ceil(tl.total / period - 1e-9));

    LabeledTrial trial;
    trial.rate_hz = profile.rate_hz;
    trial.lead_in_s = tl.lead / 1000.0;
    trial.profile = profile;
    trial.frames.reserve(static_cast<std::size_t>(n_frames));
    trial.labels.reserve(static_cast<std::size_t>(n_frames));

    std::mt19937 rng(noise.seed);
    std::normal_distribution<double> unit_normal(0.0, 1.0);
    auto draw = [&](double sd) { return sd > 0.0 ? sd * unit_normal(rng) : (unit_normal(rng), 0.0); };

    const int ceiling = static_cast<int>(
        std::llround(noise.saturation_ceiling_frac * protocol::kFsrFullScale));
    const double tilt_axis_deg = 5.0;  // crutch tilt axis, a few degrees off pure AP sway
    const Vec3 tilt_axis = {std::sin(deg_to_rad(tilt_axis_deg)),
                            std::cos(deg_to_rad(tilt_axis_deg)), 0.0};

    // Clean per-side forefoot maxima for the toe-off ground truth.
    std::array<std::vector<double>, 2> clean_forefoot;

    for (std::int64_t i = 0; i < n_frames; ++i) {
        const double t = static_cast<double>(i) * period;
        int k;
        double u;
        tl.locate(t, k, u);
        trial.labels.push_back(static_cast<GaitPhase>(tl.phase_at(u)));

        // FSR channels in rule order.
        std::array<double, 6> act;
        std::array<int, 6> counts;
        for (int c = 0; c < 6; ++c) {
            act[c] = activation(tl, c, t);
            const double raw = act[c] * profile.fsr_amplitude + draw(noise.fsr_noise_sd);
            counts[c] = std::clamp(static_cast<int>(std::llround(raw)), 0, ceiling);
        }
        clean_forefoot[0].push_back(std::max(act[fuzzy::L1M], act[fuzzy::L5M]));
        clean_forefoot[1].push_back(std::max(act[fuzzy::R1M], act[fuzzy::R5M]));

        // Crutch loading and orientation.
        protocol::SensorFrame frame;
        frame.frame_index = i;
        frame.t_ms = t;
        for (int side = 0; side < 2; ++side) {
            const auto es = side == 0 ? EventSide::Left : EventSide::Right;
            const double f = crutch_force(tl, es, t, profile.crutch_peak_n);
            const double phase_shift = side == 0 ? 0.0 : kPi;
            double theta = profile.crutch_inclination_deg *
                           (0.9 + 0.2 * std::sin(2.0 * kPi * t / tl.cycle + phase_shift));
            theta += draw(noise.imu_angle_noise_deg);
            const Quat q = quat_from_axis_angle(tilt_axis, theta);

            const auto raw = static_cast<std::int32_t>(std::llround(f / trial.calibration.gain) +
                                                       trial.calibration.tare);
            protocol::FrameSlot slot;
            slot.accel = {0.0, 0.0, 0.0};
            slot.euler_deg = quat_to_euler_zyx_deg(q);
            slot.data = protocol::CrutchSlotData{raw};
            frame.slots[side] = slot;

            // Ground truth via the analytic axis direction, independent of
            // the quaternion rotation the pipeline uses.
            const double f_cal = (static_cast<double>(raw) - trial.calibration.tare) *
                                 trial.calibration.gain;
            const double st = std::sin(deg_to_rad(theta));
            const double ct = std::cos(deg_to_rad(theta));
            biomech::GrfVector g;
            g.f_axial = f_cal;
            g.f_world = {f_cal * st * tilt_axis.y, -f_cal * st * tilt_axis.x, f_cal * ct};
            g.inclination_deg = std::abs(theta);
            trial.grf_truth[side].push_back(g);
        }

        for (int side = 0; side < 2; ++side) {
            const int heel = side == 0 ? fuzzy::LH : fuzzy::RH;
            const int m1 = side == 0 ? fuzzy::L1M : fuzzy::R1M;
            const int m5 = side == 0 ? fuzzy::L5M : fuzzy::R5M;

            // Forward acceleration bumps during the foot's airborne window,
            // dorsi/plantarflexion sway for the pitch predicate.
            double swing_start = side == 0 ? tl.b[0] : tl.b[4];
            double swing_end = side == 0 ? tl.b[2] : tl.b[7];
            double ax = 0.0;
            const double xs = (u - swing_start) / (swing_end - swing_start);
            if (xs > 0.0 && xs < 1.0) ax = 2.5 * std::sin(kPi * xs) * std::sin(kPi * xs);
            double pitch = 8.0 * std::sin(2.0 * kPi * t / tl.cycle + (side == 0 ? 0.5 : -0.5));
            pitch += draw(noise.imu_angle_noise_deg);

            protocol::FrameSlot slot;
            slot.accel = {ax, 0.0, 0.0};
            slot.euler_deg = quat_to_euler_zyx_deg(euler_zyx_deg_to_quat({0.0, pitch, 0.0}));
            slot.data = protocol::InsoleSlotData{{counts[heel], counts[m1], counts[m5]}};
            frame.slots[2 + side] = slot;

            // CoP truth recomputed inline from the emitted counts.
            const auto& geom = trial.geometry;
            biomech::CopSample cs;
            cs.f_total = counts[heel] + counts[m1] + counts[m5];
            if (cs.f_total >= biomech::kCopContactEpsilon) {
                cs.valid = true;
                cs.y_mm = (geom.y_h * counts[heel] + geom.y_m1 * counts[m1] +
                           geom.y_m5 * counts[m5]) / cs.f_total;
                cs.x_mm = (geom.x_h * counts[heel] + geom.x_m1 * counts[m1] +
                           geom.x_m5 * counts[m5]) / cs.f_total;
            }
            trial.cop_truth[side].push_back(cs);
        }

        trial.frames.push_back(std::move(frame));
    }

    // Ground-truth events. Heel strikes sit exactly at the label transitions
    // into (mirrored) heel strike; toe-offs at the clean forefoot unloading
    // crossings.
    // A strike's frame is the first grid instant at or after it, which is
    // also where the label flips.
    const auto frame_at = [&](double t) {
        return static_cast<std::int64_t>(std::ceil(t / period - 1e-9));
    };
    for (int k = 0; k < profile.n_strides; ++k) {
        const double t_r = tl.lead + k * tl.cycle;
        const double t_l = tl.lead + k * tl.cycle + tl.b[3];
        trial.events.push_back({EventKind::HeelStrike, EventSide::Right, t_r, frame_at(t_r)});
        trial.events.push_back({EventKind::HeelStrike, EventSide::Left, t_l, frame_at(t_l)});
    }
    for (int side = 0; side < 2; ++side) {
        const auto toe_offs = biomech::detect_toe_offs(
            clean_forefoot[side], clean_forefoot[side], profile.rate_hz,
            side == 0 ? EventSide::Left : EventSide::Right);
        trial.events.insert(trial.events.end(), toe_offs.begin(), toe_offs.end());
    }
    std::sort(trial.events.begin(), trial.events.end(),
              [](const GaitEvent& a, const GaitEvent& b) { return a.t_ms < b.t_ms; });
    return trial;
}

std::array<std::vector<protocol::SensorPacket>, protocol::kNumDevices> emit_packets(
    const LabeledTrial& trial, const TransportModel& transport) {
    std::array<std::vector<protocol::SensorPacket>, protocol::kNumDevices> streams;
    std::mt19937 rng(transport.seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    for (int d = 0; d < protocol::kNumDevices; ++d) {
        auto& stream = streams[d];
        stream.reserve(trial.frames.size());
        for (const auto& frame : trial.frames) {
            const auto& slot = frame.slots[d];
            if (!slot) continue;
            if (transport.drop_prob > 0.0 && uniform(rng) < transport.drop_prob) continue;

            protocol::SensorPacket p;
            p.device = static_cast<DeviceId>(d);
            p.seq = static_cast<std::uint64_t>(frame.frame_index);
            p.t_ms = frame.t_ms;
            if (transport.jitter_ms_sd > 0.0) {
                p.t_ms = std::max(0.0, p.t_ms + transport.jitter_ms_sd * unit_normal(rng));
            }
            p.imu = protocol::ImuSample::from_euler_deg(slot->euler_deg, slot->accel);
            if (const auto* c = std::get_if<protocol::CrutchSlotData>(&slot->data)) {
                p.payload = protocol::CrutchPayload{c->load_raw, std::nullopt};
            } else {
                p.payload = protocol::InsolePayload{
                    std::get<protocol::InsoleSlotData>(slot->data).fsr_raw};
            }
            stream.push_back(std::move(p));
        }
        if (transport.reorder_prob > 0.0) {
            for (std::size_t i = 0; i + 1 < stream.size();) {
                if (uniform(rng) < transport.reorder_prob) {
                    std::swap(stream[i], stream[i + 1]);
                    i += 2;
                } else {
                    i += 1;
                }
            }
        }
    }
    return streams;
}

TruthReport truth_report(const LabeledTrial& trial) {
    TruthReport rep;
    const double lead_ms = trial.lead_in_s * 1000.0;
    for (std::size_t i = 0; i < trial.labels.size(); ++i) {
        if (trial.frames[i].t_ms >= lead_ms) rep.phase_frame_counts[trial.labels[i]] += 1;
    }
    for (const auto& e : trial.events) {
        const bool left = e.side == EventSide::Left;
        if (e.kind == EventKind::HeelStrike) {
            (left ? rep.heel_strike_t_ms_left : rep.heel_strike_t_ms_right).push_back(e.t_ms);
        } else {
            (left ? rep.toe_off_t_ms_left : rep.toe_off_t_ms_right).push_back(e.t_ms);
        }
    }
    rep.stride_count = static_cast<int>(rep.heel_strike_t_ms_right.size());
    return rep;
}

GaitProfile profile_from_json(const nlohmann::json& doc) {
    GaitProfile p;
    p.step_duration_s = doc.value("step_duration_s", p.step_duration_s);
    p.n_strides = doc.value("n_strides", p.n_strides);
    if (doc.contains("phase_fractions")) {
        const auto& pf = doc.at("phase_fractions");
        if (!pf.is_array() || pf.size() != 8) throw sim_error("phase_fractions must list 8 values");
        for (int i = 0; i < 8; ++i) p.phase_fractions[i] = pf[i].get<double>();
    }
    p.fsr_amplitude = doc.value("fsr_amplitude", p.fsr_amplitude);
    p.crutch_peak_n = doc.value("crutch_peak_n", p.crutch_peak_n);
    p.crutch_inclination_deg = doc.value("crutch_inclination_deg", p.crutch_inclination_deg);
    p.rate_hz = doc.value("rate_hz", p.rate_hz);
    p.ramp_ms = doc.value("ramp_ms", p.ramp_ms);
    p.heel_attack_ms = doc.value("heel_attack_ms", p.heel_attack_ms);
    return p;
}

NoiseModel noise_from_json(const nlohmann::json& doc) {
    NoiseModel n;
    n.fsr_noise_sd = doc.value("fsr_noise_sd", n.fsr_noise_sd);
    n.saturation_ceiling_frac = doc.value("saturation_ceiling_frac", n.saturation_ceiling_frac);
    n.imu_angle_noise_deg = doc.value("imu_angle_noise_deg", n.imu_angle_noise_deg);
    n.seed = doc.value("seed", n.seed);
    return n;
}

TransportModel transport_from_json(const nlohmann::json& doc) {
    TransportModel t;
    t.drop_prob = doc.value("drop_prob", t.drop_prob);
    t.jitter_ms_sd = doc.value("jitter_ms_sd", t.jitter_ms_sd);
    t.reorder_prob = doc.value("reorder_prob", t.reorder_prob);
    t.seed = doc.value("seed", t.seed);
    if (t.drop_prob < 0.0 || t.drop_prob >= 1.0) throw sim_error("drop_prob must lie in [0, 1)");
    if (t.reorder_prob < 0.0 || t.reorder_prob >= 1.0) throw sim_error("reorder_prob must lie in [0, 1)");
    return t;
}

nlohmann::json profile_to_json(const GaitProfile& p) {
    return {{"step_duration_s", p.step_duration_s},
            {"n_strides", p.n_strides},
            {"phase_fractions", p.phase_fractions},
            {"fsr_amplitude", p.fsr_amplitude},
            {"crutch_peak_n", p.crutch_peak_n},
            {"crutch_inclination_deg", p.crutch_inclination_deg},
            {"rate_hz", p.rate_hz},
            {"ramp_ms", p.ramp_ms},
            {"heel_attack_ms", p.heel_attack_ms}};
}

nlohmann::json noise_to_json(const NoiseModel& n) {
    return {{"fsr_noise_sd", n.fsr_noise_sd},
            {"saturation_ceiling_frac", n.saturation_ceiling_frac},
            {"imu_angle_noise_deg", n.imu_angle_noise_deg},
            {"seed", n.seed}};
}

nlohmann::json transport_to_json(const TransportModel& t) {
    return {{"drop_prob", t.drop_prob},
            {"jitter_ms_sd", t.jitter_ms_sd},
            {"reorder_prob", t.reorder_prob},
            {"seed", t.seed}};
}

}  // namespace exogait::sim
