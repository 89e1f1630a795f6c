#include "exogait/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <thread>

#include "exogait/biomech/biomech.hpp"
#include "exogait/control/control.hpp"
#include "exogait/dsp/stats.hpp"
#include "exogait/fuzzy/fuzzy.hpp"
#include "exogait/protocol/assembler.hpp"
#include "exogait/protocol/codec.hpp"
#include "exogait/protocol/csv_log.hpp"
#include "exogait/sim/sim.hpp"

namespace exogait::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct cli_io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cli_io_error("cannot open '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw std::invalid_argument("'" + path + "' is not valid JSON");
    }
    return doc;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw cli_io_error("cannot create '" + path + "'");
    out << content;
    if (!out) throw cli_io_error("failed writing '" + path + "'");
}

void write_manifest(const std::string& path, const std::string& command,
                    const json& params, const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    json m;
    m["artifact_version"] = kVersion;
    m["command"] = command;
    m["params"] = params;
    m["inputs"] = inputs;
    m["outputs"] = outputs;
    write_text_file(path, m.dump(2) + "\n");
}

std::vector<protocol::SensorFrame> read_frames_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cli_io_error("cannot open '" + path + "'");
    return protocol::read_csv(in);
}

// Rule-order FSR vector [LH, L5M, L1M, RH, R5M, R1M] from a frame, or
// nothing when either insole is in a gap.
std::optional<std::array<double, 6>> fsr_channels(const protocol::SensorFrame& f) {
    const auto& left = f.slot(protocol::DeviceId::InsoleLeft);
    const auto& right = f.slot(protocol::DeviceId::InsoleRight);
    if (!left || !right) return std::nullopt;
    const auto& lf = std::get<protocol::InsoleSlotData>(left->data).fsr_raw;
    const auto& rf = std::get<protocol::InsoleSlotData>(right->data).fsr_raw;
    return std::array<double, 6>{
        static_cast<double>(lf[0]), static_cast<double>(lf[2]), static_cast<double>(lf[1]),
        static_cast<double>(rf[0]), static_cast<double>(rf[2]), static_cast<double>(rf[1])};
}

double infer_rate_hz(const std::vector<protocol::SensorFrame>& frames) {
    if (frames.size() < 2) return 130.0;
    std::vector<double> diffs;
    diffs.reserve(frames.size() - 1);
    for (std::size_t i = 1; i < frames.size(); ++i) {
        diffs.push_back(frames[i].t_ms - frames[i - 1].t_ms);
    }
    const double med = dsp::median_iqr(diffs).first;
    if (!(med > 0.0)) throw std::invalid_argument("frame timestamps are not increasing");
    return 1000.0 / med;
}

const char* event_kind_name(biomech::EventKind k) {
    return k == biomech::EventKind::HeelStrike ? "heel_strike" : "toe_off";
}
const char* event_side_name(biomech::EventSide s) {
    return s == biomech::EventSide::Left ? "left" : "right";
}

// ---------------------------------------------------------------------------
// simulate

int cmd_simulate(const std::string& profile_path, const std::string& noise_path,
                 const std::string& transport_path, const std::string& out_dir,
                 std::optional<unsigned> seed) {
    sim::GaitProfile profile;
    sim::NoiseModel noise;
    sim::TransportModel transport;
    if (!profile_path.empty()) profile = sim::profile_from_json(load_json_file(profile_path));
    if (!noise_path.empty()) noise = sim::noise_from_json(load_json_file(noise_path));
    if (!transport_path.empty()) transport = sim::transport_from_json(load_json_file(transport_path));
    if (seed) {
        noise.seed = *seed;
        transport.seed = *seed + 1;
    }

    const sim::LabeledTrial trial = sim::generate_trial(profile, noise);
    const auto streams = sim::emit_packets(trial, transport);

    fs::create_directories(out_dir);

    // Packet stream, newline-delimited.
    std::string packets_text;
    std::array<std::vector<protocol::SensorPacket>, protocol::kNumDevices> decoded;
    for (int d = 0; d < protocol::kNumDevices; ++d) {
        for (const auto& p : streams[d]) {
            const std::string line = protocol::encode_packet(p);
            packets_text += line;
            packets_text += '\n';
            decoded[d].push_back(protocol::decode_packet(line));
        }
    }
    const std::string packets_path = (fs::path(out_dir) / "packets.ndjson").string();
    write_text_file(packets_path, packets_text);

    // Frames CSV goes through the same decode+assemble path `convert` uses,
    // so identity transports reproduce it byte for byte.
    protocol::AssemblyConfig acfg;
    acfg.rate_hz = profile.rate_hz;
    const auto frames = protocol::assemble_frames(decoded, acfg);
    const std::string frames_path = (fs::path(out_dir) / "frames.csv").string();
    {
        std::ofstream out(frames_path, std::ios::binary);
        if (!out) throw cli_io_error("cannot create '" + frames_path + "'");
        protocol::write_csv(frames, out);
    }

    // Sidecar labels + ground-truth events.
    std::string labels_text = "frame_index,t_ms,phase,event_kind,event_side\n";
    std::map<std::int64_t, std::vector<const biomech::GaitEvent*>> by_frame;
    for (const auto& e : trial.events) by_frame[e.frame_index].push_back(&e);
    for (std::size_t i = 0; i < trial.frames.size(); ++i) {
        labels_text += format_int(static_cast<std::int64_t>(i));
        labels_text += ',';
        labels_text += format_num(trial.frames[i].t_ms);
        labels_text += ',';
        labels_text += fuzzy::phase_name(trial.labels[i]);
        std::string kinds, sides;
        if (auto it = by_frame.find(static_cast<std::int64_t>(i)); it != by_frame.end()) {
            for (const auto* e : it->second) {
                if (!kinds.empty()) {
                    kinds += ';';
                    sides += ';';
                }
                kinds += event_kind_name(e->kind);
                sides += event_side_name(e->side);
            }
        }
        labels_text += ',';
        labels_text += kinds;
        labels_text += ',';
        labels_text += sides;
        labels_text += '\n';
    }
    const std::string labels_path = (fs::path(out_dir) / "labels.csv").string();
    write_text_file(labels_path, labels_text);

    json params;
    params["profile"] = sim::profile_to_json(profile);
    params["noise"] = sim::noise_to_json(noise);
    params["transport"] = sim::transport_to_json(transport);
    params["profile_config"] = profile_path;
    params["noise_config"] = noise_path;
    params["transport_config"] = transport_path;
    write_manifest((fs::path(out_dir) / "manifest.json").string(), "simulate", params, {},
                   {packets_path, frames_path, labels_path});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate

int cmd_estimate(const std::string& in_path, const std::string& rules_path,
                 const std::string& out_path) {
    const auto frames = read_frames_file(in_path);
    if (frames.empty()) throw std::invalid_argument("'" + in_path + "' holds no frames");

    fuzzy::ClassifierConfig cfg;
    if (!rules_path.empty()) cfg = fuzzy::load_classifier_config(rules_path);

    std::string text = "frame_index,t_ms,selected";
    for (int p = 0; p < fuzzy::kNumPhases; ++p) {
        text += ",g_";
        text += fuzzy::phase_name(static_cast<fuzzy::GaitPhase>(p));
    }
    text += '\n';

    fuzzy::SmoothingState state;
    for (const auto& f : frames) {
        fuzzy::PhaseEstimate est;
        est.frame_index = f.frame_index;
        if (const auto fsr = fsr_channels(f)) {
            std::tie(est, state) = fuzzy::classify(*fsr, state, cfg, f.frame_index);
        } else {
            // Missing insole data: same handling as an airborne sample.
            state.candidate = fuzzy::GaitPhase::Unknown;
            state.run = 0;
        }
        text += format_int(f.frame_index);
        text += ',';
        text += format_num(f.t_ms);
        text += ',';
        text += fuzzy::phase_name(est.selected);
        for (int p = 0; p < fuzzy::kNumPhases; ++p) {
            text += ',';
            text += format_num(est.grades[p]);
        }
        text += '\n';
    }
    write_text_file(out_path, text);

    json params;
    params["rules_config"] = rules_path;
    params["classifier"] = fuzzy::classifier_config_to_json(cfg);
    write_manifest(out_path + ".manifest.json", "estimate", params, {in_path}, {out_path});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

std::vector<double> gap_filled_series(const std::vector<protocol::SensorFrame>& frames,
                                      protocol::DeviceId dev, int fsr_index) {
    std::vector<double> out;
    out.reserve(frames.size());
    double held = 0.0;
    for (const auto& f : frames) {
        if (const auto& slot = f.slot(dev)) {
            held = std::get<protocol::InsoleSlotData>(slot->data).fsr_raw[fsr_index];
        }
        out.push_back(held);
    }
    return out;
}

int cmd_analyze(const std::string& in_path, const std::string& geometry_path,
                const std::string& cal_path, const std::string& out_path,
                const std::string& events_csv, const std::string& cop_csv,
                const std::string& cop_side, double event_cutoff_hz) {
    const auto frames = read_frames_file(in_path);
    if (frames.empty()) throw std::invalid_argument("'" + in_path + "' holds no frames");

    biomech::InsoleGeometry geometry;
    biomech::LoadCalibration calibration;
    if (!geometry_path.empty()) geometry = biomech::geometry_from_json(load_json_file(geometry_path));
    if (!cal_path.empty()) calibration = biomech::calibration_from_json(load_json_file(cal_path));

    const double rate_hz = infer_rate_hz(frames);

    json report;
    report["rate_hz"] = rate_hz;
    report["n_frames"] = frames.size();

    // Per-frame CoP and GRF series, column layout.
    std::array<std::vector<double>, 2> cop_y;
    for (int side = 0; side < 2; ++side) {
        const auto dev = side == 0 ? protocol::DeviceId::InsoleLeft : protocol::DeviceId::InsoleRight;
        json series;
        auto& t = series["t_ms"] = json::array();
        auto& y = series["y_mm"] = json::array();
        auto& x = series["x_mm"] = json::array();
        auto& valid = series["valid"] = json::array();
        for (const auto& f : frames) {
            biomech::CopSample s;
            if (const auto& slot = f.slot(dev)) {
                const auto& fsr = std::get<protocol::InsoleSlotData>(slot->data).fsr_raw;
                s = biomech::cop({static_cast<double>(fsr[0]), static_cast<double>(fsr[1]),
                                  static_cast<double>(fsr[2])},
                                 geometry);
            }
            t.push_back(f.t_ms);
            y.push_back(s.y_mm);
            x.push_back(s.x_mm);
            valid.push_back(s.valid);
            if (s.valid) cop_y[side].push_back(s.y_mm);
        }
        report["cop"][side == 0 ? "left" : "right"] = std::move(series);
    }

    for (int side = 0; side < 2; ++side) {
        const auto dev = side == 0 ? protocol::DeviceId::CrutchLeft : protocol::DeviceId::CrutchRight;
        json series;
        auto& f_axial = series["f_axial_n"] = json::array();
        auto& fx = series["f_world_x_n"] = json::array();
        auto& fy = series["f_world_y_n"] = json::array();
        auto& fz = series["f_world_z_n"] = json::array();
        auto& incl = series["inclination_deg"] = json::array();
        for (const auto& fr : frames) {
            biomech::GrfVector g;
            if (const auto& slot = fr.slot(dev)) {
                const double raw = std::get<protocol::CrutchSlotData>(slot->data).load_raw;
                // Tare noise can dip slightly negative; axial force is
                // defined non-negative.
                const double f_n = std::max(0.0, biomech::calibrate_load(raw, calibration));
                g = biomech::decompose_grf(f_n, euler_zyx_deg_to_quat(slot->euler_deg));
            }
            f_axial.push_back(g.f_axial);
            fx.push_back(g.f_world.x);
            fy.push_back(g.f_world.y);
            fz.push_back(g.f_world.z);
            incl.push_back(g.inclination_deg);
        }
        report["grf"][side == 0 ? "left" : "right"] = std::move(series);
    }

    // Gait events on lightly smoothed channels; the event channel keeps a
    // higher cutoff than the statistics channels so peaks stay sharp.
    const dsp::FilterSpec event_spec{2, event_cutoff_hz, rate_hz};
    std::vector<biomech::GaitEvent> events;
    for (int side = 0; side < 2; ++side) {
        const auto dev = side == 0 ? protocol::DeviceId::InsoleLeft : protocol::DeviceId::InsoleRight;
        const auto es = side == 0 ? biomech::EventSide::Left : biomech::EventSide::Right;
        const auto heel = dsp::zero_phase_filter(gap_filled_series(frames, dev, 0), event_spec);
        const auto m1 = dsp::zero_phase_filter(gap_filled_series(frames, dev, 1), event_spec);
        const auto m5 = dsp::zero_phase_filter(gap_filled_series(frames, dev, 2), event_spec);
        for (const auto& e : biomech::detect_heel_strikes(heel, rate_hz, es)) events.push_back(e);
        for (const auto& e : biomech::detect_toe_offs(m1, m5, rate_hz, es)) events.push_back(e);
    }
    std::sort(events.begin(), events.end(),
              [](const auto& a, const auto& b) { return a.t_ms < b.t_ms; });

    auto& jevents = report["events"] = json::array();
    for (const auto& e : events) {
        jevents.push_back({{"kind", event_kind_name(e.kind)},
                           {"side", event_side_name(e.side)},
                           {"t_ms", e.t_ms},
                           {"frame_index", e.frame_index}});
    }

    const auto strides = biomech::stride_durations(events);
    for (const auto& [side, durations] : strides) {
        report["stride_durations_s"][event_side_name(side)] = durations;
        if (!durations.empty()) {
            const auto [med, iqr] = dsp::median_iqr(durations);
            report["summary"]["stride_duration_s"][event_side_name(side)] = {
                {"median", med}, {"iqr", iqr}, {"count", durations.size()}};
        }
    }
    for (int side = 0; side < 2; ++side) {
        if (cop_y[side].empty()) continue;
        const auto [med, iqr] = dsp::median_iqr(cop_y[side]);
        report["summary"]["cop_y_mm"][side == 0 ? "left" : "right"] = {{"median", med},
                                                                       {"iqr", iqr}};
    }

    write_text_file(out_path, report.dump(2) + "\n");
    std::vector<std::string> outputs = {out_path};

    if (!events_csv.empty()) {
        std::string text = "kind,side,t_ms,frame_index\n";
        for (const auto& e : events) {
            text += std::string(event_kind_name(e.kind)) + "," + event_side_name(e.side) + "," +
                    format_num(e.t_ms) + "," + format_int(e.frame_index) + "\n";
        }
        write_text_file(events_csv, text);
        outputs.push_back(events_csv);
    }
    if (!cop_csv.empty()) {
        const int side = cop_side == "right" ? 1 : 0;
        std::string text = "# rate_hz=" + format_num(rate_hz) + "\nt_ms,value\n";
        const auto& series = report["cop"][side == 1 ? "right" : "left"];
        const auto& t = series["t_ms"];
        const auto& y = series["y_mm"];
        for (std::size_t i = 0; i < t.size(); ++i) {
            text += format_num(t[i].get<double>()) + "," + format_num(y[i].get<double>()) + "\n";
        }
        write_text_file(cop_csv, text);
        outputs.push_back(cop_csv);
    }

    json params;
    params["geometry_config"] = geometry_path;
    params["calibration_config"] = cal_path;
    params["geometry"] = biomech::geometry_to_json(geometry);
    params["calibration"] = biomech::calibration_to_json(calibration);
    params["event_cutoff_hz"] = event_cutoff_hz;
    write_manifest(out_path + ".manifest.json", "analyze", params, {in_path}, outputs);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// compare

struct Series {
    double rate_hz = 0.0;
    std::vector<double> t_ms;
    std::vector<double> values;
};

Series read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw cli_io_error("cannot open '" + path + "'");
    Series s;
    std::string line;
    bool header_seen = false;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos && line.find("rate_hz") != std::string::npos) {
                s.rate_hz = std::stod(line.substr(eq + 1));
            }
            continue;
        }
        if (!header_seen) {
            if (line != "t_ms,value") {
                throw std::invalid_argument("'" + path + "': series header must be 't_ms,value'");
            }
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::invalid_argument("'" + path + "' line " + std::to_string(line_no) +
                                        ": expected 't,value'");
        }
        s.t_ms.push_back(std::stod(line.substr(0, comma)));
        s.values.push_back(std::stod(line.substr(comma + 1)));
    }
    if (s.values.size() < 2) throw std::invalid_argument("'" + path + "' holds fewer than 2 samples");
    if (s.rate_hz <= 0.0) {
        s.rate_hz = 1000.0 * static_cast<double>(s.values.size() - 1) /
                    (s.t_ms.back() - s.t_ms.front());
    }
    return s;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& align,
                const std::string& out_path, double filter_cutoff, int filter_order,
                bool no_filter) {
    Series a = read_series(a_path);
    Series b = read_series(b_path);

    std::vector<std::string> notes;
    double common_rate = std::min(a.rate_hz, b.rate_hz);

    if (std::abs(a.rate_hz - b.rate_hz) > 1e-6 * common_rate) {
        if (align != "trigger") {
            throw std::invalid_argument("sampling rates differ (" + format_num(a.rate_hz) +
                                        " vs " + format_num(b.rate_hz) +
                                        " Hz); rerun with --align trigger");
        }
        // Trigger-relative alignment: crop to the common window, then bring
        // the faster series down to the slower rate.
        const double t0 = std::max(a.t_ms.front(), b.t_ms.front());
        const double t1 = std::min(a.t_ms.back(), b.t_ms.back());
        if (t1 <= t0) throw std::invalid_argument("series do not overlap in time");
        auto crop = [&](Series& s) {
            std::vector<double> v;
            for (std::size_t i = 0; i < s.values.size(); ++i) {
                if (s.t_ms[i] >= t0 - 1e-9 && s.t_ms[i] <= t1 + 1e-9) v.push_back(s.values[i]);
            }
            s.values = std::move(v);
        };
        crop(a);
        crop(b);
        if (a.rate_hz > b.rate_hz) {
            a.values = dsp::decimate(a.values, a.rate_hz, b.rate_hz);
            a.rate_hz = b.rate_hz;
        } else {
            b.values = dsp::decimate(b.values, b.rate_hz, a.rate_hz);
            b.rate_hz = a.rate_hz;
        }
        notes.push_back("resampled to " + format_num(common_rate) + " Hz over the trigger-aligned overlap");
    }
    const std::size_t n = std::min(a.values.size(), b.values.size());
    a.values.resize(n);
    b.values.resize(n);

    if (!no_filter) {
        const dsp::FilterSpec spec{filter_order, filter_cutoff, common_rate};
        a.values = dsp::zero_phase_filter(a.values, spec);
        b.values = dsp::zero_phase_filter(b.values, spec);
    }

    const dsp::AgreementReport rep = dsp::agreement_report(a.values, b.values);

    json doc;
    doc["n"] = n;
    doc["rate_hz"] = common_rate;
    doc["rmse"] = rep.rmse;
    if (rep.pearson_defined) {
        doc["pearson_r"] = rep.pearson_r;
    } else {
        doc["pearson_r"] = nullptr;
        notes.push_back("pearson undefined: at least one series is constant");
    }
    doc["median_diff"] = rep.median_diff;
    doc["iqr_diff"] = rep.iqr_diff;
    doc["loa_low"] = rep.loa_low;
    doc["loa_high"] = rep.loa_high;
    if (rep.wilcoxon_defined) {
        doc["wilcoxon_p"] = rep.wilcoxon_p;
    } else {
        doc["wilcoxon_p"] = nullptr;
        notes.push_back("wilcoxon undefined: all paired differences are zero");
    }
    doc["notes"] = notes;
    write_text_file(out_path, doc.dump(2) + "\n");

    json params;
    params["align"] = align;
    params["filter_cutoff_hz"] = filter_cutoff;
    params["filter_order"] = filter_order;
    params["no_filter"] = no_filter;
    write_manifest(out_path + ".manifest.json", "compare", params, {a_path, b_path}, {out_path});
    return kExitOk;
}

// ---------------------------------------------------------------------------
// convert

int cmd_convert(const std::string& in_path, const std::string& out_path, double rate_hz,
                double gap_timeout_ms) {
    std::ifstream in(in_path);
    if (!in) throw cli_io_error("cannot open '" + in_path + "'");

    protocol::AssemblyConfig acfg;
    acfg.rate_hz = rate_hz;
    acfg.gap_timeout_ms = gap_timeout_ms;
    protocol::FrameAssembler assembler(acfg);

    // Two-stage pipeline: this thread reads and decodes, the consumer feeds
    // the assembler through a bounded queue.
    constexpr std::size_t kQueueCap = 1024;
    std::deque<protocol::SensorPacket> queue;
    std::mutex m;
    std::condition_variable cv_push, cv_pop;
    bool done = false;

    std::thread consumer([&] {
        for (;;) {
            std::unique_lock lock(m);
            cv_pop.wait(lock, [&] { return !queue.empty() || done; });
            if (queue.empty()) return;
            protocol::SensorPacket p = std::move(queue.front());
            queue.pop_front();
            lock.unlock();
            cv_push.notify_one();
            assembler.push(p);
        }
    });

    std::string line;
    std::size_t line_no = 0;
    std::optional<std::string> decode_failure;
    std::size_t total_packets = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        protocol::SensorPacket p;
        try {
            p = protocol::decode_packet(line);
        } catch (const protocol::codec_error& e) {
            decode_failure = "'" + in_path + "' line " + std::to_string(line_no) + ": " + e.what();
            break;
        }
        ++total_packets;
        std::unique_lock lock(m);
        cv_push.wait(lock, [&] { return queue.size() < kQueueCap; });
        queue.push_back(std::move(p));
        lock.unlock();
        cv_pop.notify_one();
    }
    {
        std::lock_guard lock(m);
        done = true;
    }
    cv_pop.notify_all();
    consumer.join();
    if (decode_failure) throw std::invalid_argument(*decode_failure);
    if (total_packets == 0) throw std::invalid_argument("'" + in_path + "' holds no packets");

    protocol::AssemblyStats stats;
    const auto frames = assembler.finalize(&stats);
    {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw cli_io_error("cannot create '" + out_path + "'");
        protocol::write_csv(frames, out);
    }

    // Gap statistics to stderr: held = bridged short silences, gap = slots
    // lost to silences beyond the timeout.
    for (int d = 0; d < protocol::kNumDevices; ++d) {
        std::cerr << "gap stats: " << protocol::device_name(static_cast<protocol::DeviceId>(d))
                  << " fresh " << stats.fresh[d] << ", held " << stats.held[d] << ", gap "
                  << stats.gapped[d] << " of " << frames.size() << " frames ("
                  << format_num(100.0 * static_cast<double>(stats.gapped[d]) /
                                static_cast<double>(frames.size()))
                  << "% gap)\n";
    }

    json params;
    params["rate_hz"] = rate_hz;
    params["gap_timeout_ms"] = gap_timeout_ms;
    write_manifest(out_path + ".manifest.json", "convert", params, {in_path}, {out_path});
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"Gait analysis and control engine for crutch-and-insole-instrumented exoskeletons"};
    app.require_subcommand(1);

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a labeled synthetic trial");
    std::string profile_path, noise_path, transport_path, out_dir;
    std::optional<unsigned> seed;
    sim_cmd->add_option("--profile", profile_path, "Gait profile JSON");
    sim_cmd->add_option("--noise", noise_path, "Noise model JSON");
    sim_cmd->add_option("--transport", transport_path, "Transport model JSON");
    sim_cmd->add_option("--out", out_dir, "Output directory")->required();
    sim_cmd->add_option("--seed", seed, "Overrides the noise seed (transport gets seed+1)");

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Run gait phase estimation over a frames CSV");
    std::string est_in, est_rules, est_out;
    est_cmd->add_option("--in", est_in, "Frames CSV")->required();
    est_cmd->add_option("--rules", est_rules, "Rules/membership config JSON");
    est_cmd->add_option("--out", est_out, "Per-frame phases CSV")->required();

    // analyze
    auto* ana_cmd = app.add_subcommand("analyze", "Compute biomechanical metrics from a frames CSV");
    std::string ana_in, ana_geom, ana_cal, ana_out, ana_events, ana_cop_csv, ana_cop_side = "left";
    double ana_event_cutoff = dsp::kDefaultAccelCutoffHz;
    ana_cmd->add_option("--in", ana_in, "Frames CSV")->required();
    ana_cmd->add_option("--geometry", ana_geom, "Insole geometry JSON");
    ana_cmd->add_option("--cal", ana_cal, "Load-cell calibration JSON");
    ana_cmd->add_option("--out", ana_out, "Report JSON")->required();
    ana_cmd->add_option("--events-csv", ana_events, "Also export events as CSV");
    ana_cmd->add_option("--cop-csv", ana_cop_csv, "Also export the anteroposterior CoP as a series CSV");
    ana_cmd->add_option("--cop-side", ana_cop_side, "Side for --cop-csv (left|right)");
    ana_cmd->add_option("--event-cutoff", ana_event_cutoff, "Zero-phase cutoff for event channels (Hz)");

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Agreement statistics between two series");
    std::string cmp_a, cmp_b, cmp_align = "none", cmp_out;
    double cmp_cutoff = 10.0;
    int cmp_order = 2;
    bool cmp_no_filter = false;
    cmp_cmd->add_option("--a", cmp_a, "First series CSV")->required();
    cmp_cmd->add_option("--b", cmp_b, "Second series CSV")->required();
    cmp_cmd->add_option("--align", cmp_align, "Alignment mode: none|trigger");
    cmp_cmd->add_option("--out", cmp_out, "Agreement report JSON")->required();
    cmp_cmd->add_option("--filter-cutoff", cmp_cutoff, "Zero-phase filter cutoff (Hz)");
    cmp_cmd->add_option("--filter-order", cmp_order, "Filter order");
    cmp_cmd->add_flag("--no-filter", cmp_no_filter, "Skip pre-comparison filtering");

    // convert
    auto* cnv_cmd = app.add_subcommand("convert", "Assemble a packet stream into a frames CSV");
    std::string cnv_in, cnv_out;
    double cnv_rate = 130.0, cnv_timeout = 50.0;
    cnv_cmd->add_option("--in", cnv_in, "Newline-delimited packet stream")->required();
    cnv_cmd->add_option("--out", cnv_out, "Frames CSV")->required();
    cnv_cmd->add_option("--rate", cnv_rate, "Frame grid rate (Hz)");
    cnv_cmd->add_option("--gap-timeout", cnv_timeout, "Silence beyond this is a gap (ms)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (sim_cmd->parsed()) {
            return cmd_simulate(profile_path, noise_path, transport_path, out_dir, seed);
        }
        if (est_cmd->parsed()) return cmd_estimate(est_in, est_rules, est_out);
        if (ana_cmd->parsed()) {
            return cmd_analyze(ana_in, ana_geom, ana_cal, ana_out, ana_events, ana_cop_csv,
                               ana_cop_side, ana_event_cutoff);
        }
        if (cmp_cmd->parsed()) {
            return cmd_compare(cmp_a, cmp_b, cmp_align, cmp_out, cmp_cutoff, cmp_order,
                               cmp_no_filter);
        }
        if (cnv_cmd->parsed()) return cmd_convert(cnv_in, cnv_out, cnv_rate, cnv_timeout);
    } catch (const cli_io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const protocol::csv_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind == protocol::CsvErrorKind::SinkFailure ? kExitIo : kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    args.reserve(static_cast<std::size_t>(argc));
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

}  // namespace exogait::cli
