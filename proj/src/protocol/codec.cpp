#include "exogait/protocol/codec.hpp"

#include <json.hpp>

#include <cmath>
#include <cstring>

namespace exogait::protocol {

namespace {

using nlohmann::json;

void append_vec3(std::string& out, const Vec3& v) {
    out += '[';
    out += format_num(v.x);
    out += ',';
    out += format_num(v.y);
    out += ',';
    out += format_num(v.z);
    out += ']';
}

[[noreturn]] void schema(const std::string& msg) {
    throw codec_error(CodecErrorKind::SchemaViolation, msg);
}

double require_number(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_number()) schema(std::string("missing or non-numeric field '") + key + "'");
    return it->get<double>();
}

Vec3 require_vec3(const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_array() || it->size() != 3) {
        schema(std::string("field '") + key + "' must be an array of 3 numbers");
    }
    Vec3 v;
    double* comps[3] = {&v.x, &v.y, &v.z};
    for (int i = 0; i < 3; ++i) {
        if (!(*it)[i].is_number()) schema(std::string("field '") + key + "' must contain numbers");
        *comps[i] = (*it)[i].get<double>();
    }
    return v;
}

// Fast scanner for the exact canonical layout encode_packet produces. Any
// deviation (whitespace, key order, extra keys) rejects and the tolerant
// parser below takes over, so behavior is identical on its accepted set.
class CanonicalScanner {
  public:
    explicit CanonicalScanner(const std::string& text) : cur_(text.c_str()) {}

    bool lit(const char* s) {
        const std::size_t n = std::strlen(s);
        if (std::strncmp(cur_, s, n) != 0) return false;
        cur_ += n;
        return true;
    }

    bool number(double& out) {
        char* end = nullptr;
        out = std::strtod(cur_, &end);
        if (end == cur_) return false;
        cur_ = end;
        return true;
    }

    bool integer(std::int64_t& out) {
        char* end = nullptr;
        out = std::strtoll(cur_, &end, 10);
        if (end == cur_) return false;
        cur_ = end;
        return true;
    }

    bool vec3(Vec3& v) {
        return lit("[") && number(v.x) && lit(",") && number(v.y) && lit(",") &&
               number(v.z) && lit("]");
    }

    bool at_end() const { return *cur_ == '\0'; }

  private:
    const char* cur_;
};

bool try_decode_canonical(const std::string& bytes, SensorPacket& p) {
    CanonicalScanner s(bytes);
    if (!s.lit("{\"device\":\"")) return false;
    int dev = -1;
    for (DeviceId d : kAllDevices) {
        CanonicalScanner probe = s;
        if (probe.lit(device_name(d))) {
            s = probe;
            dev = static_cast<int>(d);
            break;
        }
    }
    if (dev < 0) return false;
    p.device = static_cast<DeviceId>(dev);

    std::int64_t seq = 0;
    double t_ms = 0.0;
    if (!s.lit("\",\"seq\":") || !s.integer(seq) || seq < 0) return false;
    if (!s.lit(",\"t_ms\":") || !s.number(t_ms) || t_ms < 0.0) return false;
    p.seq = static_cast<std::uint64_t>(seq);
    p.t_ms = t_ms;

    Quat q;
    Vec3 accel, euler;
    if (!s.lit(",\"imu\":{\"quat\":[") || !s.number(q.w) || !s.lit(",") || !s.number(q.x) ||
        !s.lit(",") || !s.number(q.y) || !s.lit(",") || !s.number(q.z) || !s.lit("]")) {
        return false;
    }
    if (!s.lit(",\"accel\":") || !s.vec3(accel)) return false;
    if (!s.lit(",\"euler\":") || !s.vec3(euler)) return false;
    if (std::abs(q.norm() - 1.0) > 1e-6) return false;
    p.imu = ImuSample::from_quat(q, accel);

    if (!s.lit("},\"payload\":{")) return false;
    if (is_crutch(p.device)) {
        std::int64_t load = 0;
        if (!s.lit("\"load_raw\":") || !s.integer(load)) return false;
        if (load < kLoadRawMin || load > kLoadRawMax) return false;
        CrutchPayload c;
        c.load_raw = static_cast<std::int32_t>(load);
        CanonicalScanner probe = s;
        if (probe.lit(",\"force_n\":")) {
            double f = 0.0;
            if (!probe.number(f)) return false;
            c.force_newton = f;
            s = probe;
        }
        p.payload = c;
    } else {
        InsolePayload ins;
        std::int64_t v0 = 0, v1 = 0, v2 = 0;
        if (!s.lit("\"fsr_raw\":[") || !s.integer(v0) || !s.lit(",") || !s.integer(v1) ||
            !s.lit(",") || !s.integer(v2) || !s.lit("]")) {
            return false;
        }
        for (std::int64_t v : {v0, v1, v2}) {
            if (v < 0 || v > kFsrFullScale) return false;
        }
        ins.fsr_raw = {static_cast<int>(v0), static_cast<int>(v1), static_cast<int>(v2)};
        p.payload = ins;
    }
    return s.lit("}}") && s.at_end();
}

}  // namespace

std::string encode_packet(const SensorPacket& p) {
    std::string out;
    out.reserve(256);
    out += "{\"device\":\"";
    out += device_name(p.device);
    out += "\",\"seq\":";
    out += format_int(static_cast<std::int64_t>(p.seq));
    out += ",\"t_ms\":";
    out += format_num(p.t_ms);
    out += ",\"imu\":{\"quat\":[";
    out += format_num(p.imu.quat.w);
    out += ',';
    out += format_num(p.imu.quat.x);
    out += ',';
    out += format_num(p.imu.quat.y);
    out += ',';
    out += format_num(p.imu.quat.z);
    out += "],\"accel\":";
    append_vec3(out, p.imu.accel);
    out += ",\"euler\":";
    append_vec3(out, p.imu.euler_deg);
    out += "},\"payload\":{";
    if (const auto* c = std::get_if<CrutchPayload>(&p.payload)) {
        out += "\"load_raw\":";
        out += format_int(c->load_raw);
        if (c->force_newton) {
            out += ",\"force_n\":";
            out += format_num(*c->force_newton);
        }
    } else {
        const auto& ins = std::get<InsolePayload>(p.payload);
        out += "\"fsr_raw\":[";
        out += format_int(ins.fsr_raw[0]);
        out += ',';
        out += format_int(ins.fsr_raw[1]);
        out += ',';
        out += format_int(ins.fsr_raw[2]);
        out += ']';
    }
    out += "}}";
    return out;
}

SensorPacket decode_packet(const std::string& bytes) {
    if (SensorPacket fast; try_decode_canonical(bytes, fast)) return fast;

    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw codec_error(CodecErrorKind::MalformedPacket, "packet is not a JSON object");
    }

    SensorPacket p;

    auto dev_it = doc.find("device");
    if (dev_it == doc.end() || !dev_it->is_string()) schema("missing or non-string field 'device'");
    auto dev = device_from_name(dev_it->get<std::string>());
    if (!dev) schema("unknown device '" + dev_it->get<std::string>() + "'");
    p.device = *dev;

    auto seq_it = doc.find("seq");
    if (seq_it == doc.end() || !seq_it->is_number_unsigned()) schema("missing or non-integer field 'seq'");
    p.seq = seq_it->get<std::uint64_t>();

    p.t_ms = require_number(doc, "t_ms");
    if (p.t_ms < 0.0) schema("t_ms must be non-negative");

    auto imu_it = doc.find("imu");
    if (imu_it == doc.end() || !imu_it->is_object()) schema("missing field 'imu'");
    auto quat_it = imu_it->find("quat");
    if (quat_it == imu_it->end() || !quat_it->is_array() || quat_it->size() != 4) {
        schema("field 'quat' must be an array of 4 numbers");
    }
    Quat q;
    double* qc[4] = {&q.w, &q.x, &q.y, &q.z};
    for (int i = 0; i < 4; ++i) {
        if (!(*quat_it)[i].is_number()) schema("field 'quat' must contain numbers");
        *qc[i] = (*quat_it)[i].get<double>();
    }
    if (std::abs(q.norm() - 1.0) > 1e-6) schema("quaternion is not unit length");
    p.imu = ImuSample::from_quat(q, require_vec3(*imu_it, "accel"));

    auto pay_it = doc.find("payload");
    if (pay_it == doc.end() || !pay_it->is_object()) schema("missing field 'payload'");
    const bool has_load = pay_it->contains("load_raw");
    const bool has_fsr = pay_it->contains("fsr_raw");
    if (is_crutch(p.device)) {
        if (has_fsr) {
            throw codec_error(CodecErrorKind::KindMismatch,
                              "crutch packet carries an insole payload");
        }
        if (!has_load || !(*pay_it)["load_raw"].is_number_integer()) {
            schema("crutch payload requires integer 'load_raw'");
        }
        CrutchPayload c;
        c.load_raw = (*pay_it)["load_raw"].get<std::int32_t>();
        if (c.load_raw < kLoadRawMin || c.load_raw > kLoadRawMax) {
            schema("load_raw outside the signed 24-bit range");
        }
        if (auto f = pay_it->find("force_n"); f != pay_it->end()) {
            if (!f->is_number()) schema("force_n must be a number");
            c.force_newton = f->get<double>();
        }
        p.payload = c;
    } else {
        if (has_load) {
            throw codec_error(CodecErrorKind::KindMismatch,
                              "insole packet carries a crutch payload");
        }
        if (!has_fsr || !(*pay_it)["fsr_raw"].is_array() || (*pay_it)["fsr_raw"].size() != 3) {
            schema("insole payload requires 'fsr_raw' of length 3");
        }
        InsolePayload ins;
        for (int i = 0; i < 3; ++i) {
            const auto& cell = (*pay_it)["fsr_raw"][i];
            if (!cell.is_number_integer()) schema("fsr_raw must contain integers");
            const auto v = cell.get<std::int64_t>();
            if (v < 0 || v > kFsrFullScale) schema("fsr_raw value outside [0, 4095]");
            ins.fsr_raw[i] = static_cast<int>(v);
        }
        p.payload = ins;
    }
    return p;
}

}  // namespace exogait::protocol
