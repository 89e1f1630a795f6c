#include "exogait/protocol/types.hpp"

namespace exogait::protocol {

const char* device_name(DeviceId d) {
    switch (d) {
        case DeviceId::CrutchLeft: return "crutch_left";
        case DeviceId::CrutchRight: return "crutch_right";
        case DeviceId::InsoleLeft: return "insole_left";
        case DeviceId::InsoleRight: return "insole_right";
    }
    return "unknown";
}

std::optional<DeviceId> device_from_name(std::string_view name) {
    for (DeviceId d : kAllDevices) {
        if (name == device_name(d)) return d;
    }
    return std::nullopt;
}

ImuSample ImuSample::from_quat(const Quat& q, const Vec3& accel) {
    return {q, accel, quat_to_euler_zyx_deg(q)};
}

ImuSample ImuSample::from_euler_deg(const Vec3& euler_deg, const Vec3& accel) {
    const Quat q = euler_zyx_deg_to_quat(euler_deg);
    return {q, accel, quat_to_euler_zyx_deg(q)};
}

std::vector<DeviceId> SensorFrame::gap_mask() const {
    std::vector<DeviceId> out;
    for (DeviceId d : kAllDevices) {
        if (in_gap(d)) out.push_back(d);
    }
    return out;
}

}  // namespace exogait::protocol
