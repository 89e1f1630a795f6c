#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "exogait/core.hpp"

namespace exogait::protocol {

/// The four peripherals of one recording session.
enum class DeviceId : int {
    CrutchLeft = 0,
    CrutchRight = 1,
    InsoleLeft = 2,
    InsoleRight = 3,
};

constexpr int kNumDevices = 4;
constexpr std::array<DeviceId, kNumDevices> kAllDevices = {
    DeviceId::CrutchLeft, DeviceId::CrutchRight,
    DeviceId::InsoleLeft, DeviceId::InsoleRight};

inline bool is_crutch(DeviceId d) {
    return d == DeviceId::CrutchLeft || d == DeviceId::CrutchRight;
}
inline bool is_insole(DeviceId d) { return !is_crutch(d); }

const char* device_name(DeviceId d);
std::optional<DeviceId> device_from_name(std::string_view name);

/// Orientation + acceleration snapshot. Euler angles are always derived from
/// the quaternion (Z-Y-X convention, degrees); construct through from_quat /
/// from_euler so the two stay consistent.
struct ImuSample {
    Quat quat;
    Vec3 accel;       // m/s^2
    Vec3 euler_deg;   // roll, pitch, yaw

    static ImuSample from_quat(const Quat& q, const Vec3& accel = {});
    static ImuSample from_euler_deg(const Vec3& euler_deg, const Vec3& accel = {});
};

constexpr std::int32_t kLoadRawMin = -(1 << 23);
constexpr std::int32_t kLoadRawMax = (1 << 23) - 1;
constexpr int kFsrFullScale = 4095;

struct CrutchPayload {
    std::int32_t load_raw = 0;              // signed 24-bit ADC counts
    std::optional<double> force_newton;     // present only after calibration
};

/// FSR counts in fixed order: heel, first metatarsal, fifth metatarsal.
struct InsolePayload {
    std::array<int, 3> fsr_raw = {0, 0, 0};
};

struct SensorPacket {
    DeviceId device = DeviceId::CrutchLeft;
    std::uint64_t seq = 0;
    double t_ms = 0.0;      // milliseconds since the trial trigger
    ImuSample imu;
    std::variant<CrutchPayload, InsolePayload> payload;
};

struct CrutchSlotData {
    std::int32_t load_raw = 0;
};

struct InsoleSlotData {
    std::array<int, 3> fsr_raw = {0, 0, 0};  // heel, m1, m5
};

/// Per-device data retained in an assembled frame: exactly the fields the
/// tabular log stores.
struct FrameSlot {
    Vec3 accel;
    Vec3 euler_deg;
    std::variant<CrutchSlotData, InsoleSlotData> data;
};

/// One time-aligned snapshot of all four peripherals on the uniform frame
/// grid. A missing slot is a gap: the device was silent longer than the
/// assembly timeout around this instant.
struct SensorFrame {
    std::int64_t frame_index = 0;
    double t_ms = 0.0;
    std::array<std::optional<FrameSlot>, kNumDevices> slots;

    const std::optional<FrameSlot>& slot(DeviceId d) const {
        return slots[static_cast<int>(d)];
    }
    bool in_gap(DeviceId d) const { return !slot(d).has_value(); }
    std::vector<DeviceId> gap_mask() const;
};

}  // namespace exogait::protocol
