#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

namespace exogait {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
    friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend bool operator==(const Vec3& a, const Vec3& b) = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Unit quaternion, scalar-first (w, x, y, z).
struct Quat {
    double w = 1.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Quat& a, const Quat& b) = default;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    /// Rotates v from the sensor frame into the world frame.
    Vec3 rotate(const Vec3& v) const;
};

constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double d) { return d * kPi / 180.0; }
inline double rad_to_deg(double r) { return r * 180.0 / kPi; }

/// Euler angles from a unit quaternion, Z-Y-X (yaw-pitch-roll) convention,
/// returned as (roll, pitch, yaw) in degrees.
Vec3 quat_to_euler_zyx_deg(const Quat& q);

/// Inverse of quat_to_euler_zyx_deg: composes Rz(yaw) * Ry(pitch) * Rx(roll).
Quat euler_zyx_deg_to_quat(const Vec3& euler_deg);

/// Quaternion for a rotation of angle_deg about the given (unit) axis.
Quat quat_from_axis_angle(const Vec3& axis, double angle_deg);

/// Canonical decimal rendering used by the wire format and CSV log: fixed
/// notation, at most six fractional digits, trailing zeros trimmed, no
/// trailing dot, "-0" normalized to "0". Deterministic across runs.
std::string format_num(double v);

std::string format_int(std::int64_t v);

}  // namespace exogait
