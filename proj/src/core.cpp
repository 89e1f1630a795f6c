#include "exogait/core.hpp"

#include <algorithm>
#include <cstdio>

namespace exogait {

Vec3 Quat::rotate(const Vec3& v) const {
    // q * (0, v) * q^-1 expanded for unit quaternions.
    const double tx = 2.0 * (y * v.z - z * v.y);
    const double ty = 2.0 * (z * v.x - x * v.z);
    const double tz = 2.0 * (x * v.y - y * v.x);
    return {v.x + w * tx + (y * tz - z * ty),
            v.y + w * ty + (z * tx - x * tz),
            v.z + w * tz + (x * ty - y * tx)};
}

Vec3 quat_to_euler_zyx_deg(const Quat& q) {
    const double roll = std::atan2(2.0 * (q.w * q.x + q.y * q.z),
                                   1.0 - 2.0 * (q.x * q.x + q.y * q.y));
    const double sinp = std::clamp(2.0 * (q.w * q.y - q.z * q.x), -1.0, 1.0);
    const double pitch = std::asin(sinp);
    const double yaw = std::atan2(2.0 * (q.w * q.z + q.x * q.y),
                                  1.0 - 2.0 * (q.y * q.y + q.z * q.z));
    return {rad_to_deg(roll), rad_to_deg(pitch), rad_to_deg(yaw)};
}

Quat euler_zyx_deg_to_quat(const Vec3& euler_deg) {
    const double hr = deg_to_rad(euler_deg.x) * 0.5;
    const double hp = deg_to_rad(euler_deg.y) * 0.5;
    const double hy = deg_to_rad(euler_deg.z) * 0.5;
    const double cr = std::cos(hr), sr = std::sin(hr);
    const double cp = std::cos(hp), sp = std::sin(hp);
    const double cy = std::cos(hy), sy = std::sin(hy);
    return {cy * cp * cr + sy * sp * sr,
            cy * cp * sr - sy * sp * cr,
            sy * cp * sr + cy * sp * cr,
            sy * cp * cr - cy * sp * sr};
}

Quat quat_from_axis_angle(const Vec3& axis, double angle_deg) {
    const double half = deg_to_rad(angle_deg) * 0.5;
    const double s = std::sin(half);
    return {std::cos(half), s * axis.x, s * axis.y, s * axis.z};
}

std::string format_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s(buf);
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
        auto last = s.find_last_not_of('0');
        if (last == dot) last -= 1;
        s.erase(last + 1);
    }
    if (s == "-0") s = "0";
    return s;
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

}  // namespace exogait
