#pragma once

#include <stdexcept>
#include <string>

#include "exogait/protocol/types.hpp"

namespace exogait::protocol {

enum class CodecErrorKind {
    MalformedPacket,   // not valid JSON
    SchemaViolation,   // missing or ill-typed field, invariant violation
    KindMismatch,      // payload content does not match the device kind
};

struct codec_error : std::runtime_error {
    CodecErrorKind kind;
    codec_error(CodecErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

/// Serializes a packet to its canonical wire form: one compact UTF-8 JSON
/// object with fixed key order (device, seq, t_ms, imu, payload) and numbers
/// rendered with at most six fractional digits. Byte-stable across runs.
std::string encode_packet(const SensorPacket& p);

/// Inverse of encode_packet on its image. Unknown extra keys are ignored;
/// euler angles are recomputed from the quaternion.
SensorPacket decode_packet(const std::string& bytes);

}  // namespace exogait::protocol
