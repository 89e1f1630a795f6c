#pragma once

#include <mutex>
#include <stdexcept>
#include <vector>

#include "exogait/protocol/types.hpp"

namespace exogait::protocol {

struct assembly_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssemblyConfig {
    double rate_hz = 130.0;
    double gap_timeout_ms = 50.0;
    int reorder_window = 10;   // packets sorted by seq within this window
};

/// Per-device slot accounting: fresh (a packet within half a period), held
/// (bridged across a short silence), gapped (silence beyond the timeout).
struct AssemblyStats {
    std::array<std::size_t, kNumDevices> fresh = {};
    std::array<std::size_t, kNumDevices> held = {};
    std::array<std::size_t, kNumDevices> gapped = {};

    std::size_t missing_fresh(DeviceId d) const {
        return held[static_cast<int>(d)] + gapped[static_cast<int>(d)];
    }
};

/// Merges four independent packet streams onto a uniform frame grid.
///
/// The grid starts at the earliest packet timestamp and advances by exactly
/// 1000/rate_hz ms. A slot is filled with the packet nearest the grid
/// instant when one lies within half a period; across a shorter silence than
/// gap_timeout_ms the previous packet is held; a longer silence leaves the
/// whole stretch as a gap. Out-of-order delivery within the reorder window
/// does not change the result.
///
/// Throws assembly_error when every stream is empty.
std::vector<SensorFrame> assemble_frames(
    const std::array<std::vector<SensorPacket>, kNumDevices>& streams,
    const AssemblyConfig& config = {}, AssemblyStats* stats = nullptr);

/// Streaming front end for assemble_frames: up to four producer threads push
/// packets concurrently (ordering guarantees are per-device only); a single
/// consumer calls finalize() once the streams end.
class FrameAssembler {
  public:
    explicit FrameAssembler(const AssemblyConfig& config = {}) : config_(config) {}

    void push(const SensorPacket& packet);
    std::vector<SensorFrame> finalize(AssemblyStats* stats = nullptr);

  private:
    AssemblyConfig config_;
    std::mutex mutex_;
    std::array<std::vector<SensorPacket>, kNumDevices> streams_;
};

}  // namespace exogait::protocol
