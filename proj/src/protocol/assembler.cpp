#include "exogait/protocol/assembler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace exogait::protocol {

namespace {

// Bounded reorder correction: a min-heap of `window` packets keyed by seq.
// Restores seq order for any displacement up to the window size.
std::vector<SensorPacket> reorder_by_seq(const std::vector<SensorPacket>& in, int window) {
    auto cmp = [](const SensorPacket& a, const SensorPacket& b) { return a.seq > b.seq; };
    std::priority_queue<SensorPacket, std::vector<SensorPacket>, decltype(cmp)> heap(cmp);
    std::vector<SensorPacket> out;
    out.reserve(in.size());
    for (const auto& p : in) {
        heap.push(p);
        if (static_cast<int>(heap.size()) > window) {
            out.push_back(heap.top());
            heap.pop();
        }
    }
    while (!heap.empty()) {
        out.push_back(heap.top());
        heap.pop();
    }
    return out;
}

FrameSlot slot_from_packet(const SensorPacket& p) {
    FrameSlot s;
    s.accel = p.imu.accel;
    s.euler_deg = p.imu.euler_deg;
    if (const auto* c = std::get_if<CrutchPayload>(&p.payload)) {
        s.data = CrutchSlotData{c->load_raw};
    } else {
        s.data = InsoleSlotData{std::get<InsolePayload>(p.payload).fsr_raw};
    }
    return s;
}

}  // namespace

std::vector<SensorFrame> assemble_frames(
    const std::array<std::vector<SensorPacket>, kNumDevices>& streams,
    const AssemblyConfig& config, AssemblyStats* stats) {
    AssemblyStats local;
    if (stats == nullptr) stats = &local;
    *stats = AssemblyStats{};
    if (config.rate_hz <= 0.0 || config.rate_hz > 1000.0) {
        throw assembly_error("rate_hz must lie in (0, 1000]");
    }

    std::array<std::vector<SensorPacket>, kNumDevices> ordered;
    bool any = false;
    for (int d = 0; d < kNumDevices; ++d) {
        ordered[d] = reorder_by_seq(streams[d], std::max(1, config.reorder_window));
        // Timestamp jitter can locally invert the seq order; the grid lookup
        // below needs time order.
        std::stable_sort(ordered[d].begin(), ordered[d].end(),
                         [](const SensorPacket& a, const SensorPacket& b) {
                             return a.t_ms < b.t_ms || (a.t_ms == b.t_ms && a.seq < b.seq);
                         });
        any = any || !ordered[d].empty();
    }
    if (!any) throw assembly_error("all packet streams are empty");

    double t0 = std::numeric_limits<double>::infinity();
    double t_end = -std::numeric_limits<double>::infinity();
    for (const auto& s : ordered) {
        for (const auto& p : s) {
            t0 = std::min(t0, p.t_ms);
            t_end = std::max(t_end, p.t_ms);
        }
    }

    const double period = 1000.0 / config.rate_hz;
    const double half = period * 0.5 + 1e-9;
    const auto n_frames =
        static_cast<std::int64_t>(std::llround((t_end - t0) / period)) + 1;

    std::vector<SensorFrame> frames(static_cast<std::size_t>(n_frames));
    std::array<std::size_t, kNumDevices> cursor = {0, 0, 0, 0};

    for (std::int64_t k = 0; k < n_frames; ++k) {
        SensorFrame& f = frames[static_cast<std::size_t>(k)];
        f.frame_index = k;
        f.t_ms = t0 + static_cast<double>(k) * period;

        for (int d = 0; d < kNumDevices; ++d) {
            const auto& s = ordered[d];
            if (s.empty()) {
                ++stats->gapped[d];
                continue;
            }
            auto& i = cursor[d];
            while (i + 1 < s.size() &&
                   std::abs(s[i + 1].t_ms - f.t_ms) < std::abs(s[i].t_ms - f.t_ms)) {
                ++i;
            }
            if (std::abs(s[i].t_ms - f.t_ms) <= half) {
                f.slots[d] = slot_from_packet(s[i]);
                ++stats->fresh[d];
                continue;
            }
            // No fresh packet: classify the enclosing silence. A silence no
            // longer than the timeout is bridged by holding the last packet;
            // a longer one is a gap end-to-end.
            const SensorPacket* prev = nullptr;
            const SensorPacket* next = nullptr;
            if (s[i].t_ms <= f.t_ms) {
                prev = &s[i];
                if (i + 1 < s.size()) next = &s[i + 1];
            } else {
                next = &s[i];
                if (i > 0) prev = &s[i - 1];
            }
            if (prev == nullptr) {  // before the device's first packet
                ++stats->gapped[d];
                continue;
            }
            const double silence = next ? next->t_ms - prev->t_ms
                                        : std::numeric_limits<double>::infinity();
            if (silence <= config.gap_timeout_ms) {
                f.slots[d] = slot_from_packet(*prev);
                ++stats->held[d];
            } else {
                ++stats->gapped[d];
            }
        }
    }
    return frames;
}

void FrameAssembler::push(const SensorPacket& packet) {
    std::lock_guard lock(mutex_);
    streams_[static_cast<int>(packet.device)].push_back(packet);
}

std::vector<SensorFrame> FrameAssembler::finalize(AssemblyStats* stats) {
    std::lock_guard lock(mutex_);
    return assemble_frames(streams_, config_, stats);
}

}  // namespace exogait::protocol
