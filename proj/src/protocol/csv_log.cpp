#include "exogait/protocol/csv_log.hpp"

#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace exogait::protocol {

namespace {

std::string build_header() {
    std::string h = "t_ms";
    for (DeviceId d : kAllDevices) {
        const std::string base = device_name(d);
        for (const char* c : {"accel_x", "accel_y", "accel_z", "roll", "pitch", "yaw"}) {
            h += ',';
            h += base;
            h += '_';
            h += c;
        }
    }
    h += ",load_left,load_right";
    for (const char* c : {"fsr_l_heel", "fsr_l_m1", "fsr_l_m5",
                          "fsr_r_heel", "fsr_r_m1", "fsr_r_m5"}) {
        h += ',';
        h += c;
    }
    return h;
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cells.push_back(std::move(cur));
    return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + cell.size() || cell.empty()) {
        throw csv_error(CsvErrorKind::NumericParse,
                        "line " + std::to_string(line_no) + ": cannot parse '" + cell + "'");
    }
    return v;
}

}  // namespace

const std::string& csv_header() {
    static const std::string header = build_header();
    return header;
}

std::size_t write_csv(const std::vector<SensorFrame>& frames, std::ostream& sink) {
    if (frames.empty()) throw std::invalid_argument("write_csv requires at least one frame");

    sink << csv_header() << '\n';
    for (const SensorFrame& f : frames) {
        std::string row = format_num(f.t_ms);
        std::array<std::string, kNumDevices> payload_cells;
        for (int d = 0; d < kNumDevices; ++d) {
            const auto& slot = f.slots[d];
            if (!slot) {
                row += ",,,,,,";
                payload_cells[d] = is_crutch(static_cast<DeviceId>(d)) ? "" : ",,";
                continue;
            }
            for (double v : {slot->accel.x, slot->accel.y, slot->accel.z,
                             slot->euler_deg.x, slot->euler_deg.y, slot->euler_deg.z}) {
                row += ',';
                row += format_num(v);
            }
            if (const auto* c = std::get_if<CrutchSlotData>(&slot->data)) {
                payload_cells[d] = format_int(c->load_raw);
            } else {
                const auto& fsr = std::get<InsoleSlotData>(slot->data).fsr_raw;
                payload_cells[d] = format_int(fsr[0]) + "," + format_int(fsr[1]) + "," +
                                   format_int(fsr[2]);
            }
        }
        for (int d = 0; d < kNumDevices; ++d) {
            row += ',';
            row += payload_cells[d];
        }
        sink << row << '\n';
        if (!sink) throw csv_error(CsvErrorKind::SinkFailure, "failed writing CSV row");
    }
    sink.flush();
    if (!sink) throw csv_error(CsvErrorKind::SinkFailure, "failed flushing CSV sink");
    return frames.size();
}

std::vector<SensorFrame> read_csv(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) {
        throw csv_error(CsvErrorKind::HeaderMismatch, "empty input: missing header row");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != csv_header()) {
        throw csv_error(CsvErrorKind::HeaderMismatch, "header does not match the 33-column contract");
    }

    std::vector<SensorFrame> frames;
    std::size_t line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split_row(line);
        if (cells.size() != kCsvColumns) {
            throw csv_error(CsvErrorKind::RowArity,
                            "line " + std::to_string(line_no) + ": expected 33 fields, got " +
                                std::to_string(cells.size()));
        }

        SensorFrame f;
        f.frame_index = static_cast<std::int64_t>(frames.size());
        f.t_ms = parse_cell(cells[0], line_no);

        for (int d = 0; d < kNumDevices; ++d) {
            const auto dev = static_cast<DeviceId>(d);
            const std::size_t imu0 = 1 + static_cast<std::size_t>(d) * 6;
            const std::size_t pay0 = is_crutch(dev)
                                         ? 25 + static_cast<std::size_t>(d)
                                         : 27 + static_cast<std::size_t>(d - 2) * 3;
            const std::size_t pay_n = is_crutch(dev) ? 1 : 3;

            bool any_filled = false, all_filled = true;
            auto scan = [&](std::size_t idx) {
                if (cells[idx].empty()) all_filled = false; else any_filled = true;
            };
            for (std::size_t i = 0; i < 6; ++i) scan(imu0 + i);
            for (std::size_t i = 0; i < pay_n; ++i) scan(pay0 + i);

            if (!any_filled) continue;  // gap slot
            if (!all_filled) {
                throw csv_error(CsvErrorKind::NumericParse,
                                "line " + std::to_string(line_no) + ": partially populated '" +
                                    device_name(dev) + "' column group");
            }

            FrameSlot slot;
            slot.accel = {parse_cell(cells[imu0], line_no), parse_cell(cells[imu0 + 1], line_no),
                          parse_cell(cells[imu0 + 2], line_no)};
            slot.euler_deg = {parse_cell(cells[imu0 + 3], line_no),
                              parse_cell(cells[imu0 + 4], line_no),
                              parse_cell(cells[imu0 + 5], line_no)};
            if (is_crutch(dev)) {
                slot.data = CrutchSlotData{
                    static_cast<std::int32_t>(parse_cell(cells[pay0], line_no))};
            } else {
                InsoleSlotData ins;
                for (std::size_t i = 0; i < 3; ++i) {
                    ins.fsr_raw[i] = static_cast<int>(parse_cell(cells[pay0 + i], line_no));
                }
                slot.data = ins;
            }
            f.slots[d] = std::move(slot);
        }
        frames.push_back(std::move(f));
    }
    return frames;
}

std::vector<SensorFrame> apply_trigger_offset(std::vector<SensorFrame> frames,
                                              double offset_ms) {
    for (auto& f : frames) f.t_ms += offset_ms;
    return frames;
}

}  // namespace exogait::protocol
