#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "exogait/protocol/types.hpp"

namespace exogait::protocol {

enum class CsvErrorKind {
    HeaderMismatch,
    RowArity,
    NumericParse,
    SinkFailure,
};

struct csv_error : std::runtime_error {
    CsvErrorKind kind;
    csv_error(CsvErrorKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
};

/// The fixed 33-column header: t_ms, then accel xyz + roll/pitch/yaw per
/// device (crutch_left, crutch_right, insole_left, insole_right), then the
/// two load-cell columns, then the six FSR columns.
const std::string& csv_header();

constexpr int kCsvColumns = 33;

/// Writes header + one row per frame. Gap slots become empty cells.
/// Returns the number of data rows written.
std::size_t write_csv(const std::vector<SensorFrame>& frames, std::ostream& sink);

/// Inverse of write_csv at the serialized 6-digit precision. Frame indices
/// are assigned sequentially from zero.
std::vector<SensorFrame> read_csv(std::istream& source);

/// Shifts every frame timestamp by offset_ms, preserving order.
std::vector<SensorFrame> apply_trigger_offset(std::vector<SensorFrame> frames,
                                              double offset_ms);

}  // namespace exogait::protocol
