#pragma once

#include <string>
#include <vector>

#include "gridmpc/scenario.hpp"

namespace gridmpc {

/// Header matching the TraceRow fields in declared order for m inverters.
std::string trace_csv_header(std::size_t vsi_count);

/// CSV: comma separator, LF endings, no quoting, 9 significant digits.
/// Throws std::runtime_error carrying the path on I/O failure.
void write_trace_csv(const std::vector<TraceRow>& trace, const std::string& path);

/// Parse a file produced by write_trace_csv (used by round-trip tests and the
/// plot script's sanity checks).
std::vector<TraceRow> read_trace_csv(const std::string& path);

}  // namespace gridmpc
