#pragma once

#include <string>

#include "entroflow/diagnostics.hpp"

namespace entroflow {

/// Writes the trace as a header line plus comma-separated rows with 17
/// significant digits, so a read-back reproduces the doubles exactly.
void write_trace_csv(const std::string& path, const TraceTable& table);

/// Reads a trace written by write_trace_csv; rejects ragged rows.
TraceTable read_trace_csv(const std::string& path);

}  // namespace entroflow
