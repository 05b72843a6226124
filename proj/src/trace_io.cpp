#include "entroflow/trace_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "entroflow/errors.hpp"

namespace entroflow {

void write_trace_csv(const std::string& path, const TraceTable& table) {
  if (table.columns.empty()) {
    fail(ErrorCode::io, "refusing to write a trace with no columns");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  }
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c > 0) out << ',';
    out << table.columns[c];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size()) {
      fail(ErrorCode::io, "trace row width does not match the header");
    }
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << buf;
    }
    out << '\n';
  }
  out.flush();
  if (!out) {
    fail(ErrorCode::io, "failed writing '" + path + "'");
  }
}

TraceTable read_trace_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::io, "cannot open '" + path + "' for reading");
  }
  TraceTable table;
  std::string line;
  const auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) {
    fail(ErrorCode::io, "'" + path + "' has no header line");
  }
  strip_cr(line);
  std::stringstream header(line);
  std::string cell;
  while (std::getline(header, cell, ',')) {
    if (cell.empty()) {
      fail(ErrorCode::io, "'" + path + "' has an empty column name");
    }
    table.columns.push_back(cell);
  }
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream cells(line);
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        fail(ErrorCode::io, "'" + path + "' has a non-numeric cell: " + cell);
      }
      row.push_back(v);
    }
    if (row.size() != table.columns.size()) {
      fail(ErrorCode::io, "'" + path + "' has a ragged row");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace entroflow
