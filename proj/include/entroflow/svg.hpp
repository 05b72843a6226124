#pragma once

#include <string>
#include <vector>

namespace entroflow {

/// Writes a self-contained static 960x540 SVG line chart, time on x.
/// Deterministic output: same data, same bytes.
void write_line_chart(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title);

}  // namespace entroflow
