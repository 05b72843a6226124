#include "entroflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 540.0;
constexpr double kLeft = 86.0;
constexpr double kRight = 930.0;
constexpr double kTop = 56.0;
constexpr double kBottom = 486.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

// Round tick spacing to a 1/2/5 decade so the labels read cleanly.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  double snap = 10.0;
  if (r <= 1.0) snap = 1.0;
  else if (r <= 2.0) snap = 2.0;
  else if (r <= 5.0) snap = 5.0;
  return snap * mag;
}

void pad_range(double& lo, double& hi) {
  if (!(hi > lo)) {
    const double pad = std::max(1.0, std::abs(lo)) * 1e-3;
    lo -= pad;
    hi += pad;
  }
}

}  // namespace

void write_line_chart(const std::string& path, const std::vector<double>& x,
                      const std::vector<double>& y,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& title) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::io, "chart needs matching x/y series with >= 2 points");
  }
  double x_lo = *std::min_element(x.begin(), x.end());
  double x_hi = *std::max_element(x.begin(), x.end());
  double y_lo = *std::min_element(y.begin(), y.end());
  double y_hi = *std::max_element(y.begin(), y.end());
  pad_range(x_lo, x_hi);
  pad_range(y_lo, y_hi);
  const double y_pad = 0.06 * (y_hi - y_lo);
  y_lo -= y_pad;
  y_hi += y_pad;

  auto px = [&](double v) {
    return kLeft + (v - x_lo) / (x_hi - x_lo) * (kRight - kLeft);
  };
  auto py = [&](double v) {
    return kBottom - (v - y_lo) / (y_hi - y_lo) * (kBottom - kTop);
  };

  std::ofstream out(path, std::ios::binary);
  if (!out) {
    fail(ErrorCode::io, "cannot open '" + path + "' for writing");
  }
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(kWidth)
      << "\" height=\"" << fmt(kHeight) << "\" viewBox=\"0 0 " << fmt(kWidth)
      << " " << fmt(kHeight) << "\">\n";
  out << "<rect width=\"" << fmt(kWidth) << "\" height=\"" << fmt(kHeight)
      << "\" fill=\"#ffffff\"/>\n";
  out << "<text x=\"" << fmt(0.5 * kWidth)
      << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"19\" "
         "text-anchor=\"middle\" fill=\"#111111\">"
      << title << "</text>\n";

  const double x_step = nice_step(x_hi - x_lo, 8);
  const double y_step = nice_step(y_hi - y_lo, 6);
  out << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">\n";
  for (double t = std::ceil(x_lo / x_step) * x_step; t <= x_hi + 1e-9 * x_step;
       t += x_step) {
    const double gx = px(t);
    out << "<line x1=\"" << fmt(gx) << "\" y1=\"" << fmt(kTop) << "\" x2=\""
        << fmt(gx) << "\" y2=\"" << fmt(kBottom)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(gx) << "\" y=\"" << fmt(kBottom + 22.0)
        << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
  }
  for (double v = std::ceil(y_lo / y_step) * y_step; v <= y_hi + 1e-9 * y_step;
       v += y_step) {
    const double gy = py(v);
    out << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(gy) << "\" x2=\""
        << fmt(kRight) << "\" y2=\"" << fmt(gy)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << fmt(kLeft - 10.0) << "\" y=\"" << fmt(gy + 4.5)
        << "\" text-anchor=\"end\">" << fmt(v) << "</text>\n";
  }
  out << "</g>\n";

  out << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\""
      << fmt(kRight - kLeft) << "\" height=\"" << fmt(kBottom - kTop)
      << "\" fill=\"none\" stroke=\"#444444\" stroke-width=\"1.5\"/>\n";

  out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" "
         "points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i > 0) out << ' ';
    out << fmt(px(x[i])) << ',' << fmt(py(y[i]));
  }
  out << "\"/>\n";

  out << "<text x=\"" << fmt(0.5 * (kLeft + kRight)) << "\" y=\""
      << fmt(kHeight - 14.0)
      << "\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\" fill=\"#111111\">"
      << x_label << "</text>\n";
  out << "<text x=\"24\" y=\"" << fmt(0.5 * (kTop + kBottom))
      << "\" font-family=\"sans-serif\" font-size=\"15\" "
         "text-anchor=\"middle\" fill=\"#111111\" transform=\"rotate(-90 24 "
      << fmt(0.5 * (kTop + kBottom)) << ")\">" << y_label << "</text>\n";
  out << "</svg>\n";
  out.flush();
  if (!out) {
    fail(ErrorCode::io, "failed writing '" + path + "'");
  }
}

}  // namespace entroflow
