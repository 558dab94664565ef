#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fdpc {

/// Library version, e.g. "0.3.0".
std::string version();

/// Shortest round-trip text ("%.17g"); "nan", "inf", "-inf" otherwise.
std::string format_double(double x);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  void write(std::ostream& out) const;
  std::vector<double> column(const std::string& name) const;
};

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  std::vector<SvgSeries> series;
};

/// Self-contained SVG line chart. Non-finite points (and nonpositive ones
/// with log_y) are skipped.
void write_svg(std::ostream& out, const SvgPlot& plot);

}  // namespace fdpc
