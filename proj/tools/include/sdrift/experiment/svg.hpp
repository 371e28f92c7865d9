#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdrift::experiment {

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;  // non-finite entries are skipped
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

/// Static line chart with axes, ticks and a legend.
void write_line_chart(std::ostream& os, const ChartSpec& spec, const std::vector<Series>& series);

}  // namespace sdrift::experiment
