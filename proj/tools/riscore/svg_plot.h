// Copyright 2026 The riscore Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef RISCORE_TOOLS_SVG_PLOT_H_
#define RISCORE_TOOLS_SVG_PLOT_H_

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace riscore::tools {

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

// Bare-bones line chart: axes, min/max tick labels, one polyline per series.
void WriteLineSvg(const std::vector<Series>& series, const std::string& x_label,
                  const std::string& y_label, std::ostream& out);

}  // namespace riscore::tools

#endif  // RISCORE_TOOLS_SVG_PLOT_H_
