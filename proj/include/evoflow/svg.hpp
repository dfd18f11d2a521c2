#pragma once

#include <optional>
#include <string>

#include "evoflow/chain.hpp"

namespace evoflow::svg {

struct BarChartStyle {
  int width = 640;
  int height = 400;
  std::string title;
  std::string x_label = "fitness";
  /// Vertical marker (e.g. the critical value), drawn when inside [lo,hi).
  std::optional<double> marker;
  std::string marker_label = "f_c";
};

/// Minimal standalone SVG bar chart of the in-range bins of `h`.
/// Output is a pure function of its inputs (fixed number formatting).
std::string histogram_svg(const Histogram& h, const BarChartStyle& style);

}  // namespace evoflow::svg
