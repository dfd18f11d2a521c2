#include "evoflow/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace evoflow::svg {

namespace {

std::string fixed(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string histogram_svg(const Histogram& h, const BarChartStyle& style) {
  const double left = 56.0;
  const double right = 16.0;
  const double top = 32.0;
  const double bottom = 44.0;
  const double plot_w = style.width - left - right;
  const double plot_h = style.height - top - bottom;
  const std::uint64_t peak =
      h.counts.empty() ? 0 : *std::max_element(h.counts.begin(), h.counts.end());
  const double y_max = peak == 0 ? 1.0 : static_cast<double>(peak);
  const double bar_w = h.counts.empty() ? 0.0 : plot_w / static_cast<double>(h.counts.size());
  auto x_of = [&](double x) { return left + (x - h.lo) / (h.hi - h.lo) * plot_w; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << style.width << "\" height=\""
      << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!style.title.empty()) {
    svg << "<text x=\"" << fixed(style.width / 2.0) << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << escape(style.title) << "</text>\n";
  }

  svg << "<g fill=\"steelblue\" stroke=\"white\" stroke-width=\"0.5\">\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    const double bh = static_cast<double>(h.counts[i]) / y_max * plot_h;
    svg << "<rect x=\"" << fixed(left + bar_w * static_cast<double>(i)) << "\" y=\""
        << fixed(top + plot_h - bh) << "\" width=\"" << fixed(bar_w) << "\" height=\""
        << fixed(bh) << "\"><title>[" << fixed(h.bin_lo(i), 4) << ", " << fixed(h.bin_hi(i), 4)
        << "): " << h.counts[i] << "</title></rect>\n";
  }
  svg << "</g>\n";

  // axes
  svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
  svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\""
      << fixed(left + plot_w) << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
  svg << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
      << "\" y2=\"" << fixed(top + plot_h) << "\"/>\n";
  svg << "</g>\n";

  svg << "<g font-family=\"sans-serif\" font-size=\"11\">\n";
  constexpr int kTicks = 5;
  for (int t = 0; t <= kTicks; ++t) {
    const double x = h.lo + (h.hi - h.lo) * t / kTicks;
    svg << "<text x=\"" << fixed(x_of(x)) << "\" y=\"" << fixed(top + plot_h + 16)
        << "\" text-anchor=\"middle\">" << fixed(x, 2) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + 4)
      << "\" text-anchor=\"end\">" << peak << "</text>\n";
  svg << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + plot_h)
      << "\" text-anchor=\"end\">0</text>\n";
  svg << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(style.height - 8.0)
      << "\" text-anchor=\"middle\">" << escape(style.x_label) << "</text>\n";
  svg << "</g>\n";

  if (style.marker && *style.marker >= h.lo && *style.marker < h.hi) {
    const double mx = x_of(*style.marker);
    svg << "<line x1=\"" << fixed(mx) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(mx)
        << "\" y2=\"" << fixed(top + plot_h)
        << "\" stroke=\"crimson\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n";
    svg << "<text x=\"" << fixed(mx + 4) << "\" y=\"" << fixed(top + 12)
        << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"crimson\">"
        << escape(style.marker_label) << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace evoflow::svg
