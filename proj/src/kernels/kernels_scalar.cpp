#include "evoflow/kernels.hpp"

namespace evoflow::kernels::scalar {

std::size_t count_less(std::span<const double> values, double x) noexcept {
  std::size_t n = 0;
  for (double v : values) n += static_cast<std::size_t>(v < x);
  return n;
}

std::size_t count_less_equal(std::span<const double> values, double x) noexcept {
  std::size_t n = 0;
  for (double v : values) n += static_cast<std::size_t>(v <= x);
  return n;
}

std::size_t argmin(std::span<const double> values) noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[best]) best = i;
  }
  return best;
}

void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept {
  if (in.size() < 3) return;
  const std::size_t last = in.size() - 1;
  for (std::size_t j = 1; j < last; ++j) {
    const double left = c.up * in[j - 1];
    const double centre = c.stay * in[j];
    const double right = c.down * in[j + 1];
    out[j] = (left + centre) + right;
  }
}

}  // namespace evoflow::kernels::scalar
