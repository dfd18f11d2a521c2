#pragma once
// Data-parallel inner loops used by the population tree, the Bak-Sneppen ring
// and the exact pmf propagators.
//
// Every kernel has a portable scalar reference in evoflow::kernels::scalar and
// an AVX2 variant in evoflow::kernels::avx2 (x86-64 only). The free functions
// in evoflow::kernels dispatch through a table selected once at startup from
// CPUID; set_isa() overrides the choice (tests, benchmarks, EVOFLOW_ISA env).
//
// Results are bit-identical across variants: the counting kernels are exact,
// argmin breaks ties to the lowest index, and the stencil evaluates
// (up*l + stay*c) + down*r in the same order without contraction.

#include <cstddef>
#include <span>
#include <string_view>

namespace evoflow::kernels {

enum class Isa { scalar, avx2 };

struct StencilCoeffs {
  double up = 0.0;    // weight of the left neighbour (mass moving up one state)
  double stay = 0.0;
  double down = 0.0;  // weight of the right neighbour
};

namespace scalar {
std::size_t count_less(std::span<const double> values, double x) noexcept;
std::size_t count_less_equal(std::span<const double> values, double x) noexcept;
std::size_t argmin(std::span<const double> values) noexcept;
void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept;
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define EVOFLOW_HAVE_AVX2_KERNELS 1
namespace avx2 {
std::size_t count_less(std::span<const double> values, double x) noexcept;
std::size_t count_less_equal(std::span<const double> values, double x) noexcept;
std::size_t argmin(std::span<const double> values) noexcept;
void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept;
}  // namespace avx2
#endif

/// True when the running CPU can execute the given variant.
bool isa_supported(Isa isa) noexcept;
Isa active_isa() noexcept;
/// Selects a variant; returns false (and leaves the table alone) if unsupported.
bool set_isa(Isa isa) noexcept;
std::string_view isa_name(Isa isa) noexcept;

/// Number of values strictly below x. Values need not be sorted.
std::size_t count_less(std::span<const double> values, double x) noexcept;
/// Number of values <= x.
std::size_t count_less_equal(std::span<const double> values, double x) noexcept;
/// Index of the first minimum; 0 for an empty span.
std::size_t argmin(std::span<const double> values) noexcept;
/// out[j] = (up*in[j-1] + stay*in[j]) + down*in[j+1] for 1 <= j < in.size()-1.
/// out[0] and out.back() are left untouched; out.size() must equal in.size().
void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept;

}  // namespace evoflow::kernels
