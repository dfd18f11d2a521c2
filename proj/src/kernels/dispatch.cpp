#include "evoflow/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string_view>

namespace evoflow::kernels {

namespace {

struct Table {
  std::size_t (*count_less)(std::span<const double>, double) noexcept;
  std::size_t (*count_less_equal)(std::span<const double>, double) noexcept;
  std::size_t (*argmin)(std::span<const double>) noexcept;
  void (*stencil_interior)(std::span<const double>, std::span<double>, StencilCoeffs) noexcept;
  Isa isa;
};

constexpr Table kScalar{&scalar::count_less, &scalar::count_less_equal, &scalar::argmin,
                        &scalar::stencil_interior, Isa::scalar};
#ifdef EVOFLOW_HAVE_AVX2_KERNELS
constexpr Table kAvx2{&avx2::count_less, &avx2::count_less_equal, &avx2::argmin,
                      &avx2::stencil_interior, Isa::avx2};
#endif

const Table* table_for(Isa isa) noexcept {
#ifdef EVOFLOW_HAVE_AVX2_KERNELS
  if (isa == Isa::avx2) return &kAvx2;
#endif
  (void)isa;
  return &kScalar;
}

const Table* initial_table() noexcept {
  if (const char* env = std::getenv("EVOFLOW_ISA")) {
    if (std::string_view(env) == "scalar") return &kScalar;
  }
  return isa_supported(Isa::avx2) ? table_for(Isa::avx2) : &kScalar;
}

std::atomic<const Table*>& current() noexcept {
  static std::atomic<const Table*> table{initial_table()};
  return table;
}

const Table& active() noexcept { return *current().load(std::memory_order_relaxed); }

}  // namespace

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#ifdef EVOFLOW_HAVE_AVX2_KERNELS
      return __builtin_cpu_supports("avx2") != 0;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept { return active().isa; }

bool set_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) return false;
  current().store(table_for(isa), std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) noexcept {
  return isa == Isa::avx2 ? "avx2" : "scalar";
}

std::size_t count_less(std::span<const double> values, double x) noexcept {
  return active().count_less(values, x);
}

std::size_t count_less_equal(std::span<const double> values, double x) noexcept {
  return active().count_less_equal(values, x);
}

std::size_t argmin(std::span<const double> values) noexcept { return active().argmin(values); }

void stencil_interior(std::span<const double> in, std::span<double> out,
                      StencilCoeffs c) noexcept {
  active().stencil_interior(in, out, c);
}

}  // namespace evoflow::kernels
