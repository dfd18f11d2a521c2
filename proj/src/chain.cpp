#include "evoflow/chain.hpp"

#include <numeric>

namespace evoflow {

std::string_view event_name(const StepEvent& event) noexcept {
  switch (event.index()) {
    case 0:
      return "birth";
    case 1:
      return "death";
    default:
      return "null_death";
  }
}

void write_event_record(std::ostream& out, std::uint64_t n, const StepEvent& event) {
  out << n << ',' << event_name(event) << ',';
  if (const auto* b = std::get_if<Birth>(&event)) {
    out << format_double(b->fitness);
  } else if (const auto* d = std::get_if<Death>(&event)) {
    out << format_double(d->fitness);
  }
  out << '\n';
}

std::uint64_t Histogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), underflow + overflow);
}

}  // namespace evoflow
