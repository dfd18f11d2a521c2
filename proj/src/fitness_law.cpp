#include "evoflow/fitness_law.hpp"

#include <charconv>
#include <string>

#include "evoflow/errors.hpp"

namespace evoflow {

namespace {

double parse_positive(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !(value > 0.0) || !std::isfinite(value)) {
    throw ParameterError(std::string(what) + " must be a positive number, got '" +
                         std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

FitnessLaw FitnessLaw::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw ParameterError("exponential rate must be > 0");
  return FitnessLaw(Kind::exponential, rate);
}

FitnessLaw FitnessLaw::pareto(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("pareto alpha must be > 0");
  return FitnessLaw(Kind::pareto, alpha);
}

FitnessLaw FitnessLaw::parse(std::string_view spec) {
  if (spec == "uniform") return uniform();
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto name = spec.substr(0, colon);
    const auto arg = spec.substr(colon + 1);
    if (name == "exp" || name == "exponential") return exponential(parse_positive(arg, "rate"));
    if (name == "pareto") return pareto(parse_positive(arg, "alpha"));
  }
  throw ParameterError("unknown fitness law '" + std::string(spec) +
                       "' (expected uniform, exp:<rate> or pareto:<alpha>)");
}

std::string FitnessLaw::label() const {
  switch (kind_) {
    case Kind::uniform:
      return "uniform";
    case Kind::exponential:
      return "exp:" + format_double(param_);
    case Kind::pareto:
      return "pareto:" + format_double(param_);
  }
  return "uniform";
}

double critical_value(const FitnessLaw& law, const ModelParams& params) {
  if (!params.supercritical()) {
    throw ParameterError("no finite critical value for p <= 1/2 (f_c = " +
                         format_double(params.f_c()) + " >= 1)");
  }
  return law.quantile(params.f_c());
}

double critical_value(const FitnessLaw& law, double p) {
  return critical_value(law, ModelParams(p));
}

}  // namespace evoflow
