#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <string_view>

#include "evoflow/params.hpp"

namespace evoflow {

/// Distribution of the fitness attached to each newborn species.
///
/// Sampling is by inversion, quantile(u) with u uniform on [0,1), so one
/// uniform draw is consumed per fitness and scripted draws map to known
/// values. Built-in laws:
///   uniform        U(0,1)
///   exp:<rate>     Exponential(rate) on [0,inf)
///   pareto:<alpha> Pareto with scale 1 on [1,inf)
class FitnessLaw {
 public:
  enum class Kind { uniform, exponential, pareto };

  static FitnessLaw uniform() noexcept { return FitnessLaw(Kind::uniform, 1.0); }
  static FitnessLaw exponential(double rate);
  static FitnessLaw pareto(double alpha);
  /// Parses the textual form produced by label(). Throws ParameterError.
  static FitnessLaw parse(std::string_view spec);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }
  std::string label() const;

  double cdf(double x) const noexcept {
    switch (kind_) {
      case Kind::uniform:
        return x <= 0.0 ? 0.0 : (x >= 1.0 ? 1.0 : x);
      case Kind::exponential:
        return x <= 0.0 ? 0.0 : -std::expm1(-param_ * x);
      case Kind::pareto:
        return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -param_);
    }
    return 0.0;
  }

  /// Inverse cdf on [0,1). quantile(0) is the lower end of the support.
  double quantile(double u) const noexcept {
    switch (kind_) {
      case Kind::uniform:
        return u;
      case Kind::exponential:
        return -std::log1p(-u) / param_;
      case Kind::pareto:
        return std::pow(1.0 - u, -1.0 / param_);
    }
    return u;
  }

  template <class UniformSource>
  double sample(UniformSource& source) const {
    return quantile(source.uniform());
  }

  double support_lo() const noexcept { return kind_ == Kind::pareto ? 1.0 : 0.0; }
  double support_hi() const noexcept {
    return kind_ == Kind::uniform ? 1.0 : std::numeric_limits<double>::infinity();
  }

  friend bool operator==(const FitnessLaw&, const FitnessLaw&) = default;

 private:
  FitnessLaw(Kind kind, double param) noexcept : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

/// The f_c-quantile of the law: a newborn lands below it with probability f_c.
/// Throws ParameterError when p <= 1/2 (no finite critical value).
double critical_value(const FitnessLaw& law, const ModelParams& params);
double critical_value(const FitnessLaw& law, double p);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace evoflow
