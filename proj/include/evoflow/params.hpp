#pragma once

namespace evoflow {

/// (1 - p) / p. Throws ParameterError unless 0 < p < 1.
double critical_fitness(double p);

/// Birth probability with its derived death probability and critical fitness.
///
/// Any p in (0,1) is accepted so subcritical regimes can be simulated;
/// statistics that only make sense above the phase transition check
/// supercritical() first.
class ModelParams {
 public:
  explicit ModelParams(double p);

  double p() const noexcept { return p_; }
  double q() const noexcept { return q_; }
  double f_c() const noexcept { return f_c_; }

  /// p > 1/2, equivalently f_c < 1.
  bool supercritical() const noexcept { return f_c_ < 1.0; }

  friend bool operator==(const ModelParams&, const ModelParams&) = default;

 private:
  double p_;
  double q_;
  double f_c_;
};

}  // namespace evoflow
