#include "evoflow/params.hpp"

#include <cmath>
#include <string>

#include "evoflow/errors.hpp"

namespace evoflow {

double critical_fitness(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("birth probability must lie in (0,1), got " + std::to_string(p));
  }
  return (1.0 - p) / p;
}

ModelParams::ModelParams(double p) : p_(p), q_(0.0), f_c_(critical_fitness(p)) { q_ = 1.0 - p; }

}  // namespace evoflow
