#include "chemosched/reference_instances.hpp"

#include <cmath>

namespace chemosched {

ProblemSpec reference_spec(GrowthModel model, Program program) {
  ProblemSpec spec;
  spec.horizon = 52;
  spec.s_tol = 500.0;
  if (model == GrowthModel::kExponential) {
    spec.growth = exponential_coefficients({50.0, std::exp(1.5)});
    spec.s_init = 50.0;
    spec.s_min = 10.0;
  } else {
    spec.growth = gompertz_coefficients({50.0, 0.72, 0.18});
    spec.s_init = 150.0;
    spec.s_min = 60.0;
  }
  if (program == Program::kP2) {
    spec.treatments = {{1, 10.0, 0.6}, {2, 13.0, 0.7}};
  } else {
    spec.treatments = {{1, 10.0, 0.6}};
  }
  spec.spacing_delta = program == Program::kP3 ? 1 : 0;
  return spec;
}

}  // namespace chemosched
