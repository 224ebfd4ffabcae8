#pragma once

#include "slowlight/model.hpp"

namespace slowlight::testing {

// c = 1, nu0 = 2, delta = 0, lambda = -i, Omega0 = 0.6
inline PhysicalParams standard_params() { return {2.0, 0.0, 1.0, 0.0}; }
inline constexpr cplx kLambda{0.0, -1.0};
inline constexpr double kOmega0 = 0.6;

}  // namespace slowlight::testing
