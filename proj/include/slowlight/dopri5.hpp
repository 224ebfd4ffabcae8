#pragma once

#include <functional>
#include <span>
#include <vector>

#include "slowlight/model.hpp"

namespace slowlight {

/// Adaptive Dormand-Prince 5(4) integrator for a complex scalar ODE y' = f(t, y), with the
/// fourth-order continuous extension used to report values at requested output times.
struct Dopri5Options {
    double rtol = 1e-11;
    double atol = 1e-13;
    double initial_step = 0.0;  ///< 0 picks one from the derivative at t0
    double max_step = 0.0;      ///< 0 means unbounded
    long max_steps = 10'000'000;
};

struct Dopri5Stats {
    long accepted = 0;
    long rejected = 0;
    long evaluations = 0;
};

using ScalarRhs = std::function<cplx(double, cplx)>;

/// Integrates from t0 to t1 (> t0) and returns y at every output time in [t0, t1] (sorted).
/// Throws DivergenceError on step-size underflow or a non-finite state.
std::vector<cplx> dopri5(const ScalarRhs& f, double t0, cplx y0, double t1,
                         std::span<const double> outputs, const Dopri5Options& opt,
                         Dopri5Stats* stats = nullptr);

}  // namespace slowlight
