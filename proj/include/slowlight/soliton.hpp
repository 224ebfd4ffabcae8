#pragma once

#include <span>
#include <vector>

#include "slowlight/background.hpp"
#include "slowlight/model.hpp"

namespace slowlight {

/// phi: soliton phase (the envelope is sech(phi)); theta: carrier phase.
struct SolitonPhase {
    double phi = 0.0;
    double theta = 0.0;
};

struct FieldPair {
    cplx omega_a;  ///< sigma- channel
    cplx omega_b;  ///< sigma+ channel
};

struct SolitonSnapshot {
    cplx omega_a;
    cplx omega_b;
    AtomicState state;
    SolitonPhase phase;
};

/// Background values entering the soliton formulas at one retarded time.
struct LocalBackground {
    cplx w;       ///< w(tau, lambda)
    cplx z;       ///< z(tau, lambda)
    cplx omega;   ///< Omega(tau)
    cplx w_ref;   ///< w(0, lambda), fixes the origin of phi
};

LocalBackground local_background(double tau, const BackgroundSolution& bg);
/// Exact constant-background values w = w0, z = z0 tau.
LocalBackground constant_background(double tau, const SpectralPoint& s);

SolitonPhase phases(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p);
FieldPair fields(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p);
/// |2> amplitude in the w-cancelled form, finite as w -> 0. Global phase makes psi_1 real and
/// non-negative.
AtomicState atomic_state(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p);
SolitonSnapshot snapshot(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p);

// Grid-backed overloads; throw OutOfRangeError when tau leaves the background grid.
SolitonPhase phases(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p);
FieldPair fields(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p);
AtomicState atomic_state(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p);
SolitonSnapshot snapshot(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p);

/// Conventional slow-light soliton for lambda = -i eps0 with eps0 >> Omega0 (real Omega0):
/// Omega_a = -Omega0 e^{i theta} sech(phi), Omega_b = Omega0 tanh(phi), z0 ~ -Omega0^2/(4 eps0).
FieldPair approx_constant_soliton(double zeta, double tau, const SpectralPoint& s, const PhysicalParams& p,
                                  double omega0);

/// Atomic state left in the medium after the control field is gone, evaluated at tau_max.
/// Throws ScenarioError unless the field stops and |w(tau_max)| <= 1e-6 |w0|.
std::vector<AtomicState> memory_bit_profile(std::span<const double> zeta_grid, const BackgroundSolution& bg,
                                            const PhysicalParams& p);

struct BitMeasurement {
    double zeta_peak = 0.0;  ///< maximum of |psi_2|
    double x_peak = 0.0;     ///< the same point in lab coordinates
    double peak = 0.0;       ///< max |psi_2|
    double width = 0.0;      ///< lab-frame distance between the half-maximum points of |psi_2|
};

/// Locates the bit on the scan grid, refines the maximum by golden-section search and the two
/// half-maximum crossings by bisection.
BitMeasurement measure_bit_width(const BackgroundSolution& bg, const PhysicalParams& p,
                                 std::span<const double> zeta_scan);

namespace detail {
/// sech(x), overflow-safe for |x| up to ~700 and beyond.
double sech(double x);
/// e^x sech(x) = 2 / (1 + e^{-2x}).
double exp_sech(double x);
}  // namespace detail

}  // namespace slowlight
