#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "slowlight/background.hpp"
#include "slowlight/model.hpp"
#include "slowlight/soliton.hpp"

namespace slowlight {

/// v_g/c = d_tau phi / (d_tau phi - d_zeta phi) with d_tau phi = Im(lambda)|w|^2/(1+|w|^2).
double velocity_from_w(cplx w, const SpectralPoint& s, const PhysicalParams& p);
double velocity(double tau, const BackgroundSolution& bg, const PhysicalParams& p);
/// Limit |w| -> inf: the fastest the soliton can move for this lambda.
double max_velocity(const SpectralPoint& s, const PhysicalParams& p);

/// zeta at which phi = 0. phi is affine in zeta, so this is exact.
double peak_zeta(const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p);

struct TrajectoryRow {
    double tau;
    double zeta_peak;
    double x;
    double t;
    double v;  ///< v_g / c
};

struct Trajectory {
    std::vector<TrajectoryRow> rows;
    double tau_step = 0.0;
    /// Set when the field stops but |w(tau_max)| > 1e-6 |w0|: the final position is not converged.
    bool decay_incomplete = false;
};

/// Peak trajectory on every stride-th grid node.
Trajectory trajectory(const BackgroundSolution& bg, const PhysicalParams& p, std::size_t stride = 1);

/// Lab-frame speed dx/dt / c from fourth-order central differences of zeta_peak(tau) through
/// the chain rule x = x0 + c zeta, t = tau + zeta. NaN where the stencil leaves the data or
/// straddles a breakpoint.
std::vector<double> fd_lab_velocity(const Trajectory& traj, std::span<const double> breakpoints);

/// L0 = c |delta - lambda|^2 ln(1 + |w0|^2) / (nu0 |Im lambda|): distance covered after an
/// instant switch-off.
double stopping_distance_L0(const SpectralPoint& s, const PhysicalParams& p);

/// W0 = 4 c ln(2 + sqrt 3) |delta - lambda|^2 / (nu0 |Im lambda|).
double bit_width(const SpectralPoint& s, const PhysicalParams& p);

struct RelativeDistance {
    double value = 0.0;           ///< single-integral route
    double double_integral = 0.0; ///< nested-integral route
    double truncation = 0.0;      ///< tail estimate at the grid ends, same units as value
};

/// Relative stopping distance L[Omega] = 2c|delta-lambda|^2/(nu0 Im lambda) *
/// int Re((i/2) Omega* w - z0 Theta(-tau)) dtau, cross-checked by the nested-integral form
/// built on w~. Throws ScenarioError for non-stopping fields or if the tail estimate exceeds
/// 1% of the value.
RelativeDistance relative_distance(const BackgroundSolution& bg, const PhysicalParams& p);

struct ZsFunctionals {
    double I1 = 0.0;
    double I2 = 0.0;
    bool defined_by_limit = false;  ///< field has jumps; one-sided derivatives were used
};

/// I1 = -int (|Omega|^2 - |Omega0|^2 Theta(-tau)), I2 = int Im(Omega* dOmega/dtau), by adaptive
/// Gauss-Kronrod quadrature split at breakpoints and tau = 0.
ZsFunctionals zs_functionals(const ControlField& f);

/// Prefactor multiplying Im(sum I_n / k^n).
enum class SeriesPrefactor {
    Calibrated,      ///< c|delta-lambda|^2 / (2 nu0 Im lambda): matches the direct integral
    Printed,         ///< 2c|delta-lambda|^2 / (2 nu0 Im lambda)
    DirectIntegral,  ///< 2c|delta-lambda|^2 / (nu0 Im lambda), the single-integral prefactor
};

std::string_view to_string(SeriesPrefactor p);
double series_prefactor(SeriesPrefactor kind, const SpectralPoint& s, const PhysicalParams& p);

/// Truncated large-|k| series for L[Omega] through order 1 or 2.
double relative_distance_series(const ZsFunctionals& zs, const SpectralPoint& s, const PhysicalParams& p,
                                int order = 2, SeriesPrefactor kind = SeriesPrefactor::Calibrated);
double relative_distance_series(const ControlField& f, const SpectralPoint& s, const PhysicalParams& p,
                                int order = 2, SeriesPrefactor kind = SeriesPrefactor::Calibrated);

struct StopReport {
    double L0 = 0.0;
    double L_rel = 0.0;
    double L_rel_double = 0.0;
    double L_series_2 = 0.0;
    double I1 = 0.0;
    double I2 = 0.0;
    double W0 = 0.0;          ///< closed-form bit width
    double W_measured = 0.0;  ///< half-maximum width of |psi_2| at tau_max
    double x_bit = 0.0;       ///< lab coordinate of the bit maximum
    double truncation = 0.0;
};

StopReport stop_report(const BackgroundSolution& bg, const PhysicalParams& p);

}  // namespace slowlight
