#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "slowlight/control_field.hpp"
#include "slowlight/model.hpp"
#include "slowlight/tau_grid.hpp"

namespace slowlight {

enum class SolveMethod { Picard, Riccati, ClosedForm };

std::string_view to_string(SolveMethod m);

struct PicardOptions {
    double tol = 1e-12;
    int max_iter = 500;
    /// Initial mixing parameter theta in (0, 1]; halved whenever the residual grows.
    double mixing = 1.0;
};

/// Background response w(tau, lambda), w~(tau, lambda) and z(tau, lambda) of a control field,
/// sampled on a TauGrid. Immutable once built.
class BackgroundSolution {
public:
    BackgroundSolution(ControlField field, SpectralPoint spectral, TauGrid grid, std::vector<cplx> w,
                       PiecewiseSamples wt, SolveMethod method, int iterations, double residual);

    const ControlField& field() const noexcept { return field_; }
    const SpectralPoint& spectral() const noexcept { return spectral_; }
    const TauGrid& grid() const noexcept { return grid_; }
    const Segmentation& segmentation() const noexcept { return wt_.seg; }

    const std::vector<cplx>& w() const noexcept { return w_; }
    const std::vector<cplx>& z() const noexcept { return z_; }
    /// w~ with one-sided limits at breakpoints.
    const PiecewiseSamples& wt_piecewise() const noexcept { return wt_; }
    /// w~ at every node, averaging one-sided limits at breakpoints.
    std::vector<cplx> wt() const;

    SolveMethod method() const noexcept { return method_; }
    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

    cplx w_at_zero() const { return w_[grid_.zero_index()]; }

    struct Sample {
        cplx w;
        cplx z;
        cplx omega;
    };
    /// Background at an arbitrary tau inside the grid: cubic Hermite interpolation using
    /// w' = -ikw + iw~ and z' = (i/2) Omega* w. Throws OutOfRangeError outside the grid.
    Sample sample(double tau) const;
    Sample at_node(std::size_t j) const;

private:
    ControlField field_;
    SpectralPoint spectral_;
    TauGrid grid_;
    std::vector<cplx> w_;
    PiecewiseSamples wt_;
    std::vector<cplx> z_;
    SolveMethod method_;
    int iterations_;
    double residual_;
};

/// w~ = Omega/2 + |Omega0|^2 w / (4k) - Omega* w^2 / 2.
cplx wt_from_w(cplx omega, cplx w, const SpectralPoint& s);

/// Default grid: span of at least 12/|Im lambda| on both sides extended to cover the switch-off
/// plus 16/|Im lambda| of decay, spacing with |k| h <= 0.02 and h <= 0.02 * field time scale,
/// with every field breakpoint on a node.
TauGrid default_grid(const ControlField& f, const SpectralPoint& s);

/// Picard iteration of the closed nonlinear integral equation for w~, starting from Omega/2.
/// w is recovered by the causal exponential convolution with w(tau_min) = w0 (the part of the
/// integral below tau_min is taken in closed form for the constant left asymptote).
/// Throws GridError if |k| h >= 1 and DivergenceError after max_iter.
BackgroundSolution solve_w_picard(const ControlField& f, const SpectralPoint& s, const TauGrid& g,
                                  const PicardOptions& opt = {});

/// Adaptive Dormand-Prince integration of dw/dtau = -ikw + iw~(w, tau) from w(tau_min) = w0,
/// restarted at every field breakpoint.
BackgroundSolution solve_w_riccati(const ControlField& f, const SpectralPoint& s, const TauGrid& g,
                                   double tol = 1e-12);

/// w = w0 (Theta(tau_off - tau) + Theta(tau - tau_off) exp(-i lambda (tau - tau_off))).
BackgroundSolution closed_form_instant_off(const SpectralPoint& s, const TauGrid& g, double tau_off = 0.0);

/// z(tau) = z0 tau + int_{tau_min}^{tau} ((i/2) Omega*(t) w(t) - z0) dt (fourth-order quadrature).
std::vector<cplx> solve_z(const ControlField& f, std::span<const cplx> w, const SpectralPoint& s,
                          const TauGrid& g);

/// sup |T(w~) - w~| where T is the right side of the closed integral equation.
double fixed_point_residual(const BackgroundSolution& bg);

/// Sup-norm distance between two solutions on the same grid.
double sup_distance(std::span<const cplx> a, std::span<const cplx> b);

}  // namespace slowlight
