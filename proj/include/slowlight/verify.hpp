#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slowlight/background.hpp"
#include "slowlight/soliton.hpp"

namespace slowlight {

/// Snapshots on a uniform (zeta, tau) product grid, stored tau-major.
struct SnapshotGrid {
    double zeta_min = 0.0, h_zeta = 0.0;
    double tau_min = 0.0, h_tau = 0.0;
    std::size_t n_zeta = 0, n_tau = 0;
    std::vector<SolitonSnapshot> values;

    double zeta(std::size_t i) const { return zeta_min + static_cast<double>(i) * h_zeta; }
    double tau(std::size_t j) const { return tau_min + static_cast<double>(j) * h_tau; }
    SolitonSnapshot& at(std::size_t i, std::size_t j) { return values[j * n_zeta + i]; }
    const SolitonSnapshot& at(std::size_t i, std::size_t j) const { return values[j * n_zeta + i]; }
};

using SnapshotFn = std::function<SolitonSnapshot(double zeta, double tau)>;

/// Evaluates fn on n_zeta x n_tau points spanning [zeta_lo, zeta_hi] x [tau_lo, tau_hi].
SnapshotGrid sample_snapshots(const SnapshotFn& fn, double zeta_lo, double zeta_hi, std::size_t n_zeta,
                              double tau_lo, double tau_hi, std::size_t n_tau);
/// Same, on spacing h in both directions centred at (zeta_c, tau_c) with half-widths.
SnapshotGrid sample_snapshots(const SnapshotFn& fn, double zeta_c, double tau_c, double half_zeta,
                              double half_tau, double h);

/// Soliton on a solved background.
SnapshotFn soliton_snapshots(const BackgroundSolution& bg, const PhysicalParams& p);
/// Soliton on the exact constant background w = w0, z = z0 tau (no tau grid involved).
SnapshotFn constant_soliton_snapshots(const SpectralPoint& s, const PhysicalParams& p);

/// Interaction Hamiltonian H_I = -(Omega_a |3><1| + Omega_b |3><2|)/2 + h.c.
Matrix3 interaction_hamiltonian(cplx omega_a, cplx omega_b);

struct ResidualLevel {
    double h = 0.0;
    double r_field = 0.0;
    double r_atom = 0.0;
};

struct ResidualReport {
    double r_field = 0.0;  ///< sup |d_zeta H_I - i(nu0/4)[D, rho]|
    double r_atom = 0.0;   ///< sup |d_tau rho - i[(delta/2) D - H_I, rho]|
    double h_zeta = 0.0;
    double h_tau = 0.0;
    /// Least-squares slope of log residual against log h; set by convergence_study.
    std::optional<double> order_field;
    std::optional<double> order_atom;
    std::vector<ResidualLevel> levels;

    std::optional<double> order() const;
};

/// Central-difference residuals of both Maxwell-Bloch matrix equations, sup over interior
/// points and matrix entries. rho is rebuilt from psi. Throws GridError below 5 points per axis.
ResidualReport mb_residual(const SnapshotGrid& grid, const PhysicalParams& p);

/// mb_residual on grids built for each h (at least 3), with fitted convergence orders. The
/// returned residuals are those of the finest grid.
ResidualReport convergence_study(const std::function<SnapshotGrid(double h)>& build, std::span<const double> hs,
                                 const PhysicalParams& p);

/// Least-squares slope of log(values) against log(hs).
double fitted_order(std::span<const double> hs, std::span<const double> values);

struct CheckResult {
    std::string name;
    bool passed = false;
    double value = 0.0;
    double threshold = 0.0;
    std::string detail;
};

struct InvariantReport {
    std::uint64_t seed = 0;
    std::size_t points = 0;
    std::vector<CheckResult> checks;

    bool all_passed() const;
    const CheckResult* find(const std::string& name) const;
};

struct InvariantOptions {
    std::uint64_t seed = 20061015;
    std::size_t points = 1000;
    /// Tolerance the background was solved to; sets the method-equivalence threshold.
    double tol = 1e-12;
};

/// Algebraic, asymptotic and cross-method checks of a solved scenario. Failures are data.
InvariantReport invariant_suite(const BackgroundSolution& bg, const PhysicalParams& p,
                                const InvariantOptions& opt = {});

}  // namespace slowlight
