#include "slowlight/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <variant>

#include "slowlight/dynamics.hpp"
#include "slowlight/error.hpp"

namespace slowlight {

namespace {

constexpr cplx I{0.0, 1.0};

const Matrix3 kD{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -1.0}}};

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

CheckResult check_le(std::string name, double value, double threshold, std::string detail = {}) {
    return {std::move(name), value <= threshold, value, threshold, std::move(detail)};
}

}  // namespace

SnapshotGrid sample_snapshots(const SnapshotFn& fn, double zeta_lo, double zeta_hi, std::size_t n_zeta,
                              double tau_lo, double tau_hi, std::size_t n_tau) {
    if (n_zeta < 2 || n_tau < 2 || !(zeta_hi > zeta_lo) || !(tau_hi > tau_lo))
        throw GridError("snapshot grid needs a positive extent and at least 2 points per axis");
    SnapshotGrid g;
    g.zeta_min = zeta_lo;
    g.tau_min = tau_lo;
    g.n_zeta = n_zeta;
    g.n_tau = n_tau;
    g.h_zeta = (zeta_hi - zeta_lo) / static_cast<double>(n_zeta - 1);
    g.h_tau = (tau_hi - tau_lo) / static_cast<double>(n_tau - 1);
    g.values.reserve(n_zeta * n_tau);
    for (std::size_t j = 0; j < n_tau; ++j)
        for (std::size_t i = 0; i < n_zeta; ++i) g.values.push_back(fn(g.zeta(i), g.tau(j)));
    return g;
}

SnapshotGrid sample_snapshots(const SnapshotFn& fn, double zeta_c, double tau_c, double half_zeta,
                              double half_tau, double h) {
    const auto nz = static_cast<std::size_t>(std::llround(half_zeta / h));
    const auto nt = static_cast<std::size_t>(std::llround(half_tau / h));
    return sample_snapshots(fn, zeta_c - nz * h, zeta_c + nz * h, 2 * nz + 1, tau_c - nt * h, tau_c + nt * h,
                            2 * nt + 1);
}

SnapshotFn soliton_snapshots(const BackgroundSolution& bg, const PhysicalParams& p) {
    return [&bg, p](double zeta, double tau) { return snapshot(zeta, tau, bg, p); };
}

SnapshotFn constant_soliton_snapshots(const SpectralPoint& s, const PhysicalParams& p) {
    return [s, p](double zeta, double tau) { return snapshot(zeta, constant_background(tau, s), s, p); };
}

Matrix3 interaction_hamiltonian(cplx omega_a, cplx omega_b) {
    Matrix3 h{};
    h[2][0] = -0.5 * omega_a;
    h[2][1] = -0.5 * omega_b;
    h[0][2] = std::conj(h[2][0]);
    h[1][2] = std::conj(h[2][1]);
    return h;
}

std::optional<double> ResidualReport::order() const {
    if (!order_field || !order_atom) return std::nullopt;
    return std::min(*order_field, *order_atom);
}

ResidualReport mb_residual(const SnapshotGrid& grid, const PhysicalParams& p) {
    if (grid.n_zeta < 5 || grid.n_tau < 5) throw GridError("Maxwell-Bloch residual needs >= 5 points per axis");
    if (grid.values.size() != grid.n_zeta * grid.n_tau) throw GridError("snapshot grid is incomplete");
    const std::size_t nz = grid.n_zeta, nt = grid.n_tau;

    std::vector<Matrix3> H(grid.values.size()), rho(grid.values.size());
    for (std::size_t q = 0; q < grid.values.size(); ++q) {
        H[q] = interaction_hamiltonian(grid.values[q].omega_a, grid.values[q].omega_b);
        rho[q] = grid.values[q].state.rho();
    }
    auto idx = [nz](std::size_t i, std::size_t j) { return j * nz + i; };

    ResidualReport r;
    r.h_zeta = grid.h_zeta;
    r.h_tau = grid.h_tau;
    const cplx field_coeff = I * (p.nu0 / 4.0);
    const Matrix3 detuning = cplx(p.delta / 2.0) * kD;
    for (std::size_t j = 1; j + 1 < nt; ++j)
        for (std::size_t i = 1; i + 1 < nz; ++i) {
            const std::size_t q = idx(i, j);
            const Matrix3 dH = cplx(1.0 / (2.0 * grid.h_zeta)) * (H[idx(i + 1, j)] - H[idx(i - 1, j)]);
            const Matrix3 drho = cplx(1.0 / (2.0 * grid.h_tau)) * (rho[idx(i, j + 1)] - rho[idx(i, j - 1)]);
            r.r_field = std::max(r.r_field, max_abs(dH - field_coeff * commutator(kD, rho[q])));
            r.r_atom = std::max(r.r_atom, max_abs(drho - I * commutator(detuning - H[q], rho[q])));
        }
    return r;
}

double fitted_order(std::span<const double> hs, std::span<const double> values) {
    if (hs.size() != values.size() || hs.size() < 2) throw ValidationError("order fit needs matching samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const double x = std::log(hs[i]);
        const double y = std::log(std::max(values[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ResidualReport convergence_study(const std::function<SnapshotGrid(double h)>& build, std::span<const double> hs,
                                 const PhysicalParams& p) {
    if (hs.size() < 3) throw ValidationError("convergence study needs at least 3 grid spacings");
    ResidualReport out;
    std::vector<double> fields, atoms, steps;
    for (double h : hs) {
        const auto r = mb_residual(build(h), p);
        out.levels.push_back({h, r.r_field, r.r_atom});
        steps.push_back(h);
        fields.push_back(r.r_field);
        atoms.push_back(r.r_atom);
    }
    const auto finest = std::min_element(out.levels.begin(), out.levels.end(),
                                         [](const auto& a, const auto& b) { return a.h < b.h; });
    out.r_field = finest->r_field;
    out.r_atom = finest->r_atom;
    out.h_zeta = out.h_tau = finest->h;
    out.order_field = fitted_order(steps, fields);
    out.order_atom = fitted_order(steps, atoms);
    return out;
}

bool InvariantReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const CheckResult* InvariantReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

InvariantReport invariant_suite(const BackgroundSolution& bg, const PhysicalParams& p, const InvariantOptions& opt) {
    const auto& g = bg.grid();
    const auto& s = bg.spectral();
    const auto& f = bg.field();
    const double slope = p.phase_slope_zeta(s.lambda());
    const double w0 = std::abs(s.w0());

    InvariantReport rep;
    rep.seed = opt.seed;
    rep.points = opt.points;
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> node(0, g.size() - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    double norm_err = 0.0, purity = 0.0, herm = 0.0, tr_err = 0.0, dark = 0.0;
    const Matrix3 dark_rho{{{1.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    for (std::size_t q = 0; q < opt.points; ++q) {
        const std::size_t j = node(rng);
        const auto smp = bg.at_node(j);
        const LocalBackground b{smp.w, smp.z, smp.omega, bg.w_at_zero()};
        const double centre = peak_zeta(b, s, p);

        const double zeta = centre + 15.0 * unit(rng) / slope;
        const auto st = atomic_state(zeta, b, s, p);
        const auto rho = st.rho();
        norm_err = std::max(norm_err, std::abs(st.norm() - 1.0));
        purity = std::max(purity, purity_defect(rho));
        herm = std::max(herm, hermiticity_defect(rho));
        tr_err = std::max(tr_err, std::abs(trace(rho) - 1.0));

        // |phi| in [20, 40]
        const double u = unit(rng);
        const double far = centre + std::copysign(30.0 + 10.0 * std::abs(u), u) / slope;
        dark = std::max(dark, max_abs(atomic_state(far, b, s, p).rho() - dark_rho));
    }
    rep.checks.push_back(check_le("normalization", norm_err, 1e-12, "max | ||psi|| - 1 |"));
    rep.checks.push_back(check_le("purity", purity, 1e-10, "max ||rho^2 - rho||_F"));
    rep.checks.push_back(check_le("hermiticity", herm, 1e-12, "max |rho - rho^dagger|"));
    rep.checks.push_back(check_le("trace", tr_err, 1e-12, "max |Tr rho - 1|"));
    rep.checks.push_back(check_le("dark_state_asymptotics", dark, 1e-8, "max |rho - |1><1|| at |phi| >= 20"));

    const double left = w0 > 0 ? std::abs(bg.w().front() - s.w0()) / w0 : std::abs(bg.w().front());
    rep.checks.push_back(check_le("left_asymptote", left, 1e-6, "|w(tau_min) - w0| / |w0|"));

    if (f.is_stopping()) {
        const double right = w0 > 0 ? std::abs(bg.w().back()) / w0 : 0.0;
        const double since = g.tau_max() - f.switch_end();
        const double bound = std::exp(s.lambda().imag() * since);
        const double needed = f.switch_end() + std::log(1e4) / std::abs(s.lambda().imag());
        rep.checks.push_back(check_le("right_asymptote", right, 1e-4,
                                      "|w(tau_max)|/|w0|; decay bound exp(Im(lambda)(tau_max - tau_c)) = " +
                                          format_value(bound) + ", tau_max >= " + format_value(needed) + " needed"));
    }

    if (bg.method() == SolveMethod::Picard) {
        const double fp = fixed_point_residual(bg);
        rep.checks.push_back(check_le("fixed_point_residual", fp, std::max(opt.tol, 1e-13),
                                      "sup |T(w~) - w~| after substitution"));
    }

    // cross-method agreement on the same grid
    if (std::holds_alternative<field::InstantOff>(f.variant())) {
        const auto& io = std::get<field::InstantOff>(f.variant());
        const auto exact = closed_form_instant_off(s, g, io.tau_off);
        rep.checks.push_back(check_le("closed_form_equivalence", sup_distance(bg.w(), exact.w()), 1e-6,
                                      "sup |w - w_closed_form|"));
    } else {
        const bool smooth = !std::holds_alternative<field::Sampled>(f.variant());
        const double thr = smooth ? std::max(10.0 * opt.tol, 1e-8) : 1e-6;
        const auto other = bg.method() == SolveMethod::Riccati ? solve_w_picard(f, s, g, {opt.tol, 500, 1.0})
                                                               : solve_w_riccati(f, s, g, opt.tol);
        rep.checks.push_back(check_le("method_equivalence", sup_distance(bg.w(), other.w()), thr,
                                      std::string("sup |w_") + std::string(to_string(bg.method())) + " - w_" +
                                          std::string(to_string(other.method())) + "|"));
    }

    // trajectory: finite-difference lab speed against the closed formula while the soliton moves
    {
        const auto tr = trajectory(bg, p);
        const auto fd = fd_lab_velocity(tr, f.breakpoints());
        double vmax = 0.0;
        for (const auto& r : tr.rows) vmax = std::max(vmax, r.v);
        double worst = 0.0;
        for (std::size_t j = 0; j < fd.size(); ++j)
            if (!std::isnan(fd[j]) && tr.rows[j].v >= 1e-3 * vmax)
                worst = std::max(worst, std::abs(fd[j] - tr.rows[j].v) / tr.rows[j].v);
        rep.checks.push_back(check_le("trajectory_velocity_consistency", worst, 1e-6,
                                      "max relative |v_fd - v| where v >= 1e-3 max v"));
    }

    if (f.is_stopping()) {
        const bool decayed = std::abs(bg.w().back()) <= 1e-6 * w0;
        if (decayed) {
            const auto rep_stop = stop_report(bg, p);
            const double rel = std::abs(rep_stop.W_measured - rep_stop.W0) / rep_stop.W0;
            rep.checks.push_back(check_le("bit_width", rel, 1e-6, "|W_measured - W0| / W0"));
            // relative to |L|, floored at 1e-2 L0 so that a vanishing L (instant switch-off) stays meaningful
            const double scale = std::max(std::abs(rep_stop.L_rel), 1e-2 * rep_stop.L0);
            rep.checks.push_back(check_le("relative_distance_routes",
                                          std::abs(rep_stop.L_rel - rep_stop.L_rel_double) / scale, 1e-6,
                                          "single vs nested integral, relative to max(|L|, 1e-2 L0)"));
        } else {
            rep.checks.push_back({"bit_width", false, std::abs(bg.w().back()) / w0, 1e-6,
                                  "background not decayed at tau_max; memory bit undefined"});
        }
        if (std::holds_alternative<field::InstantOff>(f.variant())) {
            const auto tr = trajectory(bg, p);
            const double start = tr.rows[g.zero_index()].zeta_peak;
            const double disp = p.c * (tr.rows.back().zeta_peak - start);
            const double L0 = stopping_distance_L0(s, p);
            rep.checks.push_back(check_le("stopping_distance", std::abs(disp - L0) / L0, 1e-5,
                                          "|c (zeta(tau_max) - zeta(0)) - L0| / L0"));
        }
    }
    return rep;
}

}  // namespace slowlight
