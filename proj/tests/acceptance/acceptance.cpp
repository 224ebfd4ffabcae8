// Acceptance run: one PASS/FAIL line per criterion, plus INFO lines for exploratory findings.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "slowlight/dynamics.hpp"
#include "slowlight/verify.hpp"

using namespace slowlight;

namespace {

using Clock = std::chrono::steady_clock;

const PhysicalParams kParams{2.0, 0.0, 1.0, 0.0};
constexpr cplx kLambda{0.0, -1.0};
constexpr double kOmega0 = 0.6;

int failures = 0;

void report(int id, const std::string& title, bool ok, const std::string& detail) {
    if (!ok) ++failures;
    fmt::print("[{}] criterion {}: {} | {}\n", ok ? "PASS" : "FAIL", id, title, detail);
    std::fflush(stdout);
}

void info(const std::string& msg) {
    fmt::print("[INFO] {}\n", msg);
    std::fflush(stdout);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

BackgroundSolution solve(const ControlField& f, const SpectralPoint& s) {
    return solve_w_picard(f, s, default_grid(f, s));
}

void criterion1() {
    const auto t0 = Clock::now();
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    const auto fn = constant_soliton_snapshots(s, kParams);
    const double hs[] = {1e-2, 5e-3, 2.5e-3};
    const auto rep =
        convergence_study([&](double h) { return sample_snapshots(fn, 0.0, 0.0, 1.0, 1.0, h); }, hs, kParams);
    const double dt = seconds_since(t0);
    const double order = rep.order().value_or(0.0);
    const double finest = std::max(rep.r_field, rep.r_atom);
    report(1, "Maxwell-Bloch residual convergence", order >= 1.8 && finest <= 1e-5 && dt <= 10.0,
           fmt::format("order field {:.3f}, atom {:.3f}; finest residual {:.3e} (<= 1e-5); {:.2f} s (<= 10 s)",
                       *rep.order_field, *rep.order_atom, finest, dt));
}

void criterion2() {
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    const auto io = ControlField::instant_off(kOmega0);
    const auto d = default_grid(io, s);
    const auto g = TauGrid::with_spacing(d.tau_min(), d.tau_max(), 1e-3);
    const auto exact = closed_form_instant_off(s, g);
    const double e_pic = sup_distance(solve_w_picard(io, s, g).w(), exact.w());
    const double e_ric = sup_distance(solve_w_riccati(io, s, g).w(), exact.w());
    double worst = 0.0;
    std::string per;
    for (double a : {1.0, 4.0, 16.0}) {
        const auto f = ControlField::exponential_off(kOmega0, a);
        const auto gg = default_grid(f, s);
        const double e = sup_distance(solve_w_picard(f, s, gg).w(), solve_w_riccati(f, s, gg).w());
        worst = std::max(worst, e);
        per += fmt::format(" a={}:{:.2e}", a, e);
    }
    report(2, "closed-form and cross-method equivalence", e_pic <= 1e-6 && e_ric <= 1e-6 && worst <= 1e-8,
           fmt::format("instant-off h=1e-3: picard {:.2e}, riccati {:.2e} (<= 1e-6); picard vs riccati{} (<= 1e-8)",
                       e_pic, e_ric, per));
}

void criterion3() {
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    const auto bg = solve(ControlField::instant_off(kOmega0), s);
    const auto tr = trajectory(bg, kParams);
    const double disp = kParams.c * (tr.rows.back().zeta_peak - tr.rows[bg.grid().zero_index()].zeta_peak);
    const double L0 = stopping_distance_L0(s, kParams);
    const double rel = std::abs(disp - L0) / L0;
    report(3, "stopping distance after instant switch-off", rel <= 1e-5 && std::abs(L0 - 0.052680) < 5e-7,
           fmt::format("displacement {:.12f}, L0 {:.12f}, relative error {:.2e} (<= 1e-5)", disp, L0, rel));
}

void criterion4() {
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    const double W0 = bit_width(s, kParams);
    std::vector<std::pair<std::string, double>> widths;
    for (double a : {1.0, 10.0, 100.0})
        widths.emplace_back(fmt::format("a={}", a), stop_report(solve(ControlField::exponential_off(kOmega0, a), s), kParams).W_measured);
    widths.emplace_back("instant", stop_report(solve(ControlField::instant_off(kOmega0), s), kParams).W_measured);
    double worst = 0.0, lo = 1e300, hi = -1e300;
    std::string per;
    for (const auto& [name, w] : widths) {
        worst = std::max(worst, std::abs(w - W0) / W0);
        lo = std::min(lo, w);
        hi = std::max(hi, w);
        per += fmt::format(" {}:{:.10f}", name, w);
    }
    const double spread = (hi - lo) / W0;
    report(4, "memory-bit width universality", worst <= 1e-6 && spread <= 1e-6 && std::abs(W0 - 2.63392) < 5e-6,
           fmt::format("W0 {:.10f};{}; max relative error {:.2e}, spread {:.2e} (<= 1e-6)", W0, per, worst, spread));
}

void criterion5() {
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    const double v_const = velocity_from_w(s.w0(), s, kParams);
    double worst = 0.0;
    std::size_t used = 0;
    std::string per;
    const std::vector<ControlField> fields{ControlField::tanh_ramp(kOmega0, 1.0), ControlField::tanh_ramp(kOmega0, 4.0),
                                           ControlField::tanh_ramp(kOmega0, 16.0),
                                           ControlField::exponential_off(kOmega0, 1.0),
                                           ControlField::constant(kOmega0)};
    for (const auto& f : fields) {
        const auto bg = solve(f, s);
        const auto tr = trajectory(bg, kParams);
        const auto fd = fd_lab_velocity(tr, f.breakpoints());
        double vmax = 0.0, e = 0.0;
        for (const auto& r : tr.rows) vmax = std::max(vmax, r.v);
        for (std::size_t j = 0; j < fd.size(); ++j)
            if (!std::isnan(fd[j]) && tr.rows[j].v >= 1e-3 * vmax) {
                e = std::max(e, std::abs(fd[j] - tr.rows[j].v) / tr.rows[j].v);
                ++used;
            }
        worst = std::max(worst, e);
        per += fmt::format(" {}:{:.1e}", f.describe().substr(0, f.describe().find('(')), e);
    }
    report(5, "velocity formula vs trajectory slope", worst <= 1e-6 && std::abs(v_const - 1.0 / 11.0) <= 1e-15,
           fmt::format("constant background v/c = {:.15f} (1/11); max relative FD error {:.2e} (<= 1e-6) over {} samples"
                       " with v >= 1e-3 v_max;{}",
                       v_const, worst, used, per));
}

void criterion6() {
    double e1 = 0.0;
    for (double a : {0.5, 1.0, 2.0, 4.0, 16.0})
        e1 = std::max(e1, std::abs(zs_functionals(ControlField::exponential_off(kOmega0, a)).I1 + kOmega0 * kOmega0 / (2.0 * a)));
    double e2 = 0.0;
    std::vector<double> t;
    std::vector<cplx> v;
    for (int i = 0; i <= 300; ++i) {
        t.push_back(0.01 * i);
        v.push_back(kOmega0 * std::pow(std::cos(M_PI * 0.01 * i / 6.0), 2) * (i < 300 ? 1.0 : 0.0));
    }
    for (const auto& f : {ControlField::exponential_off(kOmega0, 1.0), ControlField::tanh_ramp(kOmega0, 3.0),
                          ControlField::instant_off(kOmega0), ControlField::sampled(t, v, kOmega0, 0.0)})
        e2 = std::max(e2, std::abs(zs_functionals(f).I2));

    const auto f = ControlField::exponential_off(kOmega0, 1.0);
    std::vector<double> errs;
    std::string per;
    for (int i = 1; i <= 4; ++i) {
        const auto s = SpectralPoint::derive({0.0, -std::ldexp(1.0, i)}, kOmega0);
        const double direct = relative_distance(solve(f, s), kParams).value;
        const double series = relative_distance_series(f, s, kParams, 2);
        errs.push_back(std::abs(series - direct) / std::abs(direct));
        per += fmt::format(" -{}i:{:.4f}", 1 << i, errs.back());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < errs.size(); ++i) monotone = monotone && errs[i] < errs[i - 1];
    report(6, "Zakharov-Shabat functionals and series", e1 <= 1e-10 && e2 <= 1e-12 && monotone,
           fmt::format("max |I1 + Omega0^2/(2a)| {:.2e} (<= 1e-10); max |I2| {:.2e} (<= 1e-12); "
                       "series relative error along lambda = -2^i i:{} (monotone: {})",
                       e1, e2, per, monotone ? "yes" : "no"));

    const auto s16 = SpectralPoint::derive({0.0, -16.0}, kOmega0);
    const double direct16 = relative_distance(solve(f, s16), kParams).value;
    const double one_term = relative_distance_series(f, s16, kParams, 1);
    info(fmt::format("series (1 term) vs direct at lambda = -16i, a = 1: relative gap {:.4f}",
                     std::abs(one_term - direct16) / direct16));
    for (auto kind : {SeriesPrefactor::Printed, SeriesPrefactor::DirectIntegral})
        info(fmt::format("series prefactor '{}' at lambda = -16i: relative gap {:.4f}", to_string(kind),
                         std::abs(relative_distance_series(f, s16, kParams, 2, kind) - direct16) / direct16));
}

void criterion7() {
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    std::vector<double> L;
    std::string per;
    for (int i = 0; i <= 8; ++i) {
        const double a = std::ldexp(1.0, i);
        L.push_back(relative_distance(solve(ControlField::exponential_off(kOmega0, a), s), kParams).value);
        per += fmt::format(" {}:{:.6e}", a, L.back());
    }
    bool positive = true, decreasing = true;
    for (std::size_t i = 0; i < L.size(); ++i) {
        positive = positive && L[i] > 0.0;
        if (i) decreasing = decreasing && L[i] < L[i - 1];
    }
    report(7, "relative distance vs switch-off rate", positive && decreasing && L.back() < 1e-3,
           fmt::format("L[a]:{}; positive {}, strictly decreasing {}, L[256] < 1e-3 {}", per, positive,
                       decreasing, L.back() < 1e-3));

    // values from an independent high-accuracy ODE integration (adaptive RK, rtol 1e-13)
    const double ref1 = 0.07452244452822064, ref256 = 0.00038986493053776465;
    info(fmt::format("L vs independent reference: a=1 relative {:.2e}, a=256 relative {:.2e}",
                     std::abs(L.front() - ref1) / ref1, std::abs(L.back() - ref256) / ref256));

    // exploration of the sign of L over other stopping fields; a negative value is a finding
    for (double a : {1.0, 4.0, 16.0}) {
        const double l = relative_distance(solve(ControlField::tanh_ramp(kOmega0, a), s), kParams).value;
        info(fmt::format("tanh_ramp a={} tau_off=0: L = {:.6e}{}", a, l,
                         l < 0.0 ? "  (negative: a stopping field below the instant-off reference)" : ""));
    }
}

void criterion8() {
    const auto t0 = Clock::now();
    const auto s = SpectralPoint::derive(kLambda, kOmega0);
    std::vector<double> t;
    std::vector<cplx> v;
    for (int i = 0; i <= 160; ++i) {
        const double tau = 0.05 * i;
        t.push_back(tau);
        v.push_back(i < 160 ? kOmega0 * std::exp(-tau * tau / 2.0) * (1.0 - tau / 8.0) : 0.0);
    }
    const std::vector<ControlField> scenarios{ControlField::constant(kOmega0), ControlField::instant_off(kOmega0),
                                              ControlField::exponential_off(kOmega0, 1.0),
                                              ControlField::tanh_ramp(kOmega0, 4.0),
                                              ControlField::sampled(t, v, kOmega0, 0.0)};
    const InvariantOptions opt{20061015, 1000, 1e-12};
    bool core = true, everything = true;
    double n = 0.0, pur = 0.0, dark = 0.0;
    std::string failed;
    for (const auto& f : scenarios) {
        const auto rep = invariant_suite(solve(f, s), kParams, opt);
        for (const char* name : {"normalization", "purity", "dark_state_asymptotics"})
            core = core && rep.find(name) && rep.find(name)->passed;
        n = std::max(n, rep.find("normalization")->value);
        pur = std::max(pur, rep.find("purity")->value);
        dark = std::max(dark, rep.find("dark_state_asymptotics")->value);
        for (const auto& c : rep.checks)
            if (!c.passed) {
                everything = false;
                failed += " " + f.describe() + ":" + c.name;
            }
    }
    const double dt = seconds_since(t0);
    report(8, "algebraic invariants at seeded random points", core && dt <= 60.0,
           fmt::format("{} scenarios x {} points, seed {}: max norm error {:.2e} (<= 1e-12), purity {:.2e} (<= 1e-10), "
                       "dark state {:.2e} (<= 1e-8); {:.2f} s (<= 60 s)",
                       scenarios.size(), opt.points, opt.seed, n, pur, dark, dt));
    info(everything ? "full invariant suite (asymptotes, methods, width, trajectory, L routes) passed for every scenario"
                    : "invariant suite failures:" + failed);
}

void criterion9() {
    const double eps0 = 50.0 * kOmega0;
    const auto s = SpectralPoint::derive({0.0, -eps0}, kOmega0);
    const double tol = 3.0 * std::pow(kOmega0 / eps0, 2);
    auto deviation = [&](double zeta, double tau) {
        const auto full = fields(zeta, constant_background(tau, s), s, kParams);
        const auto red = approx_constant_soliton(zeta, tau, s, kParams, kOmega0);
        return std::max(std::abs(full.omega_a - red.omega_a), std::abs(full.omega_b - red.omega_b)) / kOmega0;
    };
    const double tau = 0.0;
    const double zeta_peak = -constant_background(tau, s).z.real() / kParams.phase_slope_zeta(s.lambda());
    const double at_peak = deviation(zeta_peak, tau);
    double window = 0.0;
    for (int i = -200; i <= 200; ++i) window = std::max(window, deviation(zeta_peak + 0.02 * i / kParams.phase_slope_zeta(s.lambda()), tau));
    report(9, "reduction to the conventional slow-light soliton", at_peak <= tol,
           fmt::format("eps0/Omega0 = 50: relative deviation at the peak {:.3e} (<= {:.3e}); max over |phi| <= 4: {:.3e}",
                       at_peak, tol, window));
}

}  // namespace

int main() {
    const auto t0 = Clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    fmt::print("{} of 9 criteria passed ({:.1f} s)\n", 9 - failures, seconds_since(t0));
    return failures == 0 ? 0 : 1;
}
