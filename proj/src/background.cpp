#include "slowlight/background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "slowlight/dopri5.hpp"
#include "slowlight/error.hpp"

namespace slowlight {

namespace {

constexpr cplx I{0.0, 1.0};

void require_matching(const ControlField& f, const SpectralPoint& s) {
    const cplx a = f.omega0();
    const cplx b = s.omega0();
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
        throw ValidationError("spectral point was derived for a different background amplitude");
}

void require_resolution(const SpectralPoint& s, const TauGrid& g) {
    const double kh = std::abs(s.k()) * g.h();
    if (kh >= 1.0)
        throw GridError("tau grid too coarse: |k| h = " + std::to_string(kh) + " >= 1");
}

PiecewiseSamples field_samples(const ControlField& f, const TauGrid& g, const Segmentation& seg) {
    return sample_piecewise(seg, [&](std::size_t j, bool right) {
        return f.limit(g.tau(j), right ? Side::Right : Side::Left);
    });
}

// w~ from w using one-sided field values
PiecewiseSamples wt_samples(const PiecewiseSamples& omega, std::span<const cplx> w, const SpectralPoint& s) {
    PiecewiseSamples out{omega.seg, omega.values};
    for (std::size_t sg = 0; sg < out.seg.count(); ++sg)
        for (std::size_t j = out.seg.first(sg); j <= out.seg.last(sg); ++j) {
            auto& v = out.values[sg][j - out.seg.first(sg)];
            v = wt_from_w(v, w[j], s);
        }
    return out;
}

std::vector<cplx> convolve(const ProductRule& rule, const PiecewiseSamples& wt, cplx w0) {
    // w = i * int exp(-ik(tau - s)) w~(s) ds, with the tail below tau_min giving w(tau_min) = w0
    auto w = rule.causal(wt, -I * w0);
    for (auto& v : w) v *= I;
    return w;
}

double sup_piecewise(const PiecewiseSamples& a, const PiecewiseSamples& b) {
    double r = 0.0;
    for (std::size_t s = 0; s < a.values.size(); ++s)
        for (std::size_t j = 0; j < a.values[s].size(); ++j)
            r = std::max(r, std::abs(a.values[s][j] - b.values[s][j]));
    return r;
}

}  // namespace

std::string_view to_string(SolveMethod m) {
    switch (m) {
        case SolveMethod::Picard: return "picard";
        case SolveMethod::Riccati: return "riccati";
        case SolveMethod::ClosedForm: return "closed-form";
    }
    return "unknown";
}

cplx wt_from_w(cplx omega, cplx w, const SpectralPoint& s) {
    return 0.5 * omega + std::norm(s.omega0()) * w / (4.0 * s.k()) - 0.5 * std::conj(omega) * w * w;
}

BackgroundSolution::BackgroundSolution(ControlField field, SpectralPoint spectral, TauGrid grid,
                                       std::vector<cplx> w, PiecewiseSamples wt, SolveMethod method,
                                       int iterations, double residual)
    : field_(std::move(field)),
      spectral_(spectral),
      grid_(grid),
      w_(std::move(w)),
      wt_(std::move(wt)),
      method_(method),
      iterations_(iterations),
      residual_(residual) {
    if (w_.size() != grid_.size()) throw GridError("background samples do not match the grid");
    z_ = solve_z(field_, w_, spectral_, grid_);
}

std::vector<cplx> BackgroundSolution::wt() const {
    std::vector<cplx> out(grid_.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = wt_.mean_at(j);
    return out;
}

BackgroundSolution::Sample BackgroundSolution::at_node(std::size_t j) const {
    return {w_[j], z_[j], field_(grid_.tau(j))};
}

BackgroundSolution::Sample BackgroundSolution::sample(double tau) const {
    if (!grid_.contains(tau))
        throw OutOfRangeError("tau = " + std::to_string(tau) + " outside the background grid [" +
                              std::to_string(grid_.tau_min()) + ", " + std::to_string(grid_.tau_max()) + "]");
    if (auto j = grid_.node_index(tau); j && std::abs(grid_.tau(*j) - tau) <= 1e-14 * grid_.h())
        return at_node(*j);

    const std::size_t j = grid_.interval_index(tau);
    const double h = grid_.h();
    const double u = (tau - grid_.tau(j)) / h;
    const cplx k = spectral_.k();
    const cplx om_a = field_.limit(grid_.tau(j), Side::Right);
    const cplx om_b = field_.limit(grid_.tau(j + 1), Side::Left);
    const cplx wa = w_[j], wb = w_[j + 1];
    const cplx dwa = -I * k * wa + I * wt_.at(j, true);
    const cplx dwb = -I * k * wb + I * wt_.at(j + 1, false);
    const cplx dza = 0.5 * I * std::conj(om_a) * wa;
    const cplx dzb = 0.5 * I * std::conj(om_b) * wb;

    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const cplx w = h00 * wa + h10 * h * dwa + h01 * wb + h11 * h * dwb;
    const cplx z = h00 * z_[j] + h10 * h * dza + h01 * z_[j + 1] + h11 * h * dzb;
    return {w, z, field_(tau)};
}

TauGrid default_grid(const ControlField& f, const SpectralPoint& s) {
    const double decay = 1.0 / std::abs(s.lambda().imag());
    double tau_min = std::min(-12.0 * decay, f.switch_begin() - 12.0 * decay);
    double tau_max = 12.0 * decay;
    if (f.is_stopping()) tau_max = std::max(tau_max, f.switch_end() + 16.0 * decay);

    double h = 0.02 / std::abs(s.k());
    if (std::isfinite(f.time_scale())) h = std::min(h, 0.02 * f.time_scale());
    // every breakpoint must sit on a node; tau = 0 always does
    for (double b : f.breakpoints()) {
        if (b == 0.0) continue;
        h = std::abs(b) / std::ceil(std::abs(b) / h);
    }
    return TauGrid::with_spacing(tau_min, tau_max, h);
}

std::vector<cplx> solve_z(const ControlField& f, std::span<const cplx> w, const SpectralPoint& s,
                          const TauGrid& g) {
    if (w.size() != g.size()) throw GridError("solve_z: w is not sampled on the given grid");
    const auto seg = Segmentation::make(g, f.breakpoints());
    const cplx z0 = s.z0();
    const auto integrand = sample_piecewise(seg, [&](std::size_t j, bool right) {
        const cplx om = f.limit(g.tau(j), right ? Side::Right : Side::Left);
        return 0.5 * I * std::conj(om) * w[j] - z0;
    });
    auto z = cumulative_integral(g, integrand);
    for (std::size_t j = 0; j < z.size(); ++j) z[j] += z0 * g.tau(j);
    return z;
}

BackgroundSolution solve_w_picard(const ControlField& f, const SpectralPoint& s, const TauGrid& g,
                                  const PicardOptions& opt) {
    require_matching(f, s);
    require_resolution(s, g);
    if (!(opt.tol > 0.0)) throw ValidationError("Picard tolerance must be positive");
    if (!(opt.mixing > 0.0 && opt.mixing <= 1.0)) throw ValidationError("Picard mixing must lie in (0, 1]");

    const auto seg = Segmentation::make(g, f.breakpoints());
    const ProductRule rule(I * s.k() * g.h(), g.h());
    const auto omega = field_samples(f, g, seg);

    PiecewiseSamples wt = omega;
    for (auto& piece : wt.values)
        for (auto& v : piece) v *= 0.5;

    double theta = opt.mixing;
    double prev = std::numeric_limits<double>::infinity();
    double residual = prev;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const auto w = convolve(rule, wt, s.w0());
        const auto next = wt_samples(omega, w, s);
        residual = sup_piecewise(next, wt);
        if (!std::isfinite(residual))
            throw DivergenceError("Picard iteration produced non-finite values", residual, it);
        if (residual <= opt.tol) {
            auto w_final = convolve(rule, next, s.w0());
            return BackgroundSolution(f, s, g, std::move(w_final), next, SolveMethod::Picard, it, residual);
        }
        if (residual > prev) theta = std::max(theta * 0.5, 1.0 / 1024.0);
        prev = residual;
        for (std::size_t p = 0; p < wt.values.size(); ++p)
            for (std::size_t j = 0; j < wt.values[p].size(); ++j)
                wt.values[p][j] = (1.0 - theta) * wt.values[p][j] + theta * next.values[p][j];
    }
    throw DivergenceError("Picard iteration did not converge in " + std::to_string(opt.max_iter) +
                              " iterations (last residual " + std::to_string(residual) + ")",
                          residual, opt.max_iter);
}

BackgroundSolution solve_w_riccati(const ControlField& f, const SpectralPoint& s, const TauGrid& g,
                                   double tol) {
    require_matching(f, s);
    if (!(tol > 0.0)) throw ValidationError("Riccati tolerance must be positive");
    const auto seg = Segmentation::make(g, f.breakpoints());
    const cplx k = s.k();

    std::vector<cplx> w(g.size());
    w[0] = s.w0();
    long steps = 0;
    Dopri5Options opt;
    opt.rtol = tol;
    opt.atol = tol * std::max(std::abs(s.w0()), 1e-3);
    opt.max_step = 0.5 / std::abs(k);

    for (std::size_t sg = 0; sg < seg.count(); ++sg) {
        const std::size_t lo = seg.first(sg), hi = seg.last(sg);
        const double t_lo = g.tau(lo), t_hi = g.tau(hi);
        // one-sided field values keep the integration inside a smooth piece
        auto rhs = [&](double t, cplx y) {
            cplx om;
            if (t <= t_lo) om = f.limit(t_lo, Side::Right);
            else if (t >= t_hi) om = f.limit(t_hi, Side::Left);
            else om = f(t);
            return -I * k * y + I * wt_from_w(om, y, s);
        };
        std::vector<double> outputs;
        outputs.reserve(hi - lo + 1);
        for (std::size_t j = lo; j <= hi; ++j) outputs.push_back(g.tau(j));
        Dopri5Stats stats;
        const auto y = dopri5(rhs, t_lo, w[lo], t_hi, outputs, opt, &stats);
        for (std::size_t j = lo; j <= hi; ++j) w[j] = y[j - lo];
        steps += stats.accepted;
    }
    auto wt = wt_samples(field_samples(f, g, seg), w, s);
    return BackgroundSolution(f, s, g, std::move(w), std::move(wt), SolveMethod::Riccati,
                              static_cast<int>(std::min<long>(steps, std::numeric_limits<int>::max())), 0.0);
}

BackgroundSolution closed_form_instant_off(const SpectralPoint& s, const TauGrid& g, double tau_off) {
    const auto f = ControlField::instant_off(s.omega0(), tau_off);
    const cplx lambda = s.lambda();
    std::vector<cplx> w(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double t = g.tau(j);
        const double left = t < tau_off ? 1.0 : t > tau_off ? 0.0 : 0.5;
        w[j] = s.w0() * (left + (1.0 - left) * std::exp(-I * lambda * (t - tau_off)));
    }
    const auto seg = Segmentation::make(g, f.breakpoints());
    auto wt = wt_samples(field_samples(f, g, seg), w, s);
    return BackgroundSolution(f, s, g, std::move(w), std::move(wt), SolveMethod::ClosedForm, 0, 0.0);
}

double fixed_point_residual(const BackgroundSolution& bg) {
    const auto& g = bg.grid();
    const auto& s = bg.spectral();
    const ProductRule rule(I * s.k() * g.h(), g.h());
    const auto w = convolve(rule, bg.wt_piecewise(), s.w0());
    const auto omega = field_samples(bg.field(), g, bg.segmentation());
    return sup_piecewise(wt_samples(omega, w, s), bg.wt_piecewise());
}

double sup_distance(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw GridError("sup_distance: size mismatch");
    double r = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) r = std::max(r, std::abs(a[j] - b[j]));
    return r;
}

}  // namespace slowlight
