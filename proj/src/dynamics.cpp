#include "slowlight/dynamics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <variant>

#include "slowlight/error.hpp"

namespace slowlight {

namespace {

constexpr cplx I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// |delta - lambda|^2 / (nu0 Im lambda)
double length_scale(const SpectralPoint& s, const PhysicalParams& p) {
    return std::norm(p.delta - s.lambda()) / (p.nu0 * s.lambda().imag());
}

}  // namespace

double velocity_from_w(cplx w, const SpectralPoint& s, const PhysicalParams& p) {
    const double n2 = std::norm(w);
    const double dtau = s.lambda().imag() * n2 / (1.0 + n2);
    const double dzeta = p.phase_slope_zeta(s.lambda());
    return dtau / (dtau - dzeta);
}

double velocity(double tau, const BackgroundSolution& bg, const PhysicalParams& p) {
    return velocity_from_w(bg.sample(tau).w, bg.spectral(), p);
}

double max_velocity(const SpectralPoint& s, const PhysicalParams& p) {
    const double im = s.lambda().imag();
    return im / (im - p.phase_slope_zeta(s.lambda()));
}

double peak_zeta(const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const double offset = b.z.real() + 0.5 * std::log((1.0 + std::norm(b.w)) / (1.0 + std::norm(b.w_ref)));
    return -offset / p.phase_slope_zeta(s.lambda());
}

Trajectory trajectory(const BackgroundSolution& bg, const PhysicalParams& p, std::size_t stride) {
    if (stride == 0) throw ValidationError("trajectory stride must be positive");
    const auto& g = bg.grid();
    const auto& s = bg.spectral();
    Trajectory tr;
    tr.tau_step = g.h() * static_cast<double>(stride);
    // keep tau = 0 on the output lattice
    const std::size_t first = g.zero_index() % stride;
    for (std::size_t j = first; j < g.size(); j += stride) {
        const auto smp = bg.at_node(j);
        const LocalBackground b{smp.w, smp.z, smp.omega, bg.w_at_zero()};
        const double tau = g.tau(j);
        const double zeta = peak_zeta(b, s, p);
        const auto lab = to_lab_frame({zeta, tau}, p);
        tr.rows.push_back({tau, zeta, lab.x, lab.t, velocity_from_w(smp.w, s, p)});
    }
    if (bg.field().is_stopping() && std::abs(bg.w().back()) > 1e-6 * std::abs(s.w0()))
        tr.decay_incomplete = true;
    return tr;
}

std::vector<double> fd_lab_velocity(const Trajectory& traj, std::span<const double> breakpoints) {
    const auto& r = traj.rows;
    std::vector<double> v(r.size(), kNaN);
    const double d = traj.tau_step;
    for (std::size_t j = 2; j + 2 < r.size(); ++j) {
        const double lo = r[j - 2].tau, hi = r[j + 2].tau;
        // a breakpoint strictly inside the stencil (centre included) spoils the difference quotient
        bool straddles = false;
        for (double b : breakpoints)
            if (b > lo + 1e-12 * d && b < hi - 1e-12 * d) straddles = true;
        if (straddles) continue;
        const double dzeta = (-r[j + 2].zeta_peak + 8.0 * r[j + 1].zeta_peak - 8.0 * r[j - 1].zeta_peak +
                              r[j - 2].zeta_peak) / (12.0 * d);
        v[j] = dzeta / (1.0 + dzeta);
    }
    return v;
}

double stopping_distance_L0(const SpectralPoint& s, const PhysicalParams& p) {
    return p.c * std::norm(p.delta - s.lambda()) / (p.nu0 * std::abs(s.lambda().imag())) *
           std::log1p(std::norm(s.w0()));
}

double bit_width(const SpectralPoint& s, const PhysicalParams& p) {
    if (s.lambda().imag() == 0.0) throw InvalidSolitonError("bit width needs Im(lambda) != 0");
    return 4.0 * p.c * std::log(2.0 + std::sqrt(3.0)) * std::norm(p.delta - s.lambda()) /
           (p.nu0 * std::abs(s.lambda().imag()));
}

RelativeDistance relative_distance(const BackgroundSolution& bg, const PhysicalParams& p) {
    const auto& f = bg.field();
    if (!f.is_stopping()) throw ScenarioError("relative distance needs a stopping control field");
    const auto& g = bg.grid();
    const auto& s = bg.spectral();
    const auto& seg = bg.segmentation();
    const auto& w = bg.w();
    const std::size_t j0 = g.zero_index();
    const cplx z0 = s.z0();
    const double pref = 2.0 * p.c * length_scale(s, p);

    const auto integrand = sample_piecewise(seg, [&](std::size_t j, bool right) {
        const cplx om = f.limit(g.tau(j), right ? Side::Right : Side::Left);
        const double step = (j < j0 || (j == j0 && !right)) ? 1.0 : 0.0;
        return cplx(std::real(0.5 * I * std::conj(om) * w[j] - z0 * step), 0.0);
    });
    RelativeDistance out;
    out.value = pref * integrate(g, integrand).real();

    const double decay = 1.0 / std::abs(s.lambda().imag());
    const double tail = (std::abs(integrand.at(0, true)) + std::abs(integrand.at(g.size() - 1, false))) * decay;
    out.truncation = std::abs(pref) * tail;
    if (out.truncation > 0.01 * std::abs(out.value) && out.truncation > 1e-12 * std::abs(pref))
        throw ScenarioError("relative distance integrand has not decayed at the grid ends (tail estimate " +
                            std::to_string(out.truncation) + " vs value " + std::to_string(out.value) + ")");

    // Nested form: int dtau int_{-inf}^{tau} ds e^{-ik(tau-s)} (|Omega0|^2/4 Theta(-tau) - Omega*(tau)/2 w~(s)).
    // Swapping the order turns the Omega* part into an anti-causal convolution G of Omega*/2
    // integrated against w~; the part of w~ below tau_min is the constant Omega0/2.
    const cplx k = s.k();
    const cplx omega0 = s.omega0();
    const ProductRule rule(I * k * g.h(), g.h());
    const auto half_conj = sample_piecewise(seg, [&](std::size_t j, bool right) {
        return 0.5 * std::conj(f.limit(g.tau(j), right ? Side::Right : Side::Left));
    });
    const auto G = rule.anticausal(half_conj, 0.0);
    auto wt_g = bg.wt_piecewise();
    for (std::size_t sg = 0; sg < seg.count(); ++sg)
        for (std::size_t j = seg.first(sg); j <= seg.last(sg); ++j) wt_g.values[sg][j - seg.first(sg)] *= G[j];
    const cplx step_part = std::norm(omega0) / (4.0 * I * k) * (-g.tau_min());
    const cplx tail_part = omega0 / (2.0 * I * k) * G.front();
    const cplx nested = step_part - tail_part - integrate(g, wt_g);
    out.double_integral = pref * nested.real();
    return out;
}

ZsFunctionals zs_functionals(const ControlField& f) {
    if (!f.is_stopping()) throw ScenarioError("Zakharov-Shabat functionals need a stopping control field");
    using boost::math::quadrature::gauss_kronrod;
    const double inf = std::numeric_limits<double>::infinity();
    const double amp2 = std::norm(f.omega0());

    std::vector<double> cuts = f.breakpoints();
    cuts.push_back(0.0);
    if (const auto* sm = std::get_if<field::Sampled>(&f.variant())) cuts.insert(cuts.end(), sm->tau.begin(), sm->tau.end());
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto i1 = [&](double t) {
        const double step = t < 0.0 ? 1.0 : 0.0;
        return std::norm(f.limit(t, Side::Right)) - amp2 * step;
    };
    auto i2 = [&](double t) { return std::imag(std::conj(f.limit(t, Side::Right)) * f.derivative(t, Side::Right)); };
    auto piecewise = [&](auto&& fn) {
        constexpr unsigned depth = 15;
        constexpr double tol = 1e-12;  // the Kronrod error estimate bottoms out near 1e-12 relative
        double sum = gauss_kronrod<double, 31>::integrate(fn, -inf, cuts.front(), depth, tol);
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
            sum += gauss_kronrod<double, 31>::integrate(fn, cuts[i], cuts[i + 1], depth, tol);
        sum += gauss_kronrod<double, 31>::integrate(fn, cuts.back(), inf, depth, tol);
        return sum;
    };
    ZsFunctionals out;
    out.I1 = -piecewise(i1);
    out.I2 = piecewise(i2);
    out.defined_by_limit = f.has_jumps();
    return out;
}

std::string_view to_string(SeriesPrefactor p) {
    switch (p) {
        case SeriesPrefactor::Calibrated: return "calibrated";
        case SeriesPrefactor::Printed: return "printed";
        case SeriesPrefactor::DirectIntegral: return "direct-integral";
    }
    return "unknown";
}

double series_prefactor(SeriesPrefactor kind, const SpectralPoint& s, const PhysicalParams& p) {
    const double base = p.c * length_scale(s, p);
    switch (kind) {
        case SeriesPrefactor::Calibrated: return 0.5 * base;
        case SeriesPrefactor::Printed: return base;
        case SeriesPrefactor::DirectIntegral: return 2.0 * base;
    }
    return base;
}

double relative_distance_series(const ZsFunctionals& zs, const SpectralPoint& s, const PhysicalParams& p,
                                int order, SeriesPrefactor kind) {
    if (order < 1 || order > 2) throw ValidationError("series order must be 1 or 2");
    const cplx k = s.k();
    cplx sum = zs.I1 / k;
    if (order >= 2) sum += zs.I2 / (k * k);
    return series_prefactor(kind, s, p) * sum.imag();
}

double relative_distance_series(const ControlField& f, const SpectralPoint& s, const PhysicalParams& p,
                                int order, SeriesPrefactor kind) {
    return relative_distance_series(zs_functionals(f), s, p, order, kind);
}

StopReport stop_report(const BackgroundSolution& bg, const PhysicalParams& p) {
    const auto& s = bg.spectral();
    StopReport r;
    r.L0 = stopping_distance_L0(s, p);
    const auto rd = relative_distance(bg, p);
    r.L_rel = rd.value;
    r.L_rel_double = rd.double_integral;
    r.truncation = rd.truncation;
    const auto zs = zs_functionals(bg.field());
    r.I1 = zs.I1;
    r.I2 = zs.I2;
    r.L_series_2 = relative_distance_series(zs, s, p, 2);
    r.W0 = bit_width(s, p);

    const auto end = local_background(bg.grid().tau_max(), bg);
    const double centre = peak_zeta(end, s, p);
    const double span = 20.0 / p.phase_slope_zeta(s.lambda());
    std::vector<double> scan(401);
    for (std::size_t i = 0; i < scan.size(); ++i)
        scan[i] = centre - span + 2.0 * span * static_cast<double>(i) / static_cast<double>(scan.size() - 1);
    const auto bit = measure_bit_width(bg, p, scan);
    r.W_measured = bit.width;
    r.x_bit = bit.x_peak;
    return r;
}

}  // namespace slowlight
