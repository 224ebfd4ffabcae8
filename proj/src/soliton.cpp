#include "slowlight/soliton.hpp"

#include <algorithm>
#include <cmath>

#include "slowlight/error.hpp"

namespace slowlight {

namespace detail {

double sech(double x) {
    const double e = std::exp(-std::abs(x));
    return 2.0 * e / (1.0 + e * e);
}

double exp_sech(double x) { return 2.0 / (1.0 + std::exp(-2.0 * x)); }

}  // namespace detail

namespace {
constexpr cplx I{0.0, 1.0};
}

LocalBackground local_background(double tau, const BackgroundSolution& bg) {
    const auto smp = bg.sample(tau);
    return {smp.w, smp.z, smp.omega, bg.w_at_zero()};
}

LocalBackground constant_background(double tau, const SpectralPoint& s) {
    return {s.w0(), s.z0() * tau, s.omega0(), s.w0()};
}

SolitonPhase phases(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const cplx lambda = s.lambda();
    const double phi = p.phase_slope_zeta(lambda) * zeta + b.z.real() +
                       0.5 * std::log((1.0 + std::norm(b.w)) / (1.0 + std::norm(b.w_ref)));
    const double theta = p.carrier_slope_zeta(lambda) * zeta + b.z.imag();
    return {phi, theta};
}

namespace {

struct Pieces {
    SolitonPhase ph;
    cplx omega_a;
    cplx omega_b;
};

Pieces compute(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const cplx lambda = s.lambda();
    const auto ph = phases(zeta, b, s, p);
    const double n2 = std::norm(b.w);
    const cplx jump = std::conj(lambda) - lambda;  // -2i Im(lambda)
    const cplx carrier = std::exp(I * ph.theta);
    const cplx oa = jump * b.w * carrier * (detail::sech(ph.phi) / std::sqrt(1.0 + n2));
    const cplx ob = -jump * b.w * (detail::exp_sech(ph.phi) / (1.0 + n2)) - b.omega;
    return {ph, oa, ob};
}

AtomicState state_from(const Pieces& pc, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const cplx lambda = s.lambda();
    const double dist = std::abs(lambda - p.delta);
    const double sech = detail::sech(pc.ph.phi);
    AtomicState st;
    st.psi[0] = cplx(lambda.real() - p.delta, -lambda.imag() * std::tanh(pc.ph.phi)) / dist;
    st.psi[1] = (std::conj(lambda) - lambda) * std::exp(I * pc.ph.theta) * sech /
                (2.0 * dist * std::sqrt(1.0 + std::norm(b.w)));
    st.psi[2] = -pc.omega_a / (2.0 * dist);
    const double m = std::abs(st.psi[0]);
    if (m > 0.0) {
        const cplx phase = std::conj(st.psi[0]) / m;
        for (auto& a : st.psi) a *= phase;
        st.psi[0] = m;
    }
    return st;
}

}  // namespace

FieldPair fields(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const auto pc = compute(zeta, b, s, p);
    return {pc.omega_a, pc.omega_b};
}

AtomicState atomic_state(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    return state_from(compute(zeta, b, s, p), b, s, p);
}

SolitonSnapshot snapshot(double zeta, const LocalBackground& b, const SpectralPoint& s, const PhysicalParams& p) {
    const auto pc = compute(zeta, b, s, p);
    return {pc.omega_a, pc.omega_b, state_from(pc, b, s, p), pc.ph};
}

SolitonPhase phases(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p) {
    return phases(zeta, local_background(tau, bg), bg.spectral(), p);
}

FieldPair fields(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p) {
    return fields(zeta, local_background(tau, bg), bg.spectral(), p);
}

AtomicState atomic_state(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p) {
    return atomic_state(zeta, local_background(tau, bg), bg.spectral(), p);
}

SolitonSnapshot snapshot(double zeta, double tau, const BackgroundSolution& bg, const PhysicalParams& p) {
    return snapshot(zeta, local_background(tau, bg), bg.spectral(), p);
}

FieldPair approx_constant_soliton(double zeta, double tau, const SpectralPoint& s, const PhysicalParams& p,
                                  double omega0) {
    const cplx lambda = s.lambda();
    const double eps0 = -lambda.imag();
    const double z0 = -omega0 * omega0 / (4.0 * eps0);
    const double phi = p.phase_slope_zeta(lambda) * zeta + tau * z0;
    const double theta = p.carrier_slope_zeta(lambda) * zeta;
    return {-omega0 * std::exp(I * theta) * detail::sech(phi), cplx(omega0 * std::tanh(phi), 0.0)};
}

namespace {

void require_stopped(const BackgroundSolution& bg) {
    if (!bg.field().is_stopping())
        throw ScenarioError("memory bit needs a control field that vanishes as tau -> +inf");
    const double w_end = std::abs(bg.w().back());
    const double w0 = std::abs(bg.spectral().w0());
    if (w_end > 1e-6 * w0)
        throw ScenarioError("background has not decayed at tau_max: |w(tau_max)|/|w0| = " +
                            std::to_string(w_end / w0) + " > 1e-6; extend the grid");
}

}  // namespace

std::vector<AtomicState> memory_bit_profile(std::span<const double> zeta_grid, const BackgroundSolution& bg,
                                            const PhysicalParams& p) {
    require_stopped(bg);
    const auto b = local_background(bg.grid().tau_max(), bg);
    std::vector<AtomicState> out;
    out.reserve(zeta_grid.size());
    for (double zeta : zeta_grid) out.push_back(atomic_state(zeta, b, bg.spectral(), p));
    return out;
}

BitMeasurement measure_bit_width(const BackgroundSolution& bg, const PhysicalParams& p,
                                 std::span<const double> zeta_scan) {
    require_stopped(bg);
    if (zeta_scan.size() < 3) throw ValidationError("bit width scan needs at least 3 points");
    const auto b = local_background(bg.grid().tau_max(), bg);
    const auto& s = bg.spectral();
    auto amp = [&](double zeta) { return std::abs(atomic_state(zeta, b, s, p).psi[1]); };

    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t i = 0; i < zeta_scan.size(); ++i)
        if (const double v = amp(zeta_scan[i]); v > best_val) {
            best_val = v;
            best = i;
        }
    if (best == 0 || best + 1 == zeta_scan.size())
        throw ScenarioError("memory bit maximum lies at the edge of the zeta scan");

    // golden-section search for the maximum
    constexpr double g = 0.6180339887498949;
    double lo = zeta_scan[best - 1], hi = zeta_scan[best + 1];
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = amp(x1), f2 = amp(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = amp(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = amp(x1);
        }
    }
    const double zpk = 0.5 * (lo + hi);
    const double peak = amp(zpk);
    const double half = 0.5 * peak;

    const double step = (zeta_scan.back() - zeta_scan.front()) / static_cast<double>(zeta_scan.size() - 1);
    auto crossing = [&](double dir) {
        double inside = zpk, outside = zpk;
        for (int it = 0; it < 1'000'000; ++it) {
            outside += dir * step;
            if (amp(outside) < half) break;
            inside = outside;
        }
        if (amp(outside) >= half) throw ScenarioError("memory bit half-maximum not found");
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (mid == inside || mid == outside) break;
            (amp(mid) >= half ? inside : outside) = mid;
        }
        return 0.5 * (inside + outside);
    };
    const double left = crossing(-1.0);
    const double right = crossing(+1.0);
    BitMeasurement m;
    m.zeta_peak = zpk;
    m.x_peak = to_lab_frame({zpk, bg.grid().tau_max()}, p).x;
    m.peak = peak;
    m.width = p.c * (right - left);
    return m;
}

}  // namespace slowlight
