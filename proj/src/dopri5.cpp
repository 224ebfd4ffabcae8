#include "slowlight/dopri5.hpp"

#include <algorithm>
#include <cmath>

#include "slowlight/error.hpp"

namespace slowlight {

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// dense output
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

bool finite(cplx v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); }

}  // namespace

std::vector<cplx> dopri5(const ScalarRhs& f, double t0, cplx y0, double t1,
                         std::span<const double> outputs, const Dopri5Options& opt,
                         Dopri5Stats* stats) {
    Dopri5Stats st;
    std::vector<cplx> out;
    out.reserve(outputs.size());
    std::size_t next = 0;
    while (next < outputs.size() && outputs[next] <= t0) {
        out.push_back(y0);
        ++next;
    }

    double t = t0;
    cplx y = y0;
    cplx k1 = f(t, y);
    ++st.evaluations;
    const double span = t1 - t0;
    double h = opt.initial_step;
    if (h <= 0.0) {
        const double scale = opt.atol + opt.rtol * std::abs(y);
        const double d = std::abs(k1) / scale;
        h = d > 1e-10 ? 0.01 / d : 1e-3 * span;
        h = std::min(h, 1e-2 * span);
    }
    if (opt.max_step > 0.0) h = std::min(h, opt.max_step);

    while (t < t1) {
        if (st.accepted + st.rejected >= opt.max_steps)
            throw DivergenceError("dopri5: step budget exhausted", std::abs(y), static_cast<int>(st.accepted));
        bool last = false;
        if (t + h >= t1 || t1 - (t + h) < 1e-12 * std::abs(span)) {
            h = t1 - t;
            last = true;
        }
        if (h < 1e-14 * std::max(1.0, std::abs(t)))
            throw DivergenceError("dopri5: step size underflow at t = " + std::to_string(t),
                                  std::abs(y), static_cast<int>(st.accepted));

        const cplx k2 = f(t + c2 * h, y + h * (a21 * k1));
        const cplx k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
        const cplx k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const cplx k5 = f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const double t_end = last ? t1 : t + h;
        const cplx k6 = f(t_end, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const cplx y1 = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        const cplx k7 = f(t_end, y1);
        st.evaluations += 6;

        const cplx err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = opt.atol + opt.rtol * std::max(std::abs(y), std::abs(y1));
        const double ratio = std::abs(err) / scale;
        if (!finite(y1) || !std::isfinite(ratio))
            throw DivergenceError("dopri5: non-finite state", std::abs(y), static_cast<int>(st.accepted));

        if (ratio <= 1.0) {
            const cplx ydiff = y1 - y;
            const cplx bspl = h * k1 - ydiff;
            const cplx r4 = ydiff - h * k7 - bspl;
            const cplx r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (next < outputs.size() && outputs[next] <= t_end) {
                const double th = (outputs[next] - t) / h;
                const double th1 = 1.0 - th;
                out.push_back(y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5))));
                ++next;
            }
            t = t_end;
            y = y1;
            k1 = k7;
            ++st.accepted;
        } else {
            ++st.rejected;
        }
        const double fac = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
    }
    while (next < outputs.size()) {
        out.push_back(y);
        ++next;
    }
    if (stats) *stats = st;
    return out;
}

}  // namespace slowlight
