#include "slowlight/control_field.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "slowlight/error.hpp"

namespace slowlight {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(cplx v, const char* what) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw ValidationError(std::string(what) + " must be finite");
}

void require_rate(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw ValidationError("switch-off rate alpha must be positive and finite");
}

// Segment index of tau in a sorted table, or -1 / n-1 outside.
std::ptrdiff_t locate(const std::vector<double>& t, double tau) {
    auto it = std::upper_bound(t.begin(), t.end(), tau);
    return std::distance(t.begin(), it) - 1;
}

cplx sampled_value(const field::Sampled& s, double tau) {
    if (tau < s.tau.front()) return s.left;
    if (tau > s.tau.back()) return s.right;
    auto j = locate(s.tau, tau);
    if (j >= static_cast<std::ptrdiff_t>(s.tau.size()) - 1) return s.values.back();
    const double u = (tau - s.tau[j]) / (s.tau[j + 1] - s.tau[j]);
    return (1.0 - u) * s.values[j] + u * s.values[j + 1];
}

cplx sampled_slope(const field::Sampled& s, double tau, Side side) {
    const auto n = static_cast<std::ptrdiff_t>(s.tau.size());
    auto j = locate(s.tau, tau);
    // at a node the left-sided slope belongs to the previous interval
    if (side == Side::Left && j >= 0 && j < n && s.tau[j] == tau) --j;
    if (j < 0 || j >= n - 1) return 0.0;
    return (s.values[j + 1] - s.values[j]) / (s.tau[j + 1] - s.tau[j]);
}

}  // namespace

ControlField ControlField::constant(cplx omega0) {
    require_finite(omega0, "omega0");
    return ControlField(field::Constant{omega0});
}

ControlField ControlField::instant_off(cplx omega0, double tau_off) {
    require_finite(omega0, "omega0");
    if (!std::isfinite(tau_off)) throw ValidationError("tau_off must be finite");
    return ControlField(field::InstantOff{omega0, tau_off});
}

ControlField ControlField::exponential_off(cplx omega0, double alpha) {
    require_finite(omega0, "omega0");
    require_rate(alpha);
    return ControlField(field::ExponentialOff{omega0, alpha});
}

ControlField ControlField::tanh_ramp(cplx omega0, double alpha, double tau_off) {
    require_finite(omega0, "omega0");
    require_rate(alpha);
    if (!std::isfinite(tau_off)) throw ValidationError("tau_off must be finite");
    return ControlField(field::TanhRamp{omega0, alpha, tau_off});
}

ControlField ControlField::sampled(std::vector<double> tau, std::vector<cplx> values, cplx left,
                                   cplx right) {
    if (tau.size() != values.size()) throw ValidationError("sampled field: column length mismatch");
    if (tau.size() < 2) throw ValidationError("sampled field: need at least two samples");
    for (std::size_t j = 0; j < tau.size(); ++j) {
        if (!std::isfinite(tau[j])) throw ValidationError("sampled field: non-finite tau");
        require_finite(values[j], "sampled field value");
        if (j > 0 && !(tau[j] > tau[j - 1]))
            throw ValidationError("sampled field: tau must be strictly increasing");
    }
    require_finite(left, "left asymptote");
    require_finite(right, "right asymptote");
    const double tol = 1e-8 * std::max(std::abs(left), std::numeric_limits<double>::min());
    if (std::abs(values.front() - left) > tol)
        throw ValidationError("sampled field: first sample differs from the left asymptote");
    if (std::abs(values.back() - right) > tol)
        throw ValidationError("sampled field: last sample differs from the right asymptote");
    return ControlField(field::Sampled{std::move(tau), std::move(values), left, right});
}

cplx ControlField::operator()(double tau) const {
    return std::visit(
        overloaded{
            [](const field::Constant& f) { return f.omega0; },
            [tau](const field::InstantOff& f) {
                if (tau < f.tau_off) return f.omega0;
                if (tau > f.tau_off) return cplx{};
                return 0.5 * f.omega0;
            },
            [tau](const field::ExponentialOff& f) {
                return tau <= 0.0 ? f.omega0 : f.omega0 * std::exp(-f.alpha * tau);
            },
            [tau](const field::TanhRamp& f) {
                return f.omega0 * (0.5 * (1.0 - std::tanh(f.alpha * (tau - f.tau_off))));
            },
            [tau](const field::Sampled& f) { return sampled_value(f, tau); },
        },
        v_);
}

cplx ControlField::limit(double tau, Side side) const {
    if (const auto* f = std::get_if<field::InstantOff>(&v_); f && tau == f->tau_off)
        return side == Side::Left ? f->omega0 : cplx{};
    return (*this)(tau);
}

cplx ControlField::derivative(double tau, Side side) const {
    return std::visit(
        overloaded{
            [](const field::Constant&) { return cplx{}; },
            [](const field::InstantOff&) { return cplx{}; },
            [tau, side](const field::ExponentialOff& f) {
                if (tau < 0.0 || (tau == 0.0 && side == Side::Left)) return cplx{};
                return -f.alpha * f.omega0 * std::exp(-f.alpha * tau);
            },
            [tau](const field::TanhRamp& f) {
                const double s = 1.0 / std::cosh(f.alpha * (tau - f.tau_off));
                return f.omega0 * (-0.5 * f.alpha * s * s);
            },
            [tau, side](const field::Sampled& f) { return sampled_slope(f, tau, side); },
        },
        v_);
}

cplx ControlField::omega0() const {
    return std::visit(overloaded{[](const field::Sampled& f) { return f.left; },
                                 [](const auto& f) { return f.omega0; }},
                      v_);
}

cplx ControlField::right_asymptote() const {
    return std::visit(overloaded{[](const field::Constant& f) { return f.omega0; },
                                 [](const field::Sampled& f) { return f.right; },
                                 [](const auto&) { return cplx{}; }},
                      v_);
}

bool ControlField::is_stopping() const { return right_asymptote() == cplx{}; }

std::vector<double> ControlField::jumps() const {
    if (const auto* f = std::get_if<field::InstantOff>(&v_)) return {f->tau_off};
    return {};
}

std::vector<double> ControlField::kinks() const {
    if (std::holds_alternative<field::ExponentialOff>(v_)) return {0.0};
    return {};
}

std::vector<double> ControlField::breakpoints() const {
    auto b = jumps();
    auto k = kinks();
    b.insert(b.end(), k.begin(), k.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

double ControlField::time_scale() const {
    return std::visit(
        overloaded{
            [](const field::ExponentialOff& f) { return 1.0 / f.alpha; },
            [](const field::TanhRamp& f) { return 1.0 / f.alpha; },
            [](const field::Sampled& f) {
                double h = kInf;
                for (std::size_t j = 1; j < f.tau.size(); ++j) h = std::min(h, f.tau[j] - f.tau[j - 1]);
                return h;
            },
            [](const auto&) { return kInf; },
        },
        v_);
}

double ControlField::switch_begin() const {
    return std::visit(overloaded{
                          [](const field::Constant&) { return 0.0; },
                          [](const field::InstantOff& f) { return f.tau_off; },
                          [](const field::ExponentialOff&) { return 0.0; },
                          // 1 - tanh(x) ~ 2 - 2e^{2x}: relative deviation below 1e-14 for x < -16.5
                          [](const field::TanhRamp& f) { return f.tau_off - 16.5 / f.alpha; },
                          [](const field::Sampled& f) { return f.tau.front(); },
                      },
                      v_);
}

double ControlField::switch_end() const {
    return std::visit(overloaded{
                          [](const field::Constant&) { return 0.0; },
                          [](const field::InstantOff& f) { return f.tau_off; },
                          [](const field::ExponentialOff& f) { return 32.5 / f.alpha; },
                          [](const field::TanhRamp& f) { return f.tau_off + 16.5 / f.alpha; },
                          [](const field::Sampled& f) { return f.tau.back(); },
                      },
                      v_);
}

std::string ControlField::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const field::Constant& f) { os << "constant(omega0=" << f.omega0 << ")"; },
                   [&](const field::InstantOff& f) {
                       os << "instant_off(omega0=" << f.omega0 << ", tau_off=" << f.tau_off << ")";
                   },
                   [&](const field::ExponentialOff& f) {
                       os << "exponential_off(omega0=" << f.omega0 << ", alpha=" << f.alpha << ")";
                   },
                   [&](const field::TanhRamp& f) {
                       os << "tanh_ramp(omega0=" << f.omega0 << ", alpha=" << f.alpha
                          << ", tau_off=" << f.tau_off << ")";
                   },
                   [&](const field::Sampled& f) { os << "sampled(n=" << f.tau.size() << ")"; },
               },
               v_);
    return os.str();
}

ControlField load_sampled_field(const std::filesystem::path& path, cplx left, cplx right) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sampled field file " + path.string());
    std::vector<double> tau;
    std::vector<cplx> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, re, im;
        if (!(ls >> t)) continue;
        if (!(ls >> re >> im))
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected three columns (tau, Re, Im)");
        tau.push_back(t);
        values.emplace_back(re, im);
    }
    return ControlField::sampled(std::move(tau), std::move(values), left, right);
}

ControlField load_sampled_field(const std::filesystem::path& path) {
    // read once to learn the left asymptote
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sampled field file " + path.string());
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        double t, re, im;
        if (ls >> t >> re >> im) return load_sampled_field(path, cplx(re, im), cplx{});
    }
    throw ValidationError("sampled field file " + path.string() + " has no data rows");
}

}  // namespace slowlight
