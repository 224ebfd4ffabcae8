#pragma once

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "slowlight/model.hpp"

namespace slowlight {

enum class Side { Left, Right };

namespace field {

struct Constant {
    cplx omega0;
};

/// Omega0 * Theta(tau_off - tau) with Theta(0) = 1/2.
struct InstantOff {
    cplx omega0;
    double tau_off = 0.0;
};

/// Omega0 * (Theta(-tau) + Theta(tau) exp(-alpha tau)).
struct ExponentialOff {
    cplx omega0;
    double alpha = 1.0;
};

/// Omega0 * (1 - tanh(alpha (tau - tau_off))) / 2.
struct TanhRamp {
    cplx omega0;
    double alpha = 1.0;
    double tau_off = 0.0;
};

/// Piecewise-linear interpolant of tabulated data; declared asymptotes outside the table.
struct Sampled {
    std::vector<double> tau;
    std::vector<cplx> values;
    cplx left;
    cplx right;
};

}  // namespace field

/// Envelope Omega(tau) of the controlling laser.
class ControlField {
public:
    using Variant = std::variant<field::Constant, field::InstantOff, field::ExponentialOff,
                                 field::TanhRamp, field::Sampled>;

    static ControlField constant(cplx omega0);
    static ControlField instant_off(cplx omega0, double tau_off = 0.0);
    static ControlField exponential_off(cplx omega0, double alpha);
    static ControlField tanh_ramp(cplx omega0, double alpha, double tau_off = 0.0);
    /// Throws ValidationError if the table is not strictly increasing or its end values
    /// are farther than 1e-8 |left| from the declared asymptotes.
    static ControlField sampled(std::vector<double> tau, std::vector<cplx> values, cplx left,
                                cplx right);

    /// Omega(tau); jump points take the mean of both one-sided limits.
    cplx operator()(double tau) const;
    cplx limit(double tau, Side side) const;
    /// One-sided derivative dOmega/dtau. Jumps contribute nothing.
    cplx derivative(double tau, Side side) const;

    /// Left asymptote Omega(-inf).
    cplx omega0() const;
    /// Right asymptote Omega(+inf).
    cplx right_asymptote() const;
    /// True when Omega(+inf) = 0.
    bool is_stopping() const;
    bool has_jumps() const { return !jumps().empty(); }

    std::vector<double> jumps() const;
    /// Points where Omega is continuous but its derivative jumps.
    std::vector<double> kinks() const;
    /// Sorted union of jumps and kinks.
    std::vector<double> breakpoints() const;

    /// Shortest time scale of the switching, infinity for fields without one.
    double time_scale() const;
    /// Interval outside which Omega equals its asymptotes to ~1e-14 relative.
    double switch_begin() const;
    double switch_end() const;

    std::string describe() const;
    const Variant& variant() const noexcept { return v_; }

private:
    explicit ControlField(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

inline cplx eval_field(const ControlField& f, double tau) { return f(tau); }

/// Reads a three-column text table (tau, Re Omega, Im Omega). '#' starts a comment.
/// Asymptotes default to the first value and zero.
ControlField load_sampled_field(const std::filesystem::path& path);
ControlField load_sampled_field(const std::filesystem::path& path, cplx left, cplx right);

}  // namespace slowlight
