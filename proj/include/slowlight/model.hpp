#pragma once

#include <array>
#include <complex>

namespace slowlight {

using cplx = std::complex<double>;
using Matrix3 = std::array<std::array<cplx, 3>, 3>;

/// Scaled physical constants of the medium. Units are dimensionless with c = 1 by default.
struct PhysicalParams {
    double nu0 = 1.0;    ///< coupling constant
    double delta = 0.0;  ///< detuning of the carrier from resonance
    double c = 1.0;      ///< speed of light
    double x0 = 0.0;     ///< lab coordinate of the medium entry point

    /// Throws ValidationError unless nu0 > 0, c > 0 and everything is finite.
    void validate() const;

    /// (nu0/2) Im(1/(lambda - delta)): slope of the soliton phase in zeta. Positive for Im(lambda) < 0.
    double phase_slope_zeta(cplx lambda) const;
    /// -(nu0/2) Re(1/(lambda - delta)): slope of the carrier phase in zeta.
    double carrier_slope_zeta(cplx lambda) const;
};

/// Light-cone coordinates: zeta = (x - x0)/c, tau = t - (x - x0)/c.
struct ComovingPoint {
    double zeta = 0.0;
    double tau = 0.0;
};

struct LabPoint {
    double x = 0.0;
    double t = 0.0;
};

LabPoint to_lab_frame(ComovingPoint p, const PhysicalParams& params);
ComovingPoint from_lab_frame(LabPoint p, const PhysicalParams& params);

/// Spectral data of a single soliton on a background of asymptotic amplitude Omega0.
///
/// k(lambda) = (lambda + sqrt(lambda^2 + |Omega0|^2)) / 2 on the branch that tends to
/// lambda at infinity, with the cut on the segment between -i|Omega0| and +i|Omega0|.
class SpectralPoint {
public:
    /// Throws InvalidSolitonError if Im(lambda) >= 0 and DegenerateSpectrumError if
    /// lambda lies on the branch segment.
    static SpectralPoint derive(cplx lambda, cplx omega0);

    cplx lambda() const noexcept { return lambda_; }
    cplx omega0() const noexcept { return omega0_; }
    cplx k() const noexcept { return k_; }
    /// w(-inf, lambda) = Omega0 / (2k)
    cplx w0() const noexcept { return w0_; }
    /// z0 = i |Omega0|^2 / (4k)
    cplx z0() const noexcept { return z0_; }

    /// |4k^2 - 4k lambda - |Omega0|^2|
    double quadratic_defect() const;

private:
    SpectralPoint() = default;

    cplx lambda_;
    cplx omega0_;
    cplx k_;
    cplx w0_;
    cplx z0_;
};

/// Pure three-level state. rho is always rebuilt from psi.
struct AtomicState {
    std::array<cplx, 3> psi{};

    double norm() const;
    Matrix3 rho() const;
};

/// Frobenius norm of rho^2 - rho.
double purity_defect(const Matrix3& rho);
double hermiticity_defect(const Matrix3& rho);
cplx trace(const Matrix3& m);

Matrix3 operator*(const Matrix3& a, const Matrix3& b);
Matrix3 operator-(const Matrix3& a, const Matrix3& b);
Matrix3 operator+(const Matrix3& a, const Matrix3& b);
Matrix3 operator*(cplx s, const Matrix3& a);
Matrix3 commutator(const Matrix3& a, const Matrix3& b);
double max_abs(const Matrix3& m);

}  // namespace slowlight
