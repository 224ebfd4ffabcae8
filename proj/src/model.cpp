#include "slowlight/model.hpp"

#include <cmath>
#include <string>

#include "slowlight/error.hpp"

namespace slowlight {

void PhysicalParams::validate() const {
    if (!std::isfinite(nu0) || !std::isfinite(delta) || !std::isfinite(c) || !std::isfinite(x0))
        throw ValidationError("physical parameters must be finite");
    if (nu0 <= 0.0) throw ValidationError("nu0 must be positive, got " + std::to_string(nu0));
    if (c <= 0.0) throw ValidationError("c must be positive, got " + std::to_string(c));
}

double PhysicalParams::phase_slope_zeta(cplx lambda) const {
    return 0.5 * nu0 * std::imag(1.0 / (lambda - delta));
}

double PhysicalParams::carrier_slope_zeta(cplx lambda) const {
    return -0.5 * nu0 * std::real(1.0 / (lambda - delta));
}

LabPoint to_lab_frame(ComovingPoint p, const PhysicalParams& params) {
    return {params.x0 + params.c * p.zeta, p.tau + p.zeta};
}

ComovingPoint from_lab_frame(LabPoint p, const PhysicalParams& params) {
    const double zeta = (p.x - params.x0) / params.c;
    return {zeta, p.t - zeta};
}

SpectralPoint SpectralPoint::derive(cplx lambda, cplx omega0) {
    if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) ||
        !std::isfinite(omega0.real()) || !std::isfinite(omega0.imag()))
        throw ValidationError("spectral parameter and background amplitude must be finite");
    if (lambda.imag() >= 0.0)
        throw InvalidSolitonError("soliton requires Im(lambda) < 0, got " + std::to_string(lambda.imag()));

    const double amp2 = std::norm(omega0);
    const double amp = std::sqrt(amp2);
    const double scale = std::max(1.0, std::abs(lambda));
    if (std::abs(lambda.real()) <= 1e-14 * scale && std::abs(lambda.imag()) <= amp * (1.0 + 1e-14))
        throw DegenerateSpectrumError("lambda lies on the branch segment [-i|Omega0|, +i|Omega0|]");

    SpectralPoint s;
    s.lambda_ = lambda;
    s.omega0_ = omega0;
    const cplx root = lambda * std::sqrt(1.0 + amp2 / (lambda * lambda));
    s.k_ = 0.5 * (lambda + root);
    s.w0_ = omega0 / (2.0 * s.k_);
    s.z0_ = cplx(0.0, 1.0) * amp2 / (4.0 * s.k_);
    return s;
}

double SpectralPoint::quadratic_defect() const {
    return std::abs(4.0 * k_ * k_ - 4.0 * k_ * lambda_ - std::norm(omega0_));
}

double AtomicState::norm() const {
    return std::sqrt(std::norm(psi[0]) + std::norm(psi[1]) + std::norm(psi[2]));
}

Matrix3 AtomicState::rho() const {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = psi[i] * std::conj(psi[j]);
    return r;
}

Matrix3 operator*(const Matrix3& a, const Matrix3& b) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) r[i][j] += a[i][l] * b[l][j];
    return r;
}

Matrix3 operator-(const Matrix3& a, const Matrix3& b) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] - b[i][j];
    return r;
}

Matrix3 operator+(const Matrix3& a, const Matrix3& b) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = a[i][j] + b[i][j];
    return r;
}

Matrix3 operator*(cplx s, const Matrix3& a) {
    Matrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = s * a[i][j];
    return r;
}

Matrix3 commutator(const Matrix3& a, const Matrix3& b) { return a * b - b * a; }

double max_abs(const Matrix3& m) {
    double r = 0.0;
    for (const auto& row : m)
        for (const auto& v : row) r = std::max(r, std::abs(v));
    return r;
}

double purity_defect(const Matrix3& rho) {
    const Matrix3 d = rho * rho - rho;
    double s = 0.0;
    for (const auto& row : d)
        for (const auto& v : row) s += std::norm(v);
    return std::sqrt(s);
}

double hermiticity_defect(const Matrix3& rho) {
    double r = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r = std::max(r, std::abs(rho[i][j] - std::conj(rho[j][i])));
    return r;
}

cplx trace(const Matrix3& m) { return m[0][0] + m[1][1] + m[2][2]; }

}  // namespace slowlight
