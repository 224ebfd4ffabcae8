#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "slowlight/dynamics.hpp"
#include "slowlight/error.hpp"
#include "slowlight/soliton.hpp"

using namespace slowlight;
using namespace slowlight::testing;

namespace {

struct Standard {
    PhysicalParams p = standard_params();
    SpectralPoint s = SpectralPoint::derive(kLambda, kOmega0);
};

}  // namespace

TEST(Soliton, ConstantBackgroundPhases) {
    const Standard st;
    for (double zeta : {-3.0, 0.0, 2.5})
        for (double tau : {-4.0, 0.0, 7.0}) {
            const auto ph = phases(zeta, constant_background(tau, st.s), st.s, st.p);
            EXPECT_NEAR(ph.phi, zeta - 0.1 * tau, 1e-14);
            EXPECT_NEAR(ph.theta, 0.0, 1e-14);
        }
}

TEST(Soliton, PhaseAtOriginIsRealPartOfZ) {
    const Standard st;
    const auto f = ControlField::exponential_off(kOmega0, 1.0);
    const auto bg = solve_w_picard(f, st.s, default_grid(f, st.s));
    EXPECT_NEAR(phases(0.0, 0.0, bg, st.p).phi, bg.z()[bg.grid().zero_index()].real(), 1e-15);
    EXPECT_THROW(phases(0.0, bg.grid().tau_max() + 1.0, bg, st.p), OutOfRangeError);
}

TEST(Soliton, PeakAmplitudeOnConstantBackground) {
    const Standard st;
    const auto fp = fields(0.0, constant_background(0.0, st.s), st.s, st.p);
    EXPECT_NEAR(std::abs(fp.omega_a), 2.0 / 3.0 / std::sqrt(10.0 / 9.0), 1e-14);
    EXPECT_NEAR(std::abs(fp.omega_a), 0.6325, 1e-4);
}

TEST(Soliton, FieldAsymptotes) {
    const Standard st;
    const auto b = constant_background(0.0, st.s);
    const auto ahead = fields(-60.0, b, st.s, st.p);
    EXPECT_LT(std::abs(ahead.omega_a), 1e-20);
    EXPECT_NEAR(std::abs(ahead.omega_b + cplx(kOmega0)), 0.0, 1e-14);
    const auto behind = fields(60.0, b, st.s, st.p);
    EXPECT_NEAR(std::abs(behind.omega_b - cplx(kOmega0)), 0.0, 1e-14);
}

TEST(Soliton, AtomicStateAtPeakAndFarAway) {
    const Standard st;
    const auto b = constant_background(0.0, st.s);
    const auto peak = atomic_state(0.0, b, st.s, st.p);
    EXPECT_NEAR(std::abs(peak.psi[0]), 0.0, 1e-15);
    EXPECT_NEAR(std::norm(peak.psi[1]) + std::norm(peak.psi[2]), 1.0, 1e-14);
    for (double zeta : {-40.0, 40.0}) {
        const auto far = atomic_state(zeta, b, st.s, st.p);
        EXPECT_NEAR(std::abs(far.psi[0]), 1.0, 1e-14);
        EXPECT_GE(far.psi[0].real(), 0.0);
        EXPECT_NEAR(far.psi[0].imag(), 0.0, 0.0);
    }
}

TEST(Soliton, NormalizationAndPurityRandomized) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const cplx lambda{2.0 * u(rng), -0.2 - 2.0 * std::abs(u(rng))};
        const PhysicalParams p{1.0 + std::abs(u(rng)), u(rng), 1.0, 0.0};
        const auto s = SpectralPoint::derive(lambda, 0.6);
        const LocalBackground b{std::polar(std::abs(u(rng)), 3.0 * u(rng)), cplx(u(rng), u(rng)), 0.6 * std::abs(u(rng)),
                                std::polar(0.3, 1.0)};
        const auto st = atomic_state(10.0 * u(rng), b, s, p);
        EXPECT_NEAR(st.norm(), 1.0, 1e-12);
        EXPECT_LE(purity_defect(st.rho()), 1e-10);
    }
}

TEST(Soliton, RegularizedAmplitudeAtVanishingW) {
    const Standard st;
    const LocalBackground b{0.0, cplx(0.02, 0.0), 0.0, st.s.w0()};
    const auto a = atomic_state(0.3, b, st.s, st.p);
    EXPECT_TRUE(std::isfinite(std::abs(a.psi[1])));
    EXPECT_NEAR(a.norm(), 1.0, 1e-14);
    EXPECT_EQ(a.psi[2], cplx(0.0));
}

TEST(Soliton, OverflowSafeHyperbolics) {
    EXPECT_EQ(detail::sech(800.0), 0.0);
    EXPECT_NEAR(detail::sech(0.0), 1.0, 0.0);
    EXPECT_NEAR(detail::exp_sech(800.0), 2.0, 0.0);
    EXPECT_NEAR(detail::exp_sech(-800.0), 0.0, 0.0);
    EXPECT_NEAR(detail::sech(3.0), 1.0 / std::cosh(3.0), 1e-16);
}

TEST(Soliton, ApproximateReduction) {
    const double eps0 = 10.0;
    const auto s = SpectralPoint::derive({0.0, -eps0}, kOmega0);
    const double exact = -kOmega0 * kOmega0 / (2.0 * (eps0 + std::sqrt(eps0 * eps0 - kOmega0 * kOmega0)));
    EXPECT_NEAR(s.z0().real(), exact, 1e-15);
    EXPECT_LT(std::abs(-kOmega0 * kOmega0 / (4.0 * eps0) - exact) / std::abs(exact), 1e-3);
    const auto p = standard_params();
    for (double zeta : {-1.0, 0.0, 0.5}) {
        const auto ap = approx_constant_soliton(zeta, 0.3, s, p, kOmega0);
        EXPECT_NEAR(std::norm(ap.omega_a) + std::norm(ap.omega_b), kOmega0 * kOmega0, 1e-14);
    }
}

TEST(Soliton, IntensityConservationOnConstantBackgroundIsReported) {
    // exact for the reduced form; for the full solution only a small deviation is expected
    const Standard st;
    double worst = 0.0;
    for (int i = -50; i <= 50; ++i) {
        const auto fp = fields(0.1 * i, constant_background(0.0, st.s), st.s, st.p);
        worst = std::max(worst, std::abs(std::norm(fp.omega_a) + std::norm(fp.omega_b) - kOmega0 * kOmega0));
    }
    RecordProperty("intensity_deviation", std::to_string(worst));
    EXPECT_TRUE(std::isfinite(worst));
}

TEST(MemoryBit, ProfileAndWidth) {
    const Standard st;
    const auto f = ControlField::instant_off(kOmega0);
    const auto bg = solve_w_picard(f, st.s, default_grid(f, st.s));
    std::vector<double> zeta;
    for (int i = -400; i <= 400; ++i) zeta.push_back(0.05 * i);
    const auto states = memory_bit_profile(zeta, bg, st.p);
    double tail = 0.0;
    for (std::size_t i = 0; i < zeta.size(); ++i) {
        EXPECT_LE(std::abs(states[i].psi[2]), 1e-6);
        if (std::abs(zeta[i]) > 19.0) tail = std::max(tail, std::abs(states[i].psi[1]));
    }
    EXPECT_LE(tail, 1e-7);
    const auto m = measure_bit_width(bg, st.p, zeta);
    EXPECT_NEAR(m.width, 2.0 * std::log(2.0 + std::sqrt(3.0)), 1e-6 * m.width);
    EXPECT_NEAR(m.width, 2.63392, 1e-5);
}

TEST(MemoryBit, RequiresStoppingField) {
    const Standard st;
    const auto f = ControlField::constant(kOmega0);
    const auto bg = solve_w_picard(f, st.s, default_grid(f, st.s));
    const double zeta[] = {0.0};
    EXPECT_THROW(memory_bit_profile(zeta, bg, st.p), ScenarioError);
}
