#include <gtest/gtest.h>

#include <cmath>

#include "slowlight/dopri5.hpp"
#include "slowlight/error.hpp"
#include "slowlight/tau_grid.hpp"

using namespace slowlight;

namespace {

constexpr cplx I{0.0, 1.0};

PiecewiseSamples sample(const TauGrid& g, const Segmentation& seg, cplx (*f)(double)) {
    return sample_piecewise(seg, [&](std::size_t j, bool) { return f(g.tau(j)); });
}

}  // namespace

TEST(TauGrid, ZeroIsANode) {
    const TauGrid g(-2.0, 3.0, 51);
    EXPECT_EQ(g.tau(g.zero_index()), 0.0);
    EXPECT_DOUBLE_EQ(g.h(), 0.1);
    EXPECT_TRUE(g.node_index(0.7).has_value());
    EXPECT_FALSE(g.node_index(0.75).has_value());
    EXPECT_THROW(TauGrid(-1.0, 1.0, 4), GridError);
    EXPECT_THROW(TauGrid(1.0, 2.0, 11), GridError);
    EXPECT_THROW(TauGrid(-1.0, 1.0, 2), GridError);
}

TEST(TauGrid, WithSpacingRoundsOutward) {
    const auto g = TauGrid::with_spacing(-1.05, 2.01, 0.1);
    EXPECT_LE(g.tau_min(), -1.05);
    EXPECT_GE(g.tau_max(), 2.01);
    EXPECT_LE(g.h(), 0.1);
}

TEST(Segmentation, RequiresBreakpointsOnNodes) {
    const TauGrid g(-1.0, 1.0, 21);
    const double on[] = {0.5};
    const double off[] = {0.55};
    EXPECT_EQ(Segmentation::make(g, on).count(), 3u);
    EXPECT_THROW(Segmentation::make(g, off), GridError);
}

TEST(ProductRule, CumulativeIntegralIsFourthOrder) {
    auto f = [](double t) { return cplx(std::cos(3.0 * t), std::sin(t)); };
    auto exact = [](double t) { return cplx((std::sin(3.0 * t) - std::sin(-6.0)) / 3.0, -std::cos(t) + std::cos(-2.0)); };
    double prev = 0.0;
    for (std::size_t n : {41u, 81u, 161u, 321u}) {
        const TauGrid g(-2.0, 2.0, n);
        const auto seg = Segmentation::make(g, {});
        const auto samples = sample_piecewise(seg, [&](std::size_t j, bool) { return f(g.tau(j)); });
        const auto y = cumulative_integral(g, samples);
        double err = 0.0;
        for (std::size_t j = 0; j < n; ++j) err = std::max(err, std::abs(y[j] - exact(g.tau(j))));
        if (prev > 0.0) EXPECT_GT(std::log2(prev / err), 3.7);
        prev = err;
    }
    EXPECT_LT(prev, 1e-7);
}

TEST(ProductRule, CausalConvolutionOfCubicIsExact) {
    // y(tau) = int_{-1}^{tau} e^{-ik(tau-s)} s^3 ds against a reference from fine Simpson sums
    const cplx k{0.3, -0.9};
    const TauGrid g(-1.0, 1.0, 41);
    const auto seg = Segmentation::make(g, {});
    const auto samples = sample_piecewise(seg, [&](std::size_t j, bool) { return cplx(std::pow(g.tau(j), 3)); });
    const ProductRule rule(I * k * g.h(), g.h());
    const auto y = rule.causal(samples, 0.0);
    const auto reference = [&](double tau) {
        const int m = 20000;
        const double hs = (tau + 1.0) / m;
        cplx sum = 0.0;
        for (int i = 0; i <= m; ++i) {
            const double s = -1.0 + i * hs;
            const double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            sum += wgt * std::exp(-I * k * (tau - s)) * std::pow(s, 3);
        }
        return sum * hs / 3.0;
    };
    for (std::size_t j : {5u, 20u, 40u}) EXPECT_NEAR(std::abs(y[j] - reference(g.tau(j))), 0.0, 1e-12);
}

TEST(ProductRule, RejectsCoarseSteps) { EXPECT_THROW(ProductRule(cplx(0.0, 1.5), 1.0), GridError); }

TEST(ProductRule, AnticausalMatchesReversedCausal) {
    const cplx k{-0.2, -1.3};
    const TauGrid g(-2.0, 2.0, 81);
    const auto seg = Segmentation::make(g, {});
    const auto f = sample(g, seg, [](double t) { return cplx(std::exp(-t * t), t); });
    const ProductRule rule(I * k * g.h(), g.h());
    const auto y = rule.anticausal(f, 0.0);
    // direct check at tau = -1: int_{-1}^{2} e^{-ik(s+1)} f(s) ds by fine Simpson
    const int m = 30000;
    const double hs = 3.0 / m;
    cplx sum = 0.0;
    for (int i = 0; i <= m; ++i) {
        const double s = -1.0 + i * hs;
        const double wgt = (i == 0 || i == m) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        sum += wgt * std::exp(-I * k * (s + 1.0)) * cplx(std::exp(-s * s), s);
    }
    EXPECT_NEAR(std::abs(y[*g.node_index(-1.0)] - sum * hs / 3.0), 0.0, 1e-7);
}

TEST(Dopri5, ExponentialDecayToTightTolerance) {
    const cplx a{-0.5, 2.0};
    const double outs[] = {0.0, 1.0, 2.5, 4.0};
    Dopri5Stats stats;
    const auto y = dopri5([&](double, cplx v) { return a * v; }, 0.0, 1.0, 4.0, outs, {}, &stats);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(y[i] - std::exp(a * outs[i])), 0.0, 1e-10);
    EXPECT_GT(stats.accepted, 0);
}

TEST(Dopri5, BlowUpIsReportedAsDivergence) {
    const double outs[] = {2.0};
    EXPECT_THROW(dopri5([](double, cplx v) { return v * v; }, 0.0, 1.0, 2.0, outs, {}), DivergenceError);
}
