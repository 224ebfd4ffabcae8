#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "slowlight/control_field.hpp"
#include "slowlight/error.hpp"

using namespace slowlight;

TEST(ControlField, InstantOffValuesAndStepConvention) {
    const auto f = ControlField::instant_off(0.6, 0.0);
    EXPECT_EQ(eval_field(f, -1.0), cplx(0.6));
    EXPECT_EQ(eval_field(f, 1.0), cplx(0.0));
    EXPECT_EQ(eval_field(f, 0.0), cplx(0.3));
    EXPECT_EQ(f.limit(0.0, Side::Left), cplx(0.6));
    EXPECT_EQ(f.limit(0.0, Side::Right), cplx(0.0));
    EXPECT_TRUE(f.is_stopping());
    EXPECT_TRUE(f.has_jumps());
}

TEST(ControlField, ExponentialOff) {
    const auto f = ControlField::exponential_off(0.6, 2.0);
    EXPECT_NEAR(eval_field(f, 1.0).real(), 0.6 * std::exp(-2.0), 1e-16);
    EXPECT_NEAR(eval_field(f, 1.0).real(), 0.08120, 1e-5);
    EXPECT_EQ(eval_field(f, -3.0), cplx(0.6));
    EXPECT_EQ(f.kinks(), std::vector<double>{0.0});
    EXPECT_FALSE(f.has_jumps());
    EXPECT_NEAR(f.derivative(0.0, Side::Right).real(), -1.2, 1e-15);
    EXPECT_EQ(f.derivative(0.0, Side::Left), cplx(0.0));
}

TEST(ControlField, TanhRamp) {
    const auto f = ControlField::tanh_ramp(0.6, 4.0, 1.0);
    EXPECT_NEAR(eval_field(f, 1.0).real(), 0.3, 1e-15);
    EXPECT_NEAR(eval_field(f, f.switch_begin()).real(), 0.6, 1e-13);
    EXPECT_NEAR(std::abs(eval_field(f, f.switch_end())), 0.0, 1e-14);
    EXPECT_TRUE(f.breakpoints().empty());
    // derivative against a central difference
    const double t = 1.1, h = 1e-5;
    const cplx fd = (f(t + h) - f(t - h)) / (2.0 * h);
    EXPECT_NEAR(std::abs(f.derivative(t, Side::Right) - fd), 0.0, 1e-8);
}

TEST(ControlField, ConstantIsNotStopping) {
    const auto f = ControlField::constant(0.6);
    EXPECT_FALSE(f.is_stopping());
    EXPECT_EQ(f.right_asymptote(), cplx(0.6));
}

TEST(ControlField, SampledInterpolatesAndExtrapolatesWithAsymptotes) {
    const auto f = ControlField::sampled({-1.0, 0.0, 1.0}, {0.6, 0.3, 0.0}, 0.6, 0.0);
    EXPECT_NEAR(f(0.5).real(), 0.15, 1e-15);
    EXPECT_EQ(f(-7.0), cplx(0.6));
    EXPECT_EQ(f(7.0), cplx(0.0));
    EXPECT_TRUE(f.is_stopping());
}

TEST(ControlField, SampledRejectsBadTables) {
    EXPECT_THROW(ControlField::sampled({0.0, 0.0, 1.0}, {0.6, 0.3, 0.0}, 0.6, 0.0), ValidationError);
    EXPECT_THROW(ControlField::sampled({-1.0, 0.0, 1.0}, {0.6, 0.3, 0.1}, 0.6, 0.0), ValidationError);
}

TEST(ControlField, LoadSampledFile) {
    const auto path = std::filesystem::temp_directory_path() / "slowlight_field_test.txt";
    {
        std::ofstream out(path);
        out << "# tau re im\n-1 0.6 0\n0, 0.3, 0.1\n\n1 0 0\n";
    }
    const auto f = load_sampled_field(path);
    EXPECT_EQ(f.omega0(), cplx(0.6));
    EXPECT_NEAR(std::abs(f(0.0) - cplx(0.3, 0.1)), 0.0, 1e-15);
    std::filesystem::remove(path);
    EXPECT_THROW(load_sampled_field(path), ValidationError);
}
