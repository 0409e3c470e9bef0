#include <gtest/gtest.h>

#include <limits>

#include "psido/functionals.hpp"

using namespace psido;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

AmplitudeSpec gaussian_amp(double sw, double sz, double sx, double cx = 0.0) {
    return make_amplitude(1, {AmplitudeTerm{1.0, gaussian_field(1, {}, sw), gaussian_field(1, {}, sz), gaussian_field(1, {cx, 0}, sx)}},
                          "gauss");
}

}  // namespace

TEST(LatticeNorm, UnitCubeIndicator) {
    auto h = [](const double* x) { return (x[0] >= -0.5 && x[0] < 0.5) ? 1.0 : 0.0; };
    for (double delta : {0.5, 1.0, 3.0, kInf}) {
        LatticeNormParams p;
        p.r = 2.0;
        p.delta = delta;
        EXPECT_NEAR(lattice_qnorm(h, 1, p).value, 1.0, 1e-12);
    }
}

TEST(LatticeNorm, ConstantSup) {
    LatticeNormParams p;
    p.r = 2.0;
    p.delta = kInf;
    EXPECT_NEAR(lattice_qnorm([](const double*) { return 1.0; }, 1, p).value, 1.0, 1e-12);
    EXPECT_NEAR(lattice_qnorm([](const double*) { return 1.0; }, 2, p).value, 1.0, 1e-12);
}

TEST(LatticeNorm, GaussianDenseOracle) {
    LatticeNormParams p;
    p.r = 2.0;
    p.delta = 1.0;
    p.cube_points = 512;
    const double v = lattice_qnorm([](const double* x) { return std::exp(-x[0] * x[0]); }, 1, p).value;
    // sum over cubes of local L^2 masses, midpoint rule at ten times the resolution
    double oracle = 0.0;
    for (int n = -8; n <= 8; ++n) {
        const int N = 5120;
        double s = 0.0;
        for (int k = 0; k < N; ++k) {
            const double x = n - 0.5 + (k + 0.5) / N;
            s += std::exp(-2 * x * x) / N;
        }
        oracle += std::sqrt(s);
    }
    EXPECT_NEAR(v, oracle, 1e-6);
}

TEST(LatticeNorm, Validation) {
    LatticeNormParams p;
    p.r = -1;
    EXPECT_THROW(lattice_qnorm([](const double*) { return 1.0; }, 1, p), InvalidArgument);
    p.r = 2;
    p.truncation_radius = 0.5;
    EXPECT_THROW(lattice_qnorm([](const double*) { return 1.0; }, 1, p), InvalidArgument);
}

TEST(BoundP, ZeroAndOrderZero) {
    const auto P0 = bound_P(zero_amplitude(1), t_to_matrix(0.0), 1, 1);
    const double x[3] = {0.1, 0.2, 0.3};
    EXPECT_EQ(P0.eval(x), 0.0);
    const auto p = gaussian_amp(1.0, 1.5, 0.7);
    const auto P = bound_P(p, t_to_matrix(0.0), 0, 0);
    EXPECT_NEAR(P.eval(x), std::abs(p.eval({0.1, 0}, {0.2, 0}, {0.3, 0})), 1e-15);
}

TEST(BoundP, ClosedFormDerivatives) {
    // p = e^{-w^2} e^{-z^2} e^{-xi^2}; at (0, 2, 0): d_xi p = 0, d_xi^2 p = -2 p.
    const auto p = gaussian_amp(1.0, 1.0, 1.0);
    const auto P = bound_P(p, t_to_matrix(0.0), 0, 2);
    const double x[3] = {0.0, 2.0, 0.0};
    const double v = std::exp(-4.0);
    EXPECT_NEAR(P.eval(x), (v + 0.0 + 2 * v) / (1 + 4), 1e-14);
    // off-centre xi = 0.5: |p| (1 + 2 xi + |4 xi^2 - 2|)
    const double y[3] = {0.0, 2.0, 0.5};
    const double u = std::exp(-4.25);
    EXPECT_NEAR(P.eval(y), u * (1 + 1.0 + 1.0) / 5, 1e-14);
}

TEST(BoundQ, ZeroAndSupport) {
    const auto Q0 = bound_Q(zero_amplitude(1), t_to_matrix(0.0), 1, 1, QuadratureOptions{16, Ball{{0, 0}, 2}});
    const double xi[1] = {0.3};
    EXPECT_EQ(Q0.eval(xi), 0.0);
    const auto p = std::get<AmplitudeSpec>(builtin_family("gaussian_bump", {{"amplitude", 1}, {"rho", 1}}));
    const auto Q = bound_Q(p, t_to_matrix(0.0), 1, 1);
    const double out[1] = {1.2};
    EXPECT_EQ(Q.eval(out), 0.0);
    EXPECT_GT(Q.eval(xi), 0.0);
}

TEST(BoundQ, SeparableProductOracle) {
    const auto p = gaussian_amp(0.8, 1.3, 0.6, 0.2);
    const auto Q = bound_Q(p, t_to_matrix(0.0), 0, 0, QuadratureOptions{32, std::nullopt});
    auto f = [](double w) { return std::exp(-w * w / 0.64); };
    auto g = [](double z) { return std::exp(-z * z / 1.69); };
    double If = 0.0, Ig = 0.0;
    const int N = 20000;
    for (int k = 0; k < N; ++k) {
        const double s = -12.0 + 24.0 * (k + 0.5) / N;
        If += f(s) * 24.0 / N;
        Ig += g(s) * 24.0 / N;
    }
    for (double xi : {-0.4, 0.2, 0.9}) {
        const double oracle = std::exp(-(xi - 0.2) * (xi - 0.2) / 0.36) * If * Ig;
        EXPECT_NEAR(Q.eval(&xi), oracle, 1e-6 * oracle);
    }
}

TEST(BoundF, Basics) {
    const double x[2] = {0.3, -0.2};
    EXPECT_EQ(bound_F(zero_symbol(1), 1, 1, FVariant::full).eval(x), 0.0);
    const auto a = make_symbol(1, {SymbolTerm{1.0, gaussian_field(1, {}, 1.0), gaussian_field(1, {}, 1.0)}}, "g");
    const double v = std::abs(a.eval({0.3, 0}, {-0.2, 0}));
    EXPECT_NEAR(bound_F(a, 0, 0, FVariant::circ).eval(x), v, 1e-15);
    EXPECT_NEAR(bound_F(a, 0, 0, FVariant::full).eval(x), v, 1e-15);
    const double o[2] = {0.0, 0.0};
    EXPECT_NEAR(bound_F(a, 1, 1, FVariant::circ).eval(o), 0.0, 1e-15);
    EXPECT_NEAR(bound_F(a, 1, 1, FVariant::full).eval(o), 1.0, 1e-15);
}

TEST(AmplitudeFourier, GaussianSelfTransform) {
    // e^{-w^2/2} is e^{-(w/s)^2} with s = sqrt 2
    const double s = std::sqrt(2.0);
    const auto p = make_amplitude(
        1, {AmplitudeTerm{1.0, gaussian_field(1, {}, s), gaussian_field(1, {}, s), gaussian_field(1, {0.3, 0}, 0.9)}}, "g");
    const auto F = amplitude_fourier(p);
    for (double eta : {0.0, 0.7, -1.5})
        for (double mu : {0.0, 1.1})
            for (double xi : {0.3, -0.4}) {
                const cplx v = F.eval({eta, 0}, {mu, 0}, {xi, 0});
                const double h = std::exp(-(xi - 0.3) * (xi - 0.3) / 0.81);
                EXPECT_NEAR(std::abs(v - std::exp(-eta * eta / 2 - mu * mu / 2) * h), 0.0, 1e-8);
            }
}

TEST(AmplitudeFourier, ZeroFrequencyAndZero) {
    const auto p = gaussian_amp(0.9, 1.4, 1.0);
    const auto F = amplitude_fourier(p);
    // int e^{-(w/a)^2} = a sqrt(pi)
    const double mass = 0.9 * std::sqrt(kPi) * 1.4 * std::sqrt(kPi);
    EXPECT_NEAR(F.eval({0, 0}, {0, 0}, {0.5, 0}).real(), mass * std::exp(-0.25) / (2 * kPi), 1e-10);
    const auto Z = amplitude_fourier(zero_amplitude(1), FourierOptions{32, Ball{{0, 0}, 2}});
    EXPECT_EQ(std::abs(Z.eval({0.5, 0}, {0, 0}, {0, 0})), 0.0);
}
