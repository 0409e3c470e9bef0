#include <gtest/gtest.h>

#include <random>

#include "psido/quantize.hpp"
#include "psido/schatten.hpp"
#include "psido/symbols.hpp"

using namespace psido;

namespace {

SymbolSpec plain_gaussian() {
    return make_symbol(1, {SymbolTerm{1.0, gaussian_field(1, {}, 1.0), gaussian_field(1, {}, 1.0)}}, "g");
}

}  // namespace

TEST(TMatrix, FromT) {
    const auto T0 = t_to_matrix(0.0);
    EXPECT_EQ(T0.t11(), 1.0);
    EXPECT_EQ(T0.t12(), 0.0);
    EXPECT_EQ(T0.t21(), -1.0);
    EXPECT_EQ(T0.t22(), 1.0);
    EXPECT_EQ(T0.tau(), 0.0);
    EXPECT_EQ(T0.det(), 1.0);
    const auto Th = t_to_matrix(0.5);
    EXPECT_EQ(Th.t11(), 0.5);
    EXPECT_EQ(Th.t12(), 0.5);
    const auto T1 = t_to_matrix(1.0);
    EXPECT_EQ(T1.t11(), 0.0);
    EXPECT_EQ(T1.t12(), 1.0);
    for (double t : {0.0, 0.3, 1.0}) EXPECT_TRUE(t_to_matrix(t).normalized());
}

TEST(TMatrix, Guards) {
    EXPECT_THROW(TMatrix(1, 1, 1, 1), DegenerateMatrix);
    EXPECT_THROW(TMatrix(1, 0, 0, 1, TGuards{1e-6, 0.5}), InvalidArgument);
    EXPECT_NO_THROW(TMatrix(1, 0, 0, 1));
}

TEST(RecoverXY, Examples) {
    auto [x, y] = recover_xy(t_to_matrix(0.0), {1.0, 0.0}, {2.0, 0.0});
    EXPECT_NEAR(x[0], 1.0, 1e-15);
    EXPECT_NEAR(y[0], 3.0, 1e-15);
    auto [x2, y2] = recover_xy(TMatrix(1, 0, 0, 1), {0.7, 0.0}, {-0.2, 0.0});
    EXPECT_EQ(x2[0], 0.7);
    EXPECT_EQ(y2[0], -0.2);
}

TEST(RecoverXY, RoundTrip) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 200; ++k) {
        TMatrix T(u(rng), u(rng), u(rng), u(rng), TGuards{1e-3, 1e6});
        const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
        const auto [w, z] = T.forward(x, y);
        const auto [xr, yr] = recover_xy(T, w, z);
        for (int i = 0; i < 2; ++i) {
            EXPECT_NEAR(xr[i], x[i], 1e-12 / std::min(1.0, std::abs(T.det())));
            EXPECT_NEAR(yr[i], y[i], 1e-12 / std::min(1.0, std::abs(T.det())));
        }
    }
}

TEST(SmoothnessOrders, Values) {
    auto o = smoothness_orders(1, 1.0);
    EXPECT_EQ(o.n, 2);
    EXPECT_EQ(o.m, 3);
    o = smoothness_orders(2, 0.5);
    EXPECT_EQ(o.n, 5);
    EXPECT_EQ(o.m, 7);
    o = smoothness_orders(1, 0.5);
    EXPECT_EQ(o.n, 3);
    EXPECT_EQ(o.m, 5);
    EXPECT_THROW(smoothness_orders(1, 1.5), InvalidArgument);
}

TEST(NormN, GaussianSup) {
    const auto a = plain_gaussian();
    // sampled sup: the lattice need not hit the maximiser
    EXPECT_NEAR(norm_N(a, 0, 0, 1.0, 1.0), 1.0, 1e-3);
    EXPECT_NEAR(norm_N(a, 0, 0, 3.0, 0.2), 1.0, 1e-3);
    EXPECT_NEAR(norm_N(a, 1, 0, 1.0, 1.0), 1.0, 1e-3);
    EXPECT_LE(norm_N(a, 1, 0, 1.0, 1.0), 1.0);
    // ell^1 sup|d_w a| = 2 * sqrt(2) e^{-1/2} > 1 at ell = 2
    EXPECT_NEAR(norm_N(a, 1, 0, 2.0, 1.0), 2.0 * std::sqrt(2.0) * std::exp(-0.5), 1e-3);
}

TEST(NormN, ScaleInvariance) {
    const auto p = std::get<AmplitudeSpec>(builtin_family("gaussian_bump", {{"amplitude", 1}, {"ell", 1.5}, {"rho", 2}}));
    const auto q = rescale(p, 2.0, 0.5);
    const double a = norm_N(p, 1, 1, 2, 1.5, 2.0);
    const double b = norm_N(q, 1, 1, 2, 1.5 / 2.0, 2.0 / 0.5);
    EXPECT_NEAR(a / b, 1.0, 2e-2);
}

TEST(Rescale, IdentityAndSupport) {
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 1}});
    const auto b = rescale(a, 1.0, 1.0);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.2, 1.2);
    for (int k = 0; k < 50; ++k) {
        const Point w{u(rng), 0}, xi{u(rng), 0};
        EXPECT_EQ(a.eval(w, xi), b.eval(w, xi));
    }
    const auto c = rescale(a, 2.0, 1.0);
    ASSERT_TRUE(c.support.has_value());
    EXPECT_NEAR(c.support->w.radius, 0.5, 1e-15);
    EXPECT_EQ(c.eval({0.55, 0}, {0, 0}), cplx(0.0));
    EXPECT_NE(c.eval({0.45, 0}, {0, 0}), cplx(0.0));
}

TEST(Rescale, SpectrumCovariance) {
    // Op_{alpha l r}(a^{(l,r)}) on the grid shrunk by l is unitarily equivalent to Op_alpha(a).
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 2}});
    const double l = 2.0, r = 1.5, alpha = 4.0;
    const auto b = rescale(a, l, r);
    const Grid g1(1, 2.0, 128), g2(1, 1.0, 128);
    const auto A = assemble_t_quant(a, 0.0, alpha, g1);
    const auto B = assemble_t_quant(b, 0.0, alpha * l * r, g2);
    const auto sa = singular_values(A).values, sb = singular_values(B).values;
    for (int k = 0; k < 10; ++k) EXPECT_NEAR(sa[k], sb[k], 1e-6 * sa[0]);
}

TEST(Builtin, GaussianBump) {
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 1}});
    EXPECT_NEAR(a.eval({0, 0}, {0, 0}).real(), 1.0, 1e-15);
    EXPECT_NEAR(a.eval({0.3, 0}, {-0.2, 0}).real(), std::exp(-0.09 - 0.04), 1e-15);
    EXPECT_EQ(a.eval({1.01, 0}, {0, 0}), cplx(0.0));
    EXPECT_EQ(a.eval({0, 0}, {-1.01, 0}), cplx(0.0));
    EXPECT_THROW(builtin_family("gaussian_bump", {{"bogus", 1}}), InvalidArgument);
    EXPECT_THROW(builtin_family("nope", {}), InvalidArgument);
}

TEST(Builtin, ZetaCutoff) {
    EXPECT_EQ(zeta(0.5), 0.0);
    EXPECT_EQ(zeta(1.0), 1.0);
    EXPECT_EQ(zeta(0.0), 0.0);
    const auto a = builtin_symbol("smooth_cutoff_zeta", {{"ell", 1}});
    EXPECT_EQ(a.eval({0.5, 0}, {3, 0}), cplx(0.0));
    EXPECT_EQ(a.eval({1.0, 0}, {3, 0}), cplx(1.0));
    EXPECT_GT(a.eval({0.75, 0}, {0, 0}).real(), 0.0);
    EXPECT_LT(a.eval({0.75, 0}, {0, 0}).real(), 1.0);
}

TEST(Builtin, PolyDecayBound) {
    const auto a = builtin_symbol("poly_decay", {{"A", 1}, {"gamma1", 3}, {"gamma2", 3}});
    ASSERT_TRUE(a.decay.has_value());
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int k = 0; k < 500; ++k) {
        const Point w{u(rng), 0}, xi{u(rng), 0};
        const double env = std::pow(1 + std::abs(w[0]), -3.0) * std::pow(1 + std::abs(xi[0]), -3.0);
        for (int i = 0; i <= 2; ++i)
            for (int j = 0; j <= 2; ++j) EXPECT_LE(std::abs(a.deriv({i, 0}, {j, 0}, w, xi)), env * (1 + 1e-12));
    }
}

TEST(SymbolSpec, DerivativeConsistency) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (const char* fam : {"gaussian_bump", "tensor_bump"}) {
        const auto a = builtin_symbol(fam, {{"d", 2}, {"ell", 1}, {"rho", 1}});
        const double h = 1e-4;
        for (int k = 0; k < 20; ++k) {
            const Point w{u(rng), u(rng)}, xi{u(rng), u(rng)};
            EXPECT_EQ(a.deriv({0, 0}, {0, 0}, w, xi), a.eval(w, xi));
            const cplx fd_w = (a.eval({w[0] + h, w[1]}, xi) - a.eval({w[0] - h, w[1]}, xi)) / (2 * h);
            const cplx fd_xi = (a.eval(w, {xi[0], xi[1] + h}) - a.eval(w, {xi[0], xi[1] - h})) / (2 * h);
            EXPECT_NEAR(std::abs(a.deriv({1, 0}, {0, 0}, w, xi) - fd_w), 0.0, 1e-6);
            EXPECT_NEAR(std::abs(a.deriv({0, 0}, {0, 1}, w, xi) - fd_xi), 0.0, 1e-6);
        }
    }
}

TEST(SymbolSpec, FiniteDifferenceSymbol) {
    auto f = [](const Point& w, const Point& xi) { return cplx(std::sin(w[0]) * std::exp(-xi[0] * xi[0])); };
    const auto a = finite_difference_symbol(1, f, std::nullopt, "fd");
    const Point w{0.3, 0}, xi{0.2, 0};
    EXPECT_NEAR(a.deriv({1, 0}, {0, 0}, w, xi).real(), std::cos(0.3) * std::exp(-0.04), 1e-6);
    EXPECT_NEAR(a.deriv({0, 0}, {1, 0}, w, xi).real(), std::sin(0.3) * -0.4 * std::exp(-0.04), 1e-6);
}

TEST(AmplitudeSpec, SupportAndAsAmplitude) {
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 1}, {"u", 0.5}});
    const auto p = as_amplitude(a);
    EXPECT_EQ(p.eval({0.2, 0}, {5.0, 0}, {0.1, 0}), a.eval({0.2, 0}, {0.1, 0}));
    EXPECT_EQ(p.eval({1.6, 0}, {0, 0}, {0, 0}), cplx(0.0));
    EXPECT_EQ(p.eval({0.5, 0}, {0, 0}, {1.1, 0}), cplx(0.0));
}

TEST(SymbolSpec, ConjugateAndZero) {
    const auto a = scale_symbol(plain_gaussian(), cplx(0.0, 2.0));
    const auto b = conjugate(a);
    EXPECT_EQ(b.eval({0.1, 0}, {0.2, 0}), std::conj(a.eval({0.1, 0}, {0.2, 0})));
    EXPECT_EQ(zero_symbol(1).eval({0, 0}, {0, 0}), cplx(0.0));
}
