#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "psido/functionals.hpp"
#include "psido/quantize.hpp"
#include "psido/schatten.hpp"

using namespace psido;

namespace {

OperatorMatrix random_operator(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    OperatorMatrix M;
    M.grid = g;
    const auto W = Window::full(g);
    M.rows = W.rows;
    M.cols = W.cols;
    M.entries.resize(g.size(), g.size());
    for (Index i = 0; i < g.size(); ++i)
        for (Index j = 0; j < g.size(); ++j) M.entries(i, j) = cplx(n(rng), n(rng));
    return M;
}

double max_abs(const Eigen::MatrixXcd& M) { return M.cwiseAbs().maxCoeff(); }

// Trapezoid rule on [lo, hi]; spectrally accurate for integrands vanishing smoothly at both ends.
template <class F>
cplx trapezoid(F f, double lo, double hi, int n) {
    const double h = (hi - lo) / n;
    cplx s = 0.5 * (f(lo) + f(hi));
    for (int k = 1; k < n; ++k) s += f(lo + k * h);
    return s * h;
}

}  // namespace

TEST(Grid, Layout) {
    const Grid g(1, 2.0, 8);
    EXPECT_DOUBLE_EQ(g.h(), 0.5);
    EXPECT_DOUBLE_EQ(g.coord(0), -1.75);
    EXPECT_DOUBLE_EQ(g.coord(7), 1.75);
    const Grid g2(2, 1.0, 4);
    EXPECT_EQ(g2.size(), 16);
    EXPECT_DOUBLE_EQ(g2.weight(), 0.25);
}

TEST(AssembleAmplitude, ZeroAmplitude) {
    const Grid g(1, 2.0, 32);
    const XiQuadrature q{1, Ball{{0, 0}, 1.0}, 64};
    const auto M = assemble_amplitude(zero_amplitude(1), t_to_matrix(0.0), 4.0, g, q);
    EXPECT_EQ(M.entries.rows(), 32);
    EXPECT_EQ(max_abs(M.entries), 0.0);
}

TEST(AssembleAmplitude, MatchesTQuant) {
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 2}, {"u", 0.2}});
    const Grid g(1, 2.0, 64);
    for (double t : {0.0, 0.5, 1.0}) {
        const auto q = default_quadrature(a, 4.0, g);
        const auto A = assemble_t_quant(a, t, 4.0, g, q);
        const auto B = assemble_amplitude(as_amplitude(a), t_to_matrix(t), 4.0, g, q);
        EXPECT_LT(max_abs(A.entries - B.entries), 1e-13 * max_abs(A.entries));
    }
}

TEST(AssembleAmplitude, DirectQuadratureOracle) {
    // p = f(w) g(xi) with T for t = 0: K(x, y) = f(x) (alpha / 2 pi) int e^{i alpha (x - y) xi} g(xi) dxi.
    const auto f = gaussian_cutoff_field(1, {0.1, 0}, 1.2);
    const auto gx = gaussian_cutoff_field(1, {0.5, 0}, 1.5);
    const auto p = make_amplitude(1, {AmplitudeTerm{1.0, f, constant_field(1, 1.0), gx}}, "fg");
    const double alpha = 6.0;
    const Grid g(1, 2.0, 48);
    const auto M = assemble_amplitude(p, t_to_matrix(0.0), alpha, g, default_quadrature(p, alpha, g));
    double worst = 0.0;
    for (int i = 0; i < 48; i += 5)
        for (int j = 0; j < 48; j += 3) {
            const double x = g.coord(i), y = g.coord(j);
            const cplx I = trapezoid([&](double s) { return gx->value({s, 0}) * std::exp(cplx(0, alpha * (x - y) * s)); },
                                     -1.0, 2.0, 20000);
            const cplx K = f->value({x, 0}) * alpha / (2 * kPi) * I;
            worst = std::max(worst, std::abs(M.entries(i, j) - g.h() * K));
        }
    EXPECT_LT(worst, 1e-8);
}

TEST(AssembleTQuant, WIndependentSymbolIgnoresT) {
    const auto a = builtin_symbol("gaussian_bump", {{"xi_only", 1}, {"rho", 2}});
    const Grid g(1, 2.0, 64);
    const auto q = default_quadrature(a, 4.0, g);
    const auto A0 = assemble_t_quant(a, 0.0, 4.0, g, q);
    const auto A1 = assemble_t_quant(a, 1.0, 4.0, g, q);
    EXPECT_LT(max_abs(A0.entries - A1.entries), 1e-14);
}

TEST(AssembleTQuant, AdjointIdentity) {
    const auto a = scale_symbol(builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 2}, {"u", 0.3}, {"mu", 0.5}}), cplx(0.6, 0.8));
    const Grid g(1, 2.0, 64);
    for (double t : {0.0, 0.25, 0.5}) {
        const auto q = default_quadrature(a, 4.0, g);
        const auto A = assemble_t_quant(a, t, 4.0, g, q);
        const auto B = assemble_t_quant(conjugate(a), 1.0 - t, 4.0, g, q);
        EXPECT_LT(max_abs(A.entries.adjoint() - B.entries), 1e-13 * max_abs(A.entries));
    }
}

TEST(AssembleTQuant, TraceMatchesPhaseSpaceVolume) {
    const auto a = builtin_symbol("gaussian_bump", {{"ell", 1}, {"rho", 1}});
    const double alpha = 4.0;
    const auto A = assemble_t_quant(a, 0.0, alpha, Grid(1, 2.0, 128));
    // (alpha / 2 pi) * int int a, product of two one-dimensional trapezoid integrals
    const auto fw = gaussian_cutoff_field(1, {}, 1.0);
    const double I = trapezoid([&](double s) { return cplx(fw->value({s, 0})); }, -1, 1, 4000).real();
    EXPECT_NEAR(A.entries.trace().real() / (alpha / (2 * kPi) * I * I), 1.0, 1e-2);
}

TEST(AssembleTQuant, ResolutionGuard) {
    const auto a = builtin_symbol("gaussian_bump", {{"rho", 4}});
    const Grid g(1, 2.0, 32);
    XiQuadrature q{1, Ball{{0, 0}, 4.0}, 8};
    try {
        q.check(64.0, g);
        FAIL() << "expected ResolutionError";
    } catch (const ResolutionError& e) {
        EXPECT_EQ(e.required(), XiQuadrature::required(q.ball, 64.0, g));
        EXPECT_GT(e.required(), 8);
    }
    EXPECT_FALSE(spatial_resolution_ok(Ball{{0, 0}, 4.0}, 64.0, g));
}

TEST(Multiplier, SincKernel) {
    const Grid g(1, 2.0, 64);
    for (double alpha : {4.0, 16.0, 32.0}) {
        const auto M = assemble_multiplier(XiSymbol::indicator(XiRegion::interval(0, 1)), alpha, g);
        double worst = 0.0;
        for (int i = 0; i < 64; ++i)
            for (int j = 0; j < 64; ++j) {
                const double u = g.coord(i) - g.coord(j);
                const cplx K = i == j ? cplx(alpha / (2 * kPi))
                                      : std::exp(cplx(0, alpha * u / 2)) * std::sin(alpha * u / 2) / (kPi * u);
                worst = std::max(worst, std::abs(M.entries(i, j) - g.h() * K));
            }
        EXPECT_LT(worst, 1e-8) << "alpha " << alpha;
    }
}

TEST(Multiplier, ZeroAndNormal) {
    const Grid g(1, 2.0, 128);
    const XiQuadrature q{1, Ball{{0, 0}, 1.0}, 64};
    const auto Z = assemble_multiplier(XiSymbol::smooth(constant_field(1, 0.0)), 4.0, g, q);
    EXPECT_EQ(max_abs(Z.entries), 0.0);
    const auto M = assemble_multiplier(XiSymbol::smooth(gaussian_field(1, {0.2, 0}, 0.5)), 4.0, g);
    const Eigen::MatrixXcd C = M.entries * M.entries.adjoint() - M.entries.adjoint() * M.entries;
    EXPECT_LT(Eigen::JacobiSVD<Eigen::MatrixXcd>(C).singularValues()(0), 1e-8);
}

TEST(IndicatorDiag, Properties) {
    const Grid g(1, 2.0, 64);
    const auto I = indicator_diag(LipschitzDomain::interval(-5, 5), g);
    EXPECT_EQ(max_abs(I.entries - Eigen::MatrixXcd::Identity(64, 64)), 0.0);
    const auto D = indicator_diag(LipschitzDomain::halfline_pos(), g);
    EXPECT_EQ(D.entries.trace().real(), 32.0);
    EXPECT_EQ(max_abs(D.entries * D.entries - D.entries), 0.0);
}

TEST(Hankel, Structure) {
    const Grid g(1, 2.0, 24);
    const auto A = random_operator(g, 1);
    EXPECT_EQ(max_abs(hankel(LipschitzDomain::interval(-5, 5), A).entries), 0.0);
    OperatorMatrix Dg = A;
    Dg.entries = A.entries.diagonal().asDiagonal();
    EXPECT_EQ(max_abs(hankel(LipschitzDomain::halfline_pos(), Dg).entries), 0.0);
    const auto H = hankel(LipschitzDomain::halfline_pos(), A);
    for (int i = 0; i < 24; ++i)
        for (int j = 0; j < 24; ++j) {
            const bool live = g.coord(i) > 0 && g.coord(j) <= 0;
            EXPECT_EQ(H.entries(i, j), live ? A.entries(i, j) : cplx(0.0));
        }
}

TEST(Commutator, Identities) {
    const Grid g(1, 2.0, 20);
    const auto A = random_operator(g, 2);
    const auto I = indicator_diag(LipschitzDomain::interval(-5, 5), g);
    EXPECT_LT(max_abs(commutator(A, I).entries), 1e-14);
    const auto D = indicator_diag(LipschitzDomain::halfline_pos(), g);
    EXPECT_EQ(max_abs(commutator(D, D).entries), 0.0);
    // [A, D] = (1 - D) A D - D A (1 - D)
    const auto C = commutator(A, D);
    const auto H = hankel(LipschitzDomain::halfline_pos(), A);
    const auto Hm = hankel(LipschitzDomain::halfline_neg(), A);
    // halfline_neg excludes 0 as well; on this grid no node sits at 0
    EXPECT_LT(max_abs(C.entries - (Hm.entries - H.entries)), 1e-14);
}

TEST(BsKernel, ZeroAndRankOne) {
    const Grid gx(1, 3.0, 60), gy(1, 3.0, 50);
    auto f = [](const Point& x) { return std::exp(-x[0] * x[0]); };
    auto g = [](const Point& y) { return 1.0 / (1.0 + y[0] * y[0]); };
    auto zero = [](const Point&) { return 0.0; };
    Eigen::MatrixXd S = Eigen::MatrixXd::Ones(1, 1);
    EXPECT_EQ(max_abs(bs_kernel_operator(zero, g, S, gx, gy).entries), 0.0);
    EXPECT_EQ(max_abs(bs_kernel_operator(f, zero, S, gx, gy).entries), 0.0);
    const auto K = bs_kernel_operator(f, g, Eigen::MatrixXd::Zero(1, 1), gx, gy);
    double nf = 0, ng = 0;
    for (Index i = 0; i < gx.size(); ++i) nf += gx.weight() * std::pow(f(gx.point(i)), 2);
    for (Index i = 0; i < gy.size(); ++i) ng += gy.weight() * std::pow(g(gy.point(i)), 2);
    const auto s = singular_values(K);
    for (double q : {0.3, 0.5, 1.0}) EXPECT_NEAR(qnorm(s, q, 1e-12).value, std::sqrt(nf * ng), 1e-10);
}

TEST(BsKernel, GaussianRatioBounded) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.4, 2.0);
    const Grid gx(1, 8.0, 200);
    double lo = 1e300, hi = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double a = u(rng), b = u(rng);
        auto f = [a](const Point& x) { return std::exp(-x[0] * x[0] / (a * a)); };
        auto g = [b](const Point& y) { return std::exp(-y[0] * y[0] / (b * b)); };
        const auto K = bs_kernel_operator(f, g, Eigen::MatrixXd::Ones(1, 1), gx, gx);
        const double lhs = qnorm(singular_values(K), 1.0).value;
        LatticeNormParams P;
        P.r = 2.0;
        P.delta = 1.0;
        P.truncation_radius = 8;
        const double nf = lattice_qnorm([&](const double* x) { return f({x[0], 0}); }, 1, P).value;
        const double ng = lattice_qnorm([&](const double* x) { return g({x[0], 0}); }, 1, P).value;
        const double r = lhs / (nf * ng);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_GT(lo, 0.0);
    EXPECT_LT(hi / lo, 10.0);
    EXPECT_LT(hi, 2.0);
}

TEST(Binary, RoundTrip) {
    const Grid g(1, 2.0, 10);
    const auto A = random_operator(g, 3);
    const auto path = (std::filesystem::temp_directory_path() / "psido_roundtrip.bin").string();
    write_binary(A, path);
    const auto B = read_binary(path);
    EXPECT_EQ(B.grid, A.grid);
    EXPECT_EQ(B.rows, A.rows);
    EXPECT_EQ(max_abs(B.entries - A.entries), 0.0);
    std::filesystem::remove(path);
}
