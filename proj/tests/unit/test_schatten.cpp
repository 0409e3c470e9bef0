#include <gtest/gtest.h>

#include <random>

#include "psido/schatten.hpp"

using namespace psido;

namespace {

Eigen::MatrixXcd random_complex(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = cplx(g(rng), g(rng));
    return M;
}

}  // namespace

TEST(SingularValues, DiagonalSorted) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 2);
    M(0, 0) = 3.0;
    M(1, 1) = 4.0;
    const auto s = singular_values(M);
    ASSERT_EQ(s.values.size(), 2u);
    EXPECT_NEAR(s.values[0], 4.0, 1e-14);
    EXPECT_NEAR(s.values[1], 3.0, 1e-14);
}

TEST(SingularValues, NilpotentShift) {
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(2, 2);
    M(0, 1) = 1.0;
    const auto s = singular_values(M);
    EXPECT_NEAR(s.values[0], 1.0, 1e-14);
    EXPECT_NEAR(s.values[1], 0.0, 1e-14);
}

TEST(SingularValues, FrobeniusIdentity) {
    std::mt19937_64 rng(3);
    const auto M = random_complex(50, rng);
    double ss = 0.0;
    for (double v : singular_values(M).values) ss += v * v;
    EXPECT_NEAR(ss / M.squaredNorm(), 1.0, 1e-10);
}

TEST(QNorm, TwoTermSums) {
    SingularSpectrum s{{4.0, 3.0}, ""};
    EXPECT_NEAR(qnorm(s, 1.0).value, 7.0, 1e-14);
    EXPECT_NEAR(qnorm(s, 0.5).value, std::pow(std::sqrt(3.0) + 2.0, 2), 1e-12);
    EXPECT_NEAR(qnorm(s, 0.5).value, 13.9282, 1e-4);
}

TEST(QNorm, RankOneIsTopValue) {
    Eigen::VectorXcd u = Eigen::VectorXcd::LinSpaced(6, 1.0, 6.0), v = Eigen::VectorXcd::Ones(5);
    const Eigen::MatrixXcd M = u * v.adjoint();
    const auto s = singular_values(M);
    for (double q : {0.3, 0.5, 1.0}) EXPECT_NEAR(qnorm(s, q).value / s.values[0], 1.0, 1e-10);
}

TEST(QNorm, TailCutDropsSmallValues) {
    SingularSpectrum s{{1.0, 1e-3, 1e-12}, ""};
    const auto r = qnorm(s, 1.0, 1e-10);
    EXPECT_EQ(r.kept, 2u);
    EXPECT_NEAR(r.tail_qmass, 1e-12, 1e-20);
    EXPECT_TRUE(qnorm(SingularSpectrum{{0.0, 0.0}, ""}, 1.0).zero);
}

TEST(Triangle, ZeroAndEqual) {
    std::mt19937_64 rng(5);
    const auto A = random_complex(8, rng);
    const auto r0 = check_triangle(A, Eigen::MatrixXcd::Zero(8, 8), 0.5);
    EXPECT_TRUE(r0.holds);
    EXPECT_NEAR(r0.margin, 0.0, 1e-12);
    for (double q : {0.3, 0.5}) {
        const auto r = check_triangle(A, A, q);
        EXPECT_TRUE(r.holds);
        EXPECT_NEAR(r.lhs / r.rhs, std::pow(2.0, q) / 2.0, 1e-10);
        EXPECT_GT(r.margin, 0.0);
    }
}

TEST(Triangle, RandomPairs) {
    std::mt19937_64 rng(11);
    double worst = 1.0;
    for (int k = 0; k < 50; ++k) {
        const auto A = random_complex(12, rng), B = random_complex(12, rng);
        for (double q : {0.3, 0.5, 1.0}) worst = std::min(worst, check_triangle(A, B, q).margin);
    }
    EXPECT_GE(worst, -1e-10);
}

TEST(Holder, AlignedRankOneEquality) {
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(2, 2), B = A;
    A(0, 0) = 2.0;
    B(0, 0) = 3.0;
    const auto r = check_holder(A, B, 2.0, 2.0);
    EXPECT_NEAR(r.lhs, 6.0, 1e-12);
    EXPECT_NEAR(r.rhs, 6.0, 1e-12);
    EXPECT_TRUE(r.holds);
}

TEST(Holder, UnitaryInvariance) {
    std::mt19937_64 rng(7);
    const auto A = random_complex(10, rng);
    const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(random_complex(10, rng)).householderQ();
    for (double q : {0.5, 1.0}) {
        const auto r = check_holder(A, U, q, kInf);
        EXPECT_NEAR(r.lhs / r.rhs, 1.0, 1e-10);
    }
}

TEST(Holder, RandomPairsHalf) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 50; ++k) {
        const auto A = random_complex(10, rng), B = random_complex(10, rng);
        EXPECT_GE(check_holder(A, B, 1.0, 1.0).margin, -1e-10);
    }
}
