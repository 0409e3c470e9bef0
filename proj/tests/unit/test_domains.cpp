#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "psido/domains.hpp"

using namespace psido;

TEST(Indicator, Examples) {
    EXPECT_EQ(indicator(LipschitzDomain::interval(0, 1), {0.5, 0}), 1);
    EXPECT_EQ(indicator(LipschitzDomain::halfline_pos(), {-0.1, 0}), 0);
    EXPECT_EQ(indicator(LipschitzDomain::halfline_pos(), {0.0, 0}), 0);
    const auto E = LipschitzDomain::epigraph([](double s) { return std::abs(s) / 2; }, 0.5);
    EXPECT_EQ(indicator(E, {1.0, 0.6}), 1);
    EXPECT_EQ(indicator(E, {1.0, 0.4}), 0);
    EXPECT_THROW(LipschitzDomain::interval(1, 0), InvalidArgument);
}

TEST(Indicator, FixturesRotated) {
    const auto H = domain_fixture("half_plane", {{"theta", kPi / 2}});
    // rotated by 90 degrees: the inside normal points to -x1
    EXPECT_EQ(indicator(H, {-1.0, 0.3}), 1);
    EXPECT_EQ(indicator(H, {1.0, 0.3}), 0);
    const auto D = domain_fixture("disc", {{"radius", 1}});
    EXPECT_EQ(indicator(D, {0.2, 0.3}), 1);
    EXPECT_EQ(indicator(D, {0.9, 0.9}), 0);
    EXPECT_THROW(domain_fixture("torus", {}), InvalidArgument);
}

TEST(Epigraph, LipschitzQuotients) {
    const auto E = domain_fixture("epigraph_sin", {{"amp", 0.5}});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-5, 5);
    for (int k = 0; k < 1000; ++k) {
        const double a = u(rng), b = u(rng);
        if (a == b) continue;
        EXPECT_LE(std::abs(E.phi()(a) - E.phi()(b)) / std::abs(a - b), E.lipschitz() + 1e-12);
    }
}

TEST(Chartable, BoundarySamplesInCharts) {
    for (const auto& D : {LipschitzDomain::disc({0.3, -0.2}, 1.0), LipschitzDomain::square({0, 0}, 1.0)}) {
        std::mt19937_64 rng(2);
        std::normal_distribution<double> g(0.0, 1e-3);
        for (const Point& b : D.boundary_samples(200)) {
            bool found = false;
            for (const auto& ch : D.charts()) {
                if (std::hypot(b[0] - ch.ball.center[0], b[1] - ch.ball.center[1]) >= ch.ball.radius - 0.01) continue;
                found = true;
                for (int k = 0; k < 20; ++k) {
                    const Point x{b[0] + g(rng), b[1] + g(rng)};
                    EXPECT_EQ(D.contains(x), ch.contains(x));
                }
                break;
            }
            EXPECT_TRUE(found);
        }
    }
}

TEST(Separation, Examples) {
    const auto flat = LipschitzDomain::epigraph([](double) { return 0.0; }, 0.0);
    EXPECT_TRUE(separation_check(flat, {0, 1}, {0, -1}));
    const auto H = LipschitzDomain::halfline_pos();
    EXPECT_TRUE(separation_check(H, {0.5, 0}, {-0.01, 0}));
    EXPECT_TRUE(separation_check(H, {2.0, 0}, {-3.0, 0}));
}

TEST(Separation, RandomPairsSine) {
    const auto E = LipschitzDomain::epigraph([](double s) { return std::sin(s) / 2; }, 0.5);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-4, 4);
    int tested = 0;
    while (tested < 10000) {
        const Point x{u(rng), u(rng)}, y{u(rng), u(rng)};
        if (!E.contains(x) || E.contains(y)) continue;
        ++tested;
        ASSERT_TRUE(separation_check(E, x, y)) << x[0] << "," << x[1] << " " << y[0] << "," << y[1];
    }
}

TEST(TauMetric, Values) {
    EXPECT_NEAR(tau_metric({0, 0}, LipschitzDomain::halfline_pos(), 1.0), 1.0 / 32, 1e-15);
    const auto flat = LipschitzDomain::epigraph([](double) { return 0.0; }, 0.0);
    EXPECT_NEAR(tau_metric({0, 3}, flat, 1e9, 0.0), 3.0 / 32, 1e-12);
    EXPECT_NEAR(tau_metric({0, -3}, flat, 1e9, 0.0), 1e-9 / 32, 1e-15);
}

TEST(TauMetric, SlowVariation) {
    const auto E = domain_fixture("epigraph_sin", {{"amp", 0.5}});
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-3, 3);
    for (double alpha : {2.0, 64.0}) {
        for (int k = 0; k < 2000; ++k) {
            const Point a{u(rng), u(rng)}, b{u(rng), u(rng)};
            const double dist = std::hypot(a[0] - b[0], a[1] - b[1]);
            EXPECT_LE(std::abs(tau_metric(a, E, alpha) - tau_metric(b, E, alpha)), dist / 16 + 1e-15);
        }
    }
}

TEST(Whitney, ConstantScale) {
    for (double c : {0.1, 0.25, 0.3}) {
        const auto W = whitney_cover({{0, 0}, {1, 0}}, 1, [c](const Point&) { return c; }, 0.0);
        EXPECT_LE(W.size(), static_cast<std::size_t>(std::ceil(1.0 / c)) + 1);
        EXPECT_LE(W.n_max(), 3);
    }
}

TEST(Whitney, ShrinksNearOrigin) {
    const double alpha = 8.0;
    const auto H = LipschitzDomain::halfline_pos();
    const auto W = whitney_cover({{-2, 0}, {2, 0}}, 1, [&](const Point& x) { return tau_metric(x, H, alpha); }, 1.0 / 32);
    std::size_t best = 0;
    for (std::size_t j = 0; j < W.size(); ++j)
        if (std::abs(W.centers()[j][0]) < std::abs(W.centers()[best][0])) best = j;
    const double r = W.radii()[best];
    const double tau0 = 1.0 / (32 * alpha);
    EXPECT_GE(r, tau0 * (1 - 1.0 / 32));
    EXPECT_LE(r, tau0 * (1 + 1.0 / 32));
    // tau(2) / tau(0) = 16 at alpha = 8
    EXPECT_GT(*std::max_element(W.radii().begin(), W.radii().end()) / r, 15.0);
}

TEST(Whitney, PartitionOfUnity) {
    const auto E = domain_fixture("epigraph_sin", {{"amp", 0.5}});
    const Box box{{-0.5, -0.5}, {0.5, 0.5}};
    const auto W = whitney_cover(box, 2, [&](const Point& x) { return tau_metric(x, E, 2.0); }, 1.0 / 16);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (int k = 0; k < 1000; ++k) {
        const Point x{u(rng), u(rng)};
        EXPECT_NEAR(W.partition_sum(x), 1.0, 1e-10);
        for (int j : W.touching(x)) {
            const double dist = std::hypot(x[0] - W.centers()[j][0], x[1] - W.centers()[j][1]);
            EXPECT_LT(dist, W.radii()[j]);
        }
    }
    EXPECT_GT(W.min_bump_sum(), 0.0);
    EXPECT_LT(W.n_max(), 100);
}

TEST(Whitney, RejectsFastScale) {
    EXPECT_THROW(whitney_cover({{0, 0}, {1, 0}}, 1, [](const Point& x) { return 0.01 + 2 * x[0]; }, 0.5),
                 InvalidArgument);
}

TEST(LatticePartition, SumsAndSupport) {
    for (int d : {1, 2}) {
        const auto P = lattice_partition(d);
        std::mt19937_64 rng(6);
        std::uniform_real_distribution<double> u(-5, 5);
        for (int k = 0; k < 300; ++k) {
            // dyadic points so that the unit shifts below are exact
            const Point x{std::round(u(rng) * 1024) / 1024, d == 2 ? std::round(u(rng) * 1024) / 1024 : 0.0};
            double s = 0.0;
            for (const auto& j : P.touching(x)) s += P.value(j, x);
            EXPECT_NEAR(s, 1.0, 1e-10);
            const LatticeIndex far{static_cast<int>(std::floor(x[0])) + 3, 0};
            EXPECT_EQ(P.value(far, x), 0.0);
            const LatticeIndex j{static_cast<int>(std::round(x[0])), d == 2 ? static_cast<int>(std::round(x[1])) : 0};
            const Point xs{x[0] + 1.0, d == 2 ? x[1] - 2.0 : 0.0};
            const LatticeIndex js{j[0] + 1, d == 2 ? j[1] - 2 : 0};
            EXPECT_EQ(P.value(js, xs), P.value(j, x));
        }
        EXPECT_NEAR(P.support_radius(), 2 * std::sqrt(double(d)), 1e-15);
    }
}
