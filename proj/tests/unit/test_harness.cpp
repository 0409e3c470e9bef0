#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "psido/harness.hpp"

using namespace psido;

namespace {

json smooth_config() {
    return json::parse(R"({
      "schema_version": 1, "kind": "smooth_scaling", "name": "t_smooth", "q": 1.0,
      "symbol": {"family": "gaussian_bump", "params": {"d": 1, "ell": 1, "rho": 1}},
      "alpha": [4, 8, 16, 32], "grid": {"d": 1, "L": 2, "n": 128}
    })");
}

bool mentions(const std::vector<std::string>& v, const std::string& key) {
    for (const auto& s : v)
        if (s.find(key) != std::string::npos) return true;
    return false;
}

Report run_json(const json& j, const RunOptions& o = {}) { return run_experiment(parse_config(j), o); }

double max_value(const Report& r) {
    double m = 0.0;
    for (const auto& s : r.series)
        for (const auto& row : s.rows) m = std::max(m, row.value);
    return m;
}

}  // namespace

TEST(FitSlope, ExactPowerLaw) {
    std::vector<std::pair<double, double>> pts;
    for (double p : {1.0, 2.0, 4.0, 8.0, 16.0}) pts.push_back({p, p * p * p});
    const Fit f = fit_loglog_slope(pts);
    EXPECT_NEAR(f.slope, 3.0, 1e-12);
    EXPECT_NEAR(f.stderr_, 0.0, 1e-12);
}

TEST(FitSlope, Constant) {
    std::vector<std::pair<double, double>> pts;
    for (double p : {2.0, 3.0, 5.0, 7.0}) pts.push_back({p, 4.2});
    EXPECT_NEAR(fit_loglog_slope(pts).slope, 0.0, 1e-12);
}

TEST(FitSlope, PerturbedSquare) {
    std::vector<std::pair<double, double>> pts;
    for (double p = 2.0; p <= 1024.0; p *= 2.0) pts.push_back({p, p * p * (1.0 + 0.01 * std::sin(std::log(p)))});
    const Fit f = fit_loglog_slope(pts);
    EXPECT_NEAR(f.slope, 2.0, 0.02);
    EXPECT_GT(f.stderr_, 0.0);
}

TEST(FitSlope, Rejects) {
    EXPECT_THROW(fit_loglog_slope({{1.0, 1.0}}), InvalidArgument);
    EXPECT_THROW(fit_loglog_slope({{1.0, 1.0}, {2.0, 0.0}}), InvalidArgument);
    EXPECT_THROW(fit_loglog_slope({{2.0, 1.0}, {2.0, 3.0}}), InvalidArgument);
}

TEST(Config, MinimalParses) {
    json j = smooth_config();
    j["alpha"] = json::parse(R"({"start": 4, "factor": 2, "count": 5})");
    j["grid"]["n"] = 256;
    const auto c = parse_config(j);
    EXPECT_EQ(c.kind, ExperimentKind::smooth_scaling);
    EXPECT_EQ(c.alpha, (std::vector<double>{4, 8, 16, 32, 64}));
    EXPECT_TRUE(validate_config(j).empty());
}

TEST(Config, RejectsQAboveOne) {
    json j = smooth_config();
    j["q"] = 1.5;
    const auto v = validate_config(j);
    ASSERT_FALSE(v.empty());
    EXPECT_TRUE(mentions(v, "q"));
    EXPECT_THROW(parse_config(j), ConfigError);
}

TEST(Config, NyquistGuardReportsRequiredResolution) {
    json j = smooth_config();
    j["xi_quadrature"] = {{"n", 16}};
    const auto v = validate_config(j);
    ASSERT_FALSE(v.empty());
    // smallest n with alpha * (2 rho / n) * diam <= pi, diam = 2 L, at alpha = 32
    const int need = static_cast<int>(std::ceil(32.0 * 2.0 * 1.0 * 4.0 / kPi));
    EXPECT_TRUE(mentions(v, "xi_quadrature.n"));
    EXPECT_TRUE(mentions(v, "need n_xi >= " + std::to_string(need))) << v[0];
}

TEST(Config, SpatialGuard) {
    json j = smooth_config();
    j["grid"]["n"] = 32;
    EXPECT_TRUE(mentions(validate_config(j), "grid.n"));
}

TEST(Config, Rejections) {
    json sep = json::parse(R"({"schema_version": 1, "kind": "separation_decay", "name": "s", "q": 1, "t": 0.5, "m": 3,
      "symbol": {"family": "tensor_bump", "params": {"k": 4, "k_xi": 2}}, "alpha_fixed": 8,
      "r": [0.5, 2], "grid": {"d": 1, "L": 12, "n": 200}})");
    EXPECT_TRUE(mentions(validate_config(sep), "r >= 1"));
    sep["r"] = {0, 2};
    EXPECT_TRUE(mentions(validate_config(sep), "overlap"));

    json two = json::parse(R"({"schema_version": 1, "kind": "two_discontinuities", "name": "t", "q": 1,
      "domain": {"name": "interval", "params": {"a": 0, "b": 1}}, "omega": {"interval": [0, 1]},
      "alpha": [1.5, 4, 8, 16], "boxes": [2], "grid": {"d": 1, "L": 2}})");
    EXPECT_TRUE(mentions(validate_config(two), "alpha"));

    json nc = json::parse(R"({"schema_version": 1, "kind": "noncompact_symbol", "name": "n", "q": 1,
      "symbol": {"family": "poly_decay", "params": {"gamma1": 1, "gamma2": 3}}, "truncation": {"J": 1, "S": 1},
      "alpha": [2, 4, 8, 16], "grid": {"d": 1, "L": 3, "n": 128}})");
    EXPECT_TRUE(mentions(validate_config(nc), "gamma1"));

    json bad = smooth_config();
    bad["symbol"]["family"] = "no_such_family";
    EXPECT_TRUE(mentions(validate_config(bad), "symbol"));
}

TEST(Report, VerdictPrecedence) {
    Report r;
    r.checks.push_back(make_check("a", 0.1, "<", 0.2));
    EXPECT_EQ(compute_verdict(r), "pass");
    r.checks.push_back(make_check("b", 3.0, "<", 2.0, false));
    EXPECT_EQ(compute_verdict(r), "pass");
    r.checks.push_back(make_check("c", std::nan(""), "<", 2.0));
    EXPECT_EQ(compute_verdict(r), "fail");
    r.exploratory = true;
    EXPECT_EQ(compute_verdict(r), "outside_proven_scope");
    r.degenerate = true;
    EXPECT_EQ(compute_verdict(r), "degenerate");
}

TEST(Report, JsonRoundTripAndFiles) {
    const Report r = run_json(smooth_config());
    const Report back = report_from_json(to_json(r));
    EXPECT_EQ(to_json(back).dump(), to_json(r).dump());
    const auto dir = (std::filesystem::temp_directory_path() / "psido_report_test").string();
    const auto [jp, cp] = write_report(r, dir);
    EXPECT_TRUE(std::filesystem::exists(jp));
    std::ifstream is(cp);
    std::string header;
    std::getline(is, header);
    EXPECT_EQ(header.rfind("series,param,value,bound,ratio,tail_qmass,tail_sensitivity,defect", 0), 0u);
    std::filesystem::remove_all(dir);
}

TEST(Experiments, SmoothScalingSmall) {
    const Report r = run_json(smooth_config());
    ASSERT_EQ(r.series.size(), 1u);
    ASSERT_TRUE(r.series[0].fit.has_value());
    EXPECT_NEAR(r.series[0].fit->slope, 1.0, 0.15);
    EXPECT_EQ(r.verdict, "pass");
}

TEST(Experiments, Reproducible) {
    RunOptions one, two;
    one.workers = 1;
    two.workers = 2;
    const Report a = run_json(smooth_config(), one);
    const Report b = run_json(smooth_config(), two);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
}

TEST(Experiments, ZeroSymbolDegenerate) {
    json j = smooth_config();
    j["symbol"]["params"]["A"] = 0;
    const Report r = run_json(j);
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.verdict, "degenerate");
    EXPECT_EQ(max_value(r), 0.0);
}

TEST(Experiments, EqualQuantizationsCancel) {
    json j = json::parse(R"({"schema_version": 1, "kind": "quantization_difference", "name": "qd", "q": 1,
      "symbol": {"family": "gaussian_bump", "params": {"rho": 1}}, "pairs": [[0.5, 0.5]],
      "alpha": [4, 8, 16, 32], "grid": {"d": 1, "L": 2, "n": 128}})");
    const Report r = run_json(j);
    EXPECT_EQ(max_value(r), 0.0);
    EXPECT_EQ(r.verdict, "degenerate");
}

TEST(Experiments, HankelWholeBoxIsZero) {
    json j = json::parse(R"({"schema_version": 1, "kind": "hankel_one_variable", "name": "hz", "q": 1, "t": 0,
      "symbol": {"family": "gaussian_bump", "params": {"rho": 1}},
      "domain": {"name": "interval", "params": {"a": -10, "b": 10}}, "variants": ["sandwich"],
      "alpha": [4, 8, 16, 32], "grid": {"d": 1, "L": 2, "n": 128}})");
    const Report r = run_json(j);
    EXPECT_EQ(max_value(r), 0.0);
    EXPECT_EQ(r.verdict, "degenerate");
}

TEST(Experiments, WeylHankelIsExploratory) {
    json j = json::parse(R"({"schema_version": 1, "kind": "hankel_one_variable", "name": "hw", "q": 1, "t": 0.5,
      "exploratory": true, "symbol": {"family": "plane_cut_product", "params": {"rho": 1, "lo": 0}},
      "domain": {"name": "halfline_pos"}, "variants": ["sandwich"],
      "alpha": [4, 8, 16, 32], "grid": {"d": 1, "L": 2, "n": 128}})");
    const Report r = run_json(j);
    EXPECT_EQ(r.verdict, "outside_proven_scope");
    EXPECT_TRUE(r.exploratory);
}

TEST(Experiments, TwoDiscontinuitiesCoveredBoxDegenerate) {
    json j = json::parse(R"({"schema_version": 1, "kind": "two_discontinuities", "name": "td", "q": 1,
      "domain": {"name": "interval", "params": {"a": -10, "b": 10}}, "omega": {"interval": [-2, 2]},
      "alpha": [2, 4, 8, 16], "boxes": [2], "grid": {"d": 1, "L": 2, "n": 128}})");
    const Report r = run_json(j);
    EXPECT_EQ(r.verdict, "degenerate");
}

TEST(Experiments, NoncompactZeroAmplitude) {
    json j = json::parse(R"({"schema_version": 1, "kind": "noncompact_symbol", "name": "nz", "q": 1,
      "symbol": {"family": "poly_decay", "params": {"A": 0, "gamma1": 3, "gamma2": 3}}, "truncation": {"J": 1, "S": 1},
      "alpha": [2, 4, 8, 16], "grid": {"d": 1, "L": 3, "n": 128}})");
    const Report r = run_json(j);
    EXPECT_EQ(max_value(r), 0.0);
    EXPECT_EQ(r.verdict, "degenerate");
}

TEST(TruncateByPartition, KeepsInsideDropsOutside) {
    const auto a = builtin_symbol("poly_decay", {{"gamma1", 3}, {"gamma2", 3}});
    const auto b = truncate_by_partition(a, 2, 2);
    EXPECT_NEAR(std::abs(b.eval({0.3, 0}, {-0.6, 0}) - a.eval({0.3, 0}, {-0.6, 0})), 0.0, 1e-14);
    EXPECT_EQ(b.eval({4.5, 0}, {0, 0}), cplx(0.0));
    EXPECT_EQ(b.eval({0, 0}, {-4.5, 0}), cplx(0.0));
}

TEST(BoundRatio, ZeroAmplitudeExcluded) {
    const auto r = amplitude_ratio("Q", zero_amplitude(1), t_to_matrix(0.0), {0, 1}, {0, 1});
    EXPECT_EQ(r.lhs, 0.0);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_TRUE(std::isnan(r.ratio));
}

TEST(BoundRatio, RankOneSingleCube) {
    RatioOptions o;
    o.grid = Grid(1, 4.0, 400);
    o.cube_points = 64;
    // narrow factors centred in the unit cube around 0 carry all their mass there
    for (double q : {0.5, 1.0}) {
        o.q = q;
        const auto r = bs_kernel_ratio({0.0, 0.08}, {0.0, 0.1}, 0.0, o);
        EXPECT_LE(r.ratio, 1.0 + 1e-6);
        EXPECT_GT(r.ratio, 0.999);
    }
    // spread factors: the lattice norm exceeds the L^2 norm for q < 2
    o.q = 1.0;
    EXPECT_LT(bs_kernel_ratio({0.0, 1.5}, {0.3, 1.2}, 0.0, o).ratio, 1.0);
}

TEST(BoundRatio, SmallFamilyDeterministic) {
    json j = json::parse(R"({"schema_version": 1, "kind": "bound_ratio", "name": "br", "q": 1, "seed": 3,
      "family_size": 4, "functionals": ["bs_kernel", "F"], "cube_points": 4, "grid": {"d": 1, "L": 10, "n": 80}})");
    const Report a = run_json(j), b = run_json(j);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    ASSERT_EQ(a.series.size(), 2u);
    for (const auto& s : a.series)
        for (const auto& row : s.rows) {
            EXPECT_GT(row.ratio, 0.0);
            EXPECT_LT(row.ratio, 1.0);
        }
    RunOptions o;
    o.seed = 4;
    EXPECT_NE(to_json(run_json(j, o)).dump(), to_json(a).dump());
}
