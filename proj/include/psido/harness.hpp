#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "psido/core.hpp"
#include "psido/domains.hpp"
#include "psido/quantize.hpp"
#include "psido/symbols.hpp"

namespace psido {

using json = nlohmann::json;

inline constexpr int kConfigSchema = 1;
inline constexpr int kReportSchema = 1;

enum class ExperimentKind {
    smooth_scaling,
    quantization_difference,
    separation_decay,
    hankel_one_variable,
    two_discontinuities,
    noncompact_symbol,
    bound_ratio,
};

std::string to_string(ExperimentKind k);
std::optional<ExperimentKind> kind_from_string(const std::string& s);
std::vector<std::string> experiment_kinds();

struct FixtureRef {
    std::string name;
    Params params;
};

// n(alpha) = max(n_min, multiple * ceil(per_alpha * alpha / multiple)), or n when fixed.
struct GridRule {
    int d = 1;
    double L = 2.0;
    int n = 0;
    int n_min = 0;
    double n_per_alpha = 0.0;
    int n_multiple = 1;
    int n_for(double alpha) const;
    Grid grid_for(double alpha) const;
    Grid grid_for(double alpha, double L_override) const;
};

struct XiRule {
    double safety = 4.0;
    int n = 0;  // fixed n_xi when > 0
};

struct XiRegionSpec {
    std::string kind;  // interval | half_plane | polygon
    XiRegion region;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::smooth_scaling;
    std::string name;
    std::uint64_t seed = 0;
    double q = 1.0;
    std::optional<double> tolerance;
    std::optional<FixtureRef> symbol;
    bool as_amplitude = false;
    double t = 0.0;
    std::optional<std::array<double, 4>> T;
    std::vector<double> alpha;
    std::vector<double> r;
    GridRule grid;
    XiRule xi;
    double tail_cut = 1e-10;
    int workers = 1;

    // quantization_difference
    std::vector<std::pair<double, double>> pairs;
    // separation_decay
    double alpha_fixed = 8.0;
    int m = 3;
    std::string weights = "halflines";
    double weight_width = 0.0;  // 0: half-lines reaching the box edge
    std::optional<FixtureRef> xi_only_symbol;
    // hankel_one_variable / two_discontinuities
    std::optional<FixtureRef> domain;
    std::vector<std::string> variants;
    std::optional<XiRegionSpec> omega;
    bool exploratory = false;
    std::vector<double> boxes;
    double theta = 1.0;
    std::string xi_integration = "exact";
    double consistency_tol = 0.1;
    // noncompact_symbol
    int trunc_J = 3;
    int trunc_S = 3;
    double tail_target = 1e-6;
    // bound_ratio
    int family_size = 50;
    std::vector<std::string> functionals;
    int cube_points = 4;

    json raw;
};

// Grid rule for one box size of the two-discontinuity experiment: spacing theta/alpha unless
// the grid fixes its own size.
GridRule box_rule(const ExperimentConfig& c, double L);

struct ConfigError : Error {
    explicit ConfigError(std::vector<std::string> v);
    std::vector<std::string> violations;
};

// Structural parse plus semantic validation; throws ConfigError listing every violation.
ExperimentConfig parse_config(const json& j);
ExperimentConfig parse_config_file(const std::string& path);
// Empty when the config is valid.
std::vector<std::string> validate_config(const json& j);

struct Row {
    double param = 0.0;
    double value = 0.0;
    double bound = std::numeric_limits<double>::quiet_NaN();
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double tail_qmass = 0.0;
    double tail_sensitivity = std::numeric_limits<double>::quiet_NaN();
    double defect = std::numeric_limits<double>::quiet_NaN();
    std::map<std::string, double> extra;
};

struct Fit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};

struct Series {
    std::string label;
    std::vector<Row> rows;
    std::optional<Fit> fit;
    std::optional<double> predicted;
    std::string predicted_source;
    std::vector<std::string> notes;
    bool degenerate = false;
};

// A stored pass/fail decision: pass iff value <relation> threshold.
struct Check {
    std::string name;
    double value = 0.0;
    std::string relation = "<=";  // "<=", "<", ">=", ">"
    double threshold = 0.0;
    bool required = true;
    bool pass = false;
};

Check make_check(std::string name, double value, std::string relation, double threshold, bool required = true);
bool evaluate(const Check& c);

struct Report {
    int schema = kReportSchema;
    std::string kind;
    std::string name;
    std::uint64_t seed = 0;
    json config;
    std::vector<Series> series;
    std::vector<Check> checks;
    std::vector<std::string> warnings;
    bool degenerate = false;
    bool exploratory = false;
    std::string verdict;
    double seconds = 0.0;
};

// pass | fail | degenerate | outside_proven_scope, from the stored checks and flags only.
std::string compute_verdict(const Report& r);

json to_json(const Report& r);
Report report_from_json(const json& j);
std::string report_csv(const Report& r);
std::string report_table(const Report& r);
// Writes <dir>/<name>.json and <dir>/<name>.csv; returns the two paths.
std::pair<std::string, std::string> write_report(const Report& r, const std::string& dir);

// Least squares slope of log(value) against log(param).
Fit fit_loglog_slope(const std::vector<std::pair<double, double>>& points);

// Evaluates f(0..n-1) on up to `workers` threads; results land by index.
template <class T>
std::vector<T> parallel_map(std::size_t n, int workers, const std::function<T(std::size_t)>& f);

// a restricted to the partition pieces psi_j(w) psi_s(xi) with |j|_inf <= J, |s|_inf <= S.
SymbolSpec truncate_by_partition(const SymbolSpec& a, int J, int S);

// e^{-((x - center) / scale)^2} on the line.
struct GaussianWeight {
    double center = 0.0;
    double scale = 1.0;
};

struct RatioOptions {
    double q = 1.0;
    double tail_cut = 1e-10;
    int cube_points = 4;
    double xi_safety = 4.0;
    bool doubling_check = false;
    Grid grid{1, 10.0, 80};
};

// One left/right comparison at alpha = 1; ratio is NaN when rhs = 0 (the sample is excluded).
struct BoundRatio {
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = std::numeric_limits<double>::quiet_NaN();
    double change = std::numeric_limits<double>::quiet_NaN();  // doubling check, when requested
};

// ||f e^{i x S y} g||_q against <<f>>_{2,q} <<g>>_{2,q} (d = 1).
BoundRatio bs_kernel_ratio(const GaussianWeight& f, const GaussianWeight& g, double S, const RatioOptions& o = {});
// ||h1 Op_{1,t}(a) h2||_q against <<h1>>_{2,inf} <<h2>>_{2,inf} <<F_{n,n}>>.
BoundRatio symbol_ratio(const SymbolSpec& a, double t, const GaussianWeight& h1, const GaussianWeight& h2,
                        const RatioOptions& o = {});
// ||h1 Op_1(p_T) h2||_q against the "fourier", "Q" or "P" functional of p.
BoundRatio amplitude_ratio(const std::string& functional, const AmplitudeSpec& p, const TMatrix& T,
                           const GaussianWeight& h1, const GaussianWeight& h2, const RatioOptions& o = {});

struct RunOptions {
    std::optional<int> workers;
    std::optional<std::uint64_t> seed;
    std::function<void(const std::string&)> log;
};

Report run_experiment(const ExperimentConfig& c, const RunOptions& o = {});
Report run_smooth_scaling(const ExperimentConfig& c, const RunOptions& o = {});
Report run_quantization_difference(const ExperimentConfig& c, const RunOptions& o = {});
Report run_separation_decay(const ExperimentConfig& c, const RunOptions& o = {});
Report run_hankel_one_variable(const ExperimentConfig& c, const RunOptions& o = {});
Report run_two_discontinuities(const ExperimentConfig& c, const RunOptions& o = {});
Report run_noncompact_symbol(const ExperimentConfig& c, const RunOptions& o = {});
Report run_bound_ratio(const ExperimentConfig& c, const RunOptions& o = {});

}  // namespace psido

#include "psido/parallel.ipp"
