#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "psido/harness.hpp"

namespace psido {

namespace {

const std::vector<std::pair<ExperimentKind, std::string>>& kind_names() {
    static const std::vector<std::pair<ExperimentKind, std::string>> v{
        {ExperimentKind::smooth_scaling, "smooth_scaling"},
        {ExperimentKind::quantization_difference, "quantization_difference"},
        {ExperimentKind::separation_decay, "separation_decay"},
        {ExperimentKind::hankel_one_variable, "hankel_one_variable"},
        {ExperimentKind::two_discontinuities, "two_discontinuities"},
        {ExperimentKind::noncompact_symbol, "noncompact_symbol"},
        {ExperimentKind::bound_ratio, "bound_ratio"},
    };
    return v;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}

// Collects violations with the offending field path.
class Reader {
  public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

    void allow(const json& obj, const std::string& path, const std::set<std::string>& keys) {
        if (!obj.is_object()) return;
        for (const auto& [k, v] : obj.items())
            if (!keys.count(k)) fail(path.empty() ? k : path + "." + k, "unknown field");
    }

    std::optional<double> number(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            fail(path, "must be a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    std::optional<int> integer(const json& obj, const std::string& key, const std::string& path) {
        auto v = number(obj, key, path);
        if (!v) return std::nullopt;
        if (*v != std::floor(*v) || std::abs(*v) > 1e9) {
            fail(path, "must be an integer");
            return std::nullopt;
        }
        return static_cast<int>(*v);
    }

    std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_string()) {
            fail(path, "must be a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_boolean()) {
            fail(path, "must be true or false");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    std::vector<double> numbers(const json& obj, const std::string& key, const std::string& path) {
        std::vector<double> out;
        if (!obj.contains(key)) return out;
        const auto& v = obj.at(key);
        if (!v.is_array()) {
            fail(path, "must be an array of numbers");
            return out;
        }
        for (const auto& x : v) {
            if (!x.is_number()) {
                fail(path, "must be an array of numbers");
                return {};
            }
            out.push_back(x.get<double>());
        }
        return out;
    }

    std::optional<FixtureRef> fixture(const json& obj, const std::string& key, const std::string& path,
                                      const char* name_key) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_object()) {
            fail(path, "must be an object");
            return std::nullopt;
        }
        allow(v, path, {name_key, "params"});
        FixtureRef f;
        auto n = string(v, name_key, path + "." + name_key);
        if (!n) {
            fail(path + "." + name_key, "required");
            return std::nullopt;
        }
        f.name = *n;
        if (v.contains("params")) {
            if (!v.at("params").is_object()) {
                fail(path + ".params", "must be an object of numbers");
            } else {
                for (const auto& [k, x] : v.at("params").items()) {
                    if (!x.is_number()) fail(path + ".params." + k, "must be a number");
                    else f.params[k] = x.get<double>();
                }
            }
        }
        return f;
    }
};

std::optional<XiRegionSpec> read_region(Reader& rd, const json& j, const std::string& path, int d) {
    if (!j.is_object() || j.size() != 1) {
        rd.fail(path, "must hold exactly one of interval, half_plane, polygon");
        return std::nullopt;
    }
    XiRegionSpec s;
    const auto& [k, v] = *j.items().begin();
    s.kind = k;
    try {
        if (k == "interval") {
            if (d != 1) throw InvalidArgument("interval regions are for d = 1");
            // null marks an infinite end
            auto end = [](const json& e, double inf) {
                if (e.is_null()) return inf;
                if (!e.is_number()) throw InvalidArgument("expects [lo, hi] with numbers or null");
                return e.get<double>();
            };
            if (!v.is_array() || v.size() != 2) throw InvalidArgument("expects [lo, hi]");
            const double inf = std::numeric_limits<double>::infinity();
            s.region = XiRegion::interval(end(v[0], -inf), end(v[1], inf));
        } else if (k == "half_plane") {
            if (d != 2) throw InvalidArgument("half_plane regions are for d = 2");
            if (!v.is_object() || !v.contains("normal") || !v.contains("offset")) throw InvalidArgument("expects normal and offset");
            const auto& nrm = v.at("normal");
            if (!nrm.is_array() || nrm.size() != 2) throw InvalidArgument("normal must have two entries");
            s.region = XiRegion::half_plane({nrm[0].get<double>(), nrm[1].get<double>()}, v.at("offset").get<double>());
        } else if (k == "polygon") {
            if (d != 2) throw InvalidArgument("polygon regions are for d = 2");
            if (!v.is_array()) throw InvalidArgument("expects a list of [x, y] vertices");
            std::vector<Point> pts;
            for (const auto& p : v) {
                if (!p.is_array() || p.size() != 2) throw InvalidArgument("vertices are [x, y]");
                pts.push_back({p[0].get<double>(), p[1].get<double>()});
            }
            s.region = XiRegion::polygon(pts);
        } else {
            throw InvalidArgument("unknown region kind '" + k + "'");
        }
    } catch (const std::exception& e) {
        rd.fail(path + "." + k, e.what());
        return std::nullopt;
    }
    return s;
}

bool slope_kind(ExperimentKind k) {
    return k == ExperimentKind::smooth_scaling || k == ExperimentKind::quantization_difference ||
           k == ExperimentKind::hankel_one_variable || k == ExperimentKind::noncompact_symbol;
}

std::optional<Ball> xi_ball(const AnySpec& s) {
    if (auto* a = std::get_if<SymbolSpec>(&s)) return a->support ? std::optional<Ball>(a->support->xi) : a->windows.xi;
    const auto& p = std::get<AmplitudeSpec>(s);
    return p.support ? std::optional<Ball>(p.support->xi) : p.windows.xi;
}

// Semantic checks on a structurally parsed config.
void check_semantics(Reader& rd, ExperimentConfig& c) {
    if (c.grid.d != 1 && c.grid.d != 2) rd.fail("grid.d", "must be 1 or 2");
    if (!(c.grid.L > 0.0)) rd.fail("grid.L", "must be positive");
    if (c.grid.n <= 0 && c.grid.n_min <= 0 && c.grid.n_per_alpha <= 0.0 && c.kind != ExperimentKind::two_discontinuities)
        rd.fail("grid", "needs n or a rule (n_min / n_per_alpha)");
    if (c.grid.n_multiple < 1) rd.fail("grid.n_multiple", "must be >= 1");
    if (!(c.tail_cut >= 0.0 && c.tail_cut < 1.0)) rd.fail("tail_cut", "must lie in [0, 1)");
    if (c.workers < 1) rd.fail("workers", "must be >= 1");
    if (c.xi.n < 0) rd.fail("xi_quadrature.n", "must be positive");
    if (!(c.xi.safety >= 1.0)) rd.fail("xi_quadrature.safety", "must be >= 1");
    if (c.tolerance && !(*c.tolerance > 0.0)) rd.fail("tolerance", "must be positive");
    for (double a : c.alpha)
        if (!(a > 0.0)) rd.fail("alpha", "values must be positive");
    const bool uses_alpha_list = c.kind != ExperimentKind::separation_decay && c.kind != ExperimentKind::bound_ratio;
    if (uses_alpha_list && c.alpha.empty()) rd.fail("alpha", "required");
    if (slope_kind(c.kind) && !c.alpha.empty() && c.alpha.size() < 4) rd.fail("alpha", "slope fits need at least 4 values");

    std::optional<AnySpec> spec;
    if (c.symbol) {
        try {
            spec = builtin_family(c.symbol->name, c.symbol->params);
            const int sd = std::holds_alternative<SymbolSpec>(*spec) ? std::get<SymbolSpec>(*spec).d
                                                                     : std::get<AmplitudeSpec>(*spec).d;
            if (sd != c.grid.d) rd.fail("symbol.params.d", "dimension differs from grid.d");
        } catch (const std::exception& e) {
            rd.fail("symbol.family", e.what());
        }
    } else if (c.kind != ExperimentKind::two_discontinuities && c.kind != ExperimentKind::bound_ratio) {
        rd.fail("symbol", "required");
    }
    if (c.T) {
        try {
            TMatrix((*c.T)[0], (*c.T)[1], (*c.T)[2], (*c.T)[3]);
        } catch (const std::exception& e) {
            rd.fail("T", e.what());
        }
    }
    if (!(c.t >= 0.0 && c.t <= 1.0)) rd.fail("t", "must lie in [0, 1]");

    if (c.domain) {
        try {
            const auto D = domain_fixture(c.domain->name, c.domain->params);
            if (D.dim() != c.grid.d) rd.fail("domain.name", "dimension differs from grid.d");
        } catch (const std::exception& e) {
            rd.fail("domain.name", e.what());
        }
    }

    // Resolution guards at every alpha.
    std::optional<Ball> xb;
    if (spec) xb = xi_ball(*spec);
    if (c.omega && c.omega->region.bounded()) xb = XiSymbol::indicator(c.omega->region).support();
    if (c.kind == ExperimentKind::noncompact_symbol && spec && std::holds_alternative<SymbolSpec>(*spec) && c.trunc_J >= 0 &&
        c.trunc_S >= 0) {
        try {
            const SymbolSpec at = truncate_by_partition(std::get<SymbolSpec>(*spec), c.trunc_J, c.trunc_S);
            xb = at.support->xi;
            if (c.trunc_J + 1 > c.grid.L)
                rd.fail("grid.L", "truncated symbol leaves the box: need L >= " + std::to_string(c.trunc_J + 1));
        } catch (const std::exception& e) {
            rd.fail("truncation", e.what());
        }
    }
    if (xb && c.grid.L > 0 && (c.grid.d == 1 || c.grid.d == 2) && c.grid.n_multiple >= 1) {
        std::vector<double> alphas = c.alpha;
        if (c.kind == ExperimentKind::separation_decay) alphas = {c.alpha_fixed};
        std::vector<double> Ls{c.grid.L};
        if (c.kind == ExperimentKind::two_discontinuities && !c.boxes.empty()) Ls = c.boxes;
        for (double L : Ls)
            for (double a : alphas) {
                if (!(a > 0.0)) continue;
                Grid g(1, 1.0, 1);
                try {
                    g = c.kind == ExperimentKind::two_discontinuities ? box_rule(c, L).grid_for(a) : c.grid.grid_for(a);
                } catch (const std::exception& e) {
                    rd.fail("grid", e.what());
                    continue;
                }
                if (!spatial_resolution_ok(*xb, a, g)) {
                    std::ostringstream os;
                    os << "spatial resolution too coarse at alpha=" << a << " (L=" << L << "): need n >= "
                       << required_points_per_axis(*xb, a, L) << " points per axis, have " << g.n_per_axis();
                    rd.fail("grid.n", os.str());
                }
                if (c.xi.n > 0) {
                    XiQuadrature q;
                    q.d = c.grid.d;
                    q.ball = *xb;
                    q.n = c.xi.n;
                    try {
                        q.check(a, g);
                    } catch (const ResolutionError& e) {
                        std::ostringstream os;
                        os << "Nyquist guard alpha*dxi*diam <= pi violated at alpha=" << a << ": need n_xi >= "
                           << e.required();
                        rd.fail("xi_quadrature.n", os.str());
                    }
                }
            }
    }

    switch (c.kind) {
        case ExperimentKind::quantization_difference:
            for (const auto& [s, t] : c.pairs)
                if (!(s >= 0 && s <= 1 && t >= 0 && t <= 1)) rd.fail("pairs", "quantization parameters must lie in [0, 1]");
            break;
        case ExperimentKind::separation_decay: {
            if (c.r.size() < 2) rd.fail("r", "needs at least two separations");
            for (double r : c.r) {
                if (!(r > 0.0)) rd.fail("r", "supports of the weights overlap (r <= 0)");
                else if (r < 1.0) rd.fail("r", "separation below the r >= 1 threshold");
                else if (r / 2.0 + c.weight_width >= c.grid.L) rd.fail("r", "weight supports leave the box at r=" + std::to_string(r));
            }
            if (c.weights != "halflines" && c.weights != "intervals") rd.fail("weights", "must be halflines or intervals");
            if (c.weights == "intervals" && !(c.weight_width > 0.0)) rd.fail("weight_width", "must be positive for intervals");
            if (c.m < 0) rd.fail("m", "must be nonnegative");
            if (!(c.alpha_fixed > 0.0)) rd.fail("alpha_fixed", "must be positive");
            if (c.xi_only_symbol) {
                try {
                    builtin_symbol(c.xi_only_symbol->name, c.xi_only_symbol->params);
                } catch (const std::exception& e) {
                    rd.fail("xi_only_symbol.family", e.what());
                }
            }
            break;
        }
        case ExperimentKind::hankel_one_variable:
            if (!c.domain) rd.fail("domain", "required");
            if (c.t != 0.0 && c.t != 1.0 && !c.exploratory)
                rd.fail("t", "the one-variable discontinuity bound covers t = 0 or 1 only (set exploratory to run anyway)");
            for (const auto& v : c.variants)
                if (v != "sandwich" && v != "projection" && v != "commutator") rd.fail("variants", "unknown variant '" + v + "'");
            if (std::count(c.variants.begin(), c.variants.end(), "projection") && !c.omega)
                rd.fail("omega", "required by the projection variant");
            if (c.as_amplitude) rd.fail("as_amplitude", "not supported for this experiment");
            break;
        case ExperimentKind::two_discontinuities:
            if (!c.domain) rd.fail("domain", "required");
            if (!c.omega) rd.fail("omega", "required");
            else if (!c.omega->region.bounded()) rd.fail("omega", "must be bounded");
            if (c.xi_integration != "exact") rd.fail("xi_integration", "sampled indicators are rejected; use exact");
            for (double a : c.alpha)
                if (a < 2.0) rd.fail("alpha", "values below 2 are outside the two-discontinuity law");
            if (c.alpha.size() < 3) rd.fail("alpha", "needs at least 3 values");
            if (!(c.theta > 0.0)) rd.fail("theta", "must be positive");
            for (double L : c.boxes)
                if (!(L > 0.0)) rd.fail("boxes", "box half-widths must be positive");
            if (c.t != 0.0 && c.t != 1.0 && !c.exploratory) rd.fail("t", "must be 0 or 1 (set exploratory to run anyway)");
            break;
        case ExperimentKind::noncompact_symbol:
            if (c.symbol && c.symbol->name != "poly_decay") rd.fail("symbol.family", "must be poly_decay");
            if (c.symbol) {
                const double dq = c.grid.d / c.q;
                auto g = [&](const char* k) {
                    auto it = c.symbol->params.find(k);
                    return it == c.symbol->params.end() ? 3.0 : it->second;
                };
                if (!(g("gamma1") > dq)) rd.fail("symbol.params.gamma1", "must exceed d/q");
                if (!(g("gamma2") > dq)) rd.fail("symbol.params.gamma2", "must exceed d/q");
            }
            if (c.trunc_J < 0 || c.trunc_S < 0) rd.fail("truncation", "J and S must be nonnegative");
            if (!(c.tail_target > 0.0)) rd.fail("tail_target", "must be positive");
            break;
        case ExperimentKind::bound_ratio:
            if (c.family_size < 2) rd.fail("family_size", "must be >= 2");
            if (c.grid.d != 1) rd.fail("grid.d", "randomized families are d = 1");
            for (const auto& f : c.functionals)
                if (f != "fourier" && f != "Q" && f != "P" && f != "F" && f != "bs_kernel")
                    rd.fail("functionals", "unknown functional '" + f + "'");
            if (c.cube_points < 1) rd.fail("cube_points", "must be >= 1");
            break;
        default:
            break;
    }
}

ExperimentConfig read(const json& j, std::vector<std::string>& errors) {
    Reader rd;
    ExperimentConfig c;
    c.raw = j;
    if (!j.is_object()) {
        errors.push_back("config: must be a JSON object");
        return c;
    }
    rd.allow(j, "",
             {"schema_version", "kind", "name", "description", "seed", "q", "tolerance", "symbol", "as_amplitude", "t", "T",
              "alpha", "r", "grid", "xi_quadrature", "tail_cut", "workers", "pairs", "alpha_fixed", "m", "weights",
              "weight_width", "xi_only_symbol", "domain", "variants", "omega", "exploratory", "boxes", "theta",
              "xi_integration", "consistency_tol", "truncation", "tail_target", "family_size", "functionals",
              "cube_points"});
    if (auto v = rd.integer(j, "schema_version", "schema_version"); v && *v != kConfigSchema)
        rd.fail("schema_version", "unsupported version " + std::to_string(*v));
    auto kind = rd.string(j, "kind", "kind");
    if (!kind) rd.fail("kind", "required");
    else if (auto k = kind_from_string(*kind)) c.kind = *k;
    else rd.fail("kind", "unknown experiment kind '" + *kind + "'");
    c.name = rd.string(j, "name", "name").value_or(kind.value_or("experiment"));
    if (c.name.empty() || c.name.find('/') != std::string::npos) rd.fail("name", "must be a plain file stem");
    if (auto v = rd.number(j, "seed", "seed")) {
        if (*v < 0 || *v != std::floor(*v)) rd.fail("seed", "must be a nonnegative integer");
        else c.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = rd.number(j, "q", "q")) {
        c.q = *v;
        if (!(c.q > 0.0 && c.q <= 1.0)) rd.fail("q", "must lie in (0, 1]");
    } else {
        rd.fail("q", "required");
    }
    c.tolerance = rd.number(j, "tolerance", "tolerance");
    c.symbol = rd.fixture(j, "symbol", "symbol", "family");
    c.as_amplitude = rd.boolean(j, "as_amplitude", "as_amplitude").value_or(false);
    c.t = rd.number(j, "t", "t").value_or(0.0);
    if (j.contains("T")) {
        const auto& T = j.at("T");
        if (!T.is_array() || T.size() != 2 || !T[0].is_array() || !T[1].is_array() || T[0].size() != 2 || T[1].size() != 2)
            rd.fail("T", "must be [[t11, t12], [t21, t22]]");
        else
            c.T = std::array<double, 4>{T[0][0].get<double>(), T[0][1].get<double>(), T[1][0].get<double>(),
                                        T[1][1].get<double>()};
    }
    if (j.contains("alpha")) {
        const auto& a = j.at("alpha");
        if (a.is_object()) {
            rd.allow(a, "alpha", {"start", "factor", "count"});
            const double s = rd.number(a, "start", "alpha.start").value_or(0.0);
            const double f = rd.number(a, "factor", "alpha.factor").value_or(2.0);
            const int n = rd.integer(a, "count", "alpha.count").value_or(5);
            if (!(s > 0) || !(f > 1) || n < 1 || n > 64) rd.fail("alpha", "geometric sweep needs start > 0, factor > 1, 1 <= count <= 64");
            else
                for (int i = 0; i < n; ++i) c.alpha.push_back(s * std::pow(f, i));
        } else {
            c.alpha = rd.numbers(j, "alpha", "alpha");
        }
    }
    c.r = rd.numbers(j, "r", "r");
    if (j.contains("grid")) {
        const auto& g = j.at("grid");
        rd.allow(g, "grid", {"d", "L", "n", "n_min", "n_per_alpha", "n_multiple"});
        c.grid.d = rd.integer(g, "d", "grid.d").value_or(1);
        c.grid.L = rd.number(g, "L", "grid.L").value_or(2.0);
        c.grid.n = rd.integer(g, "n", "grid.n").value_or(0);
        c.grid.n_min = rd.integer(g, "n_min", "grid.n_min").value_or(0);
        c.grid.n_per_alpha = rd.number(g, "n_per_alpha", "grid.n_per_alpha").value_or(0.0);
        c.grid.n_multiple = rd.integer(g, "n_multiple", "grid.n_multiple").value_or(1);
        if (c.grid.n < 0 || c.grid.n_min < 0 || c.grid.n_per_alpha < 0) rd.fail("grid", "sizes must be nonnegative");
    } else {
        rd.fail("grid", "required");
    }
    if (j.contains("xi_quadrature")) {
        const auto& x = j.at("xi_quadrature");
        rd.allow(x, "xi_quadrature", {"safety", "n"});
        c.xi.safety = rd.number(x, "safety", "xi_quadrature.safety").value_or(4.0);
        c.xi.n = rd.integer(x, "n", "xi_quadrature.n").value_or(0);
    }
    c.tail_cut = rd.number(j, "tail_cut", "tail_cut").value_or(1e-10);
    c.workers = rd.integer(j, "workers", "workers").value_or(1);
    if (j.contains("pairs")) {
        const auto& p = j.at("pairs");
        bool ok = p.is_array();
        if (ok)
            for (const auto& e : p) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) ok = false;
                else c.pairs.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
        if (!ok) rd.fail("pairs", "must be a list of [s, t] pairs");
    } else if (c.kind == ExperimentKind::quantization_difference) {
        c.pairs = {{0.0, 1.0}, {0.0, 0.5}};
    }
    c.alpha_fixed = rd.number(j, "alpha_fixed", "alpha_fixed").value_or(8.0);
    c.m = rd.integer(j, "m", "m").value_or(3);
    c.weights = rd.string(j, "weights", "weights").value_or("halflines");
    c.weight_width = rd.number(j, "weight_width", "weight_width").value_or(0.0);
    c.xi_only_symbol = rd.fixture(j, "xi_only_symbol", "xi_only_symbol", "family");
    c.domain = rd.fixture(j, "domain", "domain", "name");
    if (j.contains("variants")) {
        if (!j.at("variants").is_array()) rd.fail("variants", "must be a list of strings");
        else
            for (const auto& v : j.at("variants")) {
                if (v.is_string()) c.variants.push_back(v.get<std::string>());
                else rd.fail("variants", "must be a list of strings");
            }
    }
    if (c.variants.empty()) c.variants = {"sandwich"};
    if (j.contains("omega")) c.omega = read_region(rd, j.at("omega"), "omega", c.grid.d);
    c.exploratory = rd.boolean(j, "exploratory", "exploratory").value_or(false);
    c.boxes = rd.numbers(j, "boxes", "boxes");
    if (c.boxes.empty()) c.boxes = {c.grid.L};
    c.theta = rd.number(j, "theta", "theta").value_or(1.0);
    c.xi_integration = rd.string(j, "xi_integration", "xi_integration").value_or("exact");
    c.consistency_tol = rd.number(j, "consistency_tol", "consistency_tol").value_or(0.1);
    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        rd.allow(t, "truncation", {"J", "S"});
        c.trunc_J = rd.integer(t, "J", "truncation.J").value_or(3);
        c.trunc_S = rd.integer(t, "S", "truncation.S").value_or(3);
    }
    c.tail_target = rd.number(j, "tail_target", "tail_target").value_or(1e-6);
    c.family_size = rd.integer(j, "family_size", "family_size").value_or(50);
    if (j.contains("functionals")) {
        if (!j.at("functionals").is_array()) rd.fail("functionals", "must be a list of strings");
        else
            for (const auto& v : j.at("functionals")) {
                if (v.is_string()) c.functionals.push_back(v.get<std::string>());
                else rd.fail("functionals", "must be a list of strings");
            }
    }
    if (c.functionals.empty()) c.functionals = {"fourier", "Q", "P", "F", "bs_kernel"};
    c.cube_points = rd.integer(j, "cube_points", "cube_points").value_or(4);
    if (rd.errors.empty()) check_semantics(rd, c);
    errors = rd.errors;
    return c;
}

}  // namespace

std::string to_string(ExperimentKind k) {
    for (const auto& [kk, s] : kind_names())
        if (kk == k) return s;
    return "?";
}

std::optional<ExperimentKind> kind_from_string(const std::string& s) {
    for (const auto& [k, n] : kind_names())
        if (n == s) return k;
    return std::nullopt;
}

std::vector<std::string> experiment_kinds() {
    std::vector<std::string> v;
    for (const auto& [k, n] : kind_names()) v.push_back(n);
    return v;
}

int GridRule::n_for(double alpha) const {
    if (n > 0) return n;
    const int mult = std::max(1, n_multiple);
    const int raw = static_cast<int>(std::ceil(n_per_alpha * alpha / mult - 1e-9)) * mult;
    return std::max(n_min, raw);
}

Grid GridRule::grid_for(double alpha) const { return Grid(d, L, n_for(alpha)); }

GridRule box_rule(const ExperimentConfig& c, double L) {
    GridRule g = c.grid;
    g.L = L;
    if (g.n == 0 && g.n_per_alpha == 0.0) g.n_per_alpha = 2.0 * L / c.theta;
    return g;
}

Grid GridRule::grid_for(double alpha, double L_override) const {
    GridRule g = *this;
    g.L = L_override;
    return g.grid_for(alpha);
}

ConfigError::ConfigError(std::vector<std::string> v) : Error("invalid config: " + join(v)), violations(std::move(v)) {}

std::vector<std::string> validate_config(const json& j) {
    std::vector<std::string> errors;
    read(j, errors);
    return errors;
}

ExperimentConfig parse_config(const json& j) {
    std::vector<std::string> errors;
    ExperimentConfig c = read(j, errors);
    if (!errors.empty()) throw ConfigError(errors);
    return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError({"config: cannot read '" + path + "'"});
    json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw ConfigError({std::string("config: not valid JSON (") + e.what() + ")"});
    }
    return parse_config(j);
}

}  // namespace psido
