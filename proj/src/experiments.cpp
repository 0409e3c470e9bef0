#include <algorithm>
#include <chrono>
#include <cmath>
#include <mutex>
#include <random>
#include <sstream>

#include "psido/functionals.hpp"
#include "psido/harness.hpp"
#include "psido/schatten.hpp"

namespace psido {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Ctx {
    explicit Ctx(const ExperimentConfig& cfg) : c(cfg) {}
    const ExperimentConfig& c;
    int workers = 1;
    std::uint64_t seed = 0;
    std::function<void(const std::string&)> log;
    std::mutex mu;
    std::vector<std::string> warnings;

    void say(const std::string& s) {
        if (log) {
            std::lock_guard<std::mutex> g(mu);
            log(s);
        }
    }
    void warn(const std::string& s) {
        std::lock_guard<std::mutex> g(mu);
        if (std::find(warnings.begin(), warnings.end(), s) == warnings.end()) warnings.push_back(s);
    }
};

std::string num(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

double param(const FixtureRef& f, const std::string& k, double def) {
    auto it = f.params.find(k);
    return it == f.params.end() ? def : it->second;
}

std::optional<Ball> xi_ball(const AnySpec& s) {
    if (auto* a = std::get_if<SymbolSpec>(&s)) return a->support ? std::optional<Ball>(a->support->xi) : a->windows.xi;
    const auto& p = std::get<AmplitudeSpec>(s);
    return p.support ? std::optional<Ball>(p.support->xi) : p.windows.xi;
}

int spec_dim(const AnySpec& s) {
    return std::holds_alternative<SymbolSpec>(s) ? std::get<SymbolSpec>(s).d : std::get<AmplitudeSpec>(s).d;
}

XiQuadrature quadrature(const ExperimentConfig& c, const AnySpec& s, double alpha, const Grid& g) {
    const auto b = xi_ball(s);
    if (!b) throw InvalidArgument("fixture has no xi support or window");
    if (!spatial_resolution_ok(*b, alpha, g))
        throw ResolutionError("grid too coarse for the kernel at alpha=" + num(alpha) + ": need n >= " +
                                  std::to_string(required_points_per_axis(*b, alpha, g.half_width())),
                              required_points_per_axis(*b, alpha, g.half_width()));
    if (c.xi.n > 0) {
        XiQuadrature q;
        q.d = spec_dim(s);
        q.ball = *b;
        q.n = c.xi.n;
        q.check(alpha, g);
        return q;
    }
    return XiQuadrature::for_alpha(spec_dim(s), *b, alpha, g, c.xi.safety);
}

// Op_{alpha,t}(a), or the amplitude operator when T is set, the fixture is an amplitude, or
// as_amplitude is requested.
OperatorMatrix assemble(const ExperimentConfig& c, const AnySpec& s, double t, double alpha, const Grid& g,
                        const std::optional<Window>& w = std::nullopt) {
    const XiQuadrature q = quadrature(c, s, alpha, g);
    if (auto* a = std::get_if<SymbolSpec>(&s)) {
        if (!c.T && !c.as_amplitude) return assemble_t_quant(*a, t, alpha, g, q, w);
        const TMatrix T = c.T ? TMatrix((*c.T)[0], (*c.T)[1], (*c.T)[2], (*c.T)[3]) : t_to_matrix(t);
        return assemble_amplitude(as_amplitude(*a), T, alpha, g, q, w);
    }
    const TMatrix T = c.T ? TMatrix((*c.T)[0], (*c.T)[1], (*c.T)[2], (*c.T)[3]) : t_to_matrix(t);
    return assemble_amplitude(std::get<AmplitudeSpec>(s), T, alpha, g, q, w);
}

struct Measured {
    double value = 0.0;
    double tail_qmass = 0.0;
    double sensitivity = 0.0;
    bool zero = true;
};

Measured measure(const Eigen::MatrixXcd& M, const std::string& src, double q, double cut) {
    const SingularSpectrum s = singular_values(M, src);
    const QNorm base = qnorm(s, q, cut);
    Measured m;
    m.zero = base.zero;
    if (m.zero) return m;
    m.value = base.value;
    m.tail_qmass = base.tail_qmass;
    const double c0 = cut > 0.0 ? cut : 1e-16;
    for (double cc : {10.0 * c0, 0.1 * c0})
        m.sensitivity = std::max(m.sensitivity, std::abs(qnorm(s, q, std::min(cc, 0.5)).value - base.value) / base.value);
    return m;
}

Row to_row(double param, const Measured& m) {
    Row r;
    r.param = param;
    r.value = m.value;
    r.tail_qmass = m.tail_qmass;
    r.tail_sensitivity = m.zero ? kNaN : m.sensitivity;
    return r;
}

void warn_matrix(Ctx& ctx, const OperatorMatrix& M) {
    for (const auto& w : M.warnings) ctx.warn(w);
}

// Rows sorted by parameter; fit when every value is positive, else the series is degenerate.
void finish_series(Series& s, bool fit = true) {
    std::sort(s.rows.begin(), s.rows.end(), [](const Row& a, const Row& b) { return a.param < b.param; });
    bool positive = !s.rows.empty();
    bool all_zero = true;
    for (const auto& r : s.rows) {
        if (!(r.value > 0.0)) positive = false;
        if (r.value != 0.0) all_zero = false;
    }
    if (all_zero) {
        s.degenerate = true;
        s.notes.push_back("all measured norms are zero");
        return;
    }
    if (!fit) return;
    if (!positive) {
        s.notes.push_back("slope not fitted: some values are zero");
        return;
    }
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : s.rows) pts.emplace_back(r.param, r.value);
    if (pts.size() >= 2) s.fit = fit_loglog_slope(pts);
}

// max ratio over the whole sweep divided by the max over its first half.
double ratio_growth(const std::vector<Row>& rows) {
    if (rows.size() < 2) return kNaN;
    const std::size_t half = rows.size() / 2;
    double a = 0.0, b = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (std::isnan(rows[i].ratio)) continue;
        b = std::max(b, rows[i].ratio);
        if (i < half) a = std::max(a, rows[i].ratio);
    }
    if (!(a > 0.0)) return kNaN;
    return b / a;
}

void slope_checks(Report& r, const Series& s, double tol) {
    if (s.degenerate) return;
    if (!s.fit || !s.predicted) {
        r.checks.push_back(make_check("slope[" + s.label + "]", kNaN, "<=", tol));
        return;
    }
    r.checks.push_back(make_check("slope_error[" + s.label + "]", std::abs(s.fit->slope - *s.predicted), "<=", tol));
}

void ratio_check(Report& r, const Series& s) {
    if (s.degenerate) return;
    r.checks.push_back(make_check("ratio_growth[" + s.label + "]", ratio_growth(s.rows), "<", 2.0));
}

void tail_check(Report& r, const Series& s, double limit = 0.02) {
    if (s.degenerate) return;
    double m = 0.0;
    for (const auto& row : s.rows)
        if (!std::isnan(row.tail_sensitivity)) m = std::max(m, row.tail_sensitivity);
    r.checks.push_back(make_check("tail_sensitivity[" + s.label + "]", m, "<", limit));
}

Report start(const ExperimentConfig& c, Ctx& ctx) {
    Report r;
    r.kind = to_string(c.kind);
    r.name = c.name;
    r.seed = ctx.seed;
    r.config = c.raw;
    r.exploratory = c.exploratory;
    return r;
}

void finish_report(Report& r, Ctx& ctx) {
    // warnings arrive in thread order
    std::sort(ctx.warnings.begin(), ctx.warnings.end());
    r.warnings.insert(r.warnings.end(), ctx.warnings.begin(), ctx.warnings.end());
    if (!r.series.empty())
        r.degenerate = std::all_of(r.series.begin(), r.series.end(), [](const Series& s) { return s.degenerate; });
    r.verdict = compute_verdict(r);
}

double slope_tol(const ExperimentConfig& c, double def) { return c.tolerance.value_or(def); }

std::vector<double> sorted(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v;
}

double scale_of(const ExperimentConfig& c) {
    if (!c.symbol) return 1.0;
    return param(*c.symbol, "ell", 1.0) * param(*c.symbol, "rho", 1.0);
}

// N^{(n1,n2)} of the fixture (N^{(n,n,n2)} for amplitudes); NaN with a warning when unavailable.
double fixture_norm(Ctx& ctx, const AnySpec& s, int n1, int n2) {
    const double ell = param(*ctx.c.symbol, "ell", 1.0), rho = param(*ctx.c.symbol, "rho", 1.0);
    try {
        if (auto* a = std::get_if<SymbolSpec>(&s)) return norm_N(*a, n1, n2, ell, rho);
        return norm_N(std::get<AmplitudeSpec>(s), n1, n1, n2, ell, rho);
    } catch (const std::exception& e) {
        ctx.warn(std::string("bound norm unavailable: ") + e.what());
        return kNaN;
    }
}

Report smooth_scaling(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const AnySpec s = builtin_family(c.symbol->name, c.symbol->params);
    const int d = spec_dim(s);
    const Orders ord = smoothness_orders(d, c.q);
    const double N = fixture_norm(ctx, s, ord.n, ord.n);
    const double lr = scale_of(c);
    const auto alphas = sorted(c.alpha);

    Series ser;
    ser.label = c.as_amplitude || std::holds_alternative<AmplitudeSpec>(s) ? "amplitude" : "t=" + num(c.t);
    ser.predicted = d / c.q;
    ser.predicted_source = "compact smooth symbol bound C (alpha l rho)^{d/q} N^{(n,n)}";
    ser.rows = parallel_map<Row>(alphas.size(), ctx.workers, [&](std::size_t i) {
        const double a = alphas[i];
        const Grid g = c.grid.grid_for(a);
        const OperatorMatrix M = assemble(c, s, c.t, a, g);
        warn_matrix(ctx, M);
        Row row = to_row(a, measure(M.entries, M.provenance, c.q, c.tail_cut));
        row.bound = std::pow(a * lr, d / c.q) * N;
        row.ratio = row.bound > 0.0 ? row.value / row.bound : kNaN;
        row.extra["n"] = g.n_per_axis();
        ctx.say("alpha=" + num(a) + " norm=" + num(row.value));
        return row;
    });
    ser.notes.push_back("bound column (alpha l rho)^{d/q} N^{(n,n)} with n=" + std::to_string(ord.n));
    finish_series(ser);
    slope_checks(r, ser, slope_tol(c, c.q == 1.0 ? 0.1 : 0.15));
    tail_check(r, ser);
    ratio_check(r, ser);
    r.series.push_back(std::move(ser));
    finish_report(r, ctx);
    return r;
}

Report quantization_difference(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const AnySpec s = builtin_family(c.symbol->name, c.symbol->params);
    const int d = spec_dim(s);
    const Orders ord = smoothness_orders(d, c.q);
    const double N = fixture_norm(ctx, s, ord.n, ord.n + 1);
    const double lr = scale_of(c);
    const auto alphas = sorted(c.alpha);
    for (const auto& [s0, t0] : c.pairs) {
        const double sq = s0, tq = t0;
        Series ser;
        ser.label = "t=" + num(tq) + " minus s=" + num(sq);
        ser.predicted = d / c.q - 1.0;
        ser.predicted_source = "quantization difference bound C (alpha l rho)^{d/q-1} N^{(n,n+1)}";
        ser.rows = parallel_map<Row>(alphas.size(), ctx.workers, [&](std::size_t i) {
            const double a = alphas[i];
            const Grid g = c.grid.grid_for(a);
            Row row;
            if (sq == tq) {
                row.param = a;
                row.value = 0.0;
            } else {
                const OperatorMatrix A = assemble(c, s, tq, a, g);
                const OperatorMatrix B = assemble(c, s, sq, a, g);
                warn_matrix(ctx, A);
                row = to_row(a, measure(A.entries - B.entries, "difference", c.q, c.tail_cut));
            }
            row.bound = std::pow(a * lr, d / c.q - 1.0) * N;
            row.ratio = row.bound > 0.0 ? row.value / row.bound : kNaN;
            row.extra["n"] = g.n_per_axis();
            ctx.say(ser.label + " alpha=" + num(a) + " norm=" + num(row.value));
            return row;
        });
        finish_series(ser);
        if (sq == tq) ser.notes.push_back("s = t: the difference vanishes identically");
        slope_checks(r, ser, slope_tol(c, 0.15));
        tail_check(r, ser);
        ratio_check(r, ser);
        r.series.push_back(std::move(ser));
    }
    finish_report(r, ctx);
    return r;
}

// Rows left of -r/2 and columns right of r/2 along the first axis.
Window separated(const ExperimentConfig& c, const Grid& g, double r) {
    Window w;
    const double lo = c.weights == "intervals" ? -r / 2.0 - c.weight_width : -kInf;
    const double hi = c.weights == "intervals" ? r / 2.0 + c.weight_width : kInf;
    for (Index i = 0; i < g.size(); ++i) {
        const double x = g.point(i)[0];
        if (x < -r / 2.0 && x > lo) w.rows.push_back(i);
        if (x > r / 2.0 && x < hi) w.cols.push_back(i);
    }
    return w;
}

Report separation_decay(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const double a = c.alpha_fixed;
    const Grid g = c.grid.grid_for(a);
    const auto rs = sorted(c.r);
    std::vector<std::pair<std::string, FixtureRef>> fixtures{{"symbol", *c.symbol}};
    if (c.xi_only_symbol) fixtures.emplace_back("xi_only", *c.xi_only_symbol);
    for (const auto& [label, f] : fixtures) {
        const AnySpec s = builtin_family(f.name, f.params);
        const int d = spec_dim(s);
        Series ser;
        ser.label = label;
        ser.predicted = d / c.q - c.m;
        ser.predicted_source = label == "symbol" ? "separated supports bound r^{d/q-m}"
                                                 : "one-dimensional xi-only symbol bound r^{d/q-m}";
        ser.rows = parallel_map<Row>(rs.size(), ctx.workers, [&](std::size_t i) {
            const double rr = rs[i];
            const OperatorMatrix M = assemble(c, s, c.t, a, g, separated(c, g, rr));
            warn_matrix(ctx, M);
            Row row = to_row(rr, measure(M.entries, M.provenance, c.q, c.tail_cut));
            row.bound = std::pow(rr, d / c.q - c.m);
            row.ratio = row.value / row.bound;
            ctx.say(label + " r=" + num(rr) + " norm=" + num(row.value));
            return row;
        });
        ser.notes.push_back("alpha=" + num(a) + ", m=" + std::to_string(c.m) + ", weights=" + c.weights);
        finish_series(ser);
        slope_checks(r, ser, slope_tol(c, 0.3));
        ratio_check(r, ser);
        r.series.push_back(std::move(ser));
    }
    finish_report(r, ctx);
    return r;
}

// Region intersected with the box |xi - center|_inf <= R.
XiRegion clip_region(const XiRegion& reg, const Point& center, double R) {
    if (reg.d == 1) {
        return XiRegion::interval(std::max(reg.lo, center[0] - R), std::min(reg.hi, center[0] + R));
    }
    XiRegion out = reg;
    out.half_planes.push_back({{1.0, 0.0}, center[0] - R});
    out.half_planes.push_back({{-1.0, 0.0}, -(center[0] + R)});
    out.half_planes.push_back({{0.0, 1.0}, center[1] - R});
    out.half_planes.push_back({{0.0, -1.0}, -(center[1] + R)});
    return out;
}

double relative_defect(const Eigen::MatrixXcd& P) {
    const double n = P.norm();
    if (n == 0.0) return 0.0;
    return (P * P - P).norm() / n;
}

Window complement_split(const LipschitzDomain& D, const Grid& g) {
    Window w = Window::split(D, g);
    std::swap(w.rows, w.cols);
    return w;
}

Report hankel_one_variable(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const SymbolSpec a = builtin_symbol(c.symbol->name, c.symbol->params);
    const AnySpec s = a;
    const LipschitzDomain D = domain_fixture(c.domain->name, c.domain->params);
    const int d = a.d;
    const auto alphas = sorted(c.alpha);
    const double tol = slope_tol(c, d == 1 ? 0.15 : 0.2);
    const Orders ord = smoothness_orders(d, c.q);
    const double N_x = fixture_norm(ctx, s, ord.n, ord.m), N_xi = fixture_norm(ctx, s, ord.m, ord.n);
    const double lr = scale_of(c);
    std::optional<XiRegion> omega;
    if (c.omega) {
        const Ball b = *xi_ball(s);
        omega = clip_region(c.omega->region, b.center, b.radius * 2.0);
    }
    for (const auto& v : c.variants) {
        Series ser;
        ser.label = v;
        ser.predicted = (d - 1) / c.q;
        ser.predicted_source = v == "commutator" ? "one-variable discontinuity bound alpha^{(d-1)/q}, commutator form"
                                                 : "one-variable discontinuity bound alpha^{(d-1)/q}";
        std::vector<double> margins(alphas.size(), kNaN);
        ser.rows = parallel_map<Row>(alphas.size(), ctx.workers, [&](std::size_t i) {
            const double al = alphas[i];
            const Grid g = c.grid.grid_for(al);
            Row row;
            if (v == "sandwich") {
                const OperatorMatrix M = assemble(c, s, c.t, al, g, Window::split(D, g));
                warn_matrix(ctx, M);
                row = to_row(al, measure(M.entries, M.provenance, c.q, c.tail_cut));
            } else if (v == "projection") {
                const OperatorMatrix A = assemble(c, s, c.t, al, g);
                const OperatorMatrix P = assemble_multiplier(XiSymbol::indicator(*omega), al, g);
                warn_matrix(ctx, A);
                Eigen::MatrixXcd Q = -P.entries;
                Q.diagonal().array() += 1.0;
                row = to_row(al, measure(P.entries * A.entries * Q, "frequency-side sandwich", c.q, c.tail_cut));
                row.defect = relative_defect(P.entries);
            } else {
                const OperatorMatrix A = assemble(c, s, c.t, al, g);
                warn_matrix(ctx, A);
                const OperatorMatrix Pi = indicator_diag(D, g);
                const OperatorMatrix C = commutator(A, Pi);
                row = to_row(al, measure(C.entries, C.provenance, c.q, c.tail_cut));
                const auto s1 = qnorm(singular_values(restrict_to(A, Window::split(D, g))), c.q, c.tail_cut);
                const auto s2 = qnorm(singular_values(restrict_to(A, complement_split(D, g))), c.q, c.tail_cut);
                const double lhs = std::pow(row.value, c.q);
                const double rhs = std::pow(s1.value, c.q) + std::pow(s2.value, c.q);
                margins[i] = rhs > 0.0 ? (rhs - lhs) / rhs : (lhs == 0.0 ? 0.0 : -1.0);
                row.extra["sandwich_qsum"] = rhs;
            }
            row.bound = std::pow(al * lr, (d - 1) / c.q) * (v == "projection" ? N_xi : N_x);
            row.ratio = row.bound > 0.0 ? row.value / row.bound : kNaN;
            row.extra["n"] = g.n_per_axis();
            ctx.say(v + " alpha=" + num(al) + " norm=" + num(row.value));
            return row;
        });
        ser.notes.push_back(v == "projection" ? "bound column (alpha l rho)^{(d-1)/q} N^{(m,n)}"
                                              : "bound column (alpha l rho)^{(d-1)/q} N^{(n,m)}");
        finish_series(ser);
        slope_checks(r, ser, tol);
        ratio_check(r, ser);
        if (v == "commutator" && !ser.degenerate) {
            double m = kInf;
            for (double x : margins) m = std::min(m, x);
            r.checks.push_back(make_check("commutator_split_margin", m, ">=", -1e-10));
        }
        r.series.push_back(std::move(ser));
    }
    if (c.exploratory) r.warnings.push_back("t outside {0, 1}: the discontinuity bound is not proven here");
    finish_report(r, ctx);
    return r;
}

Report two_discontinuities(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const LipschitzDomain D = domain_fixture(c.domain->name, c.domain->params);
    const int d = D.dim();
    const XiSymbol proj = XiSymbol::indicator(c.omega->region);
    std::optional<AnySpec> s;
    if (c.symbol) s = builtin_family(c.symbol->name, c.symbol->params);
    const auto alphas = sorted(c.alpha);
    const auto boxes = sorted(c.boxes);
    const double tol = slope_tol(c, 0.2);
    const std::size_t na = alphas.size();

    const auto cells = parallel_map<Row>(boxes.size() * na, ctx.workers, [&](std::size_t k) {
        const double L = boxes[k / na], al = alphas[k % na];
        const Grid g = box_rule(c, L).grid_for(al);
        const Window sp = Window::split(D, g);
        Measured m;
        if (s) {
            Window left{sp.rows, Window::full(g).rows};
            Window right{Window::full(g).rows, sp.cols};
            const OperatorMatrix A = assemble(c, *s, c.t, al, g, left);
            const OperatorMatrix P = assemble_multiplier(proj, al, g, std::nullopt, right);
            warn_matrix(ctx, A);
            m = measure(A.entries * P.entries, "symbol projection sandwich", c.q, c.tail_cut);
        } else {
            const OperatorMatrix P = assemble_multiplier(proj, al, g, std::nullopt, sp);
            m = measure(P.entries, P.provenance, c.q, c.tail_cut);
        }
        Row row = to_row(al, m);
        const double law = std::pow(al, d - 1) * std::log(al);
        row.bound = law;
        row.ratio = std::pow(row.value, c.q) / law;
        row.extra["norm_q_power"] = std::pow(row.value, c.q);
        row.extra["n"] = g.n_per_axis();
        const OperatorMatrix Pf = assemble_multiplier(proj, al, g);
        row.defect = relative_defect(Pf.entries);
        ctx.say("L=" + num(L) + " alpha=" + num(al) + " ratio=" + num(row.ratio));
        return row;
    });
    for (std::size_t b = 0; b < boxes.size(); ++b) {
        Series ser;
        ser.label = "L=" + num(boxes[b]);
        ser.predicted_source = "two-discontinuity law (alpha^{d-1} log alpha)^{1/q}; ratio column is norm^q over the law";
        for (std::size_t i = 0; i < na; ++i) ser.rows.push_back(cells[b * na + i]);
        finish_series(ser, false);
        if (!ser.degenerate) {
            double lo = kInf, hi = 0.0, mean = 0.0;
            for (const auto& row : ser.rows) {
                lo = std::min(lo, row.ratio);
                hi = std::max(hi, row.ratio);
                mean += row.ratio / ser.rows.size();
            }
            r.checks.push_back(make_check("ratio_variation[" + ser.label + "]", (hi - lo) / mean, "<", tol));
        }
        r.series.push_back(std::move(ser));
    }
    if (boxes.size() >= 2 && !r.series.front().degenerate) {
        double worst = 0.0, growth = 0.0;
        for (std::size_t i = 0; i < na; ++i) {
            double lo = kInf, hi = 0.0;
            for (std::size_t b = 0; b < boxes.size(); ++b) {
                lo = std::min(lo, cells[b * na + i].ratio);
                hi = std::max(hi, cells[b * na + i].ratio);
            }
            worst = std::max(worst, (hi - lo) / (0.5 * (hi + lo)));
            for (std::size_t b = 1; b < boxes.size(); ++b)
                growth = std::max(growth, cells[b * na + i].defect / cells[(b - 1) * na + i].defect);
        }
        r.checks.push_back(make_check("box_consistency", worst, "<", c.consistency_tol));
        r.checks.push_back(make_check("defect_ratio_larger_box", growth, "<", 1.0));
    }
    finish_report(r, ctx);
    return r;
}

// sum over |j|_inf <= R of (1 + |j|)^{-p}; R < 0 for the full lattice sum.
double lattice_power_sum(int d, double p, int R) {
    const bool full = R < 0;
    const int M = full ? (d == 1 ? 1000000 : 1500) : R;
    double s = 0.0;
    if (d == 1) {
        for (int k = M; k >= 1; --k) s += 2.0 * std::pow(1.0 + k, -p);
        s += 1.0;
        if (full) s += 2.0 * std::pow(1.0 + M, 1.0 - p) / (p - 1.0);
    } else {
        for (int i = -M; i <= M; ++i)
            for (int j = -M; j <= M; ++j) s += std::pow(1.0 + std::hypot(i, j), -p);
        if (full) s += 2.0 * kPi * std::pow(1.0 + M, 2.0 - p) / (p - 2.0);
    }
    return s;
}

Report noncompact_symbol(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const SymbolSpec a = builtin_symbol(c.symbol->name, c.symbol->params);
    const int d = a.d;
    const double A = param(*c.symbol, "A", 1.0);
    const double g1 = param(*c.symbol, "gamma1", 3.0), g2 = param(*c.symbol, "gamma2", 3.0);
    const SymbolSpec at = truncate_by_partition(a, c.trunc_J, c.trunc_S);
    const double inside = lattice_power_sum(d, g1 * c.q, c.trunc_J) / lattice_power_sum(d, g1 * c.q, -1) *
                          lattice_power_sum(d, g2 * c.q, c.trunc_S) / lattice_power_sum(d, g2 * c.q, -1);
    const double tail = 1.0 - inside;
    const auto alphas = sorted(c.alpha);
    const AnySpec s = at;
    Series ser;
    ser.label = "J=" + std::to_string(c.trunc_J) + " S=" + std::to_string(c.trunc_S);
    ser.predicted = d / c.q;
    ser.predicted_source = "non-compact decaying symbol bound C A alpha^{d/q}";
    ser.rows = parallel_map<Row>(alphas.size(), ctx.workers, [&](std::size_t i) {
        const double al = alphas[i];
        const Grid g = c.grid.grid_for(al);
        const OperatorMatrix M = assemble(c, s, c.t, al, g);
        warn_matrix(ctx, M);
        Row row = to_row(al, measure(M.entries, M.provenance, c.q, c.tail_cut));
        row.bound = std::abs(A) * std::pow(al, d / c.q);
        row.ratio = row.bound > 0.0 ? row.value / row.bound : kNaN;
        row.extra["n"] = g.n_per_axis();
        ctx.say("alpha=" + num(al) + " norm=" + num(row.value));
        return row;
    });
    ser.notes.push_back("partition-term bound tail fraction outside the truncation: " + num(tail));
    finish_series(ser);
    slope_checks(r, ser, slope_tol(c, 0.15));
    ratio_check(r, ser);
    r.checks.push_back(make_check("truncation_tail_fraction", tail, "<", c.tail_target, false));
    if (tail >= c.tail_target)
        r.warnings.push_back("truncation tail fraction " + num(tail) + " exceeds the target " + num(c.tail_target) +
                             "; a finite grid cannot hold the truncation the target needs");
    r.series.push_back(std::move(ser));
    finish_report(r, ctx);
    return r;
}

// ---- randomized bound-ratio families (d = 1) ----

struct Member {
    std::vector<GaussianComponent> comps;
    Point h1c{}, h2c{};
    double h1s = 1.0, h2s = 1.0;
    double t = 0.0;
    double S = 0.0;
    double fc = 0.0, gc = 0.0, fs = 1.0, gs = 1.0;
};

Member draw(std::uint64_t seed, std::size_t i) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
    std::mt19937_64 gen(sq);
    auto U = [&](double lo, double hi) { return lo + (hi - lo) * std::generate_canonical<double, 53>(gen); };
    Member m;
    const int K = 1 + static_cast<int>(gen() % 3);
    for (int k = 0; k < K; ++k) {
        GaussianComponent gc;
        gc.coef = cplx(U(-1, 1), U(-1, 1));
        gc.w_center = U(-2, 2);
        gc.w_scale = U(0.6, 1.5);
        gc.z_center = U(-1, 1);
        gc.z_scale = U(0.6, 1.5);
        gc.xi_center = U(-2, 2);
        gc.xi_scale = U(0.6, 1.5);
        m.comps.push_back(gc);
    }
    m.h1c = {U(-2, 2), 0.0};
    m.h2c = {U(-2, 2), 0.0};
    m.h1s = U(0.7, 2.0);
    m.h2s = U(0.7, 2.0);
    m.t = U(0, 1);
    m.S = U(-1, 1);
    m.fc = U(-2, 2);
    m.gc = U(-2, 2);
    m.fs = U(0.5, 1.5);
    m.gs = U(0.5, 1.5);
    return m;
}

double gauss(double x, double c, double s) {
    const double y = (x - c) / s;
    return std::exp(-y * y);
}

SymbolSpec mixture_symbol(const Member& m) {
    std::vector<SymbolTerm> terms;
    for (const auto& g : m.comps)
        terms.push_back({g.coef, gaussian_field(1, {g.w_center, 0.0}, g.w_scale), gaussian_field(1, {g.xi_center, 0.0}, g.xi_scale)});
    return make_symbol(1, std::move(terms), "gaussian_mixture_symbol");
}

// Lattice norm of a Gaussian weight over the cubes covering its 1e-12 window.
double weight_norm(double c, double s, double r, double delta, int pts) {
    LatticeNormParams p;
    p.r = r;
    p.delta = delta;
    p.cube_points = pts;
    p.ranges = {cube_range(c - 5.3 * s, c + 5.3 * s)};
    return lattice_qnorm([=](const double* x) { return gauss(x[0], c, s); }, 1, p).value;
}

LatticeNormParams field_params(const BoundField& F, double q, int pts, bool doubling) {
    LatticeNormParams p;
    p.r = 1.0;
    p.delta = q;
    p.cube_points = pts;
    for (const auto& [lo, hi] : F.extent) p.ranges.push_back(cube_range(lo, hi));
    p.doubling_check = doubling;
    return p;
}

Eigen::MatrixXcd weighted(const OperatorMatrix& M, const Grid& g, const GaussianWeight& h1, const GaussianWeight& h2) {
    Eigen::MatrixXcd W = M.entries;
    for (Index i = 0; i < W.rows(); ++i) W.row(i) *= gauss(g.point(i)[0], h1.center, h1.scale);
    for (Index j = 0; j < W.cols(); ++j) W.col(j) *= gauss(g.point(j)[0], h2.center, h2.scale);
    return W;
}

BoundRatio finish_ratio(double lhs, double rhs, double change) {
    BoundRatio o;
    o.lhs = lhs;
    o.rhs = rhs;
    o.ratio = rhs > 0.0 ? lhs / rhs : kNaN;
    o.change = change;
    return o;
}

}  // namespace

BoundRatio bs_kernel_ratio(const GaussianWeight& f, const GaussianWeight& g, double S, const RatioOptions& o) {
    Eigen::MatrixXd Sm(1, 1);
    Sm(0, 0) = S;
    const auto K = bs_kernel_operator([&](const Point& x) { return gauss(x[0], f.center, f.scale); },
                                      [&](const Point& y) { return gauss(y[0], g.center, g.scale); }, Sm, o.grid, o.grid);
    const double lhs = qnorm(singular_values(K), o.q, o.tail_cut).value;
    const double rhs = weight_norm(f.center, f.scale, 2.0, o.q, o.cube_points) * weight_norm(g.center, g.scale, 2.0, o.q, o.cube_points);
    return finish_ratio(lhs, rhs, kNaN);
}

BoundRatio symbol_ratio(const SymbolSpec& a, double t, const GaussianWeight& h1, const GaussianWeight& h2,
                        const RatioOptions& o) {
    if (a.d != 1) throw InvalidArgument("bound ratios are implemented for d = 1");
    const OperatorMatrix M = assemble_t_quant(a, t, 1.0, o.grid, default_quadrature(a, 1.0, o.grid, o.xi_safety));
    const double lhs = qnorm(singular_values(weighted(M, o.grid, h1, h2), "F member"), o.q, o.tail_cut).value;
    const int n = smoothness_orders(1, o.q).n;
    const BoundField F = bound_F(a, n, n, FVariant::full);
    const auto ln = lattice_qnorm(F.eval, F.arity, field_params(F, o.q, o.cube_points, o.doubling_check));
    const double rhs = weight_norm(h1.center, h1.scale, 2.0, kInf, o.cube_points) *
                       weight_norm(h2.center, h2.scale, 2.0, kInf, o.cube_points) * ln.value;
    return finish_ratio(lhs, rhs, ln.rel_change);
}

BoundRatio amplitude_ratio(const std::string& f, const AmplitudeSpec& p, const TMatrix& T, const GaussianWeight& h1,
                           const GaussianWeight& h2, const RatioOptions& o) {
    if (p.d != 1) throw InvalidArgument("bound ratios are implemented for d = 1");
    if (f != "fourier" && f != "Q" && f != "P") throw InvalidArgument("unknown amplitude functional '" + f + "'");
    const double q = o.q;
    const int pts = o.cube_points;
    const OperatorMatrix M = assemble_amplitude(p, T, 1.0, o.grid, default_quadrature(p, 1.0, o.grid, o.xi_safety));
    const double lhs = qnorm(singular_values(weighted(M, o.grid, h1, h2), f + " member"), q, o.tail_cut).value;
    const int n = smoothness_orders(1, q).n;
    const double h22q = weight_norm(h1.center, h1.scale, 2.0, 2.0 * q, pts) * weight_norm(h2.center, h2.scale, 2.0, 2.0 * q, pts);
    if (f == "fourier") {
        const AmplitudeFourier F = amplitude_fourier(p);
        // Transform windows from the narrowest w and z factors: e^{-(s k)^2 / 4} < 1e-10 past 9.6 / s.
        double smin = kInf, zmin = kInf;
        for (const auto& t : p.terms) {
            const auto bw = t.w->window(1e-12), bz = t.z->window(1e-12);
            if (bw) smin = std::min(smin, bw->radius / std::sqrt(std::log(1e12)));
            if (bz) zmin = std::min(zmin, bz->radius / std::sqrt(std::log(1e12)));
        }
        if (!std::isfinite(smin)) smin = 1.0;
        if (!std::isfinite(zmin)) zmin = 1.0;
        const Ball xw = F.xi_window.value_or(Ball{{0.0, 0.0}, 1.0});
        LatticeNormParams lp;
        lp.r = 1.0;
        lp.delta = q;
        lp.cube_points = pts;
        lp.ranges = {cube_range(-9.6 / smin, 9.6 / smin), cube_range(-9.6 / zmin, 9.6 / zmin),
                     cube_range(xw.center[0] - xw.radius, xw.center[0] + xw.radius)};
        lp.doubling_check = o.doubling_check;
        const auto ln = lattice_qnorm(
            [&](const double* x) { return std::abs(F.eval({x[0], 0.0}, {x[1], 0.0}, {x[2], 0.0})); }, 3, lp);
        return finish_ratio(lhs, h22q * ln.value, ln.rel_change);
    }
    if (f == "Q") {
        const BoundField F = bound_Q(p, T, n, 0);
        const auto ln = lattice_qnorm(F.eval, F.arity, field_params(F, q, pts, o.doubling_check));
        return finish_ratio(lhs, h22q * ln.value, ln.rel_change);
    }
    const BoundField F = bound_P(p, T, n, 2);
    const auto ln = lattice_qnorm(F.eval, F.arity, field_params(F, q, pts, o.doubling_check));
    const double rhs = weight_norm(h1.center, h1.scale, 2.0, kInf, pts) * weight_norm(h2.center, h2.scale, 2.0, kInf, pts) * ln.value;
    return finish_ratio(lhs, rhs, ln.rel_change);
}

namespace {

BoundRatio evaluate_member(const ExperimentConfig& c, const std::string& f, const Member& m, bool doubling) {
    RatioOptions o;
    o.q = c.q;
    o.tail_cut = c.tail_cut;
    o.cube_points = c.cube_points;
    o.xi_safety = c.xi.safety;
    o.doubling_check = doubling;
    o.grid = c.grid.grid_for(1.0);
    const GaussianWeight h1{m.h1c[0], m.h1s}, h2{m.h2c[0], m.h2s};
    if (f == "bs_kernel") return bs_kernel_ratio({m.fc, m.fs}, {m.gc, m.gs}, m.S, o);
    if (f == "F") return symbol_ratio(mixture_symbol(m), m.t, h1, h2, o);
    return amplitude_ratio(f, gaussian_mixture_amplitude(m.comps), t_to_matrix(m.t), h1, h2, o);
}

std::string functional_source(const std::string& f) {
    if (f == "fourier") return "weighted amplitude bound by the lattice norm of the double Fourier transform";
    if (f == "Q") return "weighted amplitude bound by the lattice norm of Q_{n,0}";
    if (f == "P") return "weighted amplitude bound by the lattice norm of P_{n,m}, weights in l^inf(L^2)";
    if (f == "F") return "t-quantization bound by the lattice norm of F_{n,n}, independent of t";
    return "Birman-Solomyak kernel bound by the lattice norms of f and g";
}

Report bound_ratio(Ctx& ctx) {
    const auto& c = ctx.c;
    Report r = start(c, ctx);
    const std::size_t N = static_cast<std::size_t>(c.family_size);
    for (const auto& f : c.functionals) {
        Series ser;
        ser.label = f;
        ser.predicted_source = functional_source(f);
        std::vector<double> changes(N, kNaN);
        ser.rows = parallel_map<Row>(N, ctx.workers, [&](std::size_t i) {
            const Member m = draw(ctx.seed, i);
            const BoundRatio o = evaluate_member(c, f, m, i == 0);
            changes[i] = o.change;
            Row row;
            row.param = static_cast<double>(i + 1);
            row.value = o.lhs;
            row.bound = o.rhs;
            row.ratio = o.ratio;
            ctx.say(f + " member " + std::to_string(i + 1) + " ratio=" + num(row.ratio));
            return row;
        });
        std::size_t excluded = 0;
        for (const auto& row : ser.rows)
            if (std::isnan(row.ratio)) ++excluded;
        if (excluded) ser.notes.push_back(std::to_string(excluded) + " members with a zero right-hand side excluded");
        ser.notes.push_back("family of " + std::to_string(N) + " seeded members at alpha=1; growth compares the first " +
                            std::to_string(N / 2) + " with all");
        finish_series(ser, false);
        if (!ser.degenerate) {
            r.checks.push_back(make_check("ratio_growth[" + f + "]", ratio_growth(ser.rows), "<", 2.0));
            if (!std::isnan(changes[0]))
                r.checks.push_back(make_check("quadrature_change[" + f + "]", changes[0], "<", 0.05));
        }
        r.series.push_back(std::move(ser));
    }
    finish_report(r, ctx);
    return r;
}

Report dispatch(Ctx& ctx) {
    switch (ctx.c.kind) {
        case ExperimentKind::smooth_scaling: return smooth_scaling(ctx);
        case ExperimentKind::quantization_difference: return quantization_difference(ctx);
        case ExperimentKind::separation_decay: return separation_decay(ctx);
        case ExperimentKind::hankel_one_variable: return hankel_one_variable(ctx);
        case ExperimentKind::two_discontinuities: return two_discontinuities(ctx);
        case ExperimentKind::noncompact_symbol: return noncompact_symbol(ctx);
        case ExperimentKind::bound_ratio: return bound_ratio(ctx);
    }
    throw InvalidArgument("unknown experiment kind");
}

Report run_as(const ExperimentConfig& c, ExperimentKind k, const RunOptions& o) {
    if (c.kind != k) throw InvalidArgument("config kind is " + to_string(c.kind) + ", expected " + to_string(k));
    return run_experiment(c, o);
}

}  // namespace

namespace {

FieldPtr truncated(const FieldPtr& f, int d, int J) {
    std::vector<FieldPtr> parts;
    for (int i = -J; i <= J; ++i)
        for (int j = (d == 2 ? -J : 0); j <= (d == 2 ? J : 0); ++j) parts.push_back(lattice_partition_field(d, {i, j}));
    return product_field(f, sum_field(std::move(parts), "partition sum |j|<=" + std::to_string(J)));
}

}  // namespace

SymbolSpec truncate_by_partition(const SymbolSpec& a, int J, int S) {
    if (a.terms.size() != 1) throw InvalidArgument("partition truncation needs a single separable term");
    const SymbolTerm& t = a.terms.front();
    return make_symbol(a.d, {SymbolTerm{t.coef, truncated(t.w, a.d, J), truncated(t.xi, a.d, S)}}, a.label + " truncated");
}

Report run_experiment(const ExperimentConfig& c, const RunOptions& o) {
    const auto t0 = std::chrono::steady_clock::now();
    Ctx ctx(c);
    ctx.workers = std::max(1, o.workers.value_or(c.workers));
    ctx.seed = o.seed.value_or(c.seed);
    ctx.log = o.log;
    Report r = dispatch(ctx);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

Report run_smooth_scaling(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::smooth_scaling, o);
}
Report run_quantization_difference(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::quantization_difference, o);
}
Report run_separation_decay(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::separation_decay, o);
}
Report run_hankel_one_variable(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::hankel_one_variable, o);
}
Report run_two_discontinuities(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::two_discontinuities, o);
}
Report run_noncompact_symbol(const ExperimentConfig& c, const RunOptions& o) {
    return run_as(c, ExperimentKind::noncompact_symbol, o);
}
Report run_bound_ratio(const ExperimentConfig& c, const RunOptions& o) { return run_as(c, ExperimentKind::bound_ratio, o); }

}  // namespace psido
