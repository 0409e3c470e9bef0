#include "psido/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace psido {

namespace {

constexpr double kWindowTol = 1e-12;

std::optional<Ball> enclose_all(const std::vector<std::optional<Ball>>& balls, int d) {
    std::vector<Ball> bs;
    for (const auto& b : balls) {
        if (!b) return std::nullopt;
        bs.push_back(*b);
    }
    if (bs.empty()) return std::nullopt;
    return enclose(bs, d);
}

std::optional<Ball> scale_ball(const std::optional<Ball>& b, double f) {
    if (!b) return std::nullopt;
    return Ball{{b->center[0] / f, b->center[1] / f}, b->radius / f};
}

double ipow_d(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

}  // namespace

XiRegion XiRegion::interval(double lo, double hi) {
    if (!(lo < hi)) throw InvalidArgument("interval requires lo < hi");
    XiRegion r;
    r.d = 1;
    r.lo = lo;
    r.hi = hi;
    return r;
}

XiRegion XiRegion::half_plane(const Point& normal, double offset) {
    const double nn = std::hypot(normal[0], normal[1]);
    if (nn == 0.0) throw InvalidArgument("half-plane normal must be nonzero");
    XiRegion r;
    r.d = 2;
    r.half_planes.push_back({{normal[0] / nn, normal[1] / nn}, offset / nn});
    return r;
}

XiRegion XiRegion::polygon(const std::vector<Point>& v) {
    if (v.size() < 3) throw InvalidArgument("polygon needs at least 3 vertices");
    XiRegion r;
    r.d = 2;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[(i + 1) % v.size()];
        // Inward normal of a counter-clockwise edge.
        const Point n{-(b[1] - a[1]), b[0] - a[0]};
        const double nn = std::hypot(n[0], n[1]);
        if (nn == 0.0) throw InvalidArgument("polygon has repeated vertices");
        r.half_planes.push_back({{n[0] / nn, n[1] / nn}, (n[0] * a[0] + n[1] * a[1]) / nn});
    }
    return r;
}

bool XiRegion::contains(const Point& xi) const {
    if (d == 1) return xi[0] > lo && xi[0] < hi;
    for (const auto& [n, c] : half_planes)
        if (!(n[0] * xi[0] + n[1] * xi[1] > c)) return false;
    return true;
}

bool XiRegion::bounded() const {
    if (d == 1) return std::isfinite(lo) && std::isfinite(hi);
    return half_planes.size() >= 3;
}

SymbolSpec make_symbol(int d, std::vector<SymbolTerm> terms, std::string label) {
    if (d < 1 || d > kMaxDim) throw InvalidArgument("symbol dimension must be 1 or 2");
    SymbolSpec a;
    a.d = d;
    a.label = std::move(label);
    a.max_order = kMaxJetOrder;
    std::vector<std::optional<Ball>> sw, sx, ww, wx;
    for (const auto& t : terms) {
        if (!t.w || !t.xi || t.w->dim() != d || t.xi->dim() != d) throw InvalidArgument("symbol term fields must match d");
        a.max_order = std::min({a.max_order, t.w->max_order(), t.xi->max_order()});
        sw.push_back(t.w->support());
        sx.push_back(t.xi->support());
        ww.push_back(t.w->window(kWindowTol));
        wx.push_back(t.xi->window(kWindowTol));
    }
    const auto bw = enclose_all(sw, d), bx = enclose_all(sx, d);
    if (bw && bx) a.support = SupportBalls{*bw, *bx};
    a.windows.w = enclose_all(ww, d);
    a.windows.xi = enclose_all(wx, d);
    a.terms = std::move(terms);
    const auto tv = a.terms;
    a.eval = [tv](const Point& w, const Point& xi) {
        cplx s = 0.0;
        for (const auto& t : tv) {
            const double fw = t.w->value(w);
            if (fw != 0.0) s += t.coef * fw * t.xi->value(xi);
        }
        return s;
    };
    a.deriv = [tv](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
        cplx s = 0.0;
        for (const auto& t : tv) s += t.coef * t.w->partial(k, w) * t.xi->partial(l, xi);
        return s;
    };
    return a;
}

SymbolSpec make_symbol(int d, SymbolEval eval, SymbolDeriv deriv, int max_order, std::optional<SupportBalls> support,
                       std::string label) {
    if (d < 1 || d > kMaxDim) throw InvalidArgument("symbol dimension must be 1 or 2");
    if (!eval) throw InvalidArgument("symbol needs an evaluator");
    SymbolSpec a;
    a.d = d;
    a.eval = std::move(eval);
    a.deriv = std::move(deriv);
    a.max_order = a.deriv ? max_order : -1;
    a.support = support;
    if (support) {
        a.windows.w = support->w;
        a.windows.xi = support->xi;
    }
    a.label = std::move(label);
    return a;
}

namespace {

// Nested centered differences; each order costs a factor step^-1 in rounding error.
cplx fd_partial(const std::function<cplx(const std::array<double, 4>&)>& f, std::array<double, 4> x,
                std::array<int, 4> k, double h) {
    for (int v = 0; v < 4; ++v) {
        if (k[v] == 0) continue;
        --k[v];
        auto xp = x, xm = x;
        xp[v] += h;
        xm[v] -= h;
        return (fd_partial(f, xp, k, h) - fd_partial(f, xm, k, h)) / (2.0 * h);
    }
    return f(x);
}

}  // namespace

SymbolSpec finite_difference_symbol(int d, SymbolEval eval, std::optional<SupportBalls> support, std::string label,
                                    double step) {
    auto ev = eval;
    SymbolDeriv deriv = [ev, step, d](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
        if (total_order(k) > 2 || total_order(l) > 2) throw UnsupportedOrder("finite-difference symbols stop at order 2");
        auto f = [&](const std::array<double, 4>& v) { return ev({v[0], v[1]}, {v[2], v[3]}); };
        std::array<int, 4> ord{k[0], d == 2 ? k[1] : 0, l[0], d == 2 ? l[1] : 0};
        return fd_partial(f, {w[0], w[1], xi[0], xi[1]}, ord, step);
    };
    return make_symbol(d, std::move(eval), deriv, 2, support, std::move(label));
}

AmplitudeSpec make_amplitude(int d, std::vector<AmplitudeTerm> terms, std::string label) {
    if (d < 1 || d > kMaxDim) throw InvalidArgument("amplitude dimension must be 1 or 2");
    AmplitudeSpec p;
    p.d = d;
    p.label = std::move(label);
    p.max_order = kMaxJetOrder;
    std::vector<std::optional<Ball>> sw, sx, ww, wz, wx;
    for (const auto& t : terms) {
        if (!t.w || !t.z || !t.xi || t.w->dim() != d || t.z->dim() != d || t.xi->dim() != d)
            throw InvalidArgument("amplitude term fields must match d");
        p.max_order = std::min({p.max_order, t.w->max_order(), t.z->max_order(), t.xi->max_order()});
        sw.push_back(t.w->support());
        sx.push_back(t.xi->support());
        ww.push_back(t.w->window(kWindowTol));
        wz.push_back(t.z->window(kWindowTol));
        wx.push_back(t.xi->window(kWindowTol));
    }
    const auto bw = enclose_all(sw, d), bx = enclose_all(sx, d);
    if (bw && bx) p.support = SupportBalls{*bw, *bx};
    p.windows = Windows{enclose_all(ww, d), enclose_all(wz, d), enclose_all(wx, d)};
    p.terms = std::move(terms);
    const auto tv = p.terms;
    p.eval = [tv](const Point& w, const Point& z, const Point& xi) {
        cplx s = 0.0;
        for (const auto& t : tv) {
            const double fw = t.w->value(w);
            if (fw != 0.0) s += t.coef * fw * t.z->value(z) * t.xi->value(xi);
        }
        return s;
    };
    p.deriv = [tv](const MultiIndex& kw, const MultiIndex& kz, const MultiIndex& l, const Point& w, const Point& z,
                   const Point& xi) {
        cplx s = 0.0;
        for (const auto& t : tv) s += t.coef * t.w->partial(kw, w) * t.z->partial(kz, z) * t.xi->partial(l, xi);
        return s;
    };
    return p;
}

AmplitudeSpec make_amplitude(int d, AmplitudeEval eval, AmplitudeDeriv deriv, int max_order,
                             std::optional<SupportBalls> support, Windows windows, std::string label) {
    if (d < 1 || d > kMaxDim) throw InvalidArgument("amplitude dimension must be 1 or 2");
    if (!eval) throw InvalidArgument("amplitude needs an evaluator");
    AmplitudeSpec p;
    p.d = d;
    p.eval = std::move(eval);
    p.deriv = std::move(deriv);
    p.max_order = p.deriv ? max_order : -1;
    p.support = support;
    if (support) {
        if (!windows.w) windows.w = support->w;
        if (!windows.xi) windows.xi = support->xi;
    }
    p.windows = windows;
    p.label = std::move(label);
    return p;
}

AmplitudeSpec as_amplitude(const SymbolSpec& a) {
    AmplitudeSpec p;
    if (!a.terms.empty() && !a.xi_cut) {
        std::vector<AmplitudeTerm> terms;
        for (const auto& t : a.terms) terms.push_back({t.coef, t.w, constant_field(a.d, 1.0), t.xi});
        p = make_amplitude(a.d, std::move(terms), a.label);
    } else {
        auto ev = a.eval;
        auto dv = a.deriv;
        AmplitudeDeriv deriv;
        if (dv)
            deriv = [dv](const MultiIndex& kw, const MultiIndex& kz, const MultiIndex& l, const Point& w, const Point&,
                         const Point& xi) { return total_order(kz) == 0 ? dv(kw, l, w, xi) : cplx(0.0); };
        p = make_amplitude(
            a.d, [ev](const Point& w, const Point&, const Point& xi) { return ev(w, xi); }, deriv, a.max_order, a.support,
            Windows{a.windows.w, std::nullopt, a.windows.xi}, a.label);
    }
    p.windows.z.reset();
    return p;
}

SymbolSpec conjugate(const SymbolSpec& a) {
    SymbolSpec c = a;
    for (auto& t : c.terms) t.coef = std::conj(t.coef);
    auto ev = a.eval;
    c.eval = [ev](const Point& w, const Point& xi) { return std::conj(ev(w, xi)); };
    if (a.deriv) {
        auto dv = a.deriv;
        c.deriv = [dv](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
            return std::conj(dv(k, l, w, xi));
        };
    }
    c.label = "conj(" + a.label + ")";
    return c;
}

SymbolSpec scale_symbol(const SymbolSpec& a, cplx f) {
    SymbolSpec c = a;
    for (auto& t : c.terms) t.coef *= f;
    auto ev = a.eval;
    c.eval = [ev, f](const Point& w, const Point& xi) { return f * ev(w, xi); };
    if (a.deriv) {
        auto dv = a.deriv;
        c.deriv = [dv, f](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
            return f * dv(k, l, w, xi);
        };
    }
    if (c.decay) c.decay->A *= std::abs(f);
    return c;
}

SymbolSpec with_xi_cut(const SymbolSpec& a, const XiRegion& region) {
    if (region.d != a.d) throw InvalidArgument("xi region dimension mismatch");
    if (a.xi_cut) throw InvalidArgument("symbol already carries a xi cut");
    SymbolSpec c = a;
    c.xi_cut = region;
    auto ev = a.eval;
    c.eval = [ev, region](const Point& w, const Point& xi) { return region.contains(xi) ? ev(w, xi) : cplx(0.0); };
    if (a.deriv) {
        auto dv = a.deriv;
        c.deriv = [dv, region](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
            return region.contains(xi) ? dv(k, l, w, xi) : cplx(0.0);
        };
    }
    c.label = a.label + "*chi";
    return c;
}

SymbolSpec zero_symbol(int d) {
    return make_symbol(d, {SymbolTerm{0.0, constant_field(d, 0.0), constant_field(d, 0.0)}}, "zero");
}

AmplitudeSpec zero_amplitude(int d) {
    return make_amplitude(d, {AmplitudeTerm{0.0, constant_field(d, 0.0), constant_field(d, 0.0), constant_field(d, 0.0)}},
                          "zero");
}

TMatrix::TMatrix(double t11, double t12, double t21, double t22, TGuards g) : t_{t11, t12, t21, t22} {
    for (double v : t_) {
        if (!std::isfinite(v)) throw InvalidArgument("T entries must be finite");
        if (std::abs(v) > g.t0) throw InvalidArgument("T entry exceeds the bound t0");
    }
    if (std::abs(det()) < g.delta0) throw DegenerateMatrix("|det T| below the guard delta0");
}

std::pair<Point, Point> TMatrix::forward(const Point& x, const Point& y) const {
    Point w{}, z{};
    for (int i = 0; i < kMaxDim; ++i) {
        w[i] = t_[0] * x[i] + t_[1] * y[i];
        z[i] = t_[2] * x[i] + t_[3] * y[i];
    }
    return {w, z};
}

TMatrix t_to_matrix(double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw InvalidArgument("t must lie in [0, 1]");
    return TMatrix(1.0 - t, t, -1.0, 1.0);
}

std::pair<Point, Point> recover_xy(const TMatrix& T, const Point& w, const Point& z) {
    const double det = T.det();
    if (det == 0.0 || !std::isfinite(1.0 / det)) throw DegenerateMatrix("recover_xy: singular T");
    Point x{}, y{};
    for (int i = 0; i < kMaxDim; ++i) {
        x[i] = (T.t22() * w[i] - T.t12() * z[i]) / det;
        y[i] = (-T.t21() * w[i] + T.t11() * z[i]) / det;
    }
    return {x, y};
}

Orders smoothness_orders(int d, double q) {
    if (d < 1) throw InvalidArgument("dimension must be positive");
    if (!(q > 0.0 && q <= 1.0)) throw InvalidArgument("q must lie in (0, 1]");
    const double eps = 1e-9;
    return {static_cast<int>(std::floor(d / q + eps)) + 1, static_cast<int>(std::floor((d + 1) / q + eps)) + 1};
}

namespace {

struct Group {
    std::vector<Point> pts;
    double weight = 1.0;
    int order = 0;
};

std::vector<Point> lattice(const Ball& b, int d, double margin, int density) {
    const double spacing = margin / density;
    const double half = b.radius + margin;
    const int n = static_cast<int>(std::ceil(2.0 * half / spacing)) + 1;
    std::vector<double> ax(n);
    std::vector<Point> pts;
    if (d == 1) {
        for (int i = 0; i < n; ++i) pts.push_back({b.center[0] - half + i * spacing, 0.0});
    } else {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) pts.push_back({b.center[0] - half + i * spacing, b.center[1] - half + j * spacing});
    }
    return pts;
}

// sup over the lattice of |nabla^o f| for o = 0..K.
std::vector<double> field_sups(const Field& f, const Group& g, int d) {
    std::vector<double> s(g.order + 1, 0.0);
    for (const auto& x : g.pts) {
        const Jet2 e = f.expand(x, g.order);
        for (int o = 0; o <= g.order; ++o) s[o] = std::max(s[o], grad_norm(e, d, o));
    }
    return s;
}

using GroupDeriv = std::function<cplx(const std::vector<MultiIndex>&, const std::vector<Point>&)>;

double combine(const std::vector<Group>& groups, const std::vector<std::vector<double>>& sup_by_order,
               const std::vector<int>& strides) {
    double best = 0.0;
    const std::size_t G = groups.size();
    std::vector<int> o(G, 0);
    while (true) {
        int flat = 0;
        double w = 1.0;
        for (std::size_t g = 0; g < G; ++g) {
            flat += o[g] * strides[g];
            w *= ipow_d(groups[g].weight, o[g]);
        }
        best = std::max(best, w * sup_by_order[0][flat]);
        std::size_t g = 0;
        while (g < G && ++o[g] > groups[g].order) o[g++] = 0;
        if (g == G) break;
    }
    return best;
}

double sampled_norm(int d, const std::vector<Group>& groups, const GroupDeriv& deriv, double max_evals) {
    const std::size_t G = groups.size();
    std::vector<int> strides(G);
    int combos = 1;
    for (std::size_t g = 0; g < G; ++g) {
        strides[g] = combos;
        combos *= groups[g].order + 1;
    }
    double npts = 1.0;
    for (const auto& g : groups) npts *= g.pts.size();
    // Multi-index count per combination is at most (K+1)^G.
    if (npts * combos > max_evals)
        throw InvalidArgument("norm_N: sampling lattice too large for a black-box spec; lower the density");
    std::vector<std::vector<double>> sup(1, std::vector<double>(combos, 0.0));
    std::vector<std::size_t> idx(G, 0);
    std::vector<Point> pt(G);
    while (true) {
        for (std::size_t g = 0; g < G; ++g) pt[g] = groups[g].pts[idx[g]];
        std::vector<int> o(G, 0);
        for (int c = 0; c < combos; ++c) {
            int rem = c;
            for (std::size_t g = 0; g < G; ++g) {
                o[g] = rem % (groups[g].order + 1);
                rem /= groups[g].order + 1;
            }
            // Sum over all multi-index tuples of the given orders.
            std::vector<std::vector<MultiIndex>> mis(G);
            for (std::size_t g = 0; g < G; ++g) mis[g] = multi_indices(d, o[g]);
            std::vector<std::size_t> mi(G, 0);
            double s = 0.0;
            while (true) {
                std::vector<MultiIndex> k(G);
                for (std::size_t g = 0; g < G; ++g) k[g] = mis[g][mi[g]];
                s += std::abs(deriv(k, pt));
                std::size_t g = 0;
                while (g < G && ++mi[g] == mis[g].size()) mi[g++] = 0;
                if (g == G) break;
            }
            sup[0][c] = std::max(sup[0][c], s);
        }
        std::size_t g = 0;
        while (g < G && ++idx[g] == groups[g].pts.size()) idx[g++] = 0;
        if (g == G) break;
    }
    return combine(groups, sup, strides);
}

double factored_norm(int d, const std::vector<Group>& groups, const std::vector<FieldPtr>& fields, double coef_abs) {
    const std::size_t G = groups.size();
    std::vector<std::vector<double>> per;
    for (std::size_t g = 0; g < G; ++g) per.push_back(field_sups(*fields[g], groups[g], d));
    std::vector<int> strides(G);
    int combos = 1;
    for (std::size_t g = 0; g < G; ++g) {
        strides[g] = combos;
        combos *= groups[g].order + 1;
    }
    std::vector<std::vector<double>> sup(1, std::vector<double>(combos, 0.0));
    for (int c = 0; c < combos; ++c) {
        int rem = c;
        double v = coef_abs;
        for (std::size_t g = 0; g < G; ++g) {
            v *= per[g][rem % (groups[g].order + 1)];
            rem /= groups[g].order + 1;
        }
        sup[0][c] = v;
    }
    return combine(groups, sup, strides);
}

void check_norm_args(int max_order, std::initializer_list<int> orders, double ell, double rho) {
    if (!(ell > 0.0) || !(rho > 0.0)) throw InvalidArgument("norm_N: ell and rho must be positive");
    for (int o : orders) {
        if (o < 0) throw InvalidArgument("norm_N: orders must be nonnegative");
        if (o > max_order)
            throw UnsupportedOrder("norm_N: spec provides derivatives up to order " + std::to_string(max_order) +
                                   ", requested " + std::to_string(o));
    }
}

Ball group_ball(const std::optional<Ball>& support, const std::optional<Ball>& window, const char* name) {
    if (support) return *support;
    if (window) return *window;
    throw InvalidArgument(std::string("norm_N: no support or window for the ") + name + " variable");
}

}  // namespace

double norm_N(const AmplitudeSpec& p, int n1, int n2, int m, double ell, double rho, const NormSampling& s) {
    check_norm_args(p.max_order, {n1, n2, m}, ell, rho);
    const int d = p.d;
    Group gw{lattice(group_ball(p.support ? std::optional<Ball>(p.support->w) : std::nullopt, p.windows.w, "w"), d, ell,
                     s.density),
             ell, n1};
    Group gx{lattice(group_ball(p.support ? std::optional<Ball>(p.support->xi) : std::nullopt, p.windows.xi, "xi"), d,
                     rho, s.density),
             rho, m};
    Group gz{{}, ell, n2};
    const bool z_free = !p.terms.empty() && std::all_of(p.terms.begin(), p.terms.end(), [](const AmplitudeTerm& t) {
        return t.z->label() == "constant";
    });
    if (p.windows.z || s.z_box)
        gz.pts = lattice(s.z_box ? *s.z_box : *p.windows.z, d, ell, s.density);
    else if (z_free)
        gz.pts = {Point{}};
    else
        throw InvalidArgument("norm_N: amplitude has no z window; pass NormSampling::z_box");
    std::vector<Group> groups{gw, gz, gx};
    if (p.terms.size() == 1) {
        const auto& t = p.terms.front();
        return factored_norm(d, groups, {t.w, t.z, t.xi}, std::abs(t.coef));
    }
    auto dv = p.deriv;
    return sampled_norm(
        d, groups, [&](const std::vector<MultiIndex>& k, const std::vector<Point>& x) { return dv(k[0], k[1], k[2], x[0], x[1], x[2]); },
        s.max_evaluations);
}

double norm_N(const SymbolSpec& a, int n, int m, double ell, double rho, const NormSampling& s) {
    check_norm_args(a.max_order, {n, m}, ell, rho);
    const int d = a.d;
    Group gw{lattice(group_ball(a.support ? std::optional<Ball>(a.support->w) : std::nullopt, a.windows.w, "w"), d, ell,
                     s.density),
             ell, n};
    Group gx{lattice(group_ball(a.support ? std::optional<Ball>(a.support->xi) : std::nullopt, a.windows.xi, "xi"), d,
                     rho, s.density),
             rho, m};
    std::vector<Group> groups{gw, gx};
    if (a.terms.size() == 1 && !a.xi_cut) {
        const auto& t = a.terms.front();
        return factored_norm(d, groups, {t.w, t.xi}, std::abs(t.coef));
    }
    auto dv = a.deriv;
    return sampled_norm(
        d, groups, [&](const std::vector<MultiIndex>& k, const std::vector<Point>& x) { return dv(k[0], k[1], x[0], x[1]); },
        s.max_evaluations);
}

AmplitudeSpec rescale(const AmplitudeSpec& p, double l1, double r1) {
    if (!(l1 > 0.0) || !(r1 > 0.0)) throw InvalidArgument("rescale: factors must be positive");
    if (!p.terms.empty()) {
        std::vector<AmplitudeTerm> terms;
        for (const auto& t : p.terms) terms.push_back({t.coef, scaled_field(t.w, l1), scaled_field(t.z, l1), scaled_field(t.xi, r1)});
        AmplitudeSpec q = make_amplitude(p.d, std::move(terms), p.label);
        if (!p.windows.z) q.windows.z.reset();
        return q;
    }
    auto ev = p.eval;
    auto dv = p.deriv;
    auto sc = [](const Point& x, double f) { return Point{f * x[0], f * x[1]}; };
    AmplitudeDeriv deriv;
    if (dv)
        deriv = [=](const MultiIndex& kw, const MultiIndex& kz, const MultiIndex& l, const Point& w, const Point& z,
                    const Point& xi) {
            return ipow_d(l1, total_order(kw) + total_order(kz)) * ipow_d(r1, total_order(l)) *
                   dv(kw, kz, l, sc(w, l1), sc(z, l1), sc(xi, r1));
        };
    std::optional<SupportBalls> sup;
    if (p.support) sup = SupportBalls{*scale_ball(p.support->w, l1), *scale_ball(p.support->xi, r1)};
    return make_amplitude(
        p.d, [=](const Point& w, const Point& z, const Point& xi) { return ev(sc(w, l1), sc(z, l1), sc(xi, r1)); }, deriv,
        p.max_order, sup, Windows{scale_ball(p.windows.w, l1), scale_ball(p.windows.z, l1), scale_ball(p.windows.xi, r1)},
        p.label);
}

SymbolSpec rescale(const SymbolSpec& a, double l1, double r1) {
    if (!(l1 > 0.0) || !(r1 > 0.0)) throw InvalidArgument("rescale: factors must be positive");
    SymbolSpec b;
    if (!a.terms.empty()) {
        std::vector<SymbolTerm> terms;
        for (const auto& t : a.terms) terms.push_back({t.coef, scaled_field(t.w, l1), scaled_field(t.xi, r1)});
        b = make_symbol(a.d, std::move(terms), a.label);
    } else {
        auto ev = a.eval;
        auto dv = a.deriv;
        auto sc = [](const Point& x, double f) { return Point{f * x[0], f * x[1]}; };
        SymbolDeriv deriv;
        if (dv)
            deriv = [=](const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi) {
                return ipow_d(l1, total_order(k)) * ipow_d(r1, total_order(l)) * dv(k, l, sc(w, l1), sc(xi, r1));
            };
        std::optional<SupportBalls> sup;
        if (a.support) sup = SupportBalls{*scale_ball(a.support->w, l1), *scale_ball(a.support->xi, r1)};
        b = make_symbol(a.d, [=](const Point& w, const Point& xi) { return ev(sc(w, l1), sc(xi, r1)); }, deriv, a.max_order,
                        sup, a.label);
        b.windows = Windows{scale_ball(a.windows.w, l1), std::nullopt, scale_ball(a.windows.xi, r1)};
    }
    if (a.xi_cut) {
        XiRegion r = *a.xi_cut;
        r.lo /= r1;
        r.hi /= r1;
        for (auto& hp : r.half_planes) hp.second /= r1;
        b = with_xi_cut(b, r);
        b.label = a.label;
    }
    return b;
}

namespace {

class ParamReader {
  public:
    ParamReader(const std::string& family, const Params& p) : family_(family), p_(p) {}

    double get(const std::string& key, double def) {
        used_.insert(key);
        auto it = p_.find(key);
        return it == p_.end() ? def : it->second;
    }

    void finish() const {
        for (const auto& [k, v] : p_)
            if (!used_.count(k)) throw InvalidArgument(family_ + ": unknown parameter '" + k + "'");
    }

  private:
    std::string family_;
    const Params& p_;
    std::set<std::string> used_;
};

int read_dim(ParamReader& r) {
    const double d = r.get("d", 1);
    if (d != 1 && d != 2) throw InvalidArgument("parameter d must be 1 or 2");
    return static_cast<int>(d);
}

double positive(double v, const char* name) {
    if (!(v > 0.0)) throw InvalidArgument(std::string("parameter ") + name + " must be positive");
    return v;
}

// Largest sampled (1+|x|)^gamma |nabla^k f| over k <= K.
double decay_constant(const Field& f, double gamma, int K) {
    double c = 0.0;
    const int d = f.dim();
    for (int i = 0; i <= 4000; ++i) {
        const double r = 0.025 * i;
        const int nang = d == 1 ? 2 : 9;
        for (int a = 0; a < nang; ++a) {
            Point x{};
            if (d == 1) {
                x[0] = a == 0 ? r : -r;
            } else {
                const double th = a * kPi / 16.0;
                x = {r * std::cos(th), r * std::sin(th)};
            }
            const Jet2 e = f.expand(x, K);
            for (int k = 0; k <= K; ++k) c = std::max(c, std::pow(1.0 + r, gamma) * grad_norm(e, d, k));
        }
    }
    return c;
}

}  // namespace

AnySpec builtin_family(const std::string& name, const Params& params) {
    ParamReader r(name, params);
    if (name == "gaussian_bump" || name == "tensor_bump" || name == "plane_cut_product") {
        const int d = read_dim(r);
        const Point u{r.get("u", 0.0), r.get("u2", 0.0)};
        const Point mu{r.get("mu", 0.0), r.get("mu2", 0.0)};
        const double ell = positive(r.get("ell", 1.0), "ell");
        const double rho = positive(r.get("rho", 1.0), "rho");
        const double amp = r.get("A", 1.0);
        FieldPtr fw, fx;
        if (name == "tensor_bump") {
            const double k = r.get("k", 4);
            const double kx = r.get("k_xi", k);
            if (k < 1 || kx < 1 || k != std::floor(k) || kx != std::floor(kx))
                throw InvalidArgument("tensor_bump: k and k_xi must be positive integers");
            fw = poly_bump_field(d, u, ell, static_cast<int>(k));
            fx = poly_bump_field(d, mu, rho, static_cast<int>(kx));
        } else {
            fw = gaussian_cutoff_field(d, u, ell);
            fx = gaussian_cutoff_field(d, mu, rho);
        }
        if (r.get("xi_only", 0.0) != 0.0) fw = constant_field(d, 1.0);
        if (name == "plane_cut_product") {
            XiRegion cut;
            if (d == 1) {
                cut = XiRegion::interval(r.get("lo", 0.0), r.get("hi", std::numeric_limits<double>::infinity()));
            } else {
                const double th = r.get("theta", kPi / 2.0);
                cut = XiRegion::half_plane({std::cos(th), std::sin(th)}, r.get("offset", 0.0));
            }
            r.finish();
            return with_xi_cut(make_symbol(d, {SymbolTerm{amp, fw, fx}}, name), cut);
        }
        const bool amplitude = r.get("amplitude", 0.0) != 0.0;
        const double zs = positive(r.get("z_scale", 1.0), "z_scale");
        r.finish();
        if (amplitude) return make_amplitude(d, {AmplitudeTerm{amp, fw, gaussian_field(d, Point{}, zs), fx}}, name);
        return make_symbol(d, {SymbolTerm{amp, fw, fx}}, name);
    }
    if (name == "smooth_cutoff_zeta") {
        const int d = read_dim(r);
        const Point u{r.get("u", 0.0), r.get("u2", 0.0)};
        const double ell = positive(r.get("ell", 1.0), "ell");
        r.finish();
        return make_symbol(d, {SymbolTerm{1.0, zeta_field(d, u, ell), constant_field(d, 1.0)}}, name);
    }
    if (name == "poly_decay") {
        const int d = read_dim(r);
        const double A = r.get("A", 1.0);
        const double g1 = positive(r.get("gamma1", 3.0), "gamma1");
        const double g2 = positive(r.get("gamma2", 3.0), "gamma2");
        const double K = r.get("max_order", 4);
        if (K < 0 || K > kMaxJetOrder || K != std::floor(K)) throw InvalidArgument("poly_decay: bad max_order");
        r.finish();
        auto fw = poly_decay_field(d, g1, static_cast<int>(K));
        auto fx = poly_decay_field(d, g2, static_cast<int>(K));
        const double c = decay_constant(*fw, g1, static_cast<int>(K)) * decay_constant(*fx, g2, static_cast<int>(K));
        SymbolSpec a = make_symbol(d, {SymbolTerm{A / c, fw, fx}}, name);
        a.decay = DecayBound{std::abs(A), g1, g2};
        return a;
    }
    throw InvalidArgument("unknown builtin family '" + name + "'");
}

SymbolSpec builtin_symbol(const std::string& name, const Params& params) {
    AnySpec s = builtin_family(name, params);
    if (auto* a = std::get_if<SymbolSpec>(&s)) return *a;
    throw InvalidArgument("builtin family '" + name + "' produced an amplitude, a symbol was expected");
}

std::vector<std::pair<std::string, std::string>> builtin_family_names() {
    return {
        {"gaussian_bump", "e^{-|w-u|^2/ell^2 - |xi-mu|^2/rho^2} times smooth cutoffs to B(u,ell) x B(mu,rho); "
                          "amplitude=1 adds a Gaussian z factor; xi_only=1 drops the w factor"},
        {"smooth_cutoff_zeta", "zeta(|w-u|/ell): 0 for |.| <= 1/2, 1 for |.| >= 1"},
        {"tensor_bump", "prod (1-y_i^2)_+^k in w and xi, supports inside B(u,ell) x B(mu,rho)"},
        {"poly_decay", "A (1+|w|^2)^{-gamma1/2} (1+|xi|^2)^{-gamma2/2}, normalized to the decay bound"},
        {"plane_cut_product", "gaussian_bump times the indicator of an interval (d=1) or half-plane (d=2) in xi"},
    };
}

AmplitudeSpec gaussian_mixture_amplitude(const std::vector<GaussianComponent>& components) {
    std::vector<AmplitudeTerm> terms;
    for (const auto& c : components)
        terms.push_back({c.coef, gaussian_field(1, {c.w_center, 0.0}, c.w_scale), gaussian_field(1, {c.z_center, 0.0}, c.z_scale),
                         gaussian_field(1, {c.xi_center, 0.0}, c.xi_scale)});
    if (terms.empty()) return zero_amplitude(1);
    return make_amplitude(1, std::move(terms), "gaussian_mixture");
}

}  // namespace psido
