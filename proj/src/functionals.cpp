#include "psido/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <sstream>

namespace psido {

std::pair<int, int> cube_range(double lo, double hi) {
    return {static_cast<int>(std::floor(lo + 0.5)), static_cast<int>(std::floor(hi + 0.5))};
}

void validate(const LatticeNormParams& p, int k) {
    if (k < 1 || k > 6) throw InvalidArgument("lattice norm: dimension must be in 1..6");
    if (!(p.r > 0.0)) throw InvalidArgument("lattice norm: r must be positive");
    if (!(p.delta > 0.0)) throw InvalidArgument("lattice norm: delta must be positive or infinite");
    if (p.ranges.empty() && !(p.truncation_radius >= 1.0)) throw InvalidArgument("lattice norm: truncation_radius must be >= 1");
    if (p.cube_points < 1) throw InvalidArgument("lattice norm: cube_points must be >= 1");
    if (!p.ranges.empty()) {
        if (static_cast<int>(p.ranges.size()) != k) throw InvalidArgument("lattice norm: one range per axis required");
        for (const auto& [lo, hi] : p.ranges)
            if (lo > hi) throw InvalidArgument("lattice norm: empty cube range");
    }
}

namespace {

struct Odometer {
    std::vector<int> lo, hi, cur;
    bool done = false;
    Odometer(std::vector<int> l, std::vector<int> h) : lo(std::move(l)), hi(std::move(h)), cur(lo) {}
    void next() {
        for (std::size_t i = cur.size(); i-- > 0;) {
            if (++cur[i] <= hi[i]) return;
            cur[i] = lo[i];
        }
        done = true;
    }
};

double lattice_value(const ScalarFn& h, int k, const LatticeNormParams& p, int N, std::size_t& cubes) {
    std::vector<int> lo(k), hi(k);
    const int R = static_cast<int>(std::floor(p.truncation_radius));
    for (int i = 0; i < k; ++i) {
        lo[i] = p.ranges.empty() ? -R : p.ranges[i].first;
        hi[i] = p.ranges.empty() ? R : p.ranges[i].second;
    }
    const bool sup = std::isinf(p.delta);
    const int noff = sup ? 4 : 1;
    const double cell = 1.0 / N;
    const double vol = std::pow(cell, k);
    double acc = 0.0;
    cubes = 0;
    std::vector<double> c(k), x(k);
    for (Odometer cube(lo, hi); !cube.done; cube.next()) {
        for (Odometer off(std::vector<int>(k, 0), std::vector<int>(k, noff - 1)); !off.done; off.next()) {
            for (int i = 0; i < k; ++i) c[i] = cube.cur[i] + 0.25 * off.cur[i];
            double s = 0.0;
            for (Odometer node(std::vector<int>(k, 0), std::vector<int>(k, N - 1)); !node.done; node.next()) {
                for (int i = 0; i < k; ++i) x[i] = c[i] - 0.5 + (node.cur[i] + 0.5) * cell;
                const double v = std::abs(h(x.data()));
                if (!std::isfinite(v)) {
                    std::ostringstream os;
                    os << "lattice norm: non-finite integrand in the cube centred at (";
                    for (int i = 0; i < k; ++i) os << (i ? ", " : "") << c[i];
                    os << ")";
                    throw NumericalError(os.str());
                }
                if (v != 0.0) s += std::pow(v, p.r);
            }
            s *= vol;
            ++cubes;
            if (sup) acc = std::max(acc, s);
            else if (s > 0.0) acc += std::pow(s, p.delta / p.r);
        }
    }
    return sup ? std::pow(acc, 1.0 / p.r) : std::pow(acc, 1.0 / p.delta);
}

std::vector<MultiIndex> upto(int d, int n) {
    std::vector<MultiIndex> v;
    for (int o = 0; o <= n; ++o)
        for (const auto& k : multi_indices(d, o)) v.push_back(k);
    return v;
}

std::vector<double> partials(const Field& f, const Point& x, const std::vector<MultiIndex>& idx, int K) {
    const Jet2 e = f.expand(x, K);
    std::vector<double> v(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) v[i] = e.partial(idx[i][0], idx[i][1]);
    return v;
}

double abs_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

Point take(const double* x, int d) { return d == 1 ? Point{x[0], 0.0} : Point{x[0], x[1]}; }

void add_extent(std::vector<std::pair<double, double>>& e, const std::optional<Ball>& b, int d, const char* what) {
    if (!b) throw InvalidArgument(std::string("bound field: no ") + what + " window; the field cannot be truncated");
    for (int i = 0; i < d; ++i) e.emplace_back(b->center[i] - b->radius, b->center[i] + b->radius);
}

double denominator(const Point& w, const Point& z, double tau, int m, int d) {
    if (m == 0) return 1.0;
    Point v{z[0] - tau * w[0], z[1] - tau * w[1]};
    return 1.0 + std::pow(norm(v, d), m);
}

void check_orders(int max_order, int n, int m, bool has_deriv, const std::string& label) {
    if (n < 0 || m < 0) throw InvalidArgument("bound field orders must be nonnegative");
    if (!has_deriv || std::max(n, m) > max_order)
        throw UnsupportedOrder(label + ": derivatives of order " + std::to_string(std::max(n, m)) +
                               " are not available (max " + std::to_string(max_order) + ")");
}

// Partials of one field memoised by evaluation point; lattice rules revisit the same coordinates.
class PartialCache {
  public:
    PartialCache(FieldPtr f, std::vector<MultiIndex> idx, int K) : f_(std::move(f)), idx_(std::move(idx)), K_(K) {}
    std::vector<double> get(const Point& x) {
        std::lock_guard<std::mutex> g(mu_);
        auto it = memo_.find(x);
        if (it != memo_.end()) return it->second;
        if (memo_.size() > 200000) memo_.clear();
        return memo_.emplace(x, partials(*f_, x, idx_, K_)).first->second;
    }

  private:
    FieldPtr f_;
    std::vector<MultiIndex> idx_;
    int K_;
    std::mutex mu_;
    std::map<Point, std::vector<double>> memo_;
};

// P numerator and denominator at one point.
std::function<double(const Point&, const Point&, const Point&)> p_integrand(const AmplitudeSpec& p, const TMatrix& T,
                                                                            int n, int m) {
    const int d = p.d;
    const double tau = T.tau();
    const auto iw = upto(d, n), il = upto(d, m);
    if (!p.terms.empty()) {
        const auto terms = p.terms;
        std::vector<std::shared_ptr<PartialCache>> cw, cz, cx;
        for (const auto& t : terms) {
            cw.push_back(std::make_shared<PartialCache>(t.w, iw, n));
            cz.push_back(std::make_shared<PartialCache>(t.z, iw, n));
            cx.push_back(std::make_shared<PartialCache>(t.xi, il, m));
        }
        return [terms, iw, il, n, m, d, tau, cw, cz, cx](const Point& w, const Point& z, const Point& xi) {
            const double den = denominator(w, z, tau, m, d);
            if (terms.size() == 1) {
                const auto& t = terms[0];
                if (t.coef == 0.0) return 0.0;
                const double a = abs_sum(partials(*t.w, w, iw, n));
                if (a == 0.0) return 0.0;
                const double b = abs_sum(partials(*t.z, z, iw, n));
                if (b == 0.0) return 0.0;
                return std::abs(t.coef) * a * b * abs_sum(partials(*t.xi, xi, il, m)) / den;
            }
            std::vector<std::vector<double>> A, B, C;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                A.push_back(cw[t]->get(w));
                B.push_back(cz[t]->get(z));
                C.push_back(cx[t]->get(xi));
            }
            double s = 0.0;
            for (std::size_t i = 0; i < iw.size(); ++i)
                for (std::size_t j = 0; j < iw.size(); ++j)
                    for (std::size_t l = 0; l < il.size(); ++l) {
                        cplx v = 0.0;
                        for (std::size_t t = 0; t < terms.size(); ++t) v += terms[t].coef * A[t][i] * B[t][j] * C[t][l];
                        s += std::abs(v);
                    }
            return s / den;
        };
    }
    const auto dv = p.deriv;
    return [dv, iw, il, m, d, tau](const Point& w, const Point& z, const Point& xi) {
        double s = 0.0;
        for (const auto& a : iw)
            for (const auto& b : iw)
                for (const auto& l : il) s += std::abs(dv(a, b, l, w, z, xi));
        return s / denominator(w, z, tau, m, d);
    };
}

std::string kind_name(BoundKind k) {
    switch (k) {
        case BoundKind::P: return "P";
        case BoundKind::Q: return "Q";
        case BoundKind::F_circ: return "F_circ";
        case BoundKind::F_full: return "F";
    }
    return "?";
}

std::string describe(BoundKind k, int n, int m, const std::string& label) {
    return kind_name(k) + "_{" + std::to_string(n) + "," + std::to_string(m) + "}(" + label + ")";
}

struct BoxRule {
    std::vector<Point> nodes;
    double weight = 0.0;
};

BoxRule box_rule(const Ball& b, int d, int ppu) {
    const int N = std::max(8, static_cast<int>(std::ceil(2.0 * b.radius * ppu)));
    const double hstep = 2.0 * b.radius / N;
    BoxRule r;
    r.weight = std::pow(hstep, d);
    for (int i = 0; i < N; ++i) {
        const double x = b.center[0] - b.radius + (i + 0.5) * hstep;
        if (d == 1) {
            r.nodes.push_back({x, 0.0});
            continue;
        }
        for (int j = 0; j < N; ++j) r.nodes.push_back({x, b.center[1] - b.radius + (j + 0.5) * hstep});
    }
    return r;
}

Ball z_ball(const AmplitudeSpec& p, const std::optional<Ball>& z_box) {
    if (p.windows.z) return *p.windows.z;
    if (z_box) return *z_box;
    throw InvalidArgument(p.label + ": amplitude has no z window; supply a z box");
}

Ball w_ball(const AmplitudeSpec& p) {
    if (p.windows.w) return *p.windows.w;
    throw InvalidArgument(p.label + ": amplitude has no w window");
}

double q_value(const std::function<double(const Point&, const Point&, const Point&)>& P, const BoxRule& W,
               const BoxRule& Z, const Point& xi) {
    double s = 0.0;
    for (const auto& w : W.nodes)
        for (const auto& z : Z.nodes) s += P(w, z, xi);
    return s * W.weight * Z.weight;
}

}  // namespace

LatticeNorm lattice_qnorm(const ScalarFn& h, int k, const LatticeNormParams& params) {
    validate(params, k);
    LatticeNorm r;
    r.value = lattice_value(h, k, params, params.cube_points, r.cubes);
    if (params.doubling_check) {
        std::size_t c2 = 0;
        const double v2 = lattice_value(h, k, params, 2 * params.cube_points, c2);
        const double scale = std::max(std::abs(v2), 1e-300);
        r.rel_change = std::abs(v2 - r.value) / scale;
        r.converged = r.rel_change <= params.doubling_tol || (v2 == 0.0 && r.value == 0.0);
    }
    return r;
}

BoundField bound_P(const AmplitudeSpec& p, const TMatrix& T, int n, int m) {
    check_orders(p.max_order, n, m, static_cast<bool>(p.deriv) || !p.terms.empty(), p.label);
    const int d = p.d;
    const auto P = p_integrand(p, T, n, m);
    BoundField f;
    f.kind = BoundKind::P;
    f.n = n;
    f.m = m;
    f.tau = T.tau();
    f.arity = 3 * d;
    f.eval = [P, d](const double* x) { return P(take(x, d), take(x + d, d), take(x + 2 * d, d)); };
    f.source = describe(f.kind, n, m, p.label);
    add_extent(f.extent, p.windows.w, d, "w");
    add_extent(f.extent, p.windows.z, d, "z");
    add_extent(f.extent, p.windows.xi, d, "xi");
    return f;
}

BoundField bound_Q(const AmplitudeSpec& p, const TMatrix& T, int n, int m, const QuadratureOptions& o) {
    check_orders(p.max_order, n, m, static_cast<bool>(p.deriv) || !p.terms.empty(), p.label);
    if (o.points_per_unit < 1) throw InvalidArgument("bound_Q: points_per_unit must be >= 1");
    const int d = p.d;
    const auto P = p_integrand(p, T, n, m);
    const auto W = std::make_shared<BoxRule>(box_rule(w_ball(p), d, o.points_per_unit));
    const auto Z = std::make_shared<BoxRule>(box_rule(z_ball(p, o.z_box), d, o.points_per_unit));
    BoundField f;
    f.kind = BoundKind::Q;
    f.n = n;
    f.m = m;
    f.tau = T.tau();
    f.arity = d;
    if (p.terms.size() == 1) {
        // xi factor separates: Q(xi) = |c| sum|d xi| * int int (...) dw dz
        const auto t = p.terms[0];
        const auto iw = upto(d, n), il = upto(d, m);
        const Point xi0 = p.windows.xi ? p.windows.xi->center : Point{};
        const double sx0 = abs_sum(partials(*t.xi, xi0, il, m));
        double wz = 0.0;
        if (sx0 != 0.0) {
            wz = q_value(P, *W, *Z, xi0) / sx0;
        } else {
            auto Pone = p_integrand(make_amplitude(d, {AmplitudeTerm{t.coef, t.w, t.z, constant_field(d, 1.0)}}, p.label), T,
                                    n, m);
            wz = q_value(Pone, *W, *Z, xi0);
        }
        f.eval = [t, il, m, d, wz](const double* x) { return wz * abs_sum(partials(*t.xi, take(x, d), il, m)); };
    } else if (!p.terms.empty()) {
        // w and z partials tabulated once per node; only the xi factor changes with xi
        struct Tables {
            std::vector<cplx> coef;
            std::vector<std::vector<double>> A, B;  // [term][node * |iw| + i]
            std::vector<double> den;                // [w node * |Z| + z node]
        };
        const auto iw = upto(d, n), il = upto(d, m);
        auto tb = std::make_shared<Tables>();
        const double tau = T.tau();
        for (const auto& t : p.terms) {
            tb->coef.push_back(t.coef);
            std::vector<double> a, b;
            for (const auto& w : W->nodes)
                for (double v : partials(*t.w, w, iw, n)) a.push_back(v);
            for (const auto& z : Z->nodes)
                for (double v : partials(*t.z, z, iw, n)) b.push_back(v);
            tb->A.push_back(std::move(a));
            tb->B.push_back(std::move(b));
        }
        if (m > 0)
            for (const auto& w : W->nodes)
                for (const auto& z : Z->nodes) tb->den.push_back(denominator(w, z, tau, m, d));
        const auto terms = p.terms;
        f.eval = [tb, terms, W, Z, iw, il, m, d](const double* x) {
            const Point xi = take(x, d);
            const std::size_t T = terms.size(), ni = iw.size(), nl = il.size();
            const std::size_t nw = W->nodes.size(), nz = Z->nodes.size();
            std::vector<std::vector<double>> C;
            for (const auto& t : terms) C.push_back(partials(*t.xi, xi, il, m));
            std::vector<cplx> u(T);
            double s = 0.0;
            for (std::size_t a = 0; a < nw; ++a)
                for (std::size_t i = 0; i < ni; ++i)
                    for (std::size_t l = 0; l < nl; ++l) {
                        bool any = false;
                        for (std::size_t t = 0; t < T; ++t) {
                            u[t] = tb->coef[t] * tb->A[t][a * ni + i] * C[t][l];
                            any = any || u[t] != 0.0;
                        }
                        if (!any) continue;
                        for (std::size_t b = 0; b < nz; ++b)
                            for (std::size_t j = 0; j < ni; ++j) {
                                cplx v = 0.0;
                                for (std::size_t t = 0; t < T; ++t) v += u[t] * tb->B[t][b * ni + j];
                                s += m > 0 ? std::abs(v) / tb->den[a * nz + b] : std::abs(v);
                            }
                    }
            return s * W->weight * Z->weight;
        };
    } else {
        f.eval = [P, W, Z, d](const double* x) { return q_value(P, *W, *Z, take(x, d)); };
    }
    f.source = describe(f.kind, n, m, p.label);
    add_extent(f.extent, p.windows.xi, d, "xi");
    return f;
}

double bound_Q_change(const AmplitudeSpec& p, const TMatrix& T, int n, int m, const Point& xi, const QuadratureOptions& o) {
    const auto P = p_integrand(p, T, n, m);
    const Ball wb = w_ball(p), zb = z_ball(p, o.z_box);
    const double a = q_value(P, box_rule(wb, p.d, o.points_per_unit), box_rule(zb, p.d, o.points_per_unit), xi);
    const double b = q_value(P, box_rule(wb, p.d, 2 * o.points_per_unit), box_rule(zb, p.d, 2 * o.points_per_unit), xi);
    if (a == 0.0 && b == 0.0) return 0.0;
    return std::abs(b - a) / std::abs(b);
}

BoundField bound_F(const SymbolSpec& a, int n, int m, FVariant variant) {
    check_orders(a.max_order, n, m, static_cast<bool>(a.deriv) || !a.terms.empty(), a.label);
    const int d = a.d;
    const auto iw = upto(d, n);
    std::vector<MultiIndex> il = variant == FVariant::full ? upto(d, m) : multi_indices(d, m);
    const auto cut = a.xi_cut;
    ScalarFn ev;
    if (a.terms.size() == 1) {
        const auto t = a.terms[0];
        ev = [t, iw, il, n, m, d, cut](const double* x) {
            const Point w = take(x, d), xi = take(x + d, d);
            if (t.coef == 0.0 || (cut && !cut->contains(xi))) return 0.0;
            const double sw = abs_sum(partials(*t.w, w, iw, n));
            if (sw == 0.0) return 0.0;
            return std::abs(t.coef) * sw * abs_sum(partials(*t.xi, xi, il, m));
        };
    } else {
        const auto dv = a.deriv;
        ev = [dv, iw, il, d](const double* x) {
            const Point w = take(x, d), xi = take(x + d, d);
            double s = 0.0;
            for (const auto& k : iw)
                for (const auto& l : il) s += std::abs(dv(k, l, w, xi));
            return s;
        };
    }
    BoundField f;
    f.kind = variant == FVariant::full ? BoundKind::F_full : BoundKind::F_circ;
    f.n = n;
    f.m = m;
    f.arity = 2 * d;
    f.eval = ev;
    f.source = describe(f.kind, n, m, a.label);
    add_extent(f.extent, a.windows.w, d, "w");
    add_extent(f.extent, a.windows.xi, d, "xi");
    return f;
}

namespace {

// int e^{-i x.k} f(x) dx over the box of b by the midpoint rule, step resolving the oscillation.
cplx field_transform(const Field& f, const Ball& b, const Point& k, int d, int ppu) {
    const double kmax = std::max(std::abs(k[0]), d == 2 ? std::abs(k[1]) : 0.0);
    const double step = std::min(1.0 / ppu, kPi / (4.0 * (kmax + 1.0)));
    const int N = std::max(8, static_cast<int>(std::ceil(2.0 * b.radius / step)));
    const double hs = 2.0 * b.radius / N;
    cplx s = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = b.center[0] - b.radius + (i + 0.5) * hs;
        if (d == 1) {
            const double v = f.value({x, 0.0});
            if (v != 0.0) s += v * std::polar(1.0, -x * k[0]);
            continue;
        }
        for (int j = 0; j < N; ++j) {
            const double y = b.center[1] - b.radius + (j + 0.5) * hs;
            const double v = f.value({x, y});
            if (v != 0.0) s += v * std::polar(1.0, -(x * k[0] + y * k[1]));
        }
    }
    return s * std::pow(hs, d);
}

struct TransformCache {
    std::mutex mu;
    std::map<std::tuple<std::size_t, int, double, double>, cplx> values;
};

}  // namespace

AmplitudeFourier amplitude_fourier(const AmplitudeSpec& p, const FourierOptions& o) {
    if (o.points_per_unit < 1) throw InvalidArgument("amplitude_fourier: points_per_unit must be >= 1");
    const int d = p.d;
    const double norm_c = std::pow(2.0 * kPi, -d);
    AmplitudeFourier F;
    F.d = d;
    F.xi_window = p.windows.xi;
    if (!p.terms.empty()) {
        const auto terms = p.terms;
        std::vector<Ball> wb, zb;
        for (const auto& t : terms) {
            auto a = t.w->window(1e-12), b = t.z->window(1e-12);
            if (!a) throw InvalidArgument(p.label + ": w factor has no window; cannot truncate the transform");
            if (!b) {
                if (!o.z_box) throw InvalidArgument(p.label + ": z factor has no window; supply a z box");
                b = o.z_box;
                F.warnings.push_back("z integration truncated to the supplied box");
            }
            wb.push_back(*a);
            zb.push_back(*b);
        }
        auto cache = std::make_shared<TransformCache>();
        const int ppu = o.points_per_unit;
        F.eval = [terms, wb, zb, cache, ppu, d, norm_c](const Point& eta, const Point& mu, const Point& xi) {
            cplx s = 0.0;
            for (std::size_t t = 0; t < terms.size(); ++t) {
                if (terms[t].coef == 0.0) continue;
                const double g = terms[t].xi->value(xi);
                if (g == 0.0) continue;
                auto get = [&](int which, const Point& k) {
                    const auto key = std::make_tuple(t, which, k[0], k[1]);
                    {
                        std::lock_guard<std::mutex> lk(cache->mu);
                        auto it = cache->values.find(key);
                        if (it != cache->values.end()) return it->second;
                    }
                    const cplx v = which == 0 ? field_transform(*terms[t].w, wb[t], k, d, ppu)
                                              : field_transform(*terms[t].z, zb[t], k, d, ppu);
                    std::lock_guard<std::mutex> lk(cache->mu);
                    cache->values.emplace(key, v);
                    return v;
                };
                s += terms[t].coef * get(0, eta) * get(1, mu) * g;
            }
            return norm_c * s;
        };
        return F;
    }
    const Ball wbl = w_ball(p), zbl = z_ball(p, o.z_box);
    {
        // Truncation check on the box boundary.
        const Point xi0 = p.windows.xi ? p.windows.xi->center : Point{};
        double worst = 0.0;
        for (int i = 0; i <= 32; ++i) {
            const double s = -1.0 + i / 16.0;
            const Point wc{wbl.center[0] + s * wbl.radius, wbl.center[1]};
            const Point zc{zbl.center[0] + s * zbl.radius, zbl.center[1]};
            worst = std::max({worst, std::abs(p.eval({wbl.center[0] + wbl.radius, wbl.center[1]}, zc, xi0)),
                              std::abs(p.eval({wbl.center[0] - wbl.radius, wbl.center[1]}, zc, xi0)),
                              std::abs(p.eval(wc, {zbl.center[0] + zbl.radius, zbl.center[1]}, xi0)),
                              std::abs(p.eval(wc, {zbl.center[0] - zbl.radius, zbl.center[1]}, xi0))});
        }
        if (worst > 1e-10) {
            std::ostringstream os;
            os << "truncation insufficient: |p| reaches " << worst << " on the (w, z) box boundary";
            F.warnings.push_back(os.str());
        }
    }
    const auto ev = p.eval;
    const int ppu = o.points_per_unit;
    F.eval = [ev, wbl, zbl, ppu, d, norm_c](const Point& eta, const Point& mu, const Point& xi) {
        const double kmax = std::max({std::abs(eta[0]), std::abs(eta[1]), std::abs(mu[0]), std::abs(mu[1])});
        const double step = std::min(1.0 / ppu, kPi / (4.0 * (kmax + 1.0)));
        const int nw = std::max(8, static_cast<int>(std::ceil(2.0 * wbl.radius / step)));
        const int nz = std::max(8, static_cast<int>(std::ceil(2.0 * zbl.radius / step)));
        const BoxRule W = box_rule(wbl, d, static_cast<int>(std::ceil(nw / (2.0 * wbl.radius))));
        const BoxRule Z = box_rule(zbl, d, static_cast<int>(std::ceil(nz / (2.0 * zbl.radius))));
        cplx s = 0.0;
        for (const auto& w : W.nodes)
            for (const auto& z : Z.nodes) {
                const cplx v = ev(w, z, xi);
                if (v != 0.0) s += v * std::polar(1.0, -(w[0] * eta[0] + w[1] * eta[1] + z[0] * mu[0] + z[1] * mu[1]));
            }
        return norm_c * s * W.weight * Z.weight;
    };
    return F;
}

std::vector<cplx> amplitude_fourier_samples(const AmplitudeFourier& F, const std::vector<double>& eta,
                                            const std::vector<double>& mu, const std::vector<double>& xi) {
    if (F.d != 1) throw InvalidArgument("amplitude_fourier_samples is for d = 1");
    std::vector<cplx> out;
    out.reserve(eta.size() * mu.size() * xi.size());
    for (double a : eta)
        for (double b : mu)
            for (double c : xi) out.push_back(F.eval({a, 0.0}, {b, 0.0}, {c, 0.0}));
    return out;
}

}  // namespace psido
