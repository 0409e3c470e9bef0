#include "psido/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace psido {

Grid::Grid(int d, double L, int n) : d_(d), L_(L), n_(n) {
    if (d != 1 && d != 2) throw InvalidArgument("grid dimension must be 1 or 2");
    if (!(L > 0.0)) throw InvalidArgument("grid half-width must be positive");
    if (n < 1) throw InvalidArgument("grid needs at least one point per axis");
}

Point Grid::point(Index i) const {
    if (d_ == 1) return {coord(static_cast<int>(i)), 0.0};
    return {coord(static_cast<int>(i / n_)), coord(static_cast<int>(i % n_))};
}

std::array<int, 2> Grid::axis_index(Index i) const {
    if (d_ == 1) return {static_cast<int>(i), 0};
    return {static_cast<int>(i / n_), static_cast<int>(i % n_)};
}

Grid default_grid(int d, double L) { return Grid(d, L, d == 1 ? 256 : 48); }

int XiQuadrature::required(const Ball& ball, double alpha, const Grid& grid) {
    return std::max(1, static_cast<int>(std::ceil(alpha * 2.0 * ball.radius * grid.diameter() / kPi - 1e-9)));
}

XiQuadrature XiQuadrature::for_alpha(int d, const Ball& ball, double alpha, const Grid& grid, double safety) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    if (!(ball.radius > 0.0)) throw InvalidArgument("xi quadrature ball must have positive radius");
    XiQuadrature q;
    q.d = d;
    q.ball = ball;
    q.n = std::max(8, static_cast<int>(std::ceil(safety * alpha * 2.0 * ball.radius * grid.diameter() / kPi)));
    return q;
}

void XiQuadrature::check(double alpha, const Grid& grid) const {
    if (d != grid.dim()) throw GridMismatch("xi quadrature dimension differs from the grid");
    if (n < 1) throw InvalidArgument("xi quadrature needs n >= 1");
    const double lhs = alpha * step() * grid.diameter();
    if (lhs > kPi * (1.0 + 1e-12)) {
        const int req = required(ball, alpha, grid);
        throw ResolutionError("xi quadrature under-resolved: alpha*dxi*diam = " + std::to_string(lhs) +
                                  " > pi; need n_xi >= " + std::to_string(req),
                              req);
    }
}

bool spatial_resolution_ok(const Ball& b, double alpha, const Grid& grid) {
    return alpha * (norm(b.center, grid.dim()) + b.radius) * grid.h() <= kPi * (1.0 + 1e-12);
}

int required_points_per_axis(const Ball& b, double alpha, double L) {
    return static_cast<int>(std::ceil(alpha * (norm(b.center, 2) + b.radius) * 2.0 * L / kPi - 1e-9));
}

Window Window::full(const Grid& grid) {
    Window w;
    w.rows.resize(grid.size());
    for (Index i = 0; i < grid.size(); ++i) w.rows[i] = i;
    w.cols = w.rows;
    return w;
}

std::vector<char> indicator_mask(const LipschitzDomain& D, const Grid& grid) {
    if (D.dim() != grid.dim()) throw GridMismatch("domain dimension differs from the grid");
    std::vector<char> m(grid.size());
    for (Index i = 0; i < grid.size(); ++i) m[i] = D.contains(grid.point(i)) ? 1 : 0;
    return m;
}

Window Window::split(const LipschitzDomain& D, const Grid& grid) {
    const auto m = indicator_mask(D, grid);
    Window w;
    for (Index i = 0; i < grid.size(); ++i) (m[i] ? w.rows : w.cols).push_back(i);
    return w;
}

bool OperatorMatrix::is_full_square() const {
    if (col_grid && *col_grid != grid) return false;
    if (static_cast<Index>(rows.size()) != grid.size() || static_cast<Index>(cols.size()) != grid.size()) return false;
    for (Index i = 0; i < grid.size(); ++i)
        if (rows[i] != i || cols[i] != i) return false;
    return true;
}

namespace {

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

cplx expi(double t) { return {std::cos(t), std::sin(t)}; }

// Integral of e^{i k xi} over [a, b].
cplx interval_exp_integral(double a, double b, double k) {
    return (b - a) * expi(k * 0.5 * (a + b)) * sinc(k * 0.5 * (b - a));
}

using Polygon = std::vector<Point>;

Polygon clip(const Polygon& P, const Point& n, double c) {
    Polygon out;
    const std::size_t m = P.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point& a = P[i];
        const Point& b = P[(i + 1) % m];
        const double fa = n[0] * a[0] + n[1] * a[1] - c;
        const double fb = n[0] * b[0] + n[1] * b[1] - c;
        if (fa >= 0) out.push_back(a);
        if ((fa >= 0) != (fb >= 0)) {
            const double t = fa / (fa - fb);
            out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
        }
    }
    return out;
}

struct Moments {
    double area = 0.0;
    Point centroid{};
    double jxx = 0.0, jyy = 0.0, jxy = 0.0;  // central second moments
};

Moments moments(const Polygon& P, const Point& origin) {
    Moments M;
    double sx = 0.0, sy = 0.0, ixx = 0.0, iyy = 0.0, ixy = 0.0;
    const std::size_t m = P.size();
    for (std::size_t i = 0; i < m; ++i) {
        const double x0 = P[i][0] - origin[0], y0 = P[i][1] - origin[1];
        const double x1 = P[(i + 1) % m][0] - origin[0], y1 = P[(i + 1) % m][1] - origin[1];
        const double cr = x0 * y1 - x1 * y0;
        M.area += cr / 2.0;
        sx += (x0 + x1) * cr / 6.0;
        sy += (y0 + y1) * cr / 6.0;
        ixx += (x0 * x0 + x0 * x1 + x1 * x1) * cr / 12.0;
        iyy += (y0 * y0 + y0 * y1 + y1 * y1) * cr / 12.0;
        ixy += (x0 * y1 + 2 * x0 * y0 + 2 * x1 * y1 + x1 * y0) * cr / 24.0;
    }
    if (M.area <= 0.0) return Moments{};
    const double cx = sx / M.area, cy = sy / M.area;
    M.centroid = {cx + origin[0], cy + origin[1]};
    M.jxx = ixx - M.area * cx * cx;
    M.jyy = iyy - M.area * cy * cy;
    M.jxy = ixy - M.area * cx * cy;
    return M;
}

// Integral of e^{i k.xi} over a convex counter-clockwise polygon.
cplx polygon_exp_integral(const Polygon& P, const Moments& M, const Point& k, double diam) {
    const double kk = k[0] * k[0] + k[1] * k[1];
    if (std::sqrt(kk) * diam < 1e-3) {
        const double q = k[0] * k[0] * M.jxx + 2 * k[0] * k[1] * M.jxy + k[1] * k[1] * M.jyy;
        return expi(k[0] * M.centroid[0] + k[1] * M.centroid[1]) * (M.area - 0.5 * q);
    }
    cplx s = 0.0;
    const std::size_t m = P.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Point& a = P[i];
        const Point& b = P[(i + 1) % m];
        const double ex = b[0] - a[0], ey = b[1] - a[1];
        const double kn = k[0] * ey - k[1] * ex;  // (k . outward normal) * edge length
        if (kn == 0.0) continue;
        const double mx = 0.5 * (a[0] + b[0]), my = 0.5 * (a[1] + b[1]);
        s += kn * expi(k[0] * mx + k[1] * my) * sinc(0.5 * (k[0] * ex + k[1] * ey));
    }
    return cplx(0.0, -1.0) * s / kk;
}

struct ClippedCell {
    Point center;  // point at which the smooth factor is sampled
    double lo = 0.0, hi = 0.0;  // d = 1
    Polygon poly;               // d = 2
    Moments mom;
    double diam = 0.0;
};

// Cells of the xi rule, split into full cells (weight mask) and region-clipped cells.
struct CellLayout {
    int d = 1;
    int n = 0;
    double step = 0.0;
    std::vector<double> nodes0, nodes1;
    std::vector<char> full;  // n or n*n flags
    std::vector<ClippedCell> clipped;
    bool filon = false;
};

CellLayout layout_cells(const XiQuadrature& q, const std::optional<XiRegion>& region) {
    CellLayout L;
    L.d = q.d;
    L.n = q.n;
    L.step = q.step();
    L.filon = region.has_value();
    for (int k = 0; k < q.n; ++k) {
        L.nodes0.push_back(q.node(k, 0));
        if (q.d == 2) L.nodes1.push_back(q.node(k, 1));
    }
    const double half = L.step / 2.0;
    auto in_ball = [&](const Point& c) {
        if (!q.mask_to_ball) return true;
        double s = 0.0;
        for (int i = 0; i < q.d; ++i) s += (c[i] - q.ball.center[i]) * (c[i] - q.ball.center[i]);
        return s <= q.ball.radius * q.ball.radius;
    };
    if (q.d == 1) {
        L.full.assign(q.n, 0);
        for (int k = 0; k < q.n; ++k) {
            const double c = L.nodes0[k];
            if (!in_ball({c, 0.0})) continue;
            if (!region) {
                L.full[k] = 1;
                continue;
            }
            const double a = std::max(c - half, region->lo), b = std::min(c + half, region->hi);
            if (b <= a) continue;
            if (a == c - half && b == c + half) {
                L.full[k] = 1;
                continue;
            }
            ClippedCell cc;
            cc.lo = a;
            cc.hi = b;
            cc.center = {0.5 * (a + b), 0.0};
            L.clipped.push_back(cc);
        }
        return L;
    }
    L.full.assign(std::size_t(q.n) * q.n, 0);
    for (int k1 = 0; k1 < q.n; ++k1)
        for (int k2 = 0; k2 < q.n; ++k2) {
            const Point c{L.nodes0[k1], L.nodes1[k2]};
            if (!in_ball(c)) continue;
            if (!region) {
                L.full[std::size_t(k1) * q.n + k2] = 1;
                continue;
            }
            Polygon P{{c[0] - half, c[1] - half}, {c[0] + half, c[1] - half}, {c[0] + half, c[1] + half}, {c[0] - half, c[1] + half}};
            bool all_in = true;
            for (const auto& v : P)
                for (const auto& [nrm, off] : region->half_planes)
                    if (!(nrm[0] * v[0] + nrm[1] * v[1] >= off)) all_in = false;
            if (all_in) {
                L.full[std::size_t(k1) * q.n + k2] = 1;
                continue;
            }
            for (const auto& [nrm, off] : region->half_planes) {
                P = clip(P, nrm, off);
                if (P.size() < 3) break;
            }
            if (P.size() < 3) continue;
            ClippedCell cc;
            cc.mom = moments(P, c);
            if (cc.mom.area <= 1e-300) continue;
            cc.poly = P;
            cc.center = cc.mom.centroid;
            cc.diam = std::sqrt(2.0) * L.step;
            L.clipped.push_back(cc);
        }
    return L;
}

// k(delta) = (alpha/2pi)^d * integral of e^{i alpha D.xi} G(xi) over the rule, D = h * delta,
// for delta in [-(n-1), n-1]^d; stored with offset n-1 per axis.
Eigen::MatrixXcd kernel_table(const Field* G, const CellLayout& L, double alpha, const Grid& grid) {
    const int nx = grid.n_per_axis();
    const int nd = 2 * nx - 1;
    const double h = grid.h();
    const double pref = std::pow(alpha / (2.0 * kPi), L.d);
    auto gval = [&](const Point& p) { return G ? G->value(p) : 1.0; };
    if (L.d == 1) {
        std::vector<double> gv(L.n, 0.0);
        for (int k = 0; k < L.n; ++k)
            if (L.full[k]) gv[k] = gval({L.nodes0[k], 0.0});
        std::vector<double> gc;
        for (const auto& c : L.clipped) gc.push_back(gval(c.center));
        Eigen::MatrixXcd T(nd, 1);
        for (int di = 0; di < nd; ++di) {
            const double D = h * (di - (nx - 1));
            const double kap = alpha * D;
            cplx s = 0.0;
            // Exponentials by recurrence, reseeded every 64 nodes.
            const cplx r = expi(kap * L.step);
            cplx e;
            for (int k = 0; k < L.n; ++k) {
                if (k % 64 == 0) e = expi(kap * L.nodes0[k]);
                else e *= r;
                if (gv[k] != 0.0) s += gv[k] * e;
            }
            s *= L.step * (L.filon ? sinc(0.5 * kap * L.step) : 1.0);
            for (std::size_t c = 0; c < L.clipped.size(); ++c)
                if (gc[c] != 0.0) s += gc[c] * interval_exp_integral(L.clipped[c].lo, L.clipped[c].hi, kap);
            T(di, 0) = pref * s;
        }
        return T;
    }
    Eigen::MatrixXcd Gm = Eigen::MatrixXcd::Zero(L.n, L.n);
    for (int k1 = 0; k1 < L.n; ++k1)
        for (int k2 = 0; k2 < L.n; ++k2)
            if (L.full[std::size_t(k1) * L.n + k2]) Gm(k1, k2) = gval({L.nodes0[k1], L.nodes1[k2]});
    Eigen::MatrixXcd E1(nd, L.n), E2(nd, L.n);
    for (int di = 0; di < nd; ++di) {
        const double kap = alpha * h * (di - (nx - 1));
        const double f = L.step * (L.filon ? sinc(0.5 * kap * L.step) : 1.0);
        for (int k = 0; k < L.n; ++k) {
            E1(di, k) = f * expi(kap * L.nodes0[k]);
            E2(di, k) = f * expi(kap * L.nodes1[k]);
        }
    }
    Eigen::MatrixXcd T = E1 * Gm * E2.transpose();
    for (const auto& c : L.clipped) {
        const double g = gval(c.center);
        if (g == 0.0) continue;
        for (int d1 = 0; d1 < nd; ++d1)
            for (int d2 = 0; d2 < nd; ++d2) {
                const Point k{alpha * h * (d1 - (nx - 1)), alpha * h * (d2 - (nx - 1))};
                T(d1, d2) += g * polygon_exp_integral(c.poly, c.mom, k, c.diam);
            }
    }
    return T * pref;
}

struct EngineTerm {
    cplx coef;
    FieldPtr w;
    FieldPtr z;  // null: z independent
    FieldPtr xi;
};

std::string describe(const std::string& what, const std::string& label, double alpha, const TMatrix& T,
                     const XiQuadrature& q) {
    std::ostringstream os;
    os << what << " label=" << label << " alpha=" << alpha << " T=[[" << T.t11() << "," << T.t12() << "],[" << T.t21()
       << "," << T.t22() << "]] n_xi=" << q.n;
    return os.str();
}

void support_warning(OperatorMatrix& M, const std::optional<Ball>& b, const Grid& g) {
    if (!b) return;
    for (int i = 0; i < g.dim(); ++i)
        if (std::abs(b->center[i]) + b->radius > g.half_width()) {
            M.warnings.push_back("x-support ball exceeds the box [-" + std::to_string(g.half_width()) + ", " +
                                 std::to_string(g.half_width()) + "]^d");
            return;
        }
}

OperatorMatrix engine(const std::vector<EngineTerm>& terms, const std::optional<XiRegion>& region, const TMatrix& T,
                      double alpha, const Grid& grid, const XiQuadrature& quad, const std::optional<Window>& window) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    quad.check(alpha, grid);
    if (region && region->d != grid.dim()) throw GridMismatch("xi region dimension differs from the grid");
    const Window W = window ? *window : Window::full(grid);
    const Index R = static_cast<Index>(W.rows.size()), C = static_cast<Index>(W.cols.size());
    OperatorMatrix M;
    M.grid = grid;
    M.rows = W.rows;
    M.cols = W.cols;
    M.entries = Eigen::MatrixXcd::Zero(R, C);
    const CellLayout L = layout_cells(quad, region);
    const int nx = grid.n_per_axis();
    const double wgt = grid.weight();

    std::map<const Field*, Eigen::MatrixXcd> tables;
    for (const auto& t : terms)
        if (t.coef != 0.0 && !tables.count(t.xi.get())) tables[t.xi.get()] = kernel_table(t.xi.get(), L, alpha, grid);

    std::vector<Point> xr(R), xc(C);
    std::vector<std::array<int, 2>> ir(R), ic(C);
    for (Index r = 0; r < R; ++r) {
        xr[r] = grid.point(W.rows[r]);
        ir[r] = grid.axis_index(W.rows[r]);
    }
    for (Index c = 0; c < C; ++c) {
        xc[c] = grid.point(W.cols[c]);
        ic[c] = grid.axis_index(W.cols[c]);
    }
    auto lin = [](double a, const Point& x, double b, const Point& y) { return Point{a * x[0] + b * y[0], a * x[1] + b * y[1]}; };

    for (const auto& t : terms) {
        if (t.coef == 0.0) continue;
        const Eigen::MatrixXcd& K = tables.at(t.xi.get());
        // Factor values: per row, per column, or per entry depending on which variables they see.
        auto factor = [&](const FieldPtr& f, double a, double b) -> std::function<double(Index, Index)> {
            if (!f) return [](Index, Index) { return 1.0; };
            if (b == 0.0) {
                auto v = std::make_shared<std::vector<double>>(R);
                for (Index r = 0; r < R; ++r) (*v)[r] = f->value(lin(a, xr[r], 0.0, xr[r]));
                return [v](Index r, Index) { return (*v)[r]; };
            }
            if (a == 0.0) {
                auto v = std::make_shared<std::vector<double>>(C);
                for (Index c = 0; c < C; ++c) (*v)[c] = f->value(lin(0.0, xc[c], b, xc[c]));
                return [v](Index, Index c) { return (*v)[c]; };
            }
            const Field* fp = f.get();
            return [fp, a, b, &xr, &xc, lin](Index r, Index c) { return fp->value(lin(a, xr[r], b, xc[c])); };
        };
        const auto fw = factor(t.w, T.t11(), T.t12());
        const auto fz = factor(t.z, T.t21(), T.t22());
        for (Index c = 0; c < C; ++c)
            for (Index r = 0; r < R; ++r) {
                const double v = fw(r, c);
                if (v == 0.0) continue;
                const double u = fz(r, c);
                if (u == 0.0) continue;
                const int d0 = ir[r][0] - ic[c][0] + nx - 1;
                const int d1 = grid.dim() == 2 ? ir[r][1] - ic[c][1] + nx - 1 : 0;
                M.entries(r, c) += wgt * t.coef * v * u * K(d0, d1);
            }
    }
    return M;
}

// Black-box amplitude: direct sum over xi cells for every entry.
OperatorMatrix engine_generic(const AmplitudeEval& p, const std::optional<XiRegion>& region, const TMatrix& T,
                              double alpha, const Grid& grid, const XiQuadrature& quad, const std::optional<Window>& window) {
    if (!(alpha > 0.0)) throw InvalidArgument("alpha must be positive");
    quad.check(alpha, grid);
    const Window W = window ? *window : Window::full(grid);
    const Index R = static_cast<Index>(W.rows.size()), C = static_cast<Index>(W.cols.size());
    OperatorMatrix M;
    M.grid = grid;
    M.rows = W.rows;
    M.cols = W.cols;
    M.entries = Eigen::MatrixXcd::Zero(R, C);
    const CellLayout L = layout_cells(quad, region);
    const int d = grid.dim();
    const double pref = std::pow(alpha / (2.0 * kPi), d);
    const double vol = std::pow(L.step, d);
    std::vector<Point> full_nodes;
    if (d == 1) {
        for (int k = 0; k < L.n; ++k)
            if (L.full[k]) full_nodes.push_back({L.nodes0[k], 0.0});
    } else {
        for (int k1 = 0; k1 < L.n; ++k1)
            for (int k2 = 0; k2 < L.n; ++k2)
                if (L.full[std::size_t(k1) * L.n + k2]) full_nodes.push_back({L.nodes0[k1], L.nodes1[k2]});
    }
    for (Index c = 0; c < C; ++c)
        for (Index r = 0; r < R; ++r) {
            const Point x = grid.point(W.rows[r]), y = grid.point(W.cols[c]);
            const auto [w, z] = T.forward(x, y);
            const Point D{x[0] - y[0], x[1] - y[1]};
            double fil = 1.0;
            if (L.filon)
                for (int i = 0; i < d; ++i) fil *= sinc(0.5 * alpha * D[i] * L.step);
            cplx s = 0.0;
            for (const auto& xi : full_nodes) {
                const cplx v = p(w, z, xi);
                if (v != 0.0) s += v * expi(alpha * (D[0] * xi[0] + D[1] * xi[1]));
            }
            s *= vol * fil;
            for (const auto& cc : L.clipped) {
                const cplx v = p(w, z, cc.center);
                if (v == 0.0) continue;
                if (d == 1)
                    s += v * interval_exp_integral(cc.lo, cc.hi, alpha * D[0]);
                else
                    s += v * polygon_exp_integral(cc.poly, cc.mom, {alpha * D[0], alpha * D[1]}, cc.diam);
            }
            M.entries(r, c) = grid.weight() * pref * s;
        }
    return M;
}

std::optional<Ball> xi_ball_of(const std::optional<SupportBalls>& s, const Windows& w) {
    if (s) return s->xi;
    return w.xi;
}

}  // namespace

XiQuadrature default_quadrature(const SymbolSpec& a, double alpha, const Grid& grid, double safety) {
    const auto b = xi_ball_of(a.support, a.windows);
    if (!b) throw InvalidArgument("symbol has no xi support or window; pass an explicit XiQuadrature");
    return XiQuadrature::for_alpha(a.d, *b, alpha, grid, safety);
}

XiQuadrature default_quadrature(const AmplitudeSpec& p, double alpha, const Grid& grid, double safety) {
    const auto b = xi_ball_of(p.support, p.windows);
    if (!b) throw InvalidArgument("amplitude has no xi support or window; pass an explicit XiQuadrature");
    return XiQuadrature::for_alpha(p.d, *b, alpha, grid, safety);
}

OperatorMatrix assemble_amplitude(const AmplitudeSpec& p, const TMatrix& T, double alpha, const Grid& grid,
                                  const XiQuadrature& quad, const std::optional<Window>& window) {
    if (p.d != grid.dim()) throw GridMismatch("amplitude dimension differs from the grid");
    OperatorMatrix M;
    if (!p.terms.empty()) {
        std::vector<EngineTerm> terms;
        for (const auto& t : p.terms) terms.push_back({t.coef, t.w, t.z->label() == "constant" && t.z->value({}) == 1.0 ? nullptr : t.z, t.xi});
        M = engine(terms, std::nullopt, T, alpha, grid, quad, window);
    } else {
        M = engine_generic(p.eval, std::nullopt, T, alpha, grid, quad, window);
    }
    M.provenance = describe("amplitude", p.label, alpha, T, quad);
    support_warning(M, p.support ? std::optional<Ball>(p.support->w) : p.windows.w, grid);
    return M;
}

OperatorMatrix assemble_t_quant(const SymbolSpec& a, double t, double alpha, const Grid& grid, const XiQuadrature& quad,
                                const std::optional<Window>& window) {
    if (a.d != grid.dim()) throw GridMismatch("symbol dimension differs from the grid");
    const TMatrix T = t_to_matrix(t);
    OperatorMatrix M;
    if (!a.terms.empty()) {
        std::vector<EngineTerm> terms;
        for (const auto& s : a.terms) terms.push_back({s.coef, s.w, nullptr, s.xi});
        M = engine(terms, a.xi_cut, T, alpha, grid, quad, window);
    } else {
        auto ev = a.eval;
        // The cut is applied by the cell layout, so sample the symbol inside the region.
        M = engine_generic([ev](const Point& w, const Point&, const Point& xi) { return ev(w, xi); }, a.xi_cut, T, alpha,
                           grid, quad, window);
    }
    M.provenance = describe("t-quantization t=" + std::to_string(t), a.label, alpha, T, quad);
    support_warning(M, a.support ? std::optional<Ball>(a.support->w) : a.windows.w, grid);
    return M;
}

OperatorMatrix assemble_t_quant(const SymbolSpec& a, double t, double alpha, const Grid& grid,
                                const std::optional<Window>& window) {
    return assemble_t_quant(a, t, alpha, grid, default_quadrature(a, alpha, grid), window);
}

XiSymbol XiSymbol::indicator(const XiRegion& region) {
    if (!region.bounded()) throw InvalidArgument("multiplier indicator needs a bounded region");
    XiSymbol g;
    g.d = region.d;
    g.region = region;
    return g;
}

XiSymbol XiSymbol::smooth(FieldPtr factor) {
    if (!factor) throw InvalidArgument("smooth multiplier needs a field");
    XiSymbol g;
    g.d = factor->dim();
    g.factor = std::move(factor);
    return g;
}

namespace {

Polygon region_polygon(const XiRegion& r) {
    const double B = 1e6;
    Polygon P{{-B, -B}, {B, -B}, {B, B}, {-B, B}};
    for (const auto& [n, c] : r.half_planes) P = clip(P, n, c);
    return P;
}

}  // namespace

std::optional<Ball> XiSymbol::support() const {
    if (factor && factor->window(1e-12)) return factor->window(1e-12);
    if (!region || !region->bounded()) return std::nullopt;
    if (d == 1) return Ball{{0.5 * (region->lo + region->hi), 0.0}, 0.5 * (region->hi - region->lo)};
    const Polygon P = region_polygon(*region);
    if (P.size() < 3) throw InvalidArgument("multiplier region is empty");
    Point lo{P[0]}, hi{P[0]};
    for (const auto& v : P)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], v[i]);
            hi[i] = std::max(hi[i], v[i]);
        }
    return Ball{{0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])}, 0.5 * std::max(hi[0] - lo[0], hi[1] - lo[1])};
}

OperatorMatrix assemble_multiplier(const XiSymbol& g, double alpha, const Grid& grid,
                                   const std::optional<XiQuadrature>& quad, const std::optional<Window>& window) {
    if (g.d != grid.dim()) throw GridMismatch("multiplier dimension differs from the grid");
    XiQuadrature q;
    if (quad) {
        q = *quad;
    } else {
        const auto b = g.support();
        if (!b) throw InvalidArgument("multiplier has no bounded support; pass an explicit XiQuadrature");
        q = XiQuadrature::for_alpha(g.d, *b, alpha, grid);
        q.mask_to_ball = g.factor != nullptr;
    }
    std::vector<EngineTerm> terms{{1.0, nullptr, nullptr, g.factor ? g.factor : constant_field(g.d, 1.0)}};
    OperatorMatrix M = engine(terms, g.region, t_to_matrix(0.0), alpha, grid, q, window);
    std::ostringstream os;
    os << "multiplier" << (g.region ? " indicator" : "") << (g.factor ? " smooth=" + g.factor->label() : "")
       << " alpha=" << alpha << " n_xi=" << q.n;
    M.provenance = os.str();
    return M;
}

OperatorMatrix indicator_diag(const LipschitzDomain& D, const Grid& grid) {
    const auto m = indicator_mask(D, grid);
    OperatorMatrix M;
    M.grid = grid;
    const Window W = Window::full(grid);
    M.rows = W.rows;
    M.cols = W.cols;
    M.entries = Eigen::MatrixXcd::Zero(grid.size(), grid.size());
    for (Index i = 0; i < grid.size(); ++i) M.entries(i, i) = m[i] ? 1.0 : 0.0;
    M.provenance = "indicator " + D.label();
    return M;
}

OperatorMatrix hankel(const LipschitzDomain& D, const OperatorMatrix& A) {
    if (A.col_grid && *A.col_grid != A.grid) throw GridMismatch("hankel needs a matrix on a single grid");
    const auto m = indicator_mask(D, A.grid);
    OperatorMatrix H = A;
    for (Index r = 0; r < static_cast<Index>(A.rows.size()); ++r)
        for (Index c = 0; c < static_cast<Index>(A.cols.size()); ++c)
            if (!m[A.rows[r]] || m[A.cols[c]]) H.entries(r, c) = 0.0;
    H.provenance = "hankel[" + D.label() + "](" + A.provenance + ")";
    return H;
}

OperatorMatrix multiply(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.column_grid() != B.grid || A.cols != B.rows) throw GridMismatch("multiply: inner index sets differ");
    OperatorMatrix M;
    M.grid = A.grid;
    M.col_grid = B.col_grid;
    M.rows = A.rows;
    M.cols = B.cols;
    M.entries = A.entries * B.entries;
    M.provenance = "(" + A.provenance + ")*(" + B.provenance + ")";
    return M;
}

OperatorMatrix subtract(const OperatorMatrix& A, const OperatorMatrix& B) {
    if (A.grid != B.grid || A.column_grid() != B.column_grid() || A.rows != B.rows || A.cols != B.cols)
        throw GridMismatch("subtract: index sets differ");
    OperatorMatrix M = A;
    M.entries -= B.entries;
    M.provenance = "(" + A.provenance + ")-(" + B.provenance + ")";
    return M;
}

OperatorMatrix commutator(const OperatorMatrix& A, const OperatorMatrix& P, double tol) {
    if (!A.is_full_square() || !P.is_full_square() || A.grid != P.grid)
        throw GridMismatch("commutator needs full square matrices on one grid");
    const double defect = (P.entries * P.entries - P.entries).cwiseAbs().maxCoeff();
    if (defect > tol) throw InvalidArgument("commutator: second operand is not idempotent within tolerance");
    OperatorMatrix M = A;
    M.entries = A.entries * P.entries - P.entries * A.entries;
    M.provenance = "[" + A.provenance + ", " + P.provenance + "]";
    return M;
}

OperatorMatrix restrict_to(const OperatorMatrix& A, const Window& W) {
    if (!A.is_full_square()) throw GridMismatch("restrict_to needs a full square matrix");
    OperatorMatrix M;
    M.grid = A.grid;
    M.rows = W.rows;
    M.cols = W.cols;
    M.entries.resize(static_cast<Index>(W.rows.size()), static_cast<Index>(W.cols.size()));
    for (Index c = 0; c < M.entries.cols(); ++c)
        for (Index r = 0; r < M.entries.rows(); ++r) M.entries(r, c) = A.entries(W.rows[r], W.cols[c]);
    M.provenance = A.provenance;
    M.warnings = A.warnings;
    return M;
}

OperatorMatrix bs_kernel_operator(const std::function<double(const Point&)>& f, const std::function<double(const Point&)>& g,
                                  const Eigen::MatrixXd& S, const Grid& gx, const Grid& gy) {
    if (S.rows() != gx.dim() || S.cols() != gy.dim()) throw InvalidArgument("bs_kernel_operator: S dimension mismatch");
    OperatorMatrix M;
    M.grid = gx;
    M.col_grid = gy;
    M.rows = Window::full(gx).rows;
    M.cols = Window::full(gy).rows;
    M.entries.resize(gx.size(), gy.size());
    const double sx = std::sqrt(gx.weight()), sy = std::sqrt(gy.weight());
    std::vector<double> fv(gx.size()), gv(gy.size());
    for (Index i = 0; i < gx.size(); ++i) fv[i] = f(gx.point(i));
    for (Index j = 0; j < gy.size(); ++j) gv[j] = g(gy.point(j));
    for (Index j = 0; j < gy.size(); ++j) {
        const Point y = gy.point(j);
        for (Index i = 0; i < gx.size(); ++i) {
            const Point x = gx.point(i);
            double ph = 0.0;
            for (int a = 0; a < gx.dim(); ++a)
                for (int b = 0; b < gy.dim(); ++b) ph += x[a] * S(a, b) * y[b];
            M.entries(i, j) = sx * fv[i] * expi(ph) * gv[j] * sy;
        }
    }
    M.provenance = "bs_kernel";
    return M;
}

void write_binary(const OperatorMatrix& M, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path + " for writing");
    const char magic[8] = {'P', 'S', 'I', 'D', 'O', 'O', 'P', '1'};
    os.write(magic, 8);
    const std::int32_t d = M.grid.dim(), n = M.grid.n_per_axis();
    const double L = M.grid.half_width();
    const std::int64_t R = M.entries.rows(), C = M.entries.cols();
    os.write(reinterpret_cast<const char*>(&d), 4);
    os.write(reinterpret_cast<const char*>(&n), 4);
    os.write(reinterpret_cast<const char*>(&L), 8);
    os.write(reinterpret_cast<const char*>(&R), 8);
    os.write(reinterpret_cast<const char*>(&C), 8);
    for (Index r : M.rows) {
        const std::int64_t v = r;
        os.write(reinterpret_cast<const char*>(&v), 8);
    }
    for (Index c : M.cols) {
        const std::int64_t v = c;
        os.write(reinterpret_cast<const char*>(&v), 8);
    }
    for (Index r = 0; r < R; ++r)
        for (Index c = 0; c < C; ++c) {
            const double re = M.entries(r, c).real(), im = M.entries(r, c).imag();
            os.write(reinterpret_cast<const char*>(&re), 8);
            os.write(reinterpret_cast<const char*>(&im), 8);
        }
    if (!os) throw Error("write failed: " + path);
}

OperatorMatrix read_binary(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, "PSIDOOP1", 8) != 0) throw Error(path + ": not an operator matrix file");
    std::int32_t d, n;
    double L;
    std::int64_t R, C;
    is.read(reinterpret_cast<char*>(&d), 4);
    is.read(reinterpret_cast<char*>(&n), 4);
    is.read(reinterpret_cast<char*>(&L), 8);
    is.read(reinterpret_cast<char*>(&R), 8);
    is.read(reinterpret_cast<char*>(&C), 8);
    if (!is || R < 0 || C < 0) throw Error(path + ": truncated header");
    OperatorMatrix M;
    M.grid = Grid(d, L, n);
    M.rows.resize(R);
    M.cols.resize(C);
    for (auto& r : M.rows) {
        std::int64_t v;
        is.read(reinterpret_cast<char*>(&v), 8);
        r = v;
    }
    for (auto& c : M.cols) {
        std::int64_t v;
        is.read(reinterpret_cast<char*>(&v), 8);
        c = v;
    }
    M.entries.resize(R, C);
    for (Index r = 0; r < R; ++r)
        for (Index c = 0; c < C; ++c) {
            double re, im;
            is.read(reinterpret_cast<char*>(&re), 8);
            is.read(reinterpret_cast<char*>(&im), 8);
            M.entries(r, c) = {re, im};
        }
    if (!is) throw Error(path + ": truncated data");
    M.provenance = "read " + path;
    return M;
}

void write_text(const OperatorMatrix& M, const std::string& path) {
    if (M.entries.size() > 1'000'000) throw InvalidArgument("write_text is meant for small matrices");
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path + " for writing");
    os << "# psido operator matrix\n";
    os << "# d=" << M.grid.dim() << " n=" << M.grid.n_per_axis() << " L=" << M.grid.half_width()
       << " rows=" << M.entries.rows() << " cols=" << M.entries.cols() << "\n";
    os << "# " << M.provenance << "\n";
    os.precision(17);
    for (Index r = 0; r < M.entries.rows(); ++r) {
        for (Index c = 0; c < M.entries.cols(); ++c) {
            if (c) os << ' ';
            os << M.entries(r, c).real() << ' ' << M.entries(r, c).imag();
        }
        os << '\n';
    }
}

}  // namespace psido
