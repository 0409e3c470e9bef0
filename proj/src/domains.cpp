#include "psido/domains.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "psido/field.hpp"

namespace psido {

Point RigidFrame::to_local(const Point& x) const {
    const double c = std::cos(angle), s = std::sin(angle);
    const double dx = x[0] - shift[0], dy = x[1] - shift[1];
    return {c * dx + s * dy, -s * dx + c * dy};
}

Point RigidFrame::to_global(const Point& l) const {
    const double c = std::cos(angle), s = std::sin(angle);
    return {c * l[0] - s * l[1] + shift[0], s * l[0] + c * l[1] + shift[1]};
}

bool EpigraphChart::contains(const Point& x) const {
    const Point l = frame.to_local(x);
    return l[1] > phi(l[0]);
}

LipschitzDomain LipschitzDomain::halfline_pos() {
    LipschitzDomain D;
    D.kind_ = Kind::halfline_pos;
    D.label_ = "halfline_pos";
    D.inside_ = [](const Point& x) { return x[0] > 0.0; };
    return D;
}

LipschitzDomain LipschitzDomain::halfline_neg() {
    LipschitzDomain D;
    D.kind_ = Kind::halfline_neg;
    D.label_ = "halfline_neg";
    D.inside_ = [](const Point& x) { return x[0] < 0.0; };
    return D;
}

LipschitzDomain LipschitzDomain::interval(double a, double b) {
    if (!(a < b)) throw InvalidArgument("interval requires a < b");
    LipschitzDomain D;
    D.kind_ = Kind::interval;
    D.a_ = a;
    D.b_ = b;
    D.label_ = "interval";
    D.inside_ = [a, b](const Point& x) { return x[0] > a && x[0] < b; };
    return D;
}

LipschitzDomain LipschitzDomain::epigraph(std::function<double(double)> phi, double M, RigidFrame frame,
                                          std::string label) {
    if (!phi) throw InvalidArgument("epigraph needs a boundary function");
    if (!(M >= 0.0)) throw InvalidArgument("Lipschitz constant must be nonnegative");
    LipschitzDomain D;
    D.kind_ = Kind::epigraph;
    D.d_ = 2;
    D.M_ = M;
    D.phi_ = phi;
    D.frame_ = frame;
    D.label_ = std::move(label);
    D.inside_ = [phi, frame](const Point& x) {
        const Point l = frame.to_local(x);
        return l[1] > phi(l[0]);
    };
    return D;
}

namespace {

// Frame whose local x2 axis points along the unit vector n, with origin at p.
RigidFrame frame_towards(const Point& p, const Point& n) { return RigidFrame{std::atan2(-n[0], n[1]), p}; }

}  // namespace

LipschitzDomain LipschitzDomain::disc(const Point& c, double R) {
    if (!(R > 0.0)) throw InvalidArgument("disc radius must be positive");
    LipschitzDomain D;
    D.kind_ = Kind::bounded_chartable;
    D.d_ = 2;
    D.label_ = "disc";
    D.inside_ = [c, R](const Point& x) { return std::hypot(x[0] - c[0], x[1] - c[1]) < R; };
    const int nch = 12;
    const double r = 0.3 * R;
    const double clampv = 2.0 * r;
    for (int k = 0; k < nch; ++k) {
        const double a = 2.0 * kPi * k / nch;
        const Point p{c[0] + R * std::cos(a), c[1] + R * std::sin(a)};
        const Point n{-std::cos(a), -std::sin(a)};
        EpigraphChart ch;
        ch.ball = Ball{p, r};
        ch.phi = [R, clampv](double s) {
            const double t = std::clamp(s, -clampv, clampv);
            return R - std::sqrt(R * R - t * t);
        };
        ch.lipschitz = clampv / std::sqrt(R * R - clampv * clampv);
        ch.frame = frame_towards(p, n);
        D.M_ = std::max(D.M_, ch.lipschitz);
        D.charts_.push_back(ch);
    }
    return D;
}

LipschitzDomain LipschitzDomain::square(const Point& c, double a) {
    if (!(a > 0.0)) throw InvalidArgument("square half side must be positive");
    LipschitzDomain D;
    D.kind_ = Kind::bounded_chartable;
    D.d_ = 2;
    D.label_ = "square";
    D.inside_ = [c, a](const Point& x) { return std::abs(x[0] - c[0]) < a && std::abs(x[1] - c[1]) < a; };
    const double r = 0.75 * a;
    const double s2 = 1.0 / std::sqrt(2.0);
    for (int sx : {-1, 1})
        for (int sy : {-1, 1}) {
            const Point p{c[0] + sx * a, c[1] + sy * a};
            EpigraphChart ch;
            ch.ball = Ball{p, r};
            ch.phi = [](double s) { return std::abs(s); };
            ch.lipschitz = 1.0;
            ch.frame = frame_towards(p, {-sx * s2, -sy * s2});
            D.charts_.push_back(ch);
        }
    const std::array<Point, 4> axes{Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}};
    for (const auto& e : axes) {
        const Point p{c[0] + a * e[0], c[1] + a * e[1]};
        EpigraphChart ch;
        ch.ball = Ball{p, r};
        ch.phi = [](double) { return 0.0; };
        ch.lipschitz = 0.0;
        ch.frame = frame_towards(p, {-e[0], -e[1]});
        D.charts_.push_back(ch);
    }
    D.M_ = 1.0;
    return D;
}

bool LipschitzDomain::contains(const Point& x) const { return inside_(x); }

std::vector<Point> LipschitzDomain::boundary_samples(int count, double extent) const {
    std::vector<Point> pts;
    switch (kind_) {
        case Kind::halfline_pos:
        case Kind::halfline_neg:
            pts.push_back({0.0, 0.0});
            break;
        case Kind::interval:
            pts.push_back({a_, 0.0});
            pts.push_back({b_, 0.0});
            break;
        case Kind::epigraph:
            for (int i = 0; i < count; ++i) {
                const double s = -extent + 2.0 * extent * i / std::max(count - 1, 1);
                pts.push_back(frame_.to_global({s, phi_(s)}));
            }
            break;
        case Kind::bounded_chartable:
            if (label_ == "disc") {
                // Recover centre and radius from two antipodal chart origins.
                const Point p0 = charts_[0].frame.shift;
                const Point p6 = charts_[charts_.size() / 2].frame.shift;
                const Point c{(p0[0] + p6[0]) / 2, (p0[1] + p6[1]) / 2};
                const double R = std::hypot(p0[0] - c[0], p0[1] - c[1]);
                for (int i = 0; i < count; ++i) {
                    const double a = 2.0 * kPi * i / count;
                    pts.push_back({c[0] + R * std::cos(a), c[1] + R * std::sin(a)});
                }
            } else {
                const Point c0 = charts_[0].frame.shift;  // corner (-a, -a) offset
                const Point c3 = charts_[3].frame.shift;  // corner (+a, +a) offset
                const Point c{(c0[0] + c3[0]) / 2, (c0[1] + c3[1]) / 2};
                const double a = (c3[0] - c0[0]) / 2;
                for (int i = 0; i < count; ++i) {
                    const double t = 8.0 * a * i / count;
                    const int side = static_cast<int>(t / (2 * a));
                    const double u = t - side * 2 * a - a;
                    Point p;
                    if (side == 0) p = {u, -a};
                    else if (side == 1) p = {a, u};
                    else if (side == 2) p = {-u, a};
                    else p = {-a, -u};
                    pts.push_back({c[0] + p[0], c[1] + p[1]});
                }
            }
            break;
    }
    return pts;
}

int indicator(const LipschitzDomain& domain, const Point& x) { return domain.contains(x) ? 1 : 0; }

bool separation_check(const LipschitzDomain& D, const Point& x, const Point& y) {
    if (!D.contains(x) || D.contains(y)) throw InvalidArgument("separation_check: need x inside and y outside");
    const double dist = std::hypot(x[0] - y[0], x[1] - y[1]);
    double bound = 0.0;
    switch (D.kind()) {
        case LipschitzDomain::Kind::halfline_pos:
        case LipschitzDomain::Kind::halfline_neg:
            bound = std::abs(x[0]);
            break;
        case LipschitzDomain::Kind::epigraph: {
            const Point l = D.frame().to_local(x);
            bound = (l[1] - D.phi()(l[0])) / std::sqrt(1.0 + D.lipschitz() * D.lipschitz());
            break;
        }
        default:
            throw InvalidArgument("separation_check applies to half-lines and epigraphs");
    }
    return dist >= bound * (1.0 - 1e-12);
}

double tau_metric(const Point& xi, const LipschitzDomain& omega, double alpha, std::optional<double> M) {
    if (!(alpha > 0.0)) throw InvalidArgument("tau_metric: alpha must be positive");
    if (omega.dim() == 1) return std::sqrt(xi[0] * xi[0] + 1.0 / (alpha * alpha)) / 32.0;
    if (omega.kind() != LipschitzDomain::Kind::epigraph) throw InvalidArgument("tau_metric: d = 2 needs an epigraph");
    const double m = M ? *M : omega.lipschitz();
    const Point l = omega.frame().to_local(xi);
    const double h = std::max(l[1] - omega.phi()(l[0]), 0.0);
    return std::sqrt(h * h + 1.0 / (alpha * alpha)) / (32.0 * std::sqrt(1.0 + m * m));
}

BallIndex::BallIndex(int d, const Box& box) : d_(d), box_(box) {
    base_ = box.hi[0] - box.lo[0];
    if (d == 2) base_ = std::max(base_, box.hi[1] - box.lo[1]);
    base_ = std::max(base_, 1e-300) * 2.0;
    level_used_.assign(64, false);
}

int BallIndex::level_for(double r) const {
    if (!(r > 0)) return 63;
    const int L = static_cast<int>(std::floor(std::log2(base_ / (2.0 * r))));
    return std::clamp(L, 0, 63);
}

std::uint64_t BallIndex::key(int level, long ix, long iy) const {
    const std::uint64_t off = 1ull << 28;
    return (static_cast<std::uint64_t>(level) << 58) ^ ((static_cast<std::uint64_t>(ix + off) & 0x1FFFFFFFull) << 29) ^
           (static_cast<std::uint64_t>(iy + off) & 0x1FFFFFFFull);
}

void BallIndex::insert(int id, const Point& c, double r) {
    if (static_cast<std::size_t>(id) >= centers_.size()) {
        centers_.resize(id + 1);
        radii_.resize(id + 1);
    }
    centers_[id] = c;
    radii_[id] = r;
    const int L = level_for(r);
    const double s = base_ / std::ldexp(1.0, L);
    const long ix = static_cast<long>(std::floor((c[0] - box_.lo[0]) / s));
    const long iy = d_ == 2 ? static_cast<long>(std::floor((c[1] - box_.lo[1]) / s)) : 0;
    cells_[key(L, ix, iy)].push_back(id);
    if (!level_used_[L]) level_used_[L] = true;
}

std::vector<int> BallIndex::query(const Point& x, double r) const {
    std::vector<int> out;
    for (int L = 0; L < 64; ++L) {
        if (!level_used_[L]) continue;
        const double s = base_ / std::ldexp(1.0, L);
        const double reach = r + s;
        const long x0 = static_cast<long>(std::floor((x[0] - reach - box_.lo[0]) / s));
        const long x1 = static_cast<long>(std::floor((x[0] + reach - box_.lo[0]) / s));
        long y0 = 0, y1 = 0;
        if (d_ == 2) {
            y0 = static_cast<long>(std::floor((x[1] - reach - box_.lo[1]) / s));
            y1 = static_cast<long>(std::floor((x[1] + reach - box_.lo[1]) / s));
        }
        const double ncells = double(x1 - x0 + 1) * double(y1 - y0 + 1);
        auto test = [&](int id) {
            const double dx = x[0] - centers_[id][0], dy = d_ == 2 ? x[1] - centers_[id][1] : 0.0;
            if (std::sqrt(dx * dx + dy * dy) < radii_[id] + r) out.push_back(id);
        };
        if (ncells > static_cast<double>(centers_.size())) {
            for (std::size_t id = 0; id < centers_.size(); ++id)
                if (level_for(radii_[id]) == L) test(static_cast<int>(id));
            continue;
        }
        for (long ix = x0; ix <= x1; ++ix)
            for (long iy = y0; iy <= y1; ++iy) {
                auto it = cells_.find(key(L, ix, iy));
                if (it == cells_.end()) continue;
                for (int id : it->second) test(id);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double WhitneyCover::phi(std::size_t j, const Point& xi) const {
    const double r = std::hypot(xi[0] - centers_[j][0], d_ == 2 ? xi[1] - centers_[j][1] : 0.0);
    return bump(r / radii_[j]);
}

std::vector<int> WhitneyCover::touching(const Point& xi) const { return index_.query(xi, 0.0); }

double WhitneyCover::psi(std::size_t j, const Point& xi) const {
    const double pj = phi(j, xi);
    if (pj == 0.0) return 0.0;
    double s = 0.0;
    for (int k : touching(xi)) s += phi(k, xi);
    return pj / s;
}

double WhitneyCover::partition_sum(const Point& xi) const {
    const auto t = touching(xi);
    double s = 0.0;
    for (int k : t) s += phi(k, xi);
    if (s == 0.0) return 0.0;
    double total = 0.0;
    for (int k : t) total += phi(k, xi) / s;
    return total;
}

int WhitneyCover::intersection_count(std::size_t j) const {
    // Open balls; tangency up to rounding does not count.
    int n = 0;
    for (int k : index_.query(centers_[j], radii_[j])) {
        const double dist = std::hypot(centers_[k][0] - centers_[j][0], centers_[k][1] - centers_[j][1]);
        if (dist < (radii_[j] + radii_[k]) * (1.0 - 1e-12)) ++n;
    }
    return n;
}

WhitneyCover whitney_cover(const Box& box, int d, const std::function<double(const Point&)>& tau, double kappa,
                           const WhitneyOptions& opt) {
    if (d != 1 && d != 2) throw InvalidArgument("whitney_cover: d must be 1 or 2");
    if (!(kappa >= 0.0 && kappa < 1.0)) throw InvalidArgument("whitney_cover: kappa must lie in [0, 1)");
    for (int i = 0; i < d; ++i)
        if (!(box.hi[i] > box.lo[i])) throw InvalidArgument("whitney_cover: empty box");
    std::mt19937_64 rng(opt.seed);
    auto sample = [&]() {
        Point p{};
        for (int i = 0; i < d; ++i) p[i] = std::uniform_real_distribution<double>(box.lo[i], box.hi[i])(rng);
        return p;
    };
    auto tau_checked = [&](const Point& p) {
        const double t = tau(p);
        if (!(t > 0.0) || !std::isfinite(t)) throw InvalidArgument("whitney_cover: tau must be positive on the box");
        return t;
    };
    for (int i = 0; i < 2000; ++i) {
        const Point a = sample(), b = sample();
        const double dist = std::hypot(a[0] - b[0], a[1] - b[1]);
        if (std::abs(tau_checked(a) - tau_checked(b)) > kappa * dist * (1.0 + 1e-9) + 1e-15)
            throw InvalidArgument("whitney_cover: sampled Lipschitz constant of tau exceeds kappa");
    }

    std::vector<std::pair<double, Point>> cand;
    if (d == 1) {
        // Walk so that consecutive half-radius balls (where the bump is 1) just touch:
        // step s solves s = (tau(c) + tau(c + s)) / 2, a contraction since kappa < 1.
        double c = box.lo[0];
        for (;;) {
            const double t = tau_checked({c, 0.0});
            cand.push_back({t, {c, 0.0}});
            if (c + t / 2.0 >= box.hi[0]) break;
            double s = t;
            for (int it = 0; it < 200; ++it) {
                const double next = 0.5 * (t + tau_checked({c + s, 0.0}));
                const bool done = std::abs(next - s) <= 1e-14 * s;
                s = next;
                if (done) break;
            }
            c += s;
            if (cand.size() > opt.max_balls) throw NumericalError("whitney_cover: candidate cap exceeded");
        }
    } else {
        struct Cell {
            Point lo;
            double sx, sy;
        };
        std::vector<Cell> stack{{box.lo, box.hi[0] - box.lo[0], box.hi[1] - box.lo[1]}};
        while (!stack.empty()) {
            Cell c = stack.back();
            stack.pop_back();
            const Point mid{c.lo[0] + c.sx / 2, c.lo[1] + c.sy / 2};
            const double t = tau_checked(mid);
            if (std::max(c.sx, c.sy) > t / 4.0) {
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b) stack.push_back({{c.lo[0] + a * c.sx / 2, c.lo[1] + b * c.sy / 2}, c.sx / 2, c.sy / 2});
            } else {
                cand.push_back({t, mid});
            }
            if (cand.size() + stack.size() > opt.max_balls) throw NumericalError("whitney_cover: candidate cap exceeded");
        }
    }
    std::sort(cand.begin(), cand.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });

    WhitneyCover W;
    W.d_ = d;
    W.box_ = box;
    W.kappa_ = kappa;
    BallIndex quarter(d, box);
    for (const auto& [t, c] : cand) {
        if (!quarter.query(c, t / 4.0).empty()) continue;
        const int id = static_cast<int>(W.centers_.size());
        quarter.insert(id, c, t / 4.0);
        W.centers_.push_back(c);
        W.radii_.push_back(t);
    }
    W.index_ = BallIndex(d, box);
    for (std::size_t j = 0; j < W.centers_.size(); ++j) W.index_.insert(static_cast<int>(j), W.centers_[j], W.radii_[j]);

    double min_sum = std::numeric_limits<double>::infinity();
    auto bump_sum = [&](const Point& p) {
        double s = 0.0;
        for (int k : W.touching(p)) s += W.phi(k, p);
        return s;
    };
    auto check_cover = [&](const Point& p) {
        const double s = bump_sum(p);
        if (!(s > 0.0))
            throw NumericalError("whitney_cover: uncovered point (" + std::to_string(p[0]) + ", " + std::to_string(p[1]) + ")");
        min_sum = std::min(min_sum, s);
    };
    for (const auto& c : cand) check_cover(c.second);
    for (int i = 0; i < opt.coverage_samples; ++i) check_cover(sample());
    W.min_bump_sum_ = min_sum;

    for (std::size_t j = 0; j < W.centers_.size(); ++j) W.n_max_ = std::max(W.n_max_, W.intersection_count(j));

    if (opt.check_derivatives) {
        std::array<double, 3> C{};
        for (int i = 0; i < opt.derivative_samples; ++i) {
            const Point p = sample();
            for (int j : W.touching(p)) {
                const double t = W.radii_[j];
                const double h = 1e-3 * t;
                const double f0 = W.psi(j, p);
                C[0] = std::max(C[0], f0);
                double g1 = 0.0, g2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    Point pp = p, pm = p;
                    pp[a] += h;
                    pm[a] -= h;
                    const double fp = W.psi(j, pp), fm = W.psi(j, pm);
                    g1 += std::abs(fp - fm) / (2 * h);
                    g2 += std::abs(fp - 2 * f0 + fm) / (h * h);
                }
                if (d == 2) {
                    auto at = [&](double a, double b) { return W.psi(j, {p[0] + a, p[1] + b}); };
                    g2 += std::abs(at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
                }
                C[1] = std::max(C[1], t * g1);
                C[2] = std::max(C[2], t * t * g2);
            }
        }
        W.c_m_ = C;
    }
    return W;
}

LatticePartition::LatticePartition(int d) : d_(d) {
    if (d != 1 && d != 2) throw InvalidArgument("lattice_partition: d must be 1 or 2");
}

namespace {

Jet lattice_factor(int j, double u0, int K) {
    const long r = std::lround(u0);
    if (std::abs(u0 - j) >= 1.0) return Jet::constant(0.0, K);
    const Jet u = Jet::variable(u0, K);
    Jet s = Jet::constant(0.0, K);
    for (long k = r - 1; k <= r + 1; ++k) s += bump(u - static_cast<double>(k));
    return bump(u - static_cast<double>(j)) / s;
}

}  // namespace

Jet2 LatticePartition::expand(const LatticeIndex& j, const Point& x, int K) const {
    const Jet a = lattice_factor(j[0], x[0], K);
    Jet2 r = Jet2::constant(0.0, K);
    if (d_ == 1) {
        for (int i = 0; i <= K; ++i) r.coeff(i, 0) = a[i];
        return r;
    }
    const Jet b = lattice_factor(j[1], x[1], K);
    for (int i = 0; i <= K; ++i)
        for (int k = 0; i + k <= K; ++k) r.coeff(i, k) = a[i] * b[k];
    return r;
}

double LatticePartition::value(const LatticeIndex& j, const Point& x) const { return expand(j, x, 0).value(); }

std::vector<LatticeIndex> LatticePartition::touching(const Point& x) const {
    auto axis = [](double u) {
        std::vector<int> ks;
        const long f = static_cast<long>(std::floor(u));
        for (long k = f - 1; k <= f + 2; ++k)
            if (std::abs(u - k) < 1.0) ks.push_back(static_cast<int>(k));
        return ks;
    };
    std::vector<LatticeIndex> out;
    const auto a = axis(x[0]);
    const auto b = d_ == 2 ? axis(x[1]) : std::vector<int>{0};
    for (int i : a)
        for (int k : b) out.push_back({i, k});
    return out;
}

double LatticePartition::support_radius() const { return 2.0 * std::sqrt(static_cast<double>(d_)); }

LatticePartition lattice_partition(int d) { return LatticePartition(d); }

namespace {

class LatticeField : public Field {
  public:
    LatticeField(int d, const LatticeIndex& j)
        : Field(d, kMaxJetOrder, Ball{{double(j[0]), d == 2 ? double(j[1]) : 0.0}, 2.0 * std::sqrt(double(d))}, "lattice_psi"),
          P_(d), j_(j) {}
    double value(const Point& x) const override { return P_.value(j_, x); }
    Jet2 expand(const Point& x, int K) const override { return P_.expand(j_, x, K); }

  private:
    LatticePartition P_;
    LatticeIndex j_;
};

}  // namespace

FieldPtr lattice_partition_field(int d, const LatticeIndex& j) { return std::make_shared<LatticeField>(d, j); }

LipschitzDomain domain_fixture(const std::string& name, const Params& params) {
    auto get = [&](const std::string& k, double def) {
        auto it = params.find(k);
        return it == params.end() ? def : it->second;
    };
    static const std::map<std::string, std::vector<std::string>> allowed{
        {"halfline_pos", {}},
        {"halfline_neg", {}},
        {"interval", {"a", "b"}},
        {"half_plane", {"theta", "offset"}},
        {"epigraph_sin", {"amp", "theta", "offset"}},
        {"epigraph_abs", {"slope", "theta", "offset"}},
        {"disc", {"cx", "cy", "radius"}},
        {"square", {"cx", "cy", "half_side"}},
    };
    auto it = allowed.find(name);
    if (it == allowed.end()) throw InvalidArgument("unknown domain fixture '" + name + "'");
    for (const auto& [k, v] : params)
        if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
            throw InvalidArgument(name + ": unknown parameter '" + k + "'");
    // Rotate the local frame by theta and shift the boundary along the local normal by offset.
    auto frame = [&]() {
        const double th = get("theta", 0.0);
        const double off = get("offset", 0.0);
        return RigidFrame{th, {-std::sin(th) * off, std::cos(th) * off}};
    };
    if (name == "halfline_pos") return LipschitzDomain::halfline_pos();
    if (name == "halfline_neg") return LipschitzDomain::halfline_neg();
    if (name == "interval") return LipschitzDomain::interval(get("a", 0.0), get("b", 1.0));
    if (name == "half_plane") return LipschitzDomain::epigraph([](double) { return 0.0; }, 0.0, frame(), name);
    if (name == "epigraph_sin") {
        const double amp = get("amp", 0.5);
        return LipschitzDomain::epigraph([amp](double s) { return amp * std::sin(s); }, std::abs(amp), frame(), name);
    }
    if (name == "epigraph_abs") {
        const double k = get("slope", 0.5);
        return LipschitzDomain::epigraph([k](double s) { return k * std::abs(s); }, std::abs(k), frame(), name);
    }
    if (name == "disc") return LipschitzDomain::disc({get("cx", 0.0), get("cy", 0.0)}, get("radius", 1.0));
    return LipschitzDomain::square({get("cx", 0.0), get("cy", 0.0)}, get("half_side", 1.0));
}

std::vector<std::pair<std::string, std::string>> domain_fixture_names() {
    return {
        {"halfline_pos", "(0, inf), d = 1"},
        {"halfline_neg", "(-inf, 0), d = 1"},
        {"interval", "(a, b), d = 1"},
        {"half_plane", "{x2 > 0} rotated by theta, shifted by offset, d = 2"},
        {"epigraph_sin", "{x2 > amp sin(x1)}, M = |amp|, d = 2"},
        {"epigraph_abs", "{x2 > slope |x1|}, M = |slope|, d = 2"},
        {"disc", "disc with 12 epigraph charts, d = 2"},
        {"square", "axis-aligned square with 8 charts, d = 2"},
    };
}

}  // namespace psido
