#include "psido/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace psido {

Jet smoothstep(const Jet& x) {
    const int K = x.order();
    if (x.value() <= 0.0) return Jet::constant(0.0, K);
    if (x.value() >= 1.0) return Jet::constant(1.0, K);
    // S = 1 / (1 + exp(1/x - 1/(1-x)))
    const Jet e = reciprocal(x) - reciprocal(1.0 - x);
    if (e.value() > 700.0) return Jet::constant(0.0, K);
    if (e.value() < -700.0) return Jet::constant(1.0, K);
    return reciprocal(1.0 + exp(e));
}

Jet zeta(const Jet& u) {
    const Jet v = u.value() >= 0.0 ? u : -u;
    return smoothstep(2.0 * v - 1.0);
}

double zeta(double u) { return zeta(Jet::constant(u, 0)).value(); }

Jet bump(const Jet& u) { return 1.0 - zeta(u); }

double bump(double u) { return 1.0 - zeta(u); }

Field::Field(int d, int max_order, std::optional<Ball> support, std::string label)
    : d_(d), max_order_(max_order), support_(support), label_(std::move(label)) {
    if (d < 1 || d > kMaxDim) throw InvalidArgument("field dimension must be 1 or 2");
}

void Field::check_order(int K) const {
    if (K > max_order_)
        throw UnsupportedOrder("field '" + label_ + "' provides derivatives up to order " +
                               std::to_string(max_order_) + ", requested " + std::to_string(K));
}

double Field::value(const Point& x) const { return expand(x, 0).value(); }

double Field::partial(const MultiIndex& k, const Point& x) const {
    if (d_ == 1 && k[1] != 0) return 0.0;
    const int K = total_order(k);
    check_order(K);
    return expand(x, K).partial(k[0], k[1]);
}

namespace {

Jet2 axis_jet(int axis, double y0, double inv_scale, int K) { return Jet2::variable(axis, y0, K) * inv_scale; }

bool outside(const std::optional<Ball>& b, const Point& x, int d) {
    if (!b) return false;
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += (x[i] - b->center[i]) * (x[i] - b->center[i]);
    return s >= b->radius * b->radius;
}

class RadialField : public Field {
  public:
    RadialField(int d, const Point& c, double s, Profile p, int max_order, std::optional<Ball> support,
                std::string label, bool gaussian_tail)
        : Field(d, max_order, support, std::move(label)), c_(c), s_(s), p_(std::move(p)), gaussian_tail_(gaussian_tail) {
        if (!(s > 0)) throw InvalidArgument("radial field scale must be positive");
    }

    double value(const Point& x) const override {
        if (outside(support(), x, dim())) return 0.0;
        double r2 = 0.0;
        for (int i = 0; i < dim(); ++i) r2 += (x[i] - c_[i]) * (x[i] - c_[i]);
        return p_(Jet::constant(r2 / (s_ * s_), 0)).value();
    }

    Jet2 expand(const Point& x, int K) const override {
        if (outside(support(), x, dim())) return Jet2::constant(0.0, K);
        Jet2 inner = Jet2::constant(0.0, K);
        for (int i = 0; i < dim(); ++i) {
            const Jet2 y = axis_jet(i, x[i] - c_[i], 1.0 / s_, K);
            inner += y * y;
        }
        return compose(p_, inner);
    }

    std::optional<Ball> window(double tol) const override {
        if (support()) return support();
        if (!gaussian_tail_) return std::nullopt;
        return Ball{c_, s_ * std::sqrt(std::log(1.0 / tol))};
    }

  private:
    Point c_;
    double s_;
    Profile p_;
    bool gaussian_tail_;
};

class TensorField : public Field {
  public:
    TensorField(int d, const Point& c, double s, Profile phi, int max_order, std::optional<Ball> support,
                std::string label)
        : Field(d, max_order, support, std::move(label)), c_(c), s_(s), phi_(std::move(phi)) {
        if (!(s > 0)) throw InvalidArgument("tensor field scale must be positive");
    }

    double value(const Point& x) const override {
        double v = 1.0;
        for (int i = 0; i < dim() && v != 0.0; ++i) v *= phi_(Jet::constant((x[i] - c_[i]) / s_, 0)).value();
        return v;
    }

    Jet2 expand(const Point& x, int K) const override {
        std::array<Jet, kMaxDim> f;
        for (int i = 0; i < dim(); ++i) {
            Jet y = Jet::variable((x[i] - c_[i]) / s_, K);
            y[1] = K >= 1 ? 1.0 / s_ : 0.0;
            f[i] = phi_(y);
        }
        Jet2 r = Jet2::constant(0.0, K);
        if (dim() == 1) {
            for (int i = 0; i <= K; ++i) r.coeff(i, 0) = f[0][i];
        } else {
            for (int i = 0; i <= K; ++i)
                for (int j = 0; i + j <= K; ++j) r.coeff(i, j) = f[0][i] * f[1][j];
        }
        return r;
    }

  private:
    Point c_;
    double s_;
    Profile phi_;
};

class ConstantField : public Field {
  public:
    ConstantField(int d, double v) : Field(d, kMaxJetOrder, std::nullopt, "constant"), v_(v) {}
    double value(const Point&) const override { return v_; }
    Jet2 expand(const Point&, int K) const override { return Jet2::constant(v_, K); }
    // The zero field is negligible everywhere; any ball serves as a window.
    std::optional<Ball> window(double) const override {
        if (v_ == 0.0) return Ball{{0.0, 0.0}, 1.0};
        return std::nullopt;
    }

  private:
    double v_;
};

class ScaledField : public Field {
  public:
    ScaledField(FieldPtr f, double lambda)
        : Field(f->dim(), f->max_order(), scale_ball(f->support(), lambda), f->label()), f_(std::move(f)), lambda_(lambda) {
        if (!(lambda > 0)) throw InvalidArgument("scaling factor must be positive");
    }

    double value(const Point& x) const override { return f_->value(scaled(x)); }

    Jet2 expand(const Point& x, int K) const override {
        Jet2 e = f_->expand(scaled(x), K);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) e.coeff(i, j) *= std::pow(lambda_, i + j);
        return e;
    }

    std::optional<Ball> window(double tol) const override { return scale_ball(f_->window(tol), lambda_); }

  private:
    static std::optional<Ball> scale_ball(const std::optional<Ball>& b, double lambda) {
        if (!b) return std::nullopt;
        return Ball{{b->center[0] / lambda, b->center[1] / lambda}, b->radius / lambda};
    }
    Point scaled(const Point& x) const { return {lambda_ * x[0], lambda_ * x[1]}; }

    FieldPtr f_;
    double lambda_;
};

class ProductField : public Field {
  public:
    ProductField(FieldPtr a, FieldPtr b)
        : Field(a->dim(), std::min(a->max_order(), b->max_order()), smaller(a->support(), b->support()),
                a->label() + "*" + b->label()),
          a_(std::move(a)), b_(std::move(b)) {}

    double value(const Point& x) const override {
        const double u = a_->value(x);
        return u == 0.0 ? 0.0 : u * b_->value(x);
    }

    Jet2 expand(const Point& x, int K) const override { return a_->expand(x, K) * b_->expand(x, K); }

    std::optional<Ball> window(double tol) const override {
        return smaller(a_->window(std::sqrt(tol)), b_->window(std::sqrt(tol)));
    }

  private:
    static std::optional<Ball> smaller(const std::optional<Ball>& a, const std::optional<Ball>& b) {
        if (!a) return b;
        if (!b) return a;
        return a->radius <= b->radius ? a : b;
    }

    FieldPtr a_, b_;
};

class SumField : public Field {
  public:
    SumField(int d, std::vector<FieldPtr> fs, std::optional<Ball> support, int max_order, std::string label)
        : Field(d, max_order, support, std::move(label)), fs_(std::move(fs)) {}

    double value(const Point& x) const override {
        double s = 0.0;
        for (const auto& f : fs_) s += f->value(x);
        return s;
    }

    Jet2 expand(const Point& x, int K) const override {
        check_order(K);
        Jet2 s = Jet2::constant(0.0, K);
        for (const auto& f : fs_) s += f->expand(x, K);
        return s;
    }

  private:
    std::vector<FieldPtr> fs_;
};

class LambdaField : public Field {
  public:
    LambdaField(int d, std::function<double(const Point&)> value, std::function<double(const MultiIndex&, const Point&)> partial,
                int max_order, std::optional<Ball> support, std::string label)
        : Field(d, max_order, support, std::move(label)), value_(std::move(value)), partial_(std::move(partial)) {}

    double value(const Point& x) const override { return value_(x); }

    Jet2 expand(const Point& x, int K) const override {
        check_order(K);
        Jet2 r = Jet2::constant(value_(x), K);
        for (int i = 0; i <= K; ++i)
            for (int j = 0; i + j <= K; ++j) {
                if (i + j == 0 || (dim() == 1 && j > 0)) continue;
                r.coeff(i, j) = partial_({i, j}, x) / (factorial(i) * factorial(j));
            }
        return r;
    }

  private:
    std::function<double(const Point&)> value_;
    std::function<double(const MultiIndex&, const Point&)> partial_;
};

// bump(sqrt(s)) as a function of the squared radius s.
Jet radial_bump(const Jet& s) {
    if (s.value() <= 0.25) return Jet::constant(1.0, s.order());
    if (s.value() >= 1.0) return Jet::constant(0.0, s.order());
    return bump(sqrt(s));
}

}  // namespace

FieldPtr radial_field(int d, const Point& center, double scale, Profile profile, int max_order,
                      std::optional<Ball> support, std::string label, bool gaussian_tail) {
    return std::make_shared<RadialField>(d, center, scale, std::move(profile), max_order, support, std::move(label),
                                         gaussian_tail);
}

FieldPtr tensor_field(int d, const Point& center, double scale, Profile phi, int max_order,
                      std::optional<Ball> support, std::string label) {
    return std::make_shared<TensorField>(d, center, scale, std::move(phi), max_order, support, std::move(label));
}

FieldPtr gaussian_cutoff_field(int d, const Point& center, double scale) {
    Profile p = [](const Jet& s) { return exp(-s) * radial_bump(s); };
    return radial_field(d, center, scale, p, kMaxJetOrder, Ball{center, scale}, "gaussian_cutoff");
}

FieldPtr gaussian_field(int d, const Point& center, double scale) {
    Profile p = [](const Jet& s) { return exp(-s); };
    return radial_field(d, center, scale, p, kMaxJetOrder, std::nullopt, "gaussian", true);
}

FieldPtr poly_bump_field(int d, const Point& center, double scale, int k) {
    if (k < 1) throw InvalidArgument("poly bump exponent must be >= 1");
    Profile phi = [k](const Jet& y) {
        if (std::abs(y.value()) >= 1.0) return Jet::constant(0.0, y.order());
        return ipow(1.0 - y * y, k);
    };
    const double h = scale / std::sqrt(static_cast<double>(d));
    return tensor_field(d, center, h, phi, k, Ball{center, scale}, "poly_bump");
}

FieldPtr poly_decay_field(int d, double gamma, int max_order) {
    Profile p = [gamma](const Jet& s) { return pow(1.0 + s, -gamma / 2.0); };
    return radial_field(d, Point{}, 1.0, p, max_order, std::nullopt, "poly_decay");
}

FieldPtr zeta_field(int d, const Point& center, double scale) {
    Profile p = [](const Jet& s) { return 1.0 - radial_bump(s); };
    return radial_field(d, center, scale, p, kMaxJetOrder, std::nullopt, "zeta");
}

FieldPtr constant_field(int d, double v) { return std::make_shared<ConstantField>(d, v); }

FieldPtr scaled_field(FieldPtr f, double factor) {
    if (factor == 1.0) return f;
    return std::make_shared<ScaledField>(std::move(f), factor);
}

FieldPtr product_field(FieldPtr a, FieldPtr b) {
    if (!a || !b || a->dim() != b->dim()) throw InvalidArgument("product_field: fields must share the dimension");
    return std::make_shared<ProductField>(std::move(a), std::move(b));
}

FieldPtr sum_field(std::vector<FieldPtr> fs, std::string label) {
    if (fs.empty()) throw InvalidArgument("sum_field: no fields");
    const int d = fs[0]->dim();
    int K = kMaxJetOrder;
    std::vector<Ball> balls;
    bool compact = true;
    for (const auto& f : fs) {
        if (!f || f->dim() != d) throw InvalidArgument("sum_field: fields must share the dimension");
        K = std::min(K, f->max_order());
        if (f->support()) balls.push_back(*f->support());
        else compact = false;
    }
    std::optional<Ball> sup;
    if (compact) sup = enclose(balls, d);
    return std::make_shared<SumField>(d, std::move(fs), sup, K, std::move(label));
}

FieldPtr lambda_field(int d, std::function<double(const Point&)> value,
                      std::function<double(const MultiIndex&, const Point&)> partial, int max_order,
                      std::optional<Ball> support, std::string label) {
    return std::make_shared<LambdaField>(d, std::move(value), std::move(partial), max_order, support, std::move(label));
}

std::vector<MultiIndex> multi_indices(int d, int n) {
    if (d == 1) return {MultiIndex{n, 0}};
    std::vector<MultiIndex> r;
    for (int i = n; i >= 0; --i) r.push_back({i, n - i});
    return r;
}

double grad_norm(const Jet2& e, int d, int n) {
    double s = 0.0;
    for (const auto& k : multi_indices(d, n)) s += std::abs(e.partial(k[0], k[1]));
    return s;
}

Ball enclose(const std::vector<Ball>& balls, int d) {
    if (balls.empty()) throw InvalidArgument("enclose: no balls");
    if (balls.size() == 1) return balls.front();
    Point c{};
    for (const auto& b : balls)
        for (int i = 0; i < d; ++i) c[i] += b.center[i] / balls.size();
    double r = 0.0;
    for (const auto& b : balls) {
        double s = 0.0;
        for (int i = 0; i < d; ++i) s += (b.center[i] - c[i]) * (b.center[i] - c[i]);
        r = std::max(r, std::sqrt(s) + b.radius);
    }
    return Ball{c, r};
}

}  // namespace psido
