#include "psido/jet.hpp"

#include <algorithm>
#include <cmath>

#include "psido/core.hpp"

namespace psido {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

Jet Jet::constant(double v, int order) {
    if (order < 0 || order > kMaxJetOrder) throw UnsupportedOrder("jet order out of range");
    Jet j;
    j.order_ = order;
    j.c_[0] = v;
    return j;
}

Jet Jet::variable(double x0, int order) {
    Jet j = constant(x0, order);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

double Jet::derivative(int k) const { return k > order_ ? 0.0 : c_[k] * factorial(k); }

Jet& Jet::operator+=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    order_ = std::min(order_, o.order_);
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
}

Jet& Jet::operator*=(const Jet& o) {
    const int K = std::min(order_, o.order_);
    std::array<double, kMaxJetOrder + 1> r{};
    for (int i = 0; i <= K; ++i) {
        if (c_[i] == 0.0) continue;
        for (int j = 0; i + j <= K; ++j) r[i + j] += c_[i] * o.c_[j];
    }
    c_ = r;
    order_ = K;
    return *this;
}

Jet& Jet::operator+=(double v) {
    c_[0] += v;
    return *this;
}

Jet& Jet::operator*=(double v) {
    for (int k = 0; k <= order_; ++k) c_[k] *= v;
    return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }
Jet operator*(Jet a, const Jet& b) { return a *= b; }
Jet operator+(Jet a, double v) { return a += v; }
Jet operator+(double v, Jet a) { return a += v; }
Jet operator-(Jet a, double v) { return a += -v; }
Jet operator-(double v, const Jet& a) { return (a * -1.0) + v; }
Jet operator*(Jet a, double v) { return a *= v; }
Jet operator*(double v, Jet a) { return a *= v; }
Jet operator-(const Jet& a) { return a * -1.0; }

Jet exp(const Jet& a) {
    const int K = a.order();
    Jet f = Jet::constant(std::exp(a[0]), K);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * a[j] * f[k - j];
        f[k] = s / k;
    }
    return f;
}

Jet reciprocal(const Jet& a) {
    if (a[0] == 0.0) throw NumericalError("jet reciprocal of zero");
    const int K = a.order();
    Jet r = Jet::constant(1.0 / a[0], K);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += a[j] * r[k - j];
        r[k] = -s / a[0];
    }
    return r;
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet ipow(const Jet& a, int p) {
    if (p < 0) return reciprocal(ipow(a, -p));
    Jet r = Jet::constant(1.0, a.order());
    Jet base = a;
    while (p > 0) {
        if (p & 1) r *= base;
        p >>= 1;
        if (p) base *= base;
    }
    return r;
}

Jet pow(const Jet& a, double p) {
    if (p >= 0 && p == std::floor(p) && p <= 64) return ipow(a, static_cast<int>(p));
    if (a[0] <= 0.0) throw NumericalError("jet power of nonpositive base");
    const int K = a.order();
    Jet f = Jet::constant(std::pow(a[0], p), K);
    for (int k = 1; k <= K; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += ((p + 1.0) * j - k) * a[j] * f[k - j];
        f[k] = s / (k * a[0]);
    }
    return f;
}

Jet sqrt(const Jet& a) { return pow(a, 0.5); }

Jet taylor(const Profile& f, double s0, int order) { return f(Jet::variable(s0, order)); }

Jet2 Jet2::constant(double v, int order) {
    if (order < 0 || order > kMaxJetOrder) throw UnsupportedOrder("jet order out of range");
    Jet2 j;
    j.order_ = order;
    j.coeff(0, 0) = v;
    return j;
}

Jet2 Jet2::variable(int axis, double x0, int order) {
    Jet2 j = constant(x0, order);
    if (order >= 1) {
        if (axis == 0)
            j.coeff(1, 0) = 1.0;
        else
            j.coeff(0, 1) = 1.0;
    }
    return j;
}

double Jet2::partial(int i, int j) const {
    if (i + j > order_) return 0.0;
    return coeff(i, j) * factorial(i) * factorial(j);
}

Jet2& Jet2::operator+=(const Jet2& o) {
    order_ = std::min(order_, o.order_);
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) coeff(i, j) += o.coeff(i, j);
    return *this;
}

Jet2& Jet2::operator*=(const Jet2& o) {
    const int K = std::min(order_, o.order_);
    Jet2 r = constant(0.0, K);
    for (int i1 = 0; i1 <= K; ++i1)
        for (int j1 = 0; i1 + j1 <= K; ++j1) {
            const double a = coeff(i1, j1);
            if (a == 0.0) continue;
            for (int i2 = 0; i1 + j1 + i2 <= K; ++i2)
                for (int j2 = 0; i1 + j1 + i2 + j2 <= K; ++j2) r.coeff(i1 + i2, j1 + j2) += a * o.coeff(i2, j2);
        }
    *this = r;
    return *this;
}

Jet2& Jet2::operator*=(double v) {
    for (int i = 0; i <= order_; ++i)
        for (int j = 0; i + j <= order_; ++j) coeff(i, j) *= v;
    return *this;
}

Jet2& Jet2::operator+=(double v) {
    coeff(0, 0) += v;
    return *this;
}

Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
Jet2 operator*(Jet2 a, const Jet2& b) { return a *= b; }
Jet2 operator*(Jet2 a, double v) { return a *= v; }

Jet2 compose(const Profile& f, const Jet2& inner) {
    const int K = inner.order();
    const Jet g = taylor(f, inner.value(), K);
    Jet2 eps = inner;
    eps.coeff(0, 0) = 0.0;
    Jet2 r = Jet2::constant(g[K], K);
    for (int k = K - 1; k >= 0; --k) {
        r *= eps;
        r += g[k];
    }
    return r;
}

}  // namespace psido
