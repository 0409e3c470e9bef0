#pragma once

#include <array>
#include <functional>

namespace psido {

inline constexpr int kMaxJetOrder = 15;

// Truncated Taylor series c_0 + c_1 e + ... + c_K e^K in one variable.
// c_k = f^(k)(x0) / k!.
class Jet {
  public:
    Jet() = default;
    static Jet constant(double v, int order);
    static Jet variable(double x0, int order);

    int order() const { return order_; }
    double operator[](int k) const { return c_[k]; }
    double& operator[](int k) { return c_[k]; }
    double value() const { return c_[0]; }
    double derivative(int k) const;

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(const Jet& o);
    Jet& operator+=(double v);
    Jet& operator*=(double v);

  private:
    std::array<double, kMaxJetOrder + 1> c_{};
    int order_ = 0;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator*(Jet a, const Jet& b);
Jet operator+(Jet a, double v);
Jet operator+(double v, Jet a);
Jet operator-(Jet a, double v);
Jet operator-(double v, const Jet& a);
Jet operator*(Jet a, double v);
Jet operator*(double v, Jet a);
Jet operator-(const Jet& a);

Jet exp(const Jet& a);
Jet reciprocal(const Jet& a);
Jet operator/(const Jet& a, const Jet& b);
// a^p for a real exponent; requires a.value() > 0 unless p is a nonnegative integer.
Jet pow(const Jet& a, double p);
Jet ipow(const Jet& a, int p);
Jet sqrt(const Jet& a);

// A smooth univariate function lifted to jets: returns the Taylor expansion of f at the
// inner expansion point composed with the inner jet.
using Profile = std::function<Jet(const Jet&)>;

// Taylor coefficients of f at s0 up to the given order.
Jet taylor(const Profile& f, double s0, int order);

// Truncated Taylor series in two variables, total order <= K.
class Jet2 {
  public:
    Jet2() = default;
    static Jet2 constant(double v, int order);
    // Coordinate function x_axis expanded around x0.
    static Jet2 variable(int axis, double x0, int order);

    int order() const { return order_; }
    double coeff(int i, int j) const { return c_[i * (kMaxJetOrder + 1) + j]; }
    double& coeff(int i, int j) { return c_[i * (kMaxJetOrder + 1) + j]; }
    double value() const { return c_[0]; }
    // d^{i+j} f / dx1^i dx2^j at the expansion point.
    double partial(int i, int j) const;

    Jet2& operator+=(const Jet2& o);
    Jet2& operator*=(const Jet2& o);
    Jet2& operator*=(double v);
    Jet2& operator+=(double v);

  private:
    std::array<double, (kMaxJetOrder + 1) * (kMaxJetOrder + 1)> c_{};
    int order_ = 0;
};

Jet2 operator+(Jet2 a, const Jet2& b);
Jet2 operator*(Jet2 a, const Jet2& b);
Jet2 operator*(Jet2 a, double v);

// f(inner) for a univariate profile f.
Jet2 compose(const Profile& f, const Jet2& inner);

double factorial(int k);

}  // namespace psido
