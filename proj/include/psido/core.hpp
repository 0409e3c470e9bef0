#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace psido {

using cplx = std::complex<double>;

// Points and multi-indices live in R^d with d <= 2; unused slots stay zero.
using Point = std::array<double, 2>;
using MultiIndex = std::array<int, 2>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr int kMaxDim = 2;

inline int total_order(const MultiIndex& k) { return k[0] + k[1]; }

inline double norm(const Point& x, int d) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

struct Ball {
    Point center{};
    double radius = 1.0;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class UnsupportedOrder : public Error {
  public:
    using Error::Error;
};

class DegenerateMatrix : public Error {
  public:
    using Error::Error;
};

class GridMismatch : public Error {
  public:
    using Error::Error;
};

class NumericalError : public Error {
  public:
    using Error::Error;
};

// Thrown when the xi quadrature (or the grid) cannot resolve the kernel oscillation.
class ResolutionError : public Error {
  public:
    ResolutionError(const std::string& what, int required) : Error(what), required_(required) {}
    int required() const { return required_; }

  private:
    int required_;
};

}  // namespace psido
