#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psido/core.hpp"
#include "psido/symbols.hpp"

namespace psido {

// Scalar field on R^k; x points at k coordinates.
using ScalarFn = std::function<double(const double* x)>;

struct LatticeNormParams {
    double r = 1.0;
    double delta = 1.0;  // may be +infinity
    // Cubes with |n|_inf <= truncation_radius, unless ranges is set.
    double truncation_radius = 8.0;
    int cube_points = 16;
    // Inclusive cube index range per axis; overrides truncation_radius.
    std::vector<std::pair<int, int>> ranges;
    // Repeat with twice the cube points and report the relative change.
    bool doubling_check = false;
    double doubling_tol = 1e-2;
};

struct LatticeNorm {
    double value = 0.0;
    double rel_change = 0.0;
    bool converged = true;
    std::size_t cubes = 0;
};

// [sum_n (int_{C_n} |h|^r)^{delta/r}]^{1/delta}; delta = inf takes the sup over cube
// centers n + {0, 1/4, 1/2, 3/4}^k.
LatticeNorm lattice_qnorm(const ScalarFn& h, int k, const LatticeNormParams& params);
// Cube index range covering [lo, hi].
std::pair<int, int> cube_range(double lo, double hi);
void validate(const LatticeNormParams& p, int k);

enum class BoundKind { P, Q, F_circ, F_full };

struct BoundField {
    BoundKind kind = BoundKind::P;
    int n = 0;
    int m = 0;
    double tau = 0.0;
    int arity = 1;  // number of scalar arguments
    ScalarFn eval;
    // Per-axis intervals outside which the field vanishes (or is negligible).
    std::vector<std::pair<double, double>> extent;
    std::string source;
};

// (1 + |z - tau w|^m)^{-1} sum_{n1, n2 <= n} sum_{l <= m} |nabla_w^{n1} nabla_z^{n2} nabla_xi^l p|,
// arguments (w, z, xi); the denominator is 1 when m = 0.
BoundField bound_P(const AmplitudeSpec& p, const TMatrix& T, int n, int m);

struct QuadratureOptions {
    int points_per_unit = 16;
    // Used when the amplitude has no z window.
    std::optional<Ball> z_box;
};

// Q(xi) = int int P_{n,m}(w, z, xi) dw dz (midpoint rule over the w and z windows).
BoundField bound_Q(const AmplitudeSpec& p, const TMatrix& T, int n, int m, const QuadratureOptions& o = {});
// Relative change of Q(xi) when the quadrature resolution doubles.
double bound_Q_change(const AmplitudeSpec& p, const TMatrix& T, int n, int m, const Point& xi,
                      const QuadratureOptions& o = {});

enum class FVariant { circ, full };

// circ: sum_{k <= n} |nabla_w^k nabla_xi^m a|; full: sum_{l <= m} of the circ field at order l.
BoundField bound_F(const SymbolSpec& a, int n, int m, FVariant variant);

struct FourierOptions {
    int points_per_unit = 32;
    std::optional<Ball> z_box;
};

struct AmplitudeFourier {
    int d = 1;
    // p^(eta, mu, xi) = (2 pi)^{-d} int int e^{-i w.eta - i z.mu} p(w, z, xi) dw dz
    std::function<cplx(const Point& eta, const Point& mu, const Point& xi)> eval;
    std::vector<std::string> warnings;
    std::optional<Ball> xi_window;
};

AmplitudeFourier amplitude_fourier(const AmplitudeSpec& p, const FourierOptions& o = {});
// Tensor samples p^(eta_i, mu_j, xi_k) (d = 1), index (i * nmu + j) * nxi + k.
std::vector<cplx> amplitude_fourier_samples(const AmplitudeFourier& F, const std::vector<double>& eta,
                                            const std::vector<double>& mu, const std::vector<double>& xi);

}  // namespace psido
