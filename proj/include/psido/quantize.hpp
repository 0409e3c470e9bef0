#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "psido/core.hpp"
#include "psido/domains.hpp"
#include "psido/symbols.hpp"

namespace psido {

using Index = Eigen::Index;

// Midpoint lattice on [-L, L]^d with n points per axis.
class Grid {
  public:
    Grid(int d, double L, int n);

    int dim() const { return d_; }
    double half_width() const { return L_; }
    int n_per_axis() const { return n_; }
    double h() const { return 2.0 * L_ / n_; }
    double weight() const { return d_ == 1 ? h() : h() * h(); }
    Index size() const { return d_ == 1 ? n_ : Index(n_) * n_; }
    double coord(int k) const { return -L_ + (k + 0.5) * h(); }
    Point point(Index i) const;
    std::array<int, 2> axis_index(Index i) const;
    double diameter() const { return 2.0 * L_ * std::sqrt(static_cast<double>(d_)); }
    bool operator==(const Grid& o) const { return d_ == o.d_ && L_ == o.L_ && n_ == o.n_; }
    bool operator!=(const Grid& o) const { return !(*this == o); }

  private:
    int d_;
    double L_;
    int n_;
};

Grid default_grid(int d, double L);

// Midpoint tensor rule on the bounding box of a ball, masked to the ball.
struct XiQuadrature {
    int d = 1;
    Ball ball;
    int n = 0;
    bool mask_to_ball = true;

    double step() const { return 2.0 * ball.radius / n; }
    double node(int k, int axis) const { return ball.center[axis] - ball.radius + (k + 0.5) * step(); }
    // Smallest n with alpha * step * diam(box) <= pi.
    static int required(const Ball& ball, double alpha, const Grid& grid);
    static XiQuadrature for_alpha(int d, const Ball& ball, double alpha, const Grid& grid, double safety = 4.0);
    // Throws ResolutionError carrying the required n.
    void check(double alpha, const Grid& grid) const;
};

// Kernel band limit alpha * (|mu| + rho) against the grid spacing.
bool spatial_resolution_ok(const Ball& xi_ball, double alpha, const Grid& grid);
int required_points_per_axis(const Ball& xi_ball, double alpha, double half_width);

struct Window {
    std::vector<Index> rows;
    std::vector<Index> cols;
    static Window full(const Grid& grid);
    // Rows inside the domain, columns outside: the nonzero block of chi A (1 - chi).
    static Window split(const LipschitzDomain& domain, const Grid& grid);
};

struct OperatorMatrix {
    Eigen::MatrixXcd entries;
    Grid grid{1, 1.0, 1};
    std::vector<Index> rows;
    std::vector<Index> cols;
    std::optional<Grid> col_grid;
    std::string provenance;
    std::vector<std::string> warnings;

    bool is_full_square() const;
    const Grid& column_grid() const { return col_grid ? *col_grid : grid; }
};

OperatorMatrix assemble_amplitude(const AmplitudeSpec& p, const TMatrix& T, double alpha, const Grid& grid,
                                  const XiQuadrature& quad, const std::optional<Window>& window = std::nullopt);
OperatorMatrix assemble_t_quant(const SymbolSpec& a, double t, double alpha, const Grid& grid, const XiQuadrature& quad,
                                const std::optional<Window>& window = std::nullopt);
// Quadrature chosen from the xi support with the default safety factor.
OperatorMatrix assemble_t_quant(const SymbolSpec& a, double t, double alpha, const Grid& grid,
                                const std::optional<Window>& window = std::nullopt);
XiQuadrature default_quadrature(const SymbolSpec& a, double alpha, const Grid& grid, double safety = 4.0);
XiQuadrature default_quadrature(const AmplitudeSpec& p, double alpha, const Grid& grid, double safety = 4.0);

// A function of xi alone: smooth factor (optional) times the indicator of a region (optional).
struct XiSymbol {
    int d = 1;
    FieldPtr factor;
    std::optional<XiRegion> region;

    static XiSymbol indicator(const XiRegion& region);
    static XiSymbol smooth(FieldPtr factor);
    std::optional<Ball> support() const;
};

OperatorMatrix assemble_multiplier(const XiSymbol& g, double alpha, const Grid& grid,
                                   const std::optional<XiQuadrature>& quad = std::nullopt,
                                   const std::optional<Window>& window = std::nullopt);

OperatorMatrix indicator_diag(const LipschitzDomain& domain, const Grid& grid);
std::vector<char> indicator_mask(const LipschitzDomain& domain, const Grid& grid);
OperatorMatrix hankel(const LipschitzDomain& domain, const OperatorMatrix& A);
OperatorMatrix commutator(const OperatorMatrix& A, const OperatorMatrix& P, double idempotence_tol = 1e-6);
OperatorMatrix multiply(const OperatorMatrix& A, const OperatorMatrix& B);
OperatorMatrix subtract(const OperatorMatrix& A, const OperatorMatrix& B);
// Keep the given grid rows/columns of a full square matrix.
OperatorMatrix restrict_to(const OperatorMatrix& A, const Window& window);

// Entries sqrt(wx) f(x) e^{i x.S y} g(y) sqrt(wy); S is dim(gx) x dim(gy).
OperatorMatrix bs_kernel_operator(const std::function<double(const Point&)>& f,
                                  const std::function<double(const Point&)>& g, const Eigen::MatrixXd& S,
                                  const Grid& gx, const Grid& gy);

// Binary layout: "PSIDOOP1", int32 d, int32 n, float64 L, int64 rows, int64 cols,
// int64 row ids, int64 col ids, then rows*cols (re, im) float64 pairs in row-major order.
void write_binary(const OperatorMatrix& M, const std::string& path);
OperatorMatrix read_binary(const std::string& path);
void write_text(const OperatorMatrix& M, const std::string& path);

}  // namespace psido
