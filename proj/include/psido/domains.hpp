#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "psido/core.hpp"
#include "psido/jet.hpp"
#include "psido/symbols.hpp"

namespace psido {

// x_local = R(-angle) (x - shift).
struct RigidFrame {
    double angle = 0.0;
    Point shift{};
    Point to_local(const Point& x) const;
    Point to_global(const Point& x) const;
};

// Lipschitz graph piece {x : x2 > phi(x1)} in a rigid frame (d = 2).
struct EpigraphChart {
    Ball ball;
    std::function<double(double)> phi;
    double lipschitz = 0.0;
    RigidFrame frame;
    bool contains(const Point& x) const;
};

class LipschitzDomain {
  public:
    enum class Kind { halfline_pos, halfline_neg, interval, epigraph, bounded_chartable };

    static LipschitzDomain halfline_pos();
    static LipschitzDomain halfline_neg();
    static LipschitzDomain interval(double a, double b);
    static LipschitzDomain epigraph(std::function<double(double)> phi, double lipschitz, RigidFrame frame = {},
                                    std::string label = "epigraph");
    static LipschitzDomain disc(const Point& center, double radius);
    static LipschitzDomain square(const Point& center, double half_side);

    Kind kind() const { return kind_; }
    int dim() const { return d_; }
    double lipschitz() const { return M_; }
    const std::string& label() const { return label_; }
    double a() const { return a_; }
    double b() const { return b_; }
    const std::function<double(double)>& phi() const { return phi_; }
    const RigidFrame& frame() const { return frame_; }
    const std::vector<EpigraphChart>& charts() const { return charts_; }

    // Membership in the open set; boundary points belong to the complement.
    bool contains(const Point& x) const;
    // Points on the boundary (d = 2 bounded domains and epigraphs over [-extent, extent]).
    std::vector<Point> boundary_samples(int count, double extent = 2.0) const;

  private:
    Kind kind_ = Kind::halfline_pos;
    int d_ = 1;
    double M_ = 0.0;
    double a_ = 0.0, b_ = 0.0;
    std::function<double(double)> phi_;
    RigidFrame frame_;
    std::vector<EpigraphChart> charts_;
    std::function<bool(const Point&)> inside_;
    std::string label_;
};

int indicator(const LipschitzDomain& domain, const Point& x);

// Checks |x - y| >= (x2 - phi(x1)) / sqrt(1 + M^2) (epigraph) or |x - y| >= |x| (half-lines).
bool separation_check(const LipschitzDomain& domain, const Point& x, const Point& y);

// Scale function ((xi2 - psi(xi1))_+^2 + alpha^-2)^{1/2} / (32 sqrt(1+M^2)) for d = 2 epigraphs,
// (xi^2 + alpha^-2)^{1/2} / 32 for d = 1 domains. M defaults to the domain's constant.
double tau_metric(const Point& xi, const LipschitzDomain& omega, double alpha, std::optional<double> M = std::nullopt);

struct Box {
    Point lo{};
    Point hi{};
};

// Ball lookup over many scales: buckets by level so that each ball sits at a cell size
// comparable to its diameter.
class BallIndex {
  public:
    BallIndex() = default;
    BallIndex(int d, const Box& box);
    void insert(int id, const Point& c, double r);
    // Ids of stored balls B(c_j, r_j) with |x - c_j| < r_j + r.
    std::vector<int> query(const Point& x, double r) const;

  private:
    int level_for(double r) const;
    std::uint64_t key(int level, long ix, long iy) const;

    int d_ = 1;
    Box box_;
    double base_ = 1.0;
    std::vector<Point> centers_;
    std::vector<double> radii_;
    std::vector<bool> level_used_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

struct WhitneyOptions {
    std::size_t max_balls = 2'000'000;
    int coverage_samples = 1000;
    int derivative_samples = 200;
    std::uint64_t seed = 0;
    bool check_derivatives = true;
};

class WhitneyCover {
  public:
    int dim() const { return d_; }
    const std::vector<Point>& centers() const { return centers_; }
    const std::vector<double>& radii() const { return radii_; }
    double kappa() const { return kappa_; }
    int n_max() const { return n_max_; }
    double min_bump_sum() const { return min_bump_sum_; }
    // Observed sup tau_j^m |nabla^m psi_j| for m = 0, 1, 2 (finite differences).
    const std::array<double, 3>& derivative_constants() const { return c_m_; }
    std::size_t size() const { return centers_.size(); }

    double phi(std::size_t j, const Point& xi) const;
    double psi(std::size_t j, const Point& xi) const;
    double partition_sum(const Point& xi) const;
    std::vector<int> touching(const Point& xi) const;
    int intersection_count(std::size_t j) const;

  private:
    friend WhitneyCover whitney_cover(const Box&, int, const std::function<double(const Point&)>&, double,
                                      const WhitneyOptions&);
    int d_ = 1;
    Box box_;
    std::vector<Point> centers_;
    std::vector<double> radii_;
    double kappa_ = 0.0;
    int n_max_ = 0;
    double min_bump_sum_ = 0.0;
    std::array<double, 3> c_m_{};
    BallIndex index_;
};

WhitneyCover whitney_cover(const Box& box, int d, const std::function<double(const Point&)>& tau, double kappa,
                           const WhitneyOptions& options = {});

using LatticeIndex = std::array<int, 2>;

// psi_j(x) = prod_i phi(x_i - j_i) / sum_k phi(x_i - k), phi = bump; supported in the cube
// |x - j|_inf < 1, inside B(j, 2 sqrt(d)).
class LatticePartition {
  public:
    explicit LatticePartition(int d);
    int dim() const { return d_; }
    double value(const LatticeIndex& j, const Point& x) const;
    Jet2 expand(const LatticeIndex& j, const Point& x, int K) const;
    std::vector<LatticeIndex> touching(const Point& x) const;
    double support_radius() const;

  private:
    int d_;
};

LatticePartition lattice_partition(int d);
// psi_j as a Field (support B(j, 2 sqrt d)).
FieldPtr lattice_partition_field(int d, const LatticeIndex& j);

// Named fixtures used by configs: halfline_pos, halfline_neg, interval, half_plane, epigraph_sin, disc, square.
LipschitzDomain domain_fixture(const std::string& name, const Params& params);
std::vector<std::pair<std::string, std::string>> domain_fixture_names();

}  // namespace psido
