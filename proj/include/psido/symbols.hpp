#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "psido/core.hpp"
#include "psido/field.hpp"

namespace psido {

struct SupportBalls {
    Ball w;
    Ball xi;
};

struct DecayBound {
    double A = 1.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
};

// Indicator region in frequency space. d = 1: interval (lo, hi), either end may be infinite.
// d = 2: intersection of half-planes {n . xi > c} (a convex polygon when bounded).
struct XiRegion {
    int d = 1;
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::pair<Point, double>> half_planes;

    static XiRegion interval(double lo, double hi);
    static XiRegion half_plane(const Point& normal, double offset);
    static XiRegion polygon(const std::vector<Point>& ccw_vertices);
    bool contains(const Point& xi) const;
    bool bounded() const;
};

struct SymbolTerm {
    cplx coef{1.0};
    FieldPtr w;
    FieldPtr xi;
};

struct AmplitudeTerm {
    cplx coef{1.0};
    FieldPtr w;
    FieldPtr z;
    FieldPtr xi;
};

using SymbolEval = std::function<cplx(const Point& w, const Point& xi)>;
using SymbolDeriv = std::function<cplx(const MultiIndex& k, const MultiIndex& l, const Point& w, const Point& xi)>;
using AmplitudeEval = std::function<cplx(const Point& w, const Point& z, const Point& xi)>;
using AmplitudeDeriv = std::function<cplx(const MultiIndex& kw, const MultiIndex& kz, const MultiIndex& l,
                                          const Point& w, const Point& z, const Point& xi)>;

// Balls outside which the symbol is numerically negligible (< 1e-12); used to truncate quadratures.
struct Windows {
    std::optional<Ball> w;
    std::optional<Ball> z;
    std::optional<Ball> xi;
};

struct SymbolSpec {
    int d = 1;
    SymbolEval eval;
    SymbolDeriv deriv;
    std::optional<SupportBalls> support;
    int max_order = 0;
    std::optional<DecayBound> decay;
    // a = sum coef * w(w) * xi(xi) when non-empty; enables the fast assembly paths.
    std::vector<SymbolTerm> terms;
    // When set, the symbol is the smooth part times the indicator of this region; deriv
    // returns derivatives of the product away from the region boundary.
    std::optional<XiRegion> xi_cut;
    Windows windows;
    std::string label;
};

struct AmplitudeSpec {
    int d = 1;
    AmplitudeEval eval;
    AmplitudeDeriv deriv;
    std::optional<SupportBalls> support;
    int max_order = 0;
    std::vector<AmplitudeTerm> terms;
    Windows windows;
    std::string label;
};

SymbolSpec make_symbol(int d, std::vector<SymbolTerm> terms, std::string label);
SymbolSpec make_symbol(int d, SymbolEval eval, SymbolDeriv deriv, int max_order, std::optional<SupportBalls> support,
                       std::string label);
// Black-box symbol whose derivatives (up to order 2 per group) come from centered finite
// differences with error O(step^2).
SymbolSpec finite_difference_symbol(int d, SymbolEval eval, std::optional<SupportBalls> support, std::string label,
                                    double step = 1e-3);
AmplitudeSpec make_amplitude(int d, std::vector<AmplitudeTerm> terms, std::string label);
AmplitudeSpec make_amplitude(int d, AmplitudeEval eval, AmplitudeDeriv deriv, int max_order,
                             std::optional<SupportBalls> support, Windows windows, std::string label);

// p(w, z, xi) = a(w, xi).
AmplitudeSpec as_amplitude(const SymbolSpec& a);
SymbolSpec conjugate(const SymbolSpec& a);
SymbolSpec scale_symbol(const SymbolSpec& a, cplx c);
SymbolSpec with_xi_cut(const SymbolSpec& a, const XiRegion& region);
SymbolSpec zero_symbol(int d);
AmplitudeSpec zero_amplitude(int d);

struct TGuards {
    double delta0 = 1e-6;
    double t0 = 1e6;
};

class TMatrix {
  public:
    TMatrix(double t11, double t12, double t21, double t22, TGuards guards = {});

    double t11() const { return t_[0]; }
    double t12() const { return t_[1]; }
    double t21() const { return t_[2]; }
    double t22() const { return t_[3]; }
    double tau() const { return t_[2] + t_[3]; }
    double det() const { return t_[0] * t_[3] - t_[1] * t_[2]; }
    bool normalized() const { return std::abs(t_[0] + t_[1] - 1.0) < 1e-12; }
    // (w, z) = (t11 x + t12 y, t21 x + t22 y).
    std::pair<Point, Point> forward(const Point& x, const Point& y) const;

  private:
    std::array<double, 4> t_;
};

TMatrix t_to_matrix(double t);
std::pair<Point, Point> recover_xy(const TMatrix& T, const Point& w, const Point& z);

struct Orders {
    int n = 0;
    int m = 0;
};

Orders smoothness_orders(int d, double q);

struct NormSampling {
    // Lattice points per ell (w, z axes) and per rho (xi axes).
    int density = 64;
    // z sampling ball when the amplitude has no z window.
    std::optional<Ball> z_box;
    // Guard against runaway lattices for black-box specs.
    double max_evaluations = 5e7;
};

// N^{(n1,n2,m)}(p; ell, rho): max over orders of the sampled sup of
// ell^{n+k} rho^r |nabla_w^n nabla_z^k nabla_xi^r p|. Sampled, so an under-approximation.
double norm_N(const AmplitudeSpec& p, int n1, int n2, int m, double ell, double rho, const NormSampling& s = {});
// N^{(n,m)}(a; ell, rho) for symbols.
double norm_N(const SymbolSpec& a, int n, int m, double ell, double rho, const NormSampling& s = {});

// p^{(l1, r1)}(w, z, xi) = p(l1 w, l1 z, r1 xi).
AmplitudeSpec rescale(const AmplitudeSpec& p, double ell1, double rho1);
SymbolSpec rescale(const SymbolSpec& a, double ell1, double rho1);

using Params = std::map<std::string, double>;
using AnySpec = std::variant<SymbolSpec, AmplitudeSpec>;

AnySpec builtin_family(const std::string& name, const Params& params);
SymbolSpec builtin_symbol(const std::string& name, const Params& params);
std::vector<std::pair<std::string, std::string>> builtin_family_names();

struct GaussianComponent {
    cplx coef{1.0};
    double w_center = 0.0, w_scale = 1.0;
    double z_center = 0.0, z_scale = 1.0;
    double xi_center = 0.0, xi_scale = 1.0;
};

// d = 1 sum of Gaussian products coef * e^{-(w-a)^2/s^2} e^{-(z-b)^2/s'^2} e^{-(xi-c)^2/s''^2}.
AmplitudeSpec gaussian_mixture_amplitude(const std::vector<GaussianComponent>& components);

}  // namespace psido
