#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psido/core.hpp"
#include "psido/jet.hpp"

namespace psido {

// Univariate building blocks, lifted to jets.
// S(x) = e^{-1/x} / (e^{-1/x} + e^{-1/(1-x)}), 0 for x <= 0, 1 for x >= 1.
Jet smoothstep(const Jet& x);
// zeta(u) = S(2|u| - 1): 0 for |u| <= 1/2, 1 for |u| >= 1.
Jet zeta(const Jet& u);
double zeta(double u);
// 1 - zeta(u).
Jet bump(const Jet& u);
double bump(double u);

// Real scalar field on R^d, d in {1,2}, with exact partial derivatives.
class Field {
  public:
    virtual ~Field() = default;

    int dim() const { return d_; }
    int max_order() const { return max_order_; }
    const std::optional<Ball>& support() const { return support_; }
    const std::string& label() const { return label_; }

    virtual double value(const Point& x) const;
    // Taylor expansion at x to total order K; Jet2::partial(i, j) is d^{i+j}/dx1^i dx2^j (j = 0 when d = 1).
    virtual Jet2 expand(const Point& x, int K) const = 0;
    double partial(const MultiIndex& k, const Point& x) const;
    // Ball outside which |f| < tol; the support if compact, nullopt for slow decay.
    virtual std::optional<Ball> window(double /*tol*/) const { return support_; }

  protected:
    Field(int d, int max_order, std::optional<Ball> support, std::string label);
    void check_order(int K) const;

  private:
    int d_;
    int max_order_;
    std::optional<Ball> support_;
    std::string label_;
};

using FieldPtr = std::shared_ptr<const Field>;

// f(x) = P(|x - c|^2 / s^2) for a profile P in the squared radius. gaussian_tail marks
// profiles bounded by e^{-s}, which gives a numerical window for non-compact fields.
FieldPtr radial_field(int d, const Point& center, double scale, Profile profile, int max_order,
                      std::optional<Ball> support, std::string label, bool gaussian_tail = false);
// f(x) = prod_i phi((x_i - c_i) / s).
FieldPtr tensor_field(int d, const Point& center, double scale, Profile phi, int max_order,
                      std::optional<Ball> support, std::string label);

// e^{-|y|^2} * bump(|y|), y = (x - c)/s; support B(c, s).
FieldPtr gaussian_cutoff_field(int d, const Point& center, double scale);
// e^{-|y|^2}, no compact support.
FieldPtr gaussian_field(int d, const Point& center, double scale);
// prod_i (1 - y_i^2)_+^k, y = (x - c)/h with h = s/sqrt(d) so the support cube sits in B(c, s).
FieldPtr poly_bump_field(int d, const Point& center, double scale, int k);
// (1 + |x|^2)^{-gamma/2}.
FieldPtr poly_decay_field(int d, double gamma, int max_order);
// zeta(|x - c| / s).
FieldPtr zeta_field(int d, const Point& center, double scale);
FieldPtr constant_field(int d, double v);
// f(factor * x).
FieldPtr scaled_field(FieldPtr f, double factor);
// a(x) b(x); support is the smaller of the two support balls.
FieldPtr product_field(FieldPtr a, FieldPtr b);
FieldPtr sum_field(std::vector<FieldPtr> fields, std::string label);
// User supplied value and partials.
FieldPtr lambda_field(int d, std::function<double(const Point&)> value,
                      std::function<double(const MultiIndex&, const Point&)> partial, int max_order,
                      std::optional<Ball> support, std::string label);

// Multi-indices of exact total order n in dimension d, in lexicographic order.
std::vector<MultiIndex> multi_indices(int d, int n);
// |nabla^n f|(x): sum over multi-indices of exact order n of |partial^alpha f|.
double grad_norm(const Jet2& e, int d, int n);

Ball enclose(const std::vector<Ball>& balls, int d);

}  // namespace psido
