#pragma once

#include "morley/element.h"
#include "morley/mesh.h"

#include <functional>
#include <string>
#include <vector>

namespace morley
{

/// Exact solution of the clamped plate problem with closed-form partial
/// derivatives and right-hand side f = Δ²u.
class ManufacturedSolution
{
public:
  using DerivativeFn = std::function<double(const Point&, const MultiIndex&)>;
  using ScalarFn = std::function<double(const Point&)>;

  ManufacturedSolution(std::string name, int dim, int max_order,
                       DerivativeFn derivative, ScalarFn rhs);

  /// u1 = sin²(πx)sin²(πy), u2 = x²(1-x)²y²(1-y)², u3/u4 their 3D analogues.
  static ManufacturedSolution by_name(const std::string& name);
  /// Dimension that a named solution lives in (2 for u1/u2, 3 for u3/u4).
  static int dim_of(const std::string& name);
  static std::vector<std::string> names();

  /// Polynomial Σ c_k x^{e_k} in physical coordinates.
  static ManufacturedSolution polynomial(
      int dim, std::vector<std::pair<double, MultiIndex>> terms);

  const std::string& name() const { return _name; }
  int dim() const { return _dim; }
  /// Highest total derivative order available.
  int max_order() const { return _max_order; }

  double value(const Point& x) const { return derivative(x, {0, 0, 0}); }
  /// ∂^alpha u at x; throws past max_order().
  double derivative(const Point& x, const MultiIndex& alpha) const;
  Hessian hessian(const Point& x) const;
  double rhs(const Point& x) const { return _rhs(x); }

private:
  std::string _name;
  int _dim;
  int _max_order;
  DerivativeFn _derivative;
  ScalarFn _rhs;
};

} // namespace morley
