#include "morley/solutions.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace morley;

namespace
{
constexpr double pi = std::numbers::pi;

// k-th derivative of sin²(πx), k <= 4.
double sine_squared(double x, int k)
{
  switch (k)
  {
  case 0:
  {
    const double s = std::sin(pi * x);
    return s * s;
  }
  case 1:
    return pi * std::sin(2 * pi * x);
  case 2:
    return 2 * pi * pi * std::cos(2 * pi * x);
  case 3:
    return -4 * pi * pi * pi * std::sin(2 * pi * x);
  case 4:
    return -8 * pi * pi * pi * pi * std::cos(2 * pi * x);
  default:
    throw std::invalid_argument("derivative order above 4");
  }
}

// k-th derivative of x²(1-x)² = x² - 2x³ + x⁴, k <= 4.
double bubble(double x, int k)
{
  switch (k)
  {
  case 0:
    return x * x * (1 - x) * (1 - x);
  case 1:
    return 2 * x - 6 * x * x + 4 * x * x * x;
  case 2:
    return 2 - 12 * x + 12 * x * x;
  case 3:
    return -12 + 24 * x;
  case 4:
    return 24.0;
  default:
    throw std::invalid_argument("derivative order above 4");
  }
}

using Profile = double (*)(double, int);

// u = Π_a g(x_a): derivatives factor per axis, and
// Δ²u = Σ_a g''''(x_a) Π_{b≠a} g + 2 Σ_{a<b} g''(x_a) g''(x_b) Π_{c≠a,b} g.
ManufacturedSolution separable(std::string name, int dim, Profile g)
{
  auto derivative = [dim, g](const Point& x, const MultiIndex& alpha)
  {
    double v = 1.0;
    for (int a = 0; a < dim; ++a)
      v *= g(x[a], alpha[a]);
    return v;
  };
  auto rhs = [dim, g](const Point& x)
  {
    double f = 0.0;
    for (int a = 0; a < dim; ++a)
    {
      double t = g(x[a], 4);
      for (int b = 0; b < dim; ++b)
        if (b != a)
          t *= g(x[b], 0);
      f += t;
    }
    for (int a = 0; a < dim; ++a)
      for (int b = a + 1; b < dim; ++b)
      {
        double t = 2 * g(x[a], 2) * g(x[b], 2);
        for (int c = 0; c < dim; ++c)
          if (c != a && c != b)
            t *= g(x[c], 0);
        f += t;
      }
    return f;
  };
  return ManufacturedSolution(std::move(name), dim, 4, derivative, rhs);
}

double falling(int e, int k)
{
  double c = 1.0;
  for (int i = 0; i < k; ++i)
    c *= e - i;
  return c;
}
} // namespace

//-----------------------------------------------------------------------------
ManufacturedSolution::ManufacturedSolution(std::string name, int dim,
                                           int max_order, DerivativeFn derivative,
                                           ScalarFn rhs)
    : _name(std::move(name)), _dim(dim), _max_order(max_order),
      _derivative(std::move(derivative)), _rhs(std::move(rhs))
{
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("manufactured solutions live in 2D or 3D");
}
//-----------------------------------------------------------------------------
std::vector<std::string> ManufacturedSolution::names()
{
  return {"u1", "u2", "u3", "u4"};
}
//-----------------------------------------------------------------------------
int ManufacturedSolution::dim_of(const std::string& name)
{
  if (name == "u1" || name == "u2")
    return 2;
  if (name == "u3" || name == "u4")
    return 3;
  throw std::invalid_argument("unknown solution '" + name
                              + "' (expected u1, u2, u3 or u4)");
}
//-----------------------------------------------------------------------------
ManufacturedSolution ManufacturedSolution::by_name(const std::string& name)
{
  const int dim = dim_of(name);
  const bool trig = (name == "u1" || name == "u3");
  return separable(name, dim, trig ? &sine_squared : &bubble);
}
//-----------------------------------------------------------------------------
ManufacturedSolution ManufacturedSolution::polynomial(
    int dim, std::vector<std::pair<double, MultiIndex>> terms)
{
  auto derivative = [terms](const Point& x, const MultiIndex& alpha)
  {
    double v = 0.0;
    for (const auto& [c, e] : terms)
    {
      double t = c;
      for (int a = 0; a < 3 && t != 0.0; ++a)
      {
        if (alpha[a] > e[a])
          t = 0.0;
        else
          t *= falling(e[a], alpha[a]) * std::pow(x[a], e[a] - alpha[a]);
      }
      v += t;
    }
    return v;
  };
  auto rhs = [dim, derivative](const Point& x)
  {
    double f = 0.0;
    for (int a = 0; a < dim; ++a)
      for (int b = 0; b < dim; ++b)
      {
        MultiIndex alpha{0, 0, 0};
        alpha[a] += 2;
        alpha[b] += 2;
        f += derivative(x, alpha);
      }
    return f;
  };
  return ManufacturedSolution("polynomial", dim, 64, derivative, rhs);
}
//-----------------------------------------------------------------------------
double ManufacturedSolution::derivative(const Point& x, const MultiIndex& alpha) const
{
  if (order(alpha) > _max_order)
    throw std::invalid_argument("derivative order "
                                + std::to_string(order(alpha))
                                + " not available for " + _name);
  return _derivative(x, alpha);
}
//-----------------------------------------------------------------------------
Hessian ManufacturedSolution::hessian(const Point& x) const
{
  Hessian h{};
  for (int i = 0; i < _dim; ++i)
    for (int j = i; j < _dim; ++j)
    {
      MultiIndex alpha{0, 0, 0};
      ++alpha[i];
      ++alpha[j];
      h[i][j] = h[j][i] = derivative(x, alpha);
    }
  return h;
}
