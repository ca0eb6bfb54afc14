#include "morley/quadrature.h"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

using namespace morley;

//-----------------------------------------------------------------------------
void morley::gauss_legendre_1d(int q, std::vector<double>& nodes,
                               std::vector<double>& weights)
{
  if (q < 1)
    throw std::invalid_argument("Gauss rule needs at least one point");
  nodes.assign(q, 0.0);
  weights.assign(q, 0.0);
  // Newton iteration on P_q from the Chebyshev-like initial guess; the
  // roots are symmetric so only half are computed.
  for (int i = 0; i < (q + 1) / 2; ++i)
  {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it)
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= q; ++k)
      {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= q; ++k)
    {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = q * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[i] = -x;
    nodes[q - 1 - i] = x;
    weights[i] = w;
    weights[q - 1 - i] = w;
  }
  if (q % 2 == 1)
    nodes[q / 2] = 0.0;
}
//-----------------------------------------------------------------------------
QuadRule morley::gauss_rule(int dim, int q)
{
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("quadrature dimension must be 1, 2 or 3");
  if (q < 1 || q > 10)
    throw std::invalid_argument("quadrature points per axis must be in [1,10], got "
                                + std::to_string(q));
  std::vector<double> x, w;
  gauss_legendre_1d(q, x, w);

  QuadRule rule;
  rule.dim = dim;
  rule.points_per_axis = q;
  int total = 1;
  for (int a = 0; a < dim; ++a)
    total *= q;
  rule.points.reserve(total);
  rule.weights.reserve(total);
  for (int k = 0; k < total; ++k)
  {
    Point p{0.0, 0.0, 0.0};
    double wt = 1.0;
    int r = k;
    for (int a = 0; a < dim; ++a)
    {
      p[a] = x[r % q];
      wt *= w[r % q];
      r /= q;
    }
    rule.points.push_back(p);
    rule.weights.push_back(wt);
  }
  return rule;
}
