#pragma once

#include "morley/mesh.h"

#include <vector>

namespace morley
{

/// Tensor-product Gauss-Legendre rule on [-1,1]^dim.
struct QuadRule
{
  int dim = 0;
  int points_per_axis = 0;
  std::vector<Point> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// 1D Gauss-Legendre nodes (ascending) and weights on [-1,1].
/// Exact for polynomials of degree <= 2q-1.
void gauss_legendre_1d(int q, std::vector<double>& nodes,
                       std::vector<double>& weights);

/// Tensor rule with q points per axis; dim in {1,2,3}, 1 <= q <= 10.
QuadRule gauss_rule(int dim, int q);

} // namespace morley
