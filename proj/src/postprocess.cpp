#include "morley/postprocess.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

using namespace morley;

namespace
{
constexpr std::array<double, 4> lattice{-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0};

// lagrange(p, a): coefficient of t^p in the Lagrange polynomial of node a.
Eigen::Matrix4d lagrange_coefficients()
{
  Eigen::Matrix4d v;
  for (int i = 0; i < 4; ++i)
    for (int p = 0; p < 4; ++p)
      v(i, p) = std::pow(lattice[i], p);
  return v.inverse();
}

// Coefficient of ξ^r in ℓ_a(c + ξ/3), the Lagrange polynomials restricted
// to the fine cell at offset k (centre c = (2k-2)/3) of a block.
Eigen::Matrix4d shifted_lagrange(const Eigen::Matrix4d& lagrange, int k)
{
  const double c = (2.0 * k - 2.0) / 3.0;
  constexpr std::array<std::array<double, 4>, 4> binom{
      {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}}};
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int p = 0; p < 4; ++p)
      for (int r = 0; r <= p; ++r)
        g(r, a) += lagrange(p, a) * binom[p][r] * std::pow(c, p - r)
                   * std::pow(1.0 / 3.0, r);
  return g;
}

int ipow4(int e) { return 1 << (2 * e); }

// Tensor contraction Σ_{abc} Z_abc G1(r1,a) G2(r2,b) G3(r3,c) written to
// out in tensor_cubic order (r1 fastest).
void tensor_apply(int dim, std::span<const double> z,
                  const std::array<const Eigen::Matrix4d*, 3>& g,
                  std::span<double> out)
{
  const int n = ipow4(dim);
  std::fill(out.begin(), out.end(), 0.0);
  for (int r = 0; r < n; ++r)
  {
    double s = 0.0;
    for (int a = 0; a < n; ++a)
    {
      double t = z[a];
      for (int ax = 0; ax < dim; ++ax)
      {
        const int ri = (r >> (2 * ax)) & 3;
        const int ai = (a >> (2 * ax)) & 3;
        t *= (*g[ax])(ri, ai);
      }
      s += t;
    }
    out[r] = s;
  }
}
} // namespace

//-----------------------------------------------------------------------------
double MacroCubic::value(const Point& t) const
{
  return eval_poly(MonomialSet::tensor_cubic(dim), coeffs, t);
}
//-----------------------------------------------------------------------------
MacroCubic morley::interpolate_block(int dim, std::span<const double> values)
{
  if (static_cast<int>(values.size()) != ipow4(dim))
    throw std::invalid_argument("a macro block needs 4^dim vertex values");
  const Eigen::Matrix4d l = lagrange_coefficients();
  MacroCubic m{dim, std::vector<double>(values.size())};
  tensor_apply(dim, values, {&l, &l, &l}, m.coeffs);
  return m;
}
//-----------------------------------------------------------------------------
PiecewisePoly morley::postprocess(const StructuredMesh& mesh, const MacroGrid& macro,
                                  std::span<const double> vertex_values)
{
  if (mesh.n() % 3 != 0)
    throw std::invalid_argument("postprocessing requires 3 | N (got N="
                                + std::to_string(mesh.n()) + ")");
  if (static_cast<int>(vertex_values.size()) != mesh.num_vertices())
    throw std::invalid_argument("postprocess: one value per mesh vertex expected");
  const int d = mesh.dim();
  const Eigen::Matrix4d l = lagrange_coefficients();
  const std::array<Eigen::Matrix4d, 3> shifted{
      shifted_lagrange(l, 0), shifted_lagrange(l, 1), shifted_lagrange(l, 2)};

  PiecewisePoly out(mesh, MonomialSet::tensor_cubic(d));
  std::vector<double> z(ipow4(d));
  for (int b = 0; b < macro.num_blocks(); ++b)
  {
    const auto zv = macro.macro_vertices(b);
    for (std::size_t k = 0; k < zv.size(); ++k)
    {
      z[k] = vertex_values[zv[k]];
      if (std::isnan(z[k]))
        throw std::invalid_argument("postprocess: missing value at vertex "
                                    + std::to_string(zv[k]));
    }
    const LatticeIndex origin = macro.block_origin(b);
    for (int c : macro.block_cells(b))
    {
      const LatticeIndex ci = mesh.cell_index(c);
      std::array<const Eigen::Matrix4d*, 3> g{&shifted[0], &shifted[0], &shifted[0]};
      for (int a = 0; a < d; ++a)
        g[a] = &shifted[ci[a] - origin[a]];
      tensor_apply(d, z, g, out.cell_coeffs(c));
    }
  }
  return out;
}
//-----------------------------------------------------------------------------
std::vector<double> morley::vertex_values_of(const StructuredMesh& mesh,
                                             const FEField& field)
{
  std::vector<double> v(mesh.num_vertices());
  for (int k = 0; k < mesh.num_vertices(); ++k)
    v[k] = field.values[field.dofmap->vertex_dof(k)];
  return v;
}
//-----------------------------------------------------------------------------
std::vector<double> morley::vertex_values_of(const PiecewisePoly& field,
                                             double tolerance)
{
  const StructuredMesh& mesh = field.mesh();
  const int d = mesh.dim();
  std::vector<double> v(mesh.num_vertices(), 0.0);
  std::vector<bool> seen(mesh.num_vertices(), false);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const auto cv = mesh.cell_vertices(c);
    for (std::size_t k = 0; k < cv.size(); ++k)
    {
      const double x = field.value(c, reference_vertex(d, static_cast<int>(k)));
      const int id = cv[k];
      if (!seen[id])
      {
        v[id] = x;
        seen[id] = true;
      }
      else if (std::abs(x - v[id]) > tolerance * std::max(1.0, std::abs(v[id])))
        throw std::invalid_argument(
            "field is not vertex-continuous: cells disagree by "
            + std::to_string(std::abs(x - v[id])) + " at vertex " + std::to_string(id));
    }
  }
  return v;
}
//-----------------------------------------------------------------------------
std::vector<double> morley::vertex_values_of(const StructuredMesh& mesh,
                                             const ManufacturedSolution& u)
{
  std::vector<double> v(mesh.num_vertices());
  for (int k = 0; k < mesh.num_vertices(); ++k)
    v[k] = u.value(mesh.vertex_coords(k));
  return v;
}
//-----------------------------------------------------------------------------
std::vector<double> morley::vertex_values_of(const StructuredMesh& mesh,
                                             const CorrectedInterpolant& field)
{
  const int d = mesh.dim();
  std::vector<double> v = vertex_values_of(mesh, field.interpolant);
  std::vector<bool> done(mesh.num_vertices(), false);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const auto cv = mesh.cell_vertices(c);
    for (std::size_t k = 0; k < cv.size(); ++k)
      if (!done[cv[k]])
      {
        v[cv[k]] -= correction_value(field.correction, c,
                                     reference_vertex(d, static_cast<int>(k)));
        done[cv[k]] = true;
      }
  }
  return v;
}
