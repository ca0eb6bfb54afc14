#include "morley/fields.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

using namespace morley;

namespace
{
// Physical integral over a facet of g, the facet being the `side` face of
// axis `axis` of the given cell.
template <typename F>
double facet_integral(const StructuredMesh& mesh, int cell, int axis, int side,
                      const QuadRule& face, F&& g)
{
  const int d = mesh.dim();
  double sum = 0.0;
  for (std::size_t q = 0; q < face.size(); ++q)
  {
    Point xi{0.0, 0.0, 0.0};
    int t = 0;
    for (int a = 0; a < d; ++a)
      xi[a] = (a == axis) ? side : face.points[q][t++];
    sum += face.weights[q] * g(mesh.to_physical(cell, xi));
  }
  return sum * std::pow(mesh.half(), d - 1);
}

// Coefficients of (ξ+1)²(ξ-1) and (ξ+1)(ξ-1)² in powers 0..3.
constexpr std::array<double, 4> plus_cubic{-1.0, -1.0, 1.0, 1.0};
constexpr std::array<double, 4> minus_cubic{1.0, -1.0, -1.0, 1.0};
} // namespace

//-----------------------------------------------------------------------------
PiecewisePoly::PiecewisePoly(const StructuredMesh& mesh, MonomialSet set)
    : _mesh(&mesh), _set(std::move(set)),
      _coeffs(Eigen::MatrixXd::Zero(_set.size(), mesh.num_cells()))
{
  if (_set.dim() != mesh.dim())
    throw std::invalid_argument("monomial set and mesh dimensions differ");
}
//-----------------------------------------------------------------------------
std::span<double> PiecewisePoly::cell_coeffs(int cell)
{
  return std::span<double>(_coeffs.col(cell).data(), _set.size());
}
//-----------------------------------------------------------------------------
std::span<const double> PiecewisePoly::cell_coeffs(int cell) const
{
  return std::span<const double>(_coeffs.col(cell).data(), _set.size());
}
//-----------------------------------------------------------------------------
double PiecewisePoly::value(int cell, const Point& xi) const
{
  return eval_poly(_set, cell_coeffs(cell), xi);
}
//-----------------------------------------------------------------------------
double PiecewisePoly::derivative(int cell, const Point& xi,
                                 const MultiIndex& alpha) const
{
  return eval_poly(_set, cell_coeffs(cell), xi, alpha)
         / std::pow(_mesh->half(), order(alpha));
}
//-----------------------------------------------------------------------------
Hessian PiecewisePoly::hessian(int cell, const Point& xi) const
{
  const int d = _set.dim();
  const double s = 1.0 / (_mesh->half() * _mesh->half());
  Hessian h{};
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j)
    {
      MultiIndex alpha{0, 0, 0};
      ++alpha[i];
      ++alpha[j];
      h[i][j] = h[j][i] = s * eval_poly(_set, cell_coeffs(cell), xi, alpha);
    }
  return h;
}
//-----------------------------------------------------------------------------
FEField morley::canonical_interpolate(const StructuredMesh& mesh,
                                      const DofMap& dofmap,
                                      const ManufacturedSolution& u, int q)
{
  if (u.dim() != mesh.dim())
    throw std::invalid_argument("solution and mesh dimensions differ");
  const int d = mesh.dim();
  FEField field{&dofmap, Eigen::VectorXd::Zero(dofmap.num_dofs())};
  for (int v = 0; v < mesh.num_vertices(); ++v)
    field.values[dofmap.vertex_dof(v)] = u.value(mesh.vertex_coords(v));

  std::vector<double> x, w;
  gauss_legendre_1d(q, x, w);
  const QuadRule face = d == 2 ? QuadRule{} : gauss_rule(2, q);
  const double h = mesh.side();
  for (int f = 0; f < mesh.num_facets(); ++f)
  {
    const int axis = mesh.facet_axis(f);
    const LatticeIndex ijk = mesh.facet_index(f);
    Point corner{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a)
      corner[a] = mesh.spec().origin[a] + h * ijk[a];
    MultiIndex alpha{0, 0, 0};
    alpha[axis] = 1;

    // Mean over the facet = Σ w ∂u/∂x_axis / (reference facet measure).
    double sum = 0.0;
    if (d == 2)
    {
      const int t = 1 - axis;
      for (int k = 0; k < q; ++k)
      {
        Point p = corner;
        p[t] += 0.5 * h * (x[k] + 1.0);
        sum += w[k] * u.derivative(p, alpha);
      }
      sum /= 2.0;
    }
    else
    {
      const int t0 = axis == 0 ? 1 : 0;
      const int t1 = axis == 2 ? 1 : 2;
      for (std::size_t k = 0; k < face.size(); ++k)
      {
        Point p = corner;
        p[t0] += 0.5 * h * (face.points[k][0] + 1.0);
        p[t1] += 0.5 * h * (face.points[k][1] + 1.0);
        sum += face.weights[k] * u.derivative(p, alpha);
      }
      sum /= 4.0;
    }
    field.values[dofmap.facet_dof(f)] = sum;
  }
  return field;
}
//-----------------------------------------------------------------------------
std::vector<double> morley::cell_reference_dofs(const DofMap& dofmap,
                                                const FEField& field, int cell)
{
  const std::vector<int> dofs = dofmap.cell_dofs(cell);
  const std::vector<double> s = dofmap.reference_scaling();
  std::vector<double> local(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i)
    local[i] = s[i] * field.values[dofs[i]];
  return local;
}
//-----------------------------------------------------------------------------
PiecewisePoly morley::field_to_piecewise(const StructuredMesh& mesh,
                                         const DofMap& dofmap,
                                         const NodalBasis& basis,
                                         const FEField& field)
{
  if (field.values.size() != dofmap.num_dofs())
    throw std::invalid_argument("field length does not match the DOF map");
  PiecewisePoly p(mesh, basis.monomials());
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const std::vector<double> local = cell_reference_dofs(dofmap, field, c);
    const Eigen::VectorXd coeffs = basis.to_monomials(local);
    std::copy(coeffs.data(), coeffs.data() + coeffs.size(),
              p.cell_coeffs(c).begin());
  }
  return p;
}
//-----------------------------------------------------------------------------
int morley::correction_facet_side(int dim, int axis)
{
  if (dim == 2)
    return axis == 0 ? 1 : -1;
  return 1;
}
//-----------------------------------------------------------------------------
CorrectionCoeffs morley::correction_coeffs(const StructuredMesh& mesh,
                                           const ManufacturedSolution& u, int q,
                                           CorrectionScale scale)
{
  if (u.dim() != mesh.dim())
    throw std::invalid_argument("solution and mesh dimensions differ");
  if (u.max_order() < 3)
    throw std::invalid_argument("correction needs third derivatives of u");
  const int d = mesh.dim();
  CorrectionCoeffs out;
  out.dim = d;
  out.length = scale == CorrectionScale::half_width ? mesh.half() : mesh.side();
  out.cells.resize(mesh.num_cells());

  const QuadRule face = gauss_rule(d - 1, q);
  const double prefactor = d == 2 ? -out.length / 6.0 : -1.0 / 12.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    for (int a = 0; a < d; ++a)
    {
      auto integrand = [&](const Point& x)
      {
        double s = 0.0;
        for (int b = 0; b < d; ++b)
        {
          if (b == a)
            continue;
          MultiIndex alpha{0, 0, 0};
          alpha[a] = 1;
          alpha[b] = 2;
          s += u.derivative(x, alpha);
        }
        return s;
      };
      const double value
          = prefactor
            * facet_integral(mesh, c, a, correction_facet_side(d, a), face, integrand);
      out.cells[c].plus[a] = value;
      out.cells[c].minus[a] = value;
    }
  return out;
}
//-----------------------------------------------------------------------------
Eigen::VectorXd morley::correction_monomials(const CorrectionCoeffs& coeffs, int cell)
{
  const MonomialSet set = MonomialSet::morley(coeffs.dim);
  Eigen::VectorXd r = Eigen::VectorXd::Zero(set.size());
  const CellCorrection& cc = coeffs.cells[cell];
  const double pre = coeffs.length / 4.0;
  for (int a = 0; a < coeffs.dim; ++a)
    for (int p = 0; p < 4; ++p)
    {
      MultiIndex e{0, 0, 0};
      e[a] = p;
      r[set.find(e)] += pre * (cc.plus[a] * plus_cubic[p] + cc.minus[a] * minus_cubic[p]);
    }
  return r;
}
//-----------------------------------------------------------------------------
double morley::correction_value(const CorrectionCoeffs& coeffs, int cell,
                                const Point& xi)
{
  const CellCorrection& cc = coeffs.cells[cell];
  const double pre = coeffs.length / 4.0;
  double v = 0.0;
  for (int a = 0; a < coeffs.dim; ++a)
  {
    const double p1 = xi[a] + 1.0;
    const double m1 = xi[a] - 1.0;
    v += pre * (cc.plus[a] * p1 * p1 * m1 + cc.minus[a] * p1 * m1 * m1);
  }
  return v;
}
//-----------------------------------------------------------------------------
CorrectedInterpolant morley::corrected_interpolate(const StructuredMesh& mesh,
                                                   const DofMap& dofmap,
                                                   const NodalBasis& basis,
                                                   const ManufacturedSolution& u,
                                                   const InterpolationOptions& options)
{
  FEField pi = canonical_interpolate(mesh, dofmap, u, options.facet_q);
  CorrectionCoeffs r = correction_coeffs(mesh, u, options.facet_q, options.scale);
  PiecewisePoly poly = field_to_piecewise(mesh, dofmap, basis, pi);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const Eigen::VectorXd rc = correction_monomials(r, c);
    auto coeffs = poly.cell_coeffs(c);
    for (int m = 0; m < rc.size(); ++m)
      coeffs[m] -= rc[m];
  }
  return CorrectedInterpolant{std::move(pi), std::move(r), std::move(poly)};
}
//-----------------------------------------------------------------------------
double morley::correction_dof_mismatch(const StructuredMesh& mesh,
                                       const CorrectionCoeffs& coeffs)
{
  const int d = mesh.dim();
  const auto facets = local_facets(d);
  const MonomialSet set = MonomialSet::morley(d);
  const int nv = mesh.vertices_per_cell();

  // Facet DOF (global +axis normal, physical scaling) seen from each cell.
  std::vector<double> seen(mesh.num_facets(), 0.0);
  std::vector<bool> visited(mesh.num_facets(), false);
  double worst = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const Eigen::VectorXd r = correction_monomials(coeffs, c);
    const Eigen::VectorXd ref
        = apply_functionals(set, std::span<const double>(r.data(), r.size()));
    const auto cf = mesh.cell_facets(c);
    for (std::size_t k = 0; k < facets.size(); ++k)
    {
      const int f = cf[k];
      if (mesh.facet_on_boundary(f))
        continue;
      const double global = ref[nv + static_cast<int>(k)] / (facets[k].side * mesh.half());
      if (visited[f])
        worst = std::max(worst, std::abs(global - seen[f]));
      else
      {
        seen[f] = global;
        visited[f] = true;
      }
    }
  }
  return worst;
}
