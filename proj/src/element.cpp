#include "morley/element.h"

#include <cmath>
#include <stdexcept>

using namespace morley;

namespace
{
// ∂^k ξ^e / ∂ξ^k at x.
double monomial_1d(int e, int k, double x)
{
  if (k > e)
    return 0.0;
  double c = 1.0;
  for (int i = 0; i < k; ++i)
    c *= e - i;
  double p = 1.0;
  for (int i = 0; i < e - k; ++i)
    p *= x;
  return c * p;
}
} // namespace

//-----------------------------------------------------------------------------
double morley::frobenius_inner(const Hessian& a, const Hessian& b, int dim)
{
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      s += a[i][j] * b[i][j];
  return s;
}
//-----------------------------------------------------------------------------
MonomialSet::MonomialSet(int dim, std::vector<MultiIndex> exponents)
    : _dim(dim), _exponents(std::move(exponents))
{
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("monomial set dimension must be 1, 2 or 3");
}
//-----------------------------------------------------------------------------
MonomialSet MonomialSet::morley(int dim)
{
  if (dim == 2)
    return MonomialSet(2, {{0, 0, 0},
                           {1, 0, 0},
                           {0, 1, 0},
                           {1, 1, 0},
                           {2, 0, 0},
                           {0, 2, 0},
                           {3, 0, 0},
                           {0, 3, 0}});
  if (dim == 3)
    return MonomialSet(3, {{0, 0, 0},
                           {1, 0, 0},
                           {0, 1, 0},
                           {0, 0, 1},
                           {1, 1, 0},
                           {1, 0, 1},
                           {0, 1, 1},
                           {2, 0, 0},
                           {0, 2, 0},
                           {0, 0, 2},
                           {1, 1, 1},
                           {3, 0, 0},
                           {0, 3, 0},
                           {0, 0, 3}});
  throw std::invalid_argument("Morley element exists for dim 2 and 3 only");
}
//-----------------------------------------------------------------------------
MonomialSet MonomialSet::tensor_cubic(int dim)
{
  std::vector<MultiIndex> e;
  const int k3 = dim > 2 ? 4 : 1;
  const int k2 = dim > 1 ? 4 : 1;
  for (int c = 0; c < k3; ++c)
    for (int b = 0; b < k2; ++b)
      for (int a = 0; a < 4; ++a)
        e.push_back({a, b, c});
  return MonomialSet(dim, std::move(e));
}
//-----------------------------------------------------------------------------
int MonomialSet::find(const MultiIndex& e) const
{
  for (int m = 0; m < size(); ++m)
    if (_exponents[m] == e)
      return m;
  return -1;
}
//-----------------------------------------------------------------------------
double MonomialSet::eval(int m, const Point& xi, const MultiIndex& deriv) const
{
  const MultiIndex& e = _exponents[m];
  double v = 1.0;
  for (int a = 0; a < _dim; ++a)
    v *= monomial_1d(e[a], deriv[a], xi[a]);
  return v;
}
//-----------------------------------------------------------------------------
void MonomialSet::eval_all(const Point& xi, const MultiIndex& deriv,
                           std::span<double> out) const
{
  for (int m = 0; m < size(); ++m)
    out[m] = eval(m, xi, deriv);
}
//-----------------------------------------------------------------------------
double morley::eval_poly(const MonomialSet& set, std::span<const double> coeffs,
                         const Point& xi, const MultiIndex& deriv)
{
  double v = 0.0;
  for (int m = 0; m < set.size(); ++m)
    if (coeffs[m] != 0.0)
      v += coeffs[m] * set.eval(m, xi, deriv);
  return v;
}
//-----------------------------------------------------------------------------
Eigen::VectorXd morley::apply_functionals(const MonomialSet& set,
                                          std::span<const double> coeffs)
{
  const int d = set.dim();
  const auto facets = local_facets(d);
  const int nv = 1 << d;
  Eigen::VectorXd out(nv + static_cast<int>(facets.size()));
  for (int v = 0; v < nv; ++v)
    out[v] = eval_poly(set, coeffs, reference_vertex(d, v));

  // Facet means with a rule exact for cubics restricted to the facet.
  const QuadRule face = gauss_rule(d - 1, 2);
  for (std::size_t f = 0; f < facets.size(); ++f)
  {
    const LocalFacet lf = facets[f];
    MultiIndex deriv{0, 0, 0};
    deriv[lf.axis] = 1;
    double sum = 0.0;
    for (std::size_t q = 0; q < face.size(); ++q)
    {
      Point xi{0.0, 0.0, 0.0};
      int t = 0;
      for (int a = 0; a < d; ++a)
        xi[a] = (a == lf.axis) ? lf.side : face.points[q][t++];
      sum += face.weights[q] * eval_poly(set, coeffs, xi, deriv);
    }
    // Facet measure on the reference cell is 2^(d-1).
    out[nv + f] = lf.side * sum / static_cast<double>(1 << (d - 1));
  }
  return out;
}
//-----------------------------------------------------------------------------
NodalBasis::NodalBasis(MonomialSet set, Eigen::MatrixXd functionals)
    : _monomials(std::move(set)), _functionals(std::move(functionals))
{
  Eigen::FullPivLU<Eigen::MatrixXd> lu(_functionals);
  if (!lu.isInvertible())
    throw std::logic_error("Morley functional matrix is singular");
  _coeffs = lu.inverse();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(_functionals);
  const auto& s = svd.singularValues();
  _condition = s(0) / s(s.size() - 1);
}
//-----------------------------------------------------------------------------
NodalBasis NodalBasis::reference(int dim)
{
  MonomialSet set = MonomialSet::morley(dim);
  const int n = set.size();
  Eigen::MatrixXd v(n, n);
  std::vector<double> unit(n, 0.0);
  for (int m = 0; m < n; ++m)
  {
    unit.assign(n, 0.0);
    unit[m] = 1.0;
    v.col(m) = apply_functionals(set, unit);
  }
  return NodalBasis(std::move(set), std::move(v));
}
//-----------------------------------------------------------------------------
Eigen::VectorXd NodalBasis::to_monomials(std::span<const double> dofs) const
{
  return _coeffs * Eigen::Map<const Eigen::VectorXd>(dofs.data(), size());
}
//-----------------------------------------------------------------------------
NodalBasis NodalBasis::perturbed(double eps, int monomial, int function) const
{
  NodalBasis copy = *this;
  copy._coeffs(monomial, function) += eps;
  return copy;
}
//-----------------------------------------------------------------------------
double morley::eval_local(const NodalBasis& basis, std::span<const double> dofs,
                          const Point& xi, const MultiIndex& deriv)
{
  if (order(deriv) > 3)
    throw std::invalid_argument(
        "derivative order above 3 requested from a cubic shape space");
  const Eigen::VectorXd c = basis.to_monomials(dofs);
  return eval_poly(basis.monomials(), std::span<const double>(c.data(), c.size()),
                   xi, deriv);
}
//-----------------------------------------------------------------------------
Eigen::MatrixXd morley::monomial_hessians(const MonomialSet& set, const Point& xi)
{
  const int d = set.dim();
  Eigen::MatrixXd h(d * d, set.size());
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
    {
      MultiIndex deriv{0, 0, 0};
      ++deriv[i];
      ++deriv[j];
      for (int m = 0; m < set.size(); ++m)
        h(i * d + j, m) = set.eval(m, xi, deriv);
    }
  return h;
}
//-----------------------------------------------------------------------------
Eigen::MatrixXd morley::local_stiffness(const NodalBasis& basis, double half, int q)
{
  if (!(half > 0.0))
    throw std::invalid_argument("cell half side must be positive");
  const int d = basis.dim();
  const QuadRule rule = gauss_rule(d, q);
  const int n = basis.size();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < rule.size(); ++k)
  {
    // Rows: Hessian components, columns: basis functions.
    const Eigen::MatrixXd h = monomial_hessians(basis.monomials(), rule.points[k])
                              * basis.coefficients();
    m.noalias() += rule.weights[k] * (h.transpose() * h);
  }
  // ∇²_x = h★^-2 ∇²_ξ and dx = h★^d dξ.
  const double scale = std::pow(half, d - 4);
  // Symmetrize the rounding of the matrix product.
  return scale * 0.5 * (m + m.transpose());
}
