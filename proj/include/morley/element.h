#pragma once

#include "morley/mesh.h"
#include "morley/quadrature.h"

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace morley
{

/// Exponent or derivative multi-index (a1, a2, a3).
using MultiIndex = std::array<int, 3>;

/// Symmetric 3x3 matrix of second derivatives; only the leading dim x dim
/// block is meaningful.
using Hessian = std::array<std::array<double, 3>, 3>;

inline int order(const MultiIndex& a) { return a[0] + a[1] + a[2]; }

/// Σ_ij A_ij B_ij over the leading dim x dim block.
double frobenius_inner(const Hessian& a, const Hessian& b, int dim);

/// Ordered list of monomials ξ^a on the reference cell.
class MonomialSet
{
public:
  MonomialSet(int dim, std::vector<MultiIndex> exponents);

  /// Morley shape space: P2 plus the pure cubes (and ξ1ξ2ξ3 in 3D).
  /// 2D: 1, ξ1, ξ2, ξ1ξ2, ξ1², ξ2², ξ1³, ξ2³
  /// 3D: 1, ξ1, ξ2, ξ3, ξ1ξ2, ξ1ξ3, ξ2ξ3, ξ1², ξ2², ξ3², ξ1ξ2ξ3, ξ1³, ξ2³, ξ3³
  static MonomialSet morley(int dim);

  /// Q3: all ξ^a with every a_i <= 3, lexicographic with ξ1 fastest.
  static MonomialSet tensor_cubic(int dim);

  int dim() const { return _dim; }
  int size() const { return static_cast<int>(_exponents.size()); }
  const MultiIndex& exponent(int m) const { return _exponents[m]; }
  /// Index of an exponent in the set, or -1.
  int find(const MultiIndex& e) const;

  /// ∂^deriv ξ^{a_m} at xi.
  double eval(int m, const Point& xi, const MultiIndex& deriv = {0, 0, 0}) const;
  void eval_all(const Point& xi, const MultiIndex& deriv,
                std::span<double> out) const;

private:
  int _dim;
  std::vector<MultiIndex> _exponents;
};

/// Σ_m coeffs[m] ∂^deriv ξ^{a_m} at xi.
double eval_poly(const MonomialSet& set, std::span<const double> coeffs,
                 const Point& xi, const MultiIndex& deriv = {0, 0, 0});

/// Nodal functionals of the reference Morley element applied to a
/// polynomial given by monomial coefficients: values at the 2^dim vertices
/// (reference_vertex order), then the mean outward-normal derivative on
/// each facet (local_facets order).
Eigen::VectorXd apply_functionals(const MonomialSet& set,
                                  std::span<const double> coeffs);

/// Reference Morley basis on [-1,1]^dim, dual to the nodal functionals.
class NodalBasis
{
public:
  static NodalBasis reference(int dim);

  int dim() const { return _monomials.dim(); }
  int size() const { return _monomials.size(); }
  const MonomialSet& monomials() const { return _monomials; }

  /// Column j holds the monomial coefficients of basis function j.
  const Eigen::MatrixXd& coefficients() const { return _coeffs; }
  /// Row i, column m: functional i applied to monomial m.
  const Eigen::MatrixXd& functional_matrix() const { return _functionals; }
  /// 2-norm condition number of the functional matrix.
  double condition_number() const { return _condition; }

  /// Monomial coefficients of Σ_j dofs[j] φ_j.
  Eigen::VectorXd to_monomials(std::span<const double> dofs) const;

  /// Copy with one coefficient shifted; only for exercising the checks.
  NodalBasis perturbed(double eps, int monomial = 0, int function = 0) const;

private:
  NodalBasis(MonomialSet set, Eigen::MatrixXd functionals);

  MonomialSet _monomials;
  Eigen::MatrixXd _functionals;
  Eigen::MatrixXd _coeffs;
  double _condition;
};

/// Value (or reference derivative of order <= 3) at xi of the local
/// polynomial with reference DOF values `dofs`.
double eval_local(const NodalBasis& basis, std::span<const double> dofs,
                  const Point& xi, const MultiIndex& deriv = {0, 0, 0});

/// Reference Hessian of every monomial at xi, as rows (i,j) of a
/// dim*dim x size matrix.
Eigen::MatrixXd monomial_hessians(const MonomialSet& set, const Point& xi);

/// Cell matrix M_ij = ∫_K ∇²φ_i : ∇²φ_j dx for a cell of half side `half`,
/// in terms of the reference DOFs. Integrated exactly (q = 2 per axis by
/// default: every Hessian entry is at most linear per axis).
Eigen::MatrixXd local_stiffness(const NodalBasis& basis, double half, int q = 2);

} // namespace morley
