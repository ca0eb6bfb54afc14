#pragma once

#include "morley/element.h"
#include "morley/mesh.h"
#include "morley/solutions.h"
#include "morley/system.h"

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace morley
{

/// Broken polynomial field: per cell, coefficients in a monomial set of
/// the cell's reference coordinates ξ = (x - x_c)/h★.
class PiecewisePoly
{
public:
  PiecewisePoly(const StructuredMesh& mesh, MonomialSet set);

  const StructuredMesh& mesh() const { return *_mesh; }
  const MonomialSet& monomials() const { return _set; }

  std::span<double> cell_coeffs(int cell);
  std::span<const double> cell_coeffs(int cell) const;
  /// Coefficients as a (monomials x cells) matrix.
  const Eigen::MatrixXd& coefficients() const { return _coeffs; }

  double value(int cell, const Point& xi) const;
  /// Physical derivative ∂^alpha at the point mapped from xi.
  double derivative(int cell, const Point& xi, const MultiIndex& alpha) const;
  /// Physical Hessian.
  Hessian hessian(int cell, const Point& xi) const;

private:
  const StructuredMesh* _mesh;
  MonomialSet _set;
  Eigen::MatrixXd _coeffs;
};

/// Π_h u: vertex values and facet means of ∂u/∂x_axis, the means taken
/// with a q-point Gauss rule per facet axis.
FEField canonical_interpolate(const StructuredMesh& mesh, const DofMap& dofmap,
                              const ManufacturedSolution& u, int q = 5);

/// Reference DOF values of a field on one cell (global values times
/// DofMap::reference_scaling()).
std::vector<double> cell_reference_dofs(const DofMap& dofmap, const FEField& field,
                                        int cell);

/// Per-cell polynomials of a DOF field in the Morley monomial set.
PiecewisePoly field_to_piecewise(const StructuredMesh& mesh, const DofMap& dofmap,
                                 const NodalBasis& basis, const FEField& field);

/// Length used for h in the correction coefficients and in the prefactor
/// h/4 of the correction functions. The reference map always uses h★.
enum class CorrectionScale
{
  half_width, ///< h = h★ = s/2
  cell_side,  ///< h = s; kept only to compare against half_width
};

/// Coefficients of the correction R_K u on one cell.
///
/// plus[a] multiplies (h/4)(ξ_a+1)²(ξ_a-1), whose x_a-derivative is 1 on
/// the + facet of axis a and 0 on the - facet; minus[a] multiplies
/// (h/4)(ξ_a+1)(ξ_a-1)², the mirror image. In 2D these are (a5, a6) and
/// (a7, a8); in 3D (b9, b10, b11) and (b12, b13, b14).
struct CellCorrection
{
  std::array<double, 3> plus{0.0, 0.0, 0.0};
  std::array<double, 3> minus{0.0, 0.0, 0.0};
};

struct CorrectionCoeffs
{
  int dim = 0;
  double length = 0.0; ///< h in the prefactor h/4
  std::vector<CellCorrection> cells;
};

/// Side (+1/-1) of the facet whose third-derivative integral defines the
/// correction along `axis`: 2D uses e2 (right) for x1 and e1 (bottom) for
/// x2; 3D uses F1, F2, F3 (+ sides).
int correction_facet_side(int dim, int axis);

/// Correction coefficients from third derivatives of u:
///   2D: plus[a] = minus[a] = -(h/6) ∫_e ∂³u/∂x_a∂x_b² ds  (b ≠ a)
///   3D: plus[a] = minus[a] = -(1/12) ∫_F Σ_{b≠a} ∂³u/∂x_a∂x_b² dA
/// with the facet chosen by correction_facet_side and q Gauss points per
/// facet axis.
CorrectionCoeffs correction_coeffs(const StructuredMesh& mesh,
                                   const ManufacturedSolution& u, int q = 5,
                                   CorrectionScale scale = CorrectionScale::half_width);

/// R_K u of one cell in the Morley monomial set.
Eigen::VectorXd correction_monomials(const CorrectionCoeffs& coeffs, int cell);

/// R_K u at xi, evaluated in factored form so that it is exactly zero at
/// the reference vertices.
double correction_value(const CorrectionCoeffs& coeffs, int cell, const Point& xi);

/// Π*_h u = Π_h u - R_h u, kept together with its parts.
struct CorrectedInterpolant
{
  FEField interpolant;
  CorrectionCoeffs correction;
  PiecewisePoly poly;
};

struct InterpolationOptions
{
  int facet_q = 5;
  CorrectionScale scale = CorrectionScale::half_width;
};

CorrectedInterpolant corrected_interpolate(const StructuredMesh& mesh,
                                           const DofMap& dofmap,
                                           const NodalBasis& basis,
                                           const ManufacturedSolution& u,
                                           const InterpolationOptions& options = {});

/// Largest difference, over interior facets, between the facet DOF of
/// R_h u seen from the two adjacent cells. Zero iff R_h u has single-valued
/// facet DOFs.
double correction_dof_mismatch(const StructuredMesh& mesh,
                               const CorrectionCoeffs& coeffs);

} // namespace morley
