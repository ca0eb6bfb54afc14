#pragma once

#include "morley/fields.h"
#include "morley/mesh.h"
#include "morley/solutions.h"
#include "morley/system.h"

#include <span>
#include <vector>

namespace morley
{

/// Q3 polynomial on one macro block in block coordinates t ∈ [-1,1]^dim,
/// coefficients in MonomialSet::tensor_cubic order.
struct MacroCubic
{
  int dim = 0;
  std::vector<double> coeffs;

  double value(const Point& t) const;
};

/// Unique Q3 interpolant of 4^dim values on the equispaced lattice
/// t_i ∈ {-1, -1/3, 1/3, 1}, values ordered with x1 fastest.
MacroCubic interpolate_block(int dim, std::span<const double> values);

/// Π³_3h: per macro block, the Q3 interpolant of the vertex values at the
/// 4^dim macro vertices, re-expressed on every fine cell of the block.
///
/// `vertex_values` is indexed by mesh vertex id; a NaN at a macro vertex
/// counts as missing and raises std::invalid_argument.
PiecewisePoly postprocess(const StructuredMesh& mesh, const MacroGrid& macro,
                          std::span<const double> vertex_values);

/// Vertex DOFs of a field.
std::vector<double> vertex_values_of(const StructuredMesh& mesh, const FEField& field);

/// Vertex values of a broken polynomial; throws std::invalid_argument when
/// two incident cells disagree by more than `tolerance` (relative to
/// max(1, |value|)).
std::vector<double> vertex_values_of(const PiecewisePoly& field,
                                     double tolerance = 1e-10);

/// Exact samples u(Z).
std::vector<double> vertex_values_of(const StructuredMesh& mesh,
                                     const ManufacturedSolution& u);

/// Vertex values of Π*_h u from its nodal parts: the vertex DOFs of Π_h u
/// minus R_h u at the reference vertices of an incident cell.
std::vector<double> vertex_values_of(const StructuredMesh& mesh,
                                     const CorrectedInterpolant& field);

} // namespace morley
