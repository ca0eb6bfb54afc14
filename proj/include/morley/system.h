#pragma once

#include "morley/element.h"
#include "morley/mesh.h"
#include "morley/quadrature.h"

#include <Eigen/Sparse>
#include <functional>
#include <stdexcept>
#include <string>

namespace morley
{

/// Stiffness matrix over the free DOFs. Both triangles are stored.
using SparseSymMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

/// Full-length DOF vector; constrained entries are zero for discrete
/// solutions. Holds a non-owning pointer to the DofMap it indexes.
struct FEField
{
  const DofMap* dofmap = nullptr;
  Eigen::VectorXd values;
};

/// Sparse A = Σ_K S_K M S_K restricted to the free DOFs, where S_K is
/// DofMap::reference_scaling() and M the reference-DOF cell matrix.
SparseSymMatrix assemble_stiffness(const StructuredMesh& mesh, const DofMap& dofmap,
                                   const Eigen::MatrixXd& local);

/// b_i = Σ_K ∫_K f φ_i over the free DOFs.
Eigen::VectorXd assemble_load(const StructuredMesh& mesh, const DofMap& dofmap,
                              const NodalBasis& basis,
                              const std::function<double(const Point&)>& f,
                              const QuadRule& quad);

enum class SolverKind
{
  automatic, ///< Cholesky up to `direct_limit` free DOFs, CG above
  cholesky,  ///< sparse LDLᵀ with AMD ordering
  cg,        ///< Jacobi-preconditioned conjugate gradients with refinement
};

SolverKind parse_solver_kind(const std::string& name);

struct SolveOptions
{
  double tolerance = 1e-12; ///< bound on ‖Ax-b‖/‖b‖
  SolverKind kind = SolverKind::automatic;
  int direct_limit = 20000;
  int max_iterations = 200000;   ///< per CG solve
  double inner_tolerance = 1e-8; ///< CG reduction per refinement step
  int refinement_steps = 3;
  /// Also accept a residual above `tolerance` when it sits at the
  /// double-precision floor u·‖|A||x|‖/‖b‖ of the computed x.
  bool accept_rounding_floor = true;
};

/// Raised when the residual contract cannot be met.
class SolveError : public std::runtime_error
{
public:
  SolveError(const std::string& what, double residual)
      : std::runtime_error(what), _residual(residual)
  {
  }
  double residual() const { return _residual; }

private:
  double _residual;
};

struct SolveResult
{
  Eigen::VectorXd x;
  double relative_residual = 0.0;
  int iterations = 0;
  SolverKind used = SolverKind::cholesky;
  /// u·‖|A||x|‖/‖b‖: the residual that rounding x to double alone causes.
  double rounding_floor = 0.0;
};

/// Solves A x = b for SPD A to ‖Ax-b‖/‖b‖ <= tolerance, or to the rounding
/// floor when that lies above the tolerance and accept_rounding_floor is set.
/// Residuals are accumulated in extended precision.
SolveResult solve_spd(const SparseSymMatrix& a, const Eigen::VectorXd& b,
                      const SolveOptions& options = {});

/// Full FEField from a free-DOF vector, zero on constrained DOFs.
FEField scatter_free(const DofMap& dofmap, const Eigen::VectorXd& free_values);

/// Free-DOF entries of a field.
Eigen::VectorXd gather_free(const FEField& field);

} // namespace morley
