#include "morley/system.h"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/OrderingMethods>
#include <Eigen/SparseCholesky>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

using namespace morley;

namespace
{
// b - A x accumulated in extended precision.
Eigen::VectorXd residual(const SparseSymMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b)
{
  std::vector<long double> acc(b.data(), b.data() + b.size());
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseSymMatrix::InnerIterator it(a, col); it; ++it)
      acc[it.row()] -= static_cast<long double>(it.value()) * x[col];
  Eigen::VectorXd r(b.size());
  for (Eigen::Index i = 0; i < r.size(); ++i)
    r[i] = static_cast<double>(acc[i]);
  return r;
}

double relative_residual(const SparseSymMatrix& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b)
{
  return residual(a, x, b).norm() / b.norm();
}

double rounding_floor(const SparseSymMatrix& a, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& b)
{
  Eigen::VectorXd ax = Eigen::VectorXd::Zero(b.size());
  for (int col = 0; col < a.outerSize(); ++col)
    for (SparseSymMatrix::InnerIterator it(a, col); it; ++it)
      ax[it.row()] += std::abs(it.value() * x[col]);
  return 0.5 * std::numeric_limits<double>::epsilon() * ax.norm() / b.norm();
}

SolveResult solve_direct(const SparseSymMatrix& a, const Eigen::VectorXd& b,
                         const SolveOptions& options)
{
  Eigen::SimplicialLDLT<SparseSymMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  ldlt.compute(a);
  if (ldlt.info() != Eigen::Success)
    throw SolveError("sparse LDLT factorization failed (matrix not SPD?)",
                     std::numeric_limits<double>::infinity());
  SolveResult r;
  r.used = SolverKind::cholesky;
  r.x = ldlt.solve(b);
  r.relative_residual = relative_residual(a, r.x, b);
  for (int step = 0; step < options.refinement_steps
                     && r.relative_residual > options.tolerance;
       ++step)
  {
    const Eigen::VectorXd x = r.x + ldlt.solve(residual(a, r.x, b));
    const double res = relative_residual(a, x, b);
    ++r.iterations;
    if (res >= r.relative_residual)
      break;
    const bool stalled = res > 0.5 * r.relative_residual;
    r.x = x;
    r.relative_residual = res;
    if (stalled)
      break;
  }
  return r;
}

SolveResult solve_cg(const SparseSymMatrix& a, const Eigen::VectorXd& b,
                     const SolveOptions& options)
{
  Eigen::ConjugateGradient<SparseSymMatrix, Eigen::Lower | Eigen::Upper,
                           Eigen::DiagonalPreconditioner<double>>
      cg;
  cg.setTolerance(options.inner_tolerance);
  cg.setMaxIterations(options.max_iterations);
  cg.compute(a);
  SolveResult r;
  r.used = SolverKind::cg;
  r.x = Eigen::VectorXd::Zero(b.size());
  r.relative_residual = 1.0;
  Eigen::VectorXd res = b;
  for (int step = 0; step <= options.refinement_steps + 5; ++step)
  {
    const Eigen::VectorXd x = r.x + cg.solve(res);
    r.iterations += static_cast<int>(cg.iterations());
    res = residual(a, x, b);
    const double rel = res.norm() / b.norm();
    if (rel >= r.relative_residual)
      break;
    const bool stalled = rel > 0.5 * r.relative_residual;
    r.x = x;
    r.relative_residual = rel;
    if (stalled || rel <= options.tolerance)
      break;
  }
  return r;
}
} // namespace

//-----------------------------------------------------------------------------
SparseSymMatrix morley::assemble_stiffness(const StructuredMesh& mesh,
                                           const DofMap& dofmap,
                                           const Eigen::MatrixXd& local)
{
  const std::vector<double> s = dofmap.reference_scaling();
  const int nl = static_cast<int>(s.size());
  if (local.rows() != nl || local.cols() != nl)
    throw std::invalid_argument("cell matrix does not match the DOF layout");

  Eigen::MatrixXd scaled(nl, nl);
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nl; ++j)
      scaled(i, j) = local(i, j) * (s[i] * s[j]);

  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<std::size_t>(mesh.num_cells()) * nl * nl);
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    const std::vector<int> dofs = dofmap.cell_dofs(c);
    for (int i = 0; i < nl; ++i)
    {
      const int fi = dofmap.free_index(dofs[i]);
      if (fi < 0)
        continue;
      for (int j = 0; j < nl; ++j)
      {
        const int fj = dofmap.free_index(dofs[j]);
        if (fj >= 0)
          triplets.emplace_back(fi, fj, scaled(i, j));
      }
    }
  }
  SparseSymMatrix a(dofmap.num_free(), dofmap.num_free());
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}
//-----------------------------------------------------------------------------
Eigen::VectorXd morley::assemble_load(const StructuredMesh& mesh,
                                      const DofMap& dofmap,
                                      const NodalBasis& basis,
                                      const std::function<double(const Point&)>& f,
                                      const QuadRule& quad)
{
  const std::vector<double> s = dofmap.reference_scaling();
  const int nl = basis.size();
  const int d = mesh.dim();

  // Basis values at the quadrature points, shared by all cells.
  Eigen::MatrixXd phi(quad.size(), nl);
  for (std::size_t q = 0; q < quad.size(); ++q)
  {
    Eigen::VectorXd mono(basis.monomials().size());
    basis.monomials().eval_all(quad.points[q], {0, 0, 0},
                               std::span<double>(mono.data(), mono.size()));
    phi.row(q) = (basis.coefficients().transpose() * mono).transpose();
  }
  const double jac = std::pow(mesh.half(), d);

  Eigen::VectorXd b = Eigen::VectorXd::Zero(dofmap.num_free());
  Eigen::VectorXd fq(quad.size());
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    for (std::size_t q = 0; q < quad.size(); ++q)
      fq[q] = quad.weights[q] * f(mesh.to_physical(c, quad.points[q]));
    const Eigen::VectorXd local = jac * (phi.transpose() * fq);
    const std::vector<int> dofs = dofmap.cell_dofs(c);
    for (int i = 0; i < nl; ++i)
    {
      const int fi = dofmap.free_index(dofs[i]);
      if (fi >= 0)
        b[fi] += s[i] * local[i];
    }
  }
  return b;
}
//-----------------------------------------------------------------------------
SolverKind morley::parse_solver_kind(const std::string& name)
{
  if (name == "auto")
    return SolverKind::automatic;
  if (name == "cholesky")
    return SolverKind::cholesky;
  if (name == "cg")
    return SolverKind::cg;
  throw std::invalid_argument("unknown solver '" + name
                              + "' (expected auto, cholesky or cg)");
}
//-----------------------------------------------------------------------------
SolveResult morley::solve_spd(const SparseSymMatrix& a, const Eigen::VectorXd& b,
                              const SolveOptions& options)
{
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw std::invalid_argument("solve_spd: dimension mismatch");
  if (b.size() == 0 || b.norm() == 0.0)
  {
    SolveResult r;
    r.x = Eigen::VectorXd::Zero(b.size());
    return r;
  }

  SolverKind kind = options.kind;
  if (kind == SolverKind::automatic)
    kind = a.rows() <= options.direct_limit ? SolverKind::cholesky : SolverKind::cg;

  SolveResult r = kind == SolverKind::cholesky ? solve_direct(a, b, options)
                                               : solve_cg(a, b, options);
  r.rounding_floor = rounding_floor(a, r.x, b);
  const bool at_floor
      = options.accept_rounding_floor && r.relative_residual <= r.rounding_floor;
  if (!(r.relative_residual <= options.tolerance) && !at_floor)
  {
    std::ostringstream msg;
    msg << (kind == SolverKind::cholesky ? "Cholesky" : "CG")
        << " solve did not reach relative residual " << options.tolerance
        << " (achieved " << r.relative_residual << ")";
    throw SolveError(msg.str(), r.relative_residual);
  }
  return r;
}
//-----------------------------------------------------------------------------
FEField morley::scatter_free(const DofMap& dofmap, const Eigen::VectorXd& free_values)
{
  if (free_values.size() != dofmap.num_free())
    throw std::invalid_argument("free-DOF vector has the wrong length");
  FEField u{&dofmap, Eigen::VectorXd::Zero(dofmap.num_dofs())};
  const auto free = dofmap.free_dofs();
  for (std::size_t k = 0; k < free.size(); ++k)
    u.values[free[k]] = free_values[static_cast<int>(k)];
  return u;
}
//-----------------------------------------------------------------------------
Eigen::VectorXd morley::gather_free(const FEField& field)
{
  const auto free = field.dofmap->free_dofs();
  Eigen::VectorXd x(free.size());
  for (std::size_t k = 0; k < free.size(); ++k)
    x[static_cast<int>(k)] = field.values[free[k]];
  return x;
}
