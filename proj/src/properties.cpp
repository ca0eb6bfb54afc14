#include "morley/properties.h"

#include "morley/element.h"
#include "morley/fields.h"
#include "morley/postprocess.h"
#include "morley/solutions.h"
#include "morley/system.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

using namespace morley;

namespace
{
using Check = std::function<double()>;

PropertyResult run(const std::string& name, double tolerance, const Check& check)
{
  PropertyResult r;
  r.name = name;
  r.tolerance = tolerance;
  try
  {
    r.measured = check();
    r.pass = std::isfinite(r.measured) && r.measured <= tolerance;
  }
  catch (const std::exception& ex)
  {
    r.pass = false;
    r.measured = std::numeric_limits<double>::quiet_NaN();
    r.detail = ex.what();
  }
  return r;
}

NodalBasis basis_for(int dim, const PropertyOptions& options)
{
  NodalBasis b = NodalBasis::reference(dim);
  if (options.basis_perturbation != 0.0)
    return b.perturbed(options.basis_perturbation);
  return b;
}

double duality(const NodalBasis& basis)
{
  const Eigen::MatrixXd d = basis.functional_matrix() * basis.coefficients();
  return (d - Eigen::MatrixXd::Identity(d.rows(), d.cols())).cwiseAbs().maxCoeff();
}

double reproduction(const NodalBasis& basis, std::mt19937& rng)
{
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const int m = basis.size();
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial)
  {
    Eigen::VectorXd c(m);
    for (int k = 0; k < m; ++k)
      c[k] = dist(rng);
    const Eigen::VectorXd dofs
        = apply_functionals(basis.monomials(), std::span<const double>(c.data(), m));
    const Eigen::VectorXd back
        = basis.to_monomials(std::span<const double>(dofs.data(), dofs.size()));
    worst = std::max(worst, (back - c).cwiseAbs().maxCoeff());
  }
  return worst;
}

// For every basis function and axis, ∂w/∂ξ_a minus its facet mean agrees on
// the two opposite facets as a function of the tangential coordinates.
double crucial_property(const NodalBasis& basis, std::mt19937& rng)
{
  const int d = basis.dim();
  const MonomialSet& set = basis.monomials();
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const QuadRule face = gauss_rule(d - 1, 3);
  double worst = 0.0;
  for (int j = 0; j < basis.size(); ++j)
  {
    const Eigen::VectorXd col = basis.coefficients().col(j);
    const std::span<const double> c(col.data(), col.size());
    for (int a = 0; a < d; ++a)
    {
      MultiIndex alpha{0, 0, 0};
      alpha[a] = 1;
      auto trace = [&](int side, const Point& t)
      {
        Point xi{0.0, 0.0, 0.0};
        int k = 0;
        for (int b = 0; b < d; ++b)
          xi[b] = b == a ? side : t[k++];
        return eval_poly(set, c, xi, alpha);
      };
      auto mean = [&](int side)
      {
        double s = 0.0;
        for (std::size_t q = 0; q < face.size(); ++q)
          s += face.weights[q] * trace(side, face.points[q]);
        return s / std::pow(2.0, d - 1);
      };
      const double mp = mean(1);
      const double mm = mean(-1);
      for (int sample = 0; sample < 5; ++sample)
      {
        const Point t{dist(rng), dist(rng), 0.0};
        worst = std::max(worst, std::abs((trace(1, t) - mp) - (trace(-1, t) - mm)));
      }
    }
  }
  return worst;
}

double q3_reproduction(int dim, int n, std::mt19937& rng)
{
  GridSpec spec;
  spec.dim = dim;
  spec.n = n;
  const StructuredMesh mesh(spec);
  const MacroGrid macro(mesh);
  const MonomialSet q3 = MonomialSet::tensor_cubic(dim);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> c(q3.size());
  for (double& x : c)
    x = dist(rng);

  std::vector<double> samples(mesh.num_vertices());
  for (int v = 0; v < mesh.num_vertices(); ++v)
    samples[v] = eval_poly(q3, c, mesh.vertex_coords(v));
  const PiecewisePoly post = postprocess(mesh, macro, samples);

  std::uniform_int_distribution<int> pick(0, static_cast<int>(std::pow(3, dim)) - 1);
  double worst = 0.0;
  for (int b = 0; b < macro.num_blocks(); ++b)
    for (int k = 0; k < 10; ++k)
    {
      const int cell = macro.block_cells(b)[pick(rng)];
      const Point xi{dist(rng), dist(rng), dim == 3 ? dist(rng) : 0.0};
      const double exact = eval_poly(q3, c, mesh.to_physical(cell, xi));
      worst = std::max(worst, std::abs(post.value(cell, xi) - exact));
    }
  return worst;
}

double idempotence(int dim, int n, std::mt19937& rng)
{
  GridSpec spec;
  spec.dim = dim;
  spec.n = n;
  const StructuredMesh mesh(spec);
  const MacroGrid macro(mesh);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> values(mesh.num_vertices());
  for (double& v : values)
    v = dist(rng);
  const PiecewisePoly once = postprocess(mesh, macro, values);
  const PiecewisePoly twice = postprocess(mesh, macro, vertex_values_of(once));
  return (once.coefficients() - twice.coefficients()).cwiseAbs().maxCoeff();
}

// 1 when the two postprocessed fields differ in any bit, else 0.
double commutation(const std::string& name, int n)
{
  const ManufacturedSolution u = ManufacturedSolution::by_name(name);
  GridSpec spec;
  spec.dim = u.dim();
  spec.n = n;
  const StructuredMesh mesh(spec);
  const DofMap dofmap(mesh);
  const MacroGrid macro(mesh);
  const NodalBasis basis = NodalBasis::reference(mesh.dim());
  const CorrectedInterpolant star = corrected_interpolate(mesh, dofmap, basis, u);
  const PiecewisePoly a = postprocess(mesh, macro, vertex_values_of(mesh, star));
  const PiecewisePoly b = postprocess(mesh, macro, vertex_values_of(mesh, u));
  return a.coefficients() == b.coefficients() ? 0.0 : 1.0;
}

double laplacian(const ManufacturedSolution& u, const Point& x)
{
  double s = 0.0;
  for (int a = 0; a < u.dim(); ++a)
  {
    MultiIndex alpha{0, 0, 0};
    alpha[a] = 2;
    s += u.derivative(x, alpha);
  }
  return s;
}

// Relative deviation of Δ²u from a central-difference Laplacian of the
// analytic Δu, scaled by the largest |Δ²u| over the samples.
double rhs_consistency(const std::string& name, std::mt19937& rng)
{
  const ManufacturedSolution u = ManufacturedSolution::by_name(name);
  const int d = u.dim();
  const double step = 1e-3;
  std::uniform_real_distribution<double> dist(0.05, 0.95);
  double worst = 0.0;
  double scale = 0.0;
  for (int k = 0; k < 10; ++k)
  {
    Point x{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a)
      x[a] = dist(rng);
    const double centre = laplacian(u, x);
    double fd = 0.0;
    for (int a = 0; a < d; ++a)
    {
      Point xp = x, xm = x;
      xp[a] += step;
      xm[a] -= step;
      fd += (laplacian(u, xp) - 2.0 * centre + laplacian(u, xm)) / (step * step);
    }
    const double f = u.rhs(x);
    worst = std::max(worst, std::abs(fd - f));
    scale = std::max(scale, std::abs(f));
  }
  return worst / scale;
}

struct SmallSystem
{
  StructuredMesh mesh;
  DofMap dofmap;
  NodalBasis basis;
  SparseSymMatrix a;

  SmallSystem(int dim, int n)
      : mesh(GridSpec{dim, n}), dofmap(mesh), basis(NodalBasis::reference(dim)),
        a(assemble_stiffness(mesh, dofmap, local_stiffness(basis, mesh.half())))
  {
  }
};

double zero_data(int dim, int n, std::mt19937& rng)
{
  const SmallSystem sys(dim, n);
  const Eigen::VectorXd b = Eigen::VectorXd::Zero(sys.a.rows());
  const SolveResult r = solve_spd(sys.a, b);
  double worst = r.x.cwiseAbs().maxCoeff();
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int k = 0; k < 10; ++k)
  {
    Eigen::VectorXd x(sys.a.rows());
    for (Eigen::Index i = 0; i < x.size(); ++i)
      x[i] = dist(rng);
    if (x.dot(sys.a * x) <= 0.0)
      worst = std::max(worst, 1.0);
  }
  return worst;
}

double energy_identity(const std::string& name, int n)
{
  const ManufacturedSolution u = ManufacturedSolution::by_name(name);
  const SmallSystem sys(u.dim(), n);
  const Eigen::VectorXd b
      = assemble_load(sys.mesh, sys.dofmap, sys.basis,
                      [&u](const Point& x) { return u.rhs(x); }, gauss_rule(u.dim(), 5));
  const SolveResult r = solve_spd(sys.a, b);
  const double fu = b.dot(r.x);
  return std::abs(r.x.dot(sys.a * r.x) - fu) / std::abs(fu);
}
} // namespace

//-----------------------------------------------------------------------------
std::vector<PropertyResult> morley::run_property_suite(const PropertyOptions& options)
{
  std::mt19937 rng(20240607);
  std::vector<PropertyResult> out;
  for (int d : {2, 3})
  {
    const std::string tag = std::to_string(d) + "D";
    const NodalBasis basis = basis_for(d, options);
    out.push_back(run("basis duality " + tag, 1e-12, [&] { return duality(basis); }));
    out.push_back(run("shape-space reproduction " + tag, 1e-12,
                      [&] { return reproduction(basis, rng); }));
    out.push_back(run("opposite-facet derivative identity " + tag, 1e-12,
                      [&] { return crucial_property(basis, rng); }));
  }
  for (int d : {2, 3})
  {
    const std::string tag = std::to_string(d) + "D";
    out.push_back(run("Q3 reproduction " + tag, 1e-11,
                      [&] { return q3_reproduction(d, options.macro_n, rng); }));
    out.push_back(run("postprocess idempotence " + tag, 1e-11,
                      [&] { return idempotence(d, options.macro_n, rng); }));
  }
  out.push_back(run("commutation u1 (bit-exact)", 0.0,
                    [&] { return commutation("u1", options.macro_n); }));
  out.push_back(run("commutation u3 (bit-exact)", 0.0,
                    [&] { return commutation("u3", options.macro_n); }));
  for (const std::string& name : ManufacturedSolution::names())
    out.push_back(run("rhs consistency " + name, 1e-5,
                      [&] { return rhs_consistency(name, rng); }));
  out.push_back(run("zero data, zero solution 2D", 0.0, [&] { return zero_data(2, 6, rng); }));
  out.push_back(run("zero data, zero solution 3D", 0.0, [&] { return zero_data(3, 4, rng); }));
  out.push_back(run("energy identity u1", 1e-10, [] { return energy_identity("u1", 6); }));
  out.push_back(run("energy identity u3", 1e-10, [] { return energy_identity("u3", 6); }));
  return out;
}
