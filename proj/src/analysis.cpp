#include "morley/analysis.h"

#include "morley/postprocess.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

using namespace morley;

namespace
{
// Physical Hessians of one operand at the quadrature points of a cell.
class HessianSampler
{
public:
  HessianSampler(const FieldOperand& f, const StructuredMesh& mesh, const QuadRule& quad)
      : _field(f), _mesh(mesh), _quad(quad)
  {
    if (const auto* p = std::get_if<const PiecewisePoly*>(&_field))
    {
      if ((*p)->mesh().num_cells() != mesh.num_cells() || (*p)->mesh().dim() != mesh.dim())
        throw std::invalid_argument("broken_h2_error: operand lives on another mesh");
      for (const Point& xi : quad.points)
        _tables.push_back(monomial_hessians((*p)->monomials(), xi));
    }
    else if (const auto* u = std::get_if<const ManufacturedSolution*>(&_field))
    {
      if ((*u)->max_order() < 2)
        throw std::invalid_argument("broken_h2_error: operand lacks second derivatives");
      if ((*u)->dim() != mesh.dim())
        throw std::invalid_argument("broken_h2_error: operand dimension mismatch");
    }
  }

  Hessian at(int cell, std::size_t q) const
  {
    const int d = _mesh.dim();
    Hessian h{};
    if (const auto* p = std::get_if<const PiecewisePoly*>(&_field))
    {
      const auto c = (*p)->cell_coeffs(cell);
      const Eigen::VectorXd v
          = _tables[q] * Eigen::Map<const Eigen::VectorXd>(c.data(), c.size());
      const double s = 1.0 / (_mesh.half() * _mesh.half());
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          h[i][j] = s * v[i * d + j];
    }
    else if (const auto* u = std::get_if<const ManufacturedSolution*>(&_field))
      h = (*u)->hessian(_mesh.to_physical(cell, _quad.points[q]));
    return h;
  }

private:
  FieldOperand _field;
  const StructuredMesh& _mesh;
  const QuadRule& _quad;
  std::vector<Eigen::MatrixXd> _tables;
};

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void validate_levels(const std::vector<int>& levels, bool postprocess)
{
  if (levels.empty())
    throw std::invalid_argument("no refinement levels given");
  for (std::size_t i = 0; i < levels.size(); ++i)
  {
    if (levels[i] < 1)
      throw std::invalid_argument("refinement levels must be positive");
    if (i > 0 && levels[i] <= levels[i - 1])
      throw std::invalid_argument("refinement levels must be strictly ascending");
    if (postprocess && levels[i] % 3 != 0)
      throw std::invalid_argument("Err4/Err6 need 3 | N (got N="
                                  + std::to_string(levels[i]) + ")");
  }
}
} // namespace

//-----------------------------------------------------------------------------
double morley::broken_h2_error(const FieldOperand& a, const FieldOperand& b,
                               const StructuredMesh& mesh, const QuadRule& quad)
{
  if (quad.dim != mesh.dim())
    throw std::invalid_argument("broken_h2_error: rule dimension mismatch");
  const HessianSampler sa(a, mesh, quad);
  const HessianSampler sb(b, mesh, quad);
  const int d = mesh.dim();
  const double jac = std::pow(mesh.half(), d);
  double total = 0.0;
  for (int c = 0; c < mesh.num_cells(); ++c)
  {
    double cell = 0.0;
    for (std::size_t q = 0; q < quad.size(); ++q)
    {
      Hessian ha = sa.at(c, q);
      const Hessian hb = sb.at(c, q);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
          ha[i][j] -= hb[i][j];
      cell += quad.weights[q] * frobenius_inner(ha, ha, d);
    }
    total += jac * cell;
  }
  return std::sqrt(total);
}
//-----------------------------------------------------------------------------
std::vector<std::string> morley::error_keys(int dim)
{
  if (dim == 2)
    return {"err1", "err2", "err3", "err4"};
  return {"err1", "err2", "err5", "err6"};
}
//-----------------------------------------------------------------------------
std::optional<double> morley::error_value(const ErrorRecord& r, int dim,
                                          const std::string& key,
                                          PostprocessVariant variant)
{
  if (!r.failure.empty())
    return std::nullopt;
  if (key == "err1")
    return r.err1;
  if (key == "err2")
    return r.err2;
  if ((dim == 2 && key == "err3") || (dim == 3 && key == "err5"))
    return r.err_corrected;
  if ((dim == 2 && key == "err4") || (dim == 3 && key == "err6"))
    return variant == PostprocessVariant::solution ? r.err_post_solution
                                                   : r.err_post_interp;
  return std::nullopt;
}
//-----------------------------------------------------------------------------
std::optional<double> morley::convergence_rate(const ConvergenceReport& report,
                                               std::size_t i, const std::string& key,
                                               PostprocessVariant variant)
{
  if (i == 0 || i >= report.records.size())
    return std::nullopt;
  const ErrorRecord& coarse = report.records[i - 1];
  const ErrorRecord& fine = report.records[i];
  if (fine.n != 2 * coarse.n)
    return std::nullopt;
  const auto ec = error_value(coarse, report.dim, key, variant);
  const auto ef = error_value(fine, report.dim, key, variant);
  if (!ec || !ef || *ec <= 0.0 || *ef <= 0.0)
    return std::nullopt;
  return std::log(*ec / *ef) / std::log(2.0);
}
//-----------------------------------------------------------------------------
ErrorRecord morley::compute_level(const ManufacturedSolution& u, int n,
                                  const StudyOptions& options)
{
  GridSpec spec;
  spec.dim = u.dim();
  spec.n = n;
  const StructuredMesh mesh(spec);
  const DofMap dofmap(mesh);
  const NodalBasis basis = NodalBasis::reference(mesh.dim());

  ErrorRecord rec;
  rec.n = n;
  rec.h = mesh.side();
  rec.free_dofs = dofmap.num_free();

  const Eigen::MatrixXd local = local_stiffness(basis, mesh.half());
  const SparseSymMatrix a = assemble_stiffness(mesh, dofmap, local);
  const Eigen::VectorXd b
      = assemble_load(mesh, dofmap, basis, [&u](const Point& x) { return u.rhs(x); },
                      gauss_rule(mesh.dim(), options.quad_vol));
  const SolveResult solved = solve_spd(a, b, options.solver);
  rec.solver_residual = solved.relative_residual;
  rec.solver_floor = solved.rounding_floor;
  const FEField uh = scatter_free(dofmap, solved.x);

  const PiecewisePoly uh_poly = field_to_piecewise(mesh, dofmap, basis, uh);
  const InterpolationOptions iopt{options.quad_face, options.scale};
  const CorrectedInterpolant star = corrected_interpolate(mesh, dofmap, basis, u, iopt);
  const PiecewisePoly pi_poly = field_to_piecewise(mesh, dofmap, basis, star.interpolant);

  auto errors = [&](const QuadRule& quad)
  {
    std::array<double, 6> e{};
    e[0] = broken_h2_error(&u, &uh_poly, mesh, quad);
    e[1] = broken_h2_error(&pi_poly, &uh_poly, mesh, quad);
    e[2] = broken_h2_error(&star.poly, &uh_poly, mesh, quad);
    e[3] = broken_h2_error(&u, &pi_poly, mesh, quad);
    e[4] = e[5] = -1.0;
    if (options.postprocess)
    {
      const MacroGrid macro(mesh);
      const PiecewisePoly post_i
          = postprocess(mesh, macro, vertex_values_of(mesh, star));
      const PiecewisePoly post_s = postprocess(mesh, macro, vertex_values_of(mesh, uh));
      e[4] = broken_h2_error(&u, &post_i, mesh, quad);
      e[5] = broken_h2_error(&u, &post_s, mesh, quad);
    }
    return e;
  };

  const std::array<double, 6> e = errors(gauss_rule(mesh.dim(), options.quad_err));
  rec.err1 = e[0];
  rec.err2 = e[1];
  rec.err_corrected = e[2];
  rec.interp_error = e[3];
  if (options.postprocess)
  {
    rec.err_post_interp = e[4];
    rec.err_post_solution = e[5];
  }

  if (options.diagnostics)
  {
    ErrorRecord::Diagnostics diag;
    if (options.quad_err + 2 <= 10)
    {
      const std::array<double, 6> fine = errors(gauss_rule(mesh.dim(), options.quad_err + 2));
      for (std::size_t k = 0; k < e.size(); ++k)
        if (e[k] > 0.0)
          diag.quad_shift = std::max(diag.quad_shift, std::abs(fine[k] - e[k]) / e[k]);
    }
    diag.correction_mismatch = correction_dof_mismatch(mesh, star.correction);
    const QuadRule quad = gauss_rule(mesh.dim(), options.quad_err);
    if (options.postprocess)
    {
      const MacroGrid macro(mesh);
      const PiecewisePoly post_s = postprocess(mesh, macro, vertex_values_of(mesh, uh));
      const double denom = broken_h2_error(&uh_poly, ZeroField{}, mesh, quad);
      diag.postprocess_ratio
          = denom > 0.0 ? broken_h2_error(&post_s, ZeroField{}, mesh, quad) / denom : 0.0;
    }
    InterpolationOptions alt = iopt;
    alt.scale = options.scale == CorrectionScale::half_width ? CorrectionScale::cell_side
                                                             : CorrectionScale::half_width;
    const CorrectedInterpolant other = corrected_interpolate(mesh, dofmap, basis, u, alt);
    diag.err_corrected_alt = broken_h2_error(&other.poly, &uh_poly, mesh, quad);
    rec.diagnostics = diag;
  }
  return rec;
}
//-----------------------------------------------------------------------------
ConvergenceReport morley::run_study(int dim, const std::string& solution,
                                    const std::vector<int>& levels,
                                    const StudyOptions& options)
{
  const ManufacturedSolution u = ManufacturedSolution::by_name(solution);
  if (u.dim() != dim)
    throw std::invalid_argument("solution " + solution + " is "
                                + std::to_string(u.dim()) + "D, not "
                                + std::to_string(dim) + "D");
  validate_levels(levels, options.postprocess);

  ConvergenceReport report;
  report.dim = dim;
  report.solution = solution;
  for (int n : levels)
  {
    try
    {
      report.records.push_back(compute_level(u, n, options));
    }
    catch (const std::exception& ex)
    {
      ErrorRecord failed;
      failed.n = n;
      failed.h = 1.0 / n;
      failed.failure = ex.what();
      report.records.push_back(failed);
    }
  }
  return report;
}
//-----------------------------------------------------------------------------
std::vector<ReferenceEntry> morley::read_reference_csv(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open reference table '" + path + "'");
  std::vector<ReferenceEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#' || line.rfind("table,", 0) == 0)
      continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cols.push_back(trim(cell));
    if (cols.size() != 6)
      throw std::runtime_error(path + ":" + std::to_string(lineno)
                               + ": expected 6 columns");
    try
    {
      out.push_back({cols[0], std::stoi(cols[1]), cols[2], cols[3], std::stoi(cols[4]),
                     std::stod(cols[5])});
    }
    catch (const std::logic_error&)
    {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": malformed number");
    }
  }
  return out;
}
//-----------------------------------------------------------------------------
std::vector<Comparison>
morley::compare_to_reference(const ConvergenceReport& report,
                             const std::vector<ReferenceEntry>& table, double rel_tol,
                             double rate_tol, PostprocessVariant variant)
{
  std::vector<Comparison> out;
  for (const ReferenceEntry& ref : table)
  {
    if (ref.dim != report.dim || ref.solution != report.solution)
      continue;
    Comparison cmp;
    cmp.reference = ref;
    const auto it = std::find_if(report.records.begin(), report.records.end(),
                                 [&](const ErrorRecord& r) { return r.n == ref.n; });
    if (it != report.records.end())
    {
      const std::size_t i = static_cast<std::size_t>(it - report.records.begin());
      const bool is_rate = ref.quantity.rfind("r", 0) == 0;
      if (is_rate)
      {
        cmp.computed = convergence_rate(report, i, "err" + ref.quantity.substr(1), variant);
        if (cmp.computed)
          cmp.deviation = std::abs(*cmp.computed - ref.value);
      }
      else
      {
        cmp.computed = error_value(*it, report.dim, ref.quantity, variant);
        if (cmp.computed)
          cmp.deviation = std::abs(*cmp.computed - ref.value) / std::abs(ref.value);
      }
      if (cmp.computed)
        cmp.verdict = cmp.deviation <= (is_rate ? rate_tol : rel_tol) ? Verdict::pass
                                                                      : Verdict::fail;
    }
    out.push_back(cmp);
  }
  return out;
}
//-----------------------------------------------------------------------------
const char* morley::to_string(Verdict v)
{
  switch (v)
  {
  case Verdict::pass:
    return "pass";
  case Verdict::fail:
    return "FAIL";
  default:
    return "skipped";
  }
}
//-----------------------------------------------------------------------------
const char* morley::to_string(PostprocessVariant v)
{
  return v == PostprocessVariant::solution ? "solution" : "interpolant";
}
