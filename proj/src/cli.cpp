#include "morley/cli.h"

#include "morley/properties.h"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

using namespace morley;

namespace
{
constexpr const char* variant_names[] = {"interp", "solution"};

std::string num(const std::optional<double>& v)
{
  return v ? fmt::format("{:.17g}", *v) : std::string();
}

std::string short_num(const std::optional<double>& v)
{
  return v ? fmt::format("{:.9g}", *v) : std::string("---");
}

// Rate and error keys with their CSV column stems.
struct Column
{
  std::string key;
  std::string label;
  bool postprocessed;
};

std::vector<Column> columns(int dim)
{
  std::vector<Column> out;
  for (const std::string& k : error_keys(dim))
  {
    const bool post = k == "err4" || k == "err6";
    out.push_back({k, "Err" + k.substr(3), post});
  }
  return out;
}

PostprocessVariant variant_at(int i)
{
  return i == 0 ? PostprocessVariant::interpolant : PostprocessVariant::solution;
}

void write_file(const std::string& path, const std::string& text)
{
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

CorrectionScale parse_scale(const std::string& s)
{
  if (s == "half-width")
    return CorrectionScale::half_width;
  if (s == "cell-side")
    return CorrectionScale::cell_side;
  throw std::invalid_argument("--correction-scale must be half-width or cell-side");
}

struct VerifyOutcome
{
  PostprocessVariant variant;
  std::vector<Comparison> comparisons;
  int failures = 0;
};

VerifyOutcome verify_report(const ConvergenceReport& report, const StudyConfig& cfg)
{
  const std::string path
      = cfg.reference.empty() ? std::string(MORLEY_DATA_DIR) + "/reference_tables.csv"
                              : cfg.reference;
  const std::vector<ReferenceEntry> table = read_reference_csv(path);

  std::vector<PostprocessVariant> candidates;
  if (cfg.variant == "auto")
    candidates = {PostprocessVariant::solution, PostprocessVariant::interpolant};
  else
    candidates = {cfg.variant == "solution" ? PostprocessVariant::solution
                                            : PostprocessVariant::interpolant};
  std::optional<VerifyOutcome> best;
  for (PostprocessVariant v : candidates)
  {
    VerifyOutcome o{v, compare_to_reference(report, table, cfg.tol, cfg.rate_tol, v)};
    for (const Comparison& c : o.comparisons)
      o.failures += c.verdict == Verdict::fail;
    if (!best || o.failures < best->failures)
      best = std::move(o);
  }
  return *best;
}

void print_verdicts(const VerifyOutcome& o, std::ostream& os)
{
  os << "postprocess variant: " << to_string(o.variant) << "\n";
  int pass = 0, skipped = 0;
  for (const Comparison& c : o.comparisons)
  {
    const ReferenceEntry& r = c.reference;
    const bool rate = r.quantity[0] == 'r';
    os << fmt::format("{:<7} {:<3} {:<5} N={:<3} ref={:<14.10g} got={:<22} {}={:<11.3e} {}\n",
                      r.table, r.solution, r.quantity, r.n, r.value, num(c.computed),
                      rate ? "abs" : "rel", c.deviation, to_string(c.verdict));
    pass += c.verdict == Verdict::pass;
    skipped += c.verdict == Verdict::skipped;
  }
  os << fmt::format("{} passed, {} failed, {} skipped\n", pass, o.failures, skipped);
}

int cmd_study(StudyConfig cfg, bool verify_only, std::ostream& out, std::ostream& err)
{
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const ConvergenceReport report
      = run_study(cfg.dim, cfg.solution, cfg.levels, cfg.study_options());
  const double seconds
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  int status = 0;
  for (const ErrorRecord& r : report.records)
    if (!r.failure.empty())
    {
      err << "N=" << r.n << ": " << r.failure << "\n";
      status = 1;
    }
    else if (r.solver_residual > cfg.solver_tol)
      err << fmt::format("N={}: residual {:.3g} exceeds --solver-tol but is at the "
                         "double-precision floor {:.3g}\n",
                         r.n, r.solver_residual, r.solver_floor);

  const std::string csv = report_csv(report, cfg.diagnostics);
  const bool to_stdout = cfg.out == "-";
  if (to_stdout && !verify_only)
    out << csv;
  else if (!to_stdout)
    write_file(cfg.out, csv);
  if (!cfg.markdown.empty())
    write_file(cfg.markdown, report_markdown(report));
  if (!cfg.plot_data.empty())
    write_file(cfg.plot_data, report_plot_data(report));
  err << fmt::format("{} {}D levels computed in {:.2f} s\n", report.records.size(),
                     report.dim, seconds);

  if (cfg.verify || verify_only)
  {
    const VerifyOutcome o = verify_report(report, cfg);
    print_verdicts(o, (to_stdout && !verify_only) ? err : out);
    if (o.failures > 0)
      status = 1;
  }
  return status;
}

int cmd_props(const PropertyOptions& options, std::ostream& out)
{
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<PropertyResult> results = run_property_suite(options);
  int failed = 0;
  for (const PropertyResult& r : results)
  {
    out << fmt::format("[{}] {:<42} measured={:<11.3e} tol={:.0e}", r.pass ? "PASS" : "FAIL",
                       r.name, r.measured, r.tolerance);
    if (!r.detail.empty())
      out << "  (" << r.detail << ")";
    out << "\n";
    failed += !r.pass;
  }
  const double seconds
      = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out << fmt::format("{} of {} properties hold ({:.2f} s)\n", results.size() - failed,
                     results.size(), seconds);
  if (failed > 0)
  {
    out << "failed:";
    for (const PropertyResult& r : results)
      if (!r.pass)
        out << " [" << r.name << "]";
    out << "\n";
  }
  return failed == 0 ? 0 : 1;
}

void add_study_flags(CLI::App* app, StudyConfig& cfg)
{
  app->add_option("--dim", cfg.dim, "Spatial dimension")->check(CLI::IsMember({2, 3}));
  app->add_option("--solution", cfg.solution, "Manufactured solution (u1, u2 in 2D; u3, u4 in 3D)")
      ->check(CLI::IsMember({"u1", "u2", "u3", "u4"}));
  app->add_option("--levels", cfg.levels, "Comma-separated N values, e.g. 6,12,24,48")
      ->delimiter(',');
  app->add_option("--quad-vol", cfg.quad_vol, "Gauss points per axis for the load vector")
      ->check(CLI::Range(1, 10));
  app->add_option("--quad-face", cfg.quad_face,
                  "Gauss points per axis for interpolation facet integrals")
      ->check(CLI::Range(1, 10));
  app->add_option("--quad-err", cfg.quad_err, "Gauss points per axis for error norms")
      ->check(CLI::Range(1, 10));
  app->add_option("--solver-tol", cfg.solver_tol, "Relative residual bound for the solve")
      ->check(CLI::PositiveNumber);
  app->add_option("--solver", cfg.solver, "Linear solver")
      ->check(CLI::IsMember({"auto", "cholesky", "cg"}));
  app->add_option("--correction-scale", cfg.correction_scale,
                  "Length in the correction coefficients")
      ->check(CLI::IsMember({"half-width", "cell-side"}));
  app->add_option("--out", cfg.out, "CSV output path, - for stdout");
  app->add_option("--markdown", cfg.markdown,
                  "Markdown table path (default: next to --out)");
  app->add_option("--emit-plot-data", cfg.plot_data, "Write log-log plot data to this path");
  app->add_flag("--include-3d-n48", cfg.include_3d_n48, "Allow N=48 in 3D");
  app->add_flag("--diagnostics", cfg.diagnostics,
                "Add quadrature, correction and postprocessing diagnostics to the CSV");
  app->add_option("--reference", cfg.reference, "Reference table CSV (default: bundled)");
  app->add_option("--tol", cfg.tol, "Relative tolerance on errors when verifying")
      ->check(CLI::PositiveNumber);
  app->add_option("--rate-tol", cfg.rate_tol, "Absolute tolerance on rates when verifying")
      ->check(CLI::PositiveNumber);
  app->add_option("--variant", cfg.variant,
                  "Postprocessed error compared when verifying")
      ->check(CLI::IsMember({"auto", "interpolant", "solution"}));
}
} // namespace

//-----------------------------------------------------------------------------
void StudyConfig::validate()
{
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("--dim must be 2 or 3");
  if (solution.empty())
    solution = dim == 2 ? "u1" : "u3";
  if (ManufacturedSolution::dim_of(solution) != dim)
    throw std::invalid_argument("--solution " + solution + " is a "
                                + std::to_string(ManufacturedSolution::dim_of(solution))
                                + "D solution but --dim is " + std::to_string(dim));
  if (levels.empty())
  {
    levels = {6, 12, 24};
    if (dim == 2 || include_3d_n48)
      levels.push_back(48);
  }
  for (int n : levels)
  {
    if (n < 1)
      throw std::invalid_argument("--levels entries must be positive");
    if (n % 3 != 0)
      throw std::invalid_argument("Err4/Err6 need 3 | N (got N=" + std::to_string(n) + ")");
    if (dim == 3 && n >= 48 && !include_3d_n48)
      throw std::invalid_argument("3D N=" + std::to_string(n)
                                  + " is slow; pass --include-3d-n48 to run it");
  }
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1])
      throw std::invalid_argument("--levels must be strictly ascending");
  parse_solver_kind(solver);
  parse_scale(correction_scale);
  if (markdown.empty() && out != "-")
    markdown = std::filesystem::path(out).replace_extension(".md").string();
}
//-----------------------------------------------------------------------------
StudyOptions StudyConfig::study_options() const
{
  StudyOptions o;
  o.quad_vol = quad_vol;
  o.quad_face = quad_face;
  o.quad_err = quad_err;
  o.solver.tolerance = solver_tol;
  o.solver.kind = parse_solver_kind(solver);
  o.scale = parse_scale(correction_scale);
  o.diagnostics = diagnostics;
  return o;
}
//-----------------------------------------------------------------------------
std::string morley::report_csv(const ConvergenceReport& report, bool diagnostics)
{
  const std::vector<Column> cols = columns(report.dim);
  std::ostringstream os;
  os << "n,h";
  for (const Column& c : cols)
  {
    const std::string k = c.key.substr(3);
    if (c.postprocessed)
      for (const char* v : variant_names)
        os << ",err" << k << "_" << v << ",r" << k << "_" << v;
    else
      os << ",err" << k << ",r" << k;
  }
  if (diagnostics)
    os << ",interp_error,solver_residual,solver_floor,free_dofs,quad_shift,correction_mismatch,"
          "postprocess_ratio,err_corrected_alt";
  os << "\n";

  for (std::size_t i = 0; i < report.records.size(); ++i)
  {
    const ErrorRecord& r = report.records[i];
    os << r.n << "," << fmt::format("{:.17g}", r.h);
    for (const Column& c : cols)
    {
      const int nv = c.postprocessed ? 2 : 1;
      for (int v = 0; v < nv; ++v)
      {
        const PostprocessVariant pv = variant_at(c.postprocessed ? v : 1);
        os << "," << num(error_value(r, report.dim, c.key, pv)) << ","
           << num(convergence_rate(report, i, c.key, pv));
      }
    }
    if (diagnostics)
    {
      const bool ok = r.failure.empty();
      os << "," << (ok ? num(r.interp_error) : "") << ","
         << (ok ? num(r.solver_residual) : "") << "," << (ok ? num(r.solver_floor) : "")
         << "," << (ok ? std::to_string(r.free_dofs) : "");
      if (r.diagnostics)
        os << "," << num(r.diagnostics->quad_shift) << ","
           << num(r.diagnostics->correction_mismatch) << ","
           << num(r.diagnostics->postprocess_ratio) << ","
           << num(r.diagnostics->err_corrected_alt);
      else
        os << ",,,,";
    }
    os << "\n";
  }
  return os.str();
}
//-----------------------------------------------------------------------------
std::string morley::report_markdown(const ConvergenceReport& report)
{
  std::ostringstream os;
  os << "Errors of the " << report.dim << "D Morley element for " << report.solution
     << "\n\n| N |";
  for (const ErrorRecord& r : report.records)
    os << " " << r.n << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < report.records.size(); ++i)
    os << "---|";
  os << "\n";

  auto row = [&](const std::string& label, auto&& value)
  {
    os << "| " << label << " |";
    for (std::size_t i = 0; i < report.records.size(); ++i)
      os << " " << short_num(value(i)) << " |";
    os << "\n";
  };
  for (const Column& c : columns(report.dim))
  {
    const int nv = c.postprocessed ? 2 : 1;
    for (int v = 0; v < nv; ++v)
    {
      const PostprocessVariant pv = variant_at(c.postprocessed ? v : 1);
      const std::string label
          = c.postprocessed ? c.label + " (" + variant_names[v] + ")" : c.label;
      row(label, [&](std::size_t i)
          { return error_value(report.records[i], report.dim, c.key, pv); });
      row("r", [&](std::size_t i) { return convergence_rate(report, i, c.key, pv); });
    }
  }
  return os.str();
}
//-----------------------------------------------------------------------------
std::string morley::report_plot_data(const ConvergenceReport& report)
{
  std::ostringstream os;
  os << "# " << report.dim << "D " << report.solution << "\n# n h";
  const std::vector<Column> cols = columns(report.dim);
  for (const Column& c : cols)
  {
    if (c.postprocessed)
      for (const char* v : variant_names)
        os << " " << c.key << "_" << v;
    else
      os << " " << c.key;
  }
  os << "\n";
  for (const ErrorRecord& r : report.records)
  {
    if (!r.failure.empty())
      continue;
    os << r.n << " " << fmt::format("{:.17g}", r.h);
    for (const Column& c : cols)
    {
      const int nv = c.postprocessed ? 2 : 1;
      for (int v = 0; v < nv; ++v)
        os << " "
           << num(error_value(r, report.dim, c.key, variant_at(c.postprocessed ? v : 1)));
    }
    os << "\n";
  }
  return os.str();
}
//-----------------------------------------------------------------------------
int morley::run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Rectangular and cubic Morley elements for the clamped biharmonic problem"};
  app.require_subcommand(1);

  StudyConfig study_cfg;
  CLI::App* study = app.add_subcommand("study", "Run a convergence study and write the tables");
  add_study_flags(study, study_cfg);
  study->add_flag("--verify", study_cfg.verify, "Also compare against the reference tables");

  StudyConfig verify_cfg;
  CLI::App* verify
      = app.add_subcommand("verify", "Run a study and compare it with the reference tables");
  add_study_flags(verify, verify_cfg);

  PropertyOptions props_opt;
  CLI::App* props = app.add_subcommand("props", "Check the element and operator invariants");
  props->add_option("--perturb-basis", props_opt.basis_perturbation,
                    "Shift one basis coefficient by this amount (exercises the checks)");
  props->add_option("--macro-n", props_opt.macro_n, "Mesh size for the postprocessing checks")
      ->check(CLI::PositiveNumber);

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    return app.exit(e, out, err);
  }

  try
  {
    if (study->parsed())
      return cmd_study(study_cfg, false, out, err);
    if (verify->parsed())
      return cmd_study(verify_cfg, true, out, err);
    return cmd_props(props_opt, out);
  }
  catch (const std::invalid_argument& e)
  {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}
