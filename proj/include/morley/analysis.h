#pragma once

#include "morley/fields.h"
#include "morley/mesh.h"
#include "morley/quadrature.h"
#include "morley/solutions.h"
#include "morley/system.h"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace morley
{

struct ZeroField
{
};

/// Anything with cell-wise second derivatives.
using FieldOperand
    = std::variant<ZeroField, const ManufacturedSolution*, const PiecewisePoly*>;

/// Broken H² seminorm |a - b|_h = (Σ_K ∫_K |∇²(a-b)|_F² dx)^½ with the
/// given reference rule on every cell.
double broken_h2_error(const FieldOperand& a, const FieldOperand& b,
                       const StructuredMesh& mesh, const QuadRule& quad);

/// Which vertex data feeds Π³_3h in Err4/Err6.
enum class PostprocessVariant
{
  interpolant, ///< vertex values of Π*_h u (= u at the vertices)
  solution,    ///< vertex values of u_h
};

struct StudyOptions
{
  int quad_vol = 5;  ///< load-vector rule, points per axis
  int quad_face = 5; ///< facet rule for Π_h and R_h
  int quad_err = 6;  ///< error rule, points per axis
  SolveOptions solver;
  CorrectionScale scale = CorrectionScale::half_width;
  bool postprocess = true; ///< compute Err4/Err6 (needs 3 | N)
  bool diagnostics = false;
};

/// Errors of one refinement level; names follow the 2D numbering, the
/// corrected error is Err3 in 2D and Err5 in 3D, the postprocessed one
/// Err4 in 2D and Err6 in 3D.
struct ErrorRecord
{
  int n = 0;
  double h = 0.0;            ///< cell side 1/N
  double err1 = 0.0;         ///< |u - u_h|_h
  double err2 = 0.0;         ///< |Π_h u - u_h|_h
  double err_corrected = 0.0;     ///< |Π*_h u - u_h|_h
  std::optional<double> err_post_interp;   ///< |u - Π³_3h Π*_h u|_h
  std::optional<double> err_post_solution; ///< |u - Π³_3h u_h|_h
  double interp_error = 0.0; ///< |u - Π_h u|_h
  double solver_residual = 0.0;
  double solver_floor = 0.0; ///< rounding floor of the residual, see SolveResult
  int free_dofs = 0;
  std::string failure; ///< non-empty when the level could not be computed

  struct Diagnostics
  {
    double quad_shift = 0.0;          ///< max relative change of the errors for quad_err + 2
    double correction_mismatch = 0.0; ///< correction_dof_mismatch of R_h u
    double postprocess_ratio = 0.0;   ///< |Π³_3h u_h|_h / |u_h|_h
    double err_corrected_alt = 0.0;   ///< |Π*_h u - u_h|_h with the other h convention
  };
  std::optional<Diagnostics> diagnostics;
};

struct ConvergenceReport
{
  int dim = 2;
  std::string solution;
  std::vector<ErrorRecord> records;
};

/// Quantity keys used in reports and reference tables.
/// 2D: err1 err2 err3 err4; 3D: err1 err2 err5 err6.
std::vector<std::string> error_keys(int dim);

/// Value of an error key in a record, for the given postprocess variant.
std::optional<double> error_value(const ErrorRecord& r, int dim, const std::string& key,
                                  PostprocessVariant variant);

/// log(e_coarse/e_fine)/log 2 between records i-1 and i; empty unless
/// n doubles and both errors exist.
std::optional<double> convergence_rate(const ConvergenceReport& report, std::size_t i,
                                       const std::string& key,
                                       PostprocessVariant variant);

/// All errors of one level.
ErrorRecord compute_level(const ManufacturedSolution& u, int n,
                          const StudyOptions& options = {});

/// Runs the levels in order. Invalid input (unknown solution, unsorted
/// levels, 3 ∤ N with postprocessing on) throws before any computation;
/// a level that fails afterwards is annotated in its record.
ConvergenceReport run_study(int dim, const std::string& solution,
                            const std::vector<int>& levels,
                            const StudyOptions& options = {});

/// One transcribed value of the published error tables.
struct ReferenceEntry
{
  std::string table;
  int dim = 0;
  std::string solution;
  std::string quantity; ///< errK or rK
  int n = 0;
  double value = 0.0;
};

/// Reads `table,dim,solution,quantity,n,value` CSV rows.
std::vector<ReferenceEntry> read_reference_csv(const std::string& path);

enum class Verdict
{
  pass,
  fail,
  skipped,
};

struct Comparison
{
  ReferenceEntry reference;
  std::optional<double> computed;
  double deviation = 0.0; ///< relative for errors, absolute for rates
  Verdict verdict = Verdict::skipped;
};

/// Compares every reference entry for the report's dim/solution:
/// errors pass within `rel_tol` relative, rates within `rate_tol`.
/// Entries without a computed counterpart are skipped.
std::vector<Comparison> compare_to_reference(const ConvergenceReport& report,
                                             const std::vector<ReferenceEntry>& table,
                                             double rel_tol, double rate_tol,
                                             PostprocessVariant variant);

const char* to_string(Verdict v);
const char* to_string(PostprocessVariant v);

} // namespace morley
