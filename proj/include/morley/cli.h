#pragma once

#include "morley/analysis.h"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace morley
{

struct StudyConfig
{
  int dim = 2;
  std::string solution; ///< empty: u1 in 2D, u3 in 3D
  std::vector<int> levels; ///< empty: 6,12,24 (and 48 in 2D or with include_3d_n48)
  int quad_vol = 5;
  int quad_face = 5;
  int quad_err = 6;
  double solver_tol = 1e-12;
  std::string solver = "auto";
  std::string correction_scale = "half-width";
  std::string out = "-";
  std::string markdown;   ///< empty: next to `out`, none for stdout
  std::string plot_data;  ///< empty: not written
  bool verify = false;
  bool include_3d_n48 = false;
  bool diagnostics = false;
  std::string reference;  ///< empty: bundled tables
  double tol = 0.02;
  double rate_tol = 0.05;
  std::string variant = "auto";

  /// Fills defaults and checks everything that can be checked before any
  /// computation; throws std::invalid_argument with one actionable message.
  void validate();
  StudyOptions study_options() const;
};

/// CSV of a report: n, h, then each error with its rate; 17 significant
/// digits, empty cells where a value is undefined.
std::string report_csv(const ConvergenceReport& report, bool diagnostics = false);

/// The same numbers laid out as the published tables (levels as columns).
std::string report_markdown(const ConvergenceReport& report);

/// Whitespace-separated n, h and errors for log-log plotting.
std::string report_plot_data(const ConvergenceReport& report);

/// Entry point behind the `morley` executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace morley
