#pragma once

#include <string>
#include <vector>

namespace morley
{

struct PropertyOptions
{
  /// Added to one basis coefficient before the basis checks; 0 disables.
  double basis_perturbation = 0.0;
  /// Mesh size for the postprocessing checks.
  int macro_n = 6;
};

struct PropertyResult
{
  std::string name;
  bool pass = false;
  double measured = 0.0;  ///< worst observed deviation
  double tolerance = 0.0;
  std::string detail;     ///< error message when the check could not run
};

/// Runs every module invariant that does not depend on the published
/// tables. A check that throws is reported as failed with the message.
std::vector<PropertyResult> run_property_suite(const PropertyOptions& options = {});

} // namespace morley
