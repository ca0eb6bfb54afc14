#include "morley/analysis.h"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace morley;

namespace
{
GridSpec grid(int dim, int n)
{
  GridSpec g;
  g.dim = dim;
  g.n = n;
  return g;
}

std::string reference_path() { return std::string(MORLEY_DATA_DIR) + "/reference_tables.csv"; }

double lookup(const std::vector<ReferenceEntry>& t, const std::string& table,
              const std::string& q, int n)
{
  for (const ReferenceEntry& e : t)
    if (e.table == table && e.quantity == q && e.n == n)
      return e.value;
  return std::nan("");
}
} // namespace

TEST_SUITE("analysis")
{
  TEST_CASE("seminorm of identical operands is zero")
  {
    const StructuredMesh m(grid(2, 3));
    const ManufacturedSolution u = ManufacturedSolution::by_name("u1");
    CHECK(broken_h2_error(&u, &u, m, gauss_rule(2, 6)) == 0.0);
    CHECK(broken_h2_error(ZeroField{}, ZeroField{}, m, gauss_rule(2, 6)) == 0.0);
  }

  TEST_CASE("|u1|_H2 against closed form and a high-order rule")
  {
    // |u1|^2 = 2 ∫s''^2 ∫s^2 + 2 (∫s'^2)^2 = 2 (2π^4)(3/8) + 2 (π^2/2)^2 = 2π^4
    const ManufacturedSolution u = ManufacturedSolution::by_name("u1");
    const double exact = std::sqrt(2.0) * M_PI * M_PI;
    const StructuredMesh fine(grid(2, 12));
    const double q10 = broken_h2_error(&u, ZeroField{}, fine, gauss_rule(2, 10));
    CHECK(q10 == doctest::Approx(exact).epsilon(1e-12));
    const StructuredMesh coarse(grid(2, 6));
    CHECK(broken_h2_error(&u, ZeroField{}, coarse, gauss_rule(2, 6))
          == doctest::Approx(q10).epsilon(1e-6));
  }

  TEST_CASE("operands without second derivatives are rejected")
  {
    const StructuredMesh m(grid(2, 3));
    const ManufacturedSolution lin("lin", 2, 1,
                                   [](const Point& x, const MultiIndex& a)
                                   { return a[0] + a[1] == 0 ? x[0] : (a[0] == 1 ? 1.0 : 0.0); },
                                   [](const Point&) { return 0.0; });
    CHECK_THROWS_AS(broken_h2_error(&lin, ZeroField{}, m, gauss_rule(2, 6)),
                    std::invalid_argument);
  }

  TEST_CASE("Err1 of u1 at N=12")
  {
    const ErrorRecord r = compute_level(ManufacturedSolution::by_name("u1"), 12);
    CHECK(std::abs(r.err1 - 1.848733847) / 1.848733847 < 0.02);
    CHECK(r.err1 <= r.err2 + r.interp_error);
    CHECK(r.solver_residual <= 1e-12);
    REQUIRE(r.err_post_solution.has_value());
    REQUIRE(r.err_post_interp.has_value());
    CHECK(r.failure.empty());
  }

  TEST_CASE("2D studies: rates, monotonicity, triangle inequality")
  {
    const ConvergenceReport u1 = run_study(2, "u1", {6, 12, 24, 48});
    const double published_r1[] = {1.0402, 1.0126, 1.0033};
    for (std::size_t i = 1; i < 4; ++i)
    {
      const auto r = convergence_rate(u1, i, "err1", PostprocessVariant::solution);
      REQUIRE(r.has_value());
      CHECK(std::abs(*r - published_r1[i - 1]) < 0.05);
    }
    const ConvergenceReport u2 = run_study(2, "u2", {6, 12, 24, 48});
    const double published_r4[] = {2.0308, 2.0083, 2.0022};
    for (std::size_t i = 1; i < 4; ++i)
    {
      const auto r = convergence_rate(u2, i, "err4", PostprocessVariant::solution);
      REQUIRE(r.has_value());
      CHECK(std::abs(*r - published_r4[i - 1]) < 0.05);
    }
    for (const ConvergenceReport* rep : {&u1, &u2})
    {
      for (const ErrorRecord& r : rep->records)
        CHECK(r.err1 <= r.err2 + r.interp_error);
      for (const std::string& k : error_keys(2))
        for (std::size_t i = 1; i < rep->records.size(); ++i)
          CHECK(*error_value(rep->records[i], 2, k, PostprocessVariant::solution)
                < *error_value(rep->records[i - 1], 2, k, PostprocessVariant::solution));
      const std::size_t last = rep->records.size() - 1;
      for (const char* k : {"err1", "err2"})
      {
        const double r = *convergence_rate(*rep, last, k, PostprocessVariant::solution);
        CHECK(r >= 0.9);
        CHECK(r <= 1.1);
      }
      for (const char* k : {"err3", "err4"})
      {
        const double r = *convergence_rate(*rep, last, k, PostprocessVariant::solution);
        CHECK(r >= 1.9);
        CHECK(r <= 2.1);
      }
    }
  }

  TEST_CASE("3D Err5 of u3 at N=12")
  {
    const ErrorRecord r = compute_level(ManufacturedSolution::by_name("u3"), 12);
    CHECK(std::abs(r.err_corrected - 0.611765555) / 0.611765555 < 0.02);
    CHECK(r.err1 <= r.err2 + r.interp_error);
  }

  TEST_CASE("rates need doubling levels")
  {
    const ConvergenceReport rep = run_study(2, "u2", {3, 6, 9});
    CHECK(convergence_rate(rep, 0, "err1", PostprocessVariant::solution) == std::nullopt);
    CHECK(convergence_rate(rep, 1, "err1", PostprocessVariant::solution).has_value());
    CHECK(convergence_rate(rep, 2, "err1", PostprocessVariant::solution) == std::nullopt);
  }

  TEST_CASE("study input validation")
  {
    CHECK_THROWS_WITH_AS(run_study(3, "u3", {5}), doctest::Contains("3 | N"),
                         std::invalid_argument);
    CHECK_THROWS_AS(run_study(2, "u3", {6}), std::invalid_argument);
    CHECK_THROWS_AS(run_study(2, "u1", {12, 6}), std::invalid_argument);
    CHECK_THROWS_AS(run_study(2, "u1", {}), std::invalid_argument);
    CHECK_THROWS_AS(run_study(2, "nope", {6}), std::invalid_argument);
    StudyOptions o;
    o.postprocess = false;
    const ConvergenceReport r = run_study(2, "u1", {4}, o);
    CHECK_FALSE(r.records[0].err_post_solution.has_value());
  }

  TEST_CASE("failing levels are annotated")
  {
    StudyOptions o;
    o.solver.tolerance = 1e-30;
    o.solver.accept_rounding_floor = false;
    const ConvergenceReport r = run_study(2, "u1", {3, 6}, o);
    REQUIRE(r.records.size() == 2);
    CHECK_FALSE(r.records[1].failure.empty());
    CHECK(error_value(r.records[1], 2, "err1", PostprocessVariant::solution) == std::nullopt);
  }

  TEST_CASE("bundled reference tables match the published values")
  {
    const std::vector<ReferenceEntry> t = read_reference_csv(reference_path());
    CHECK(t.size() == 112);
    CHECK(lookup(t, "table3", "err1", 6) == 3.801933642);
    CHECK(lookup(t, "table3", "err3", 48) == 0.028096575);
    CHECK(lookup(t, "table3", "r3", 48) == 1.985868661);
    CHECK(lookup(t, "table3", "err2", 24) == 0.526008399);
    CHECK(lookup(t, "table4", "err3", 24) == 0.000441448);
    CHECK(lookup(t, "table4", "r4", 48) == 2.002152565);
    CHECK(lookup(t, "table5", "err5", 12) == 0.611765555);
    CHECK(lookup(t, "table5", "err5", 48) == 0.03948401);
    CHECK(lookup(t, "table6", "err5", 24) == 0.000039494);
    CHECK(lookup(t, "table6", "r2", 12) == 1.013896);
  }

  TEST_CASE("comparison verdicts")
  {
    ConvergenceReport rep;
    rep.dim = 2;
    rep.solution = "u1";
    ErrorRecord a, b;
    a.n = 12;
    a.err1 = 2.0;
    a.err2 = 1.0;
    a.err_corrected = 0.5;
    b.n = 24;
    b.err1 = 1.0;
    b.err2 = 0.526008399 * 1.019;
    b.err_corrected = 0.125;
    rep.records = {a, b};

    std::vector<ReferenceEntry> table{{"t", 2, "u1", "err1", 12, 2.0},
                                      {"t", 2, "u1", "r1", 24, 1.0},
                                      {"t", 2, "u1", "err2", 24, 0.526008399},
                                      {"t", 2, "u1", "err3", 24, 0.125},
                                      {"t", 2, "u1", "err4", 24, 0.1},
                                      {"t", 2, "u1", "err1", 48, 0.5},
                                      {"t", 3, "u3", "err1", 12, 9.0}};
    const auto c = compare_to_reference(rep, table, 0.02, 0.05, PostprocessVariant::solution);
    REQUIRE(c.size() == 6);
    CHECK(c[0].verdict == Verdict::pass);
    CHECK(c[0].deviation == 0.0);
    CHECK(c[1].verdict == Verdict::pass);
    CHECK(c[2].verdict == Verdict::pass);
    CHECK(c[3].verdict == Verdict::pass);
    CHECK(c[4].verdict == Verdict::skipped);
    CHECK(c[5].verdict == Verdict::skipped);

    table[3].value = 0.2;
    rep.records[1].err2 = 0.526008399 * 1.021;
    const auto bad = compare_to_reference(rep, table, 0.02, 0.05, PostprocessVariant::solution);
    CHECK(bad[2].verdict == Verdict::fail);
    CHECK(bad[3].verdict == Verdict::fail);
  }

  TEST_CASE("malformed or missing reference data")
  {
    CHECK_THROWS_AS(read_reference_csv("/nonexistent/tables.csv"), std::runtime_error);
    const std::string path = "malformed_reference.csv";
    {
      std::ofstream f(path);
      f << "table,dim,solution,quantity,n,value\nt,2,u1,err1,six,1.0\n";
    }
    CHECK_THROWS_WITH_AS(read_reference_csv(path), doctest::Contains(":2:"), std::runtime_error);
    {
      std::ofstream f(path);
      f << "t,2,u1,err1\n";
    }
    CHECK_THROWS_AS(read_reference_csv(path), std::runtime_error);
    std::remove(path.c_str());
  }

  TEST_CASE("error keys")
  {
    CHECK(error_keys(2) == std::vector<std::string>{"err1", "err2", "err3", "err4"});
    CHECK(error_keys(3) == std::vector<std::string>{"err1", "err2", "err5", "err6"});
    ErrorRecord r;
    r.err_corrected = 3.0;
    r.err_post_interp = 1.0;
    r.err_post_solution = 2.0;
    CHECK(*error_value(r, 3, "err5", PostprocessVariant::solution) == 3.0);
    CHECK(*error_value(r, 3, "err6", PostprocessVariant::interpolant) == 1.0);
    CHECK(*error_value(r, 2, "err4", PostprocessVariant::solution) == 2.0);
    CHECK(error_value(r, 2, "err5", PostprocessVariant::solution) == std::nullopt);
  }
}
