#include "morley/fields.h"
#include "morley/postprocess.h"

#include <doctest.h>

#include <cmath>
#include <random>

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

// Member of the local shape space written in physical coordinates.
ManufacturedSolution shape_space_poly(int dim)
{
  if (dim == 2)
    return ManufacturedSolution::polynomial(
        2, {{1.5, {0, 0, 0}}, {-0.5, {1, 0, 0}}, {2.0, {1, 1, 0}}, {3.0, {2, 0, 0}},
            {-1.0, {3, 0, 0}}, {0.5, {0, 3, 0}}});
  return ManufacturedSolution::polynomial(
      3, {{1.0, {0, 0, 0}}, {0.7, {0, 0, 1}}, {-2.0, {1, 1, 1}}, {1.5, {0, 2, 0}},
          {0.25, {1, 0, 1}}, {-1.0, {0, 0, 3}}, {2.0, {3, 0, 0}}});
}
} // namespace

TEST_SUITE("fields")
{
  TEST_CASE("manufactured solutions are clamped and named")
  {
    CHECK(ManufacturedSolution::names().size() == 4);
    CHECK(ManufacturedSolution::dim_of("u1") == 2);
    CHECK(ManufacturedSolution::dim_of("u4") == 3);
    CHECK_THROWS_AS(ManufacturedSolution::by_name("u5"), std::invalid_argument);
    const ManufacturedSolution u = ManufacturedSolution::by_name("u2");
    CHECK(u.value({0.5, 0.5, 0.0}) == doctest::Approx(std::pow(0.0625, 2)));
    CHECK(u.value({0.0, 0.3, 0.0}) == 0.0);
    CHECK(u.derivative({1.0, 0.3, 0.0}, {1, 0, 0}) == doctest::Approx(0.0));
  }

  TEST_CASE("u1 closed-form derivatives and right-hand side")
  {
    const ManufacturedSolution u = ManufacturedSolution::by_name("u1");
    const double pi = M_PI;
    const Point x{0.2, 0.7, 0.0};
    auto s = [](double t) { return std::pow(std::sin(M_PI * t), 2); };
    auto s1 = [pi](double t) { return pi * std::sin(2 * pi * t); };
    auto s2 = [pi](double t) { return 2 * pi * pi * std::cos(2 * pi * t); };
    auto s4 = [pi](double t) { return -8 * std::pow(pi, 4) * std::cos(2 * pi * t); };
    CHECK(u.derivative(x, {1, 2, 0}) == doctest::Approx(s1(0.2) * s2(0.7)).epsilon(1e-13));
    const double f = s4(0.2) * s(0.7) + 2 * s2(0.2) * s2(0.7) + s(0.2) * s4(0.7);
    CHECK(u.rhs(x) == doctest::Approx(f).epsilon(1e-13));
    CHECK_THROWS_AS(u.derivative(x, {5, 0, 0}), std::invalid_argument);
  }

  TEST_CASE("canonical interpolation values")
  {
    const StructuredMesh m(grid(2, 6));
    const DofMap d(m);
    const ManufacturedSolution u = ManufacturedSolution::by_name("u1");
    const FEField pi = canonical_interpolate(m, d, u);
    CHECK(pi.values[d.vertex_dof(m.vertex_id({2, 3, 0}))]
          == doctest::Approx(0.75).epsilon(1e-15));
    double worst = 0.0;
    for (int dof = 0; dof < d.num_dofs(); ++dof)
      if (d.constrained(dof))
        worst = std::max(worst, std::abs(pi.values[dof]));
    CHECK(worst < 1e-12);
  }

  TEST_CASE("interpolation reproduces the shape space on one cell")
  {
    for (int dim : {2, 3})
    {
      GridSpec g = grid(dim, 1);
      g.origin = {0.25, -0.5, 1.0};
      g.extent = {0.5, 0.5, 0.5};
      const StructuredMesh m(g);
      const DofMap d(m);
      const NodalBasis b = NodalBasis::reference(dim);
      const ManufacturedSolution u = shape_space_poly(dim);
      const PiecewisePoly p = field_to_piecewise(m, d, b, canonical_interpolate(m, d, u));
      std::mt19937 rng(3);
      std::uniform_real_distribution<double> dist(-1.0, 1.0);
      for (int k = 0; k < 5; ++k)
      {
        const Point xi{dist(rng), dist(rng), dist(rng)};
        const Point x = m.to_physical(0, xi);
        CHECK(std::abs(p.value(0, xi) - u.value(x)) < 1e-12);
        const Hessian h = p.hessian(0, xi);
        const Hessian e = u.hessian(x);
        for (int i = 0; i < dim; ++i)
          for (int j = 0; j < dim; ++j)
            CHECK(std::abs(h[i][j] - e[i][j]) < 1e-10);
      }
    }
  }

  TEST_CASE("piecewise round trip")
  {
    const StructuredMesh m(grid(2, 3));
    const DofMap d(m);
    const NodalBasis b = NodalBasis::reference(2);
    const PiecewisePoly zero
        = field_to_piecewise(m, d, b, FEField{&d, Eigen::VectorXd::Zero(d.num_dofs())});
    CHECK(zero.coefficients().cwiseAbs().maxCoeff() == 0.0);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    FEField f{&d, Eigen::VectorXd(d.num_dofs())};
    for (Eigen::Index i = 0; i < f.values.size(); ++i)
      f.values[i] = dist(rng);
    const PiecewisePoly p = field_to_piecewise(m, d, b, f);
    for (int c = 0; c < m.num_cells(); ++c)
    {
      const std::vector<double> local = cell_reference_dofs(d, f, c);
      double direct = 0.0;
      for (int j = 0; j < b.size(); ++j)
        direct += local[j] * b.coefficients()(0, j);
      CHECK(std::abs(p.value(c, {0.0, 0.0, 0.0}) - direct) < 1e-13);
    }
  }

  TEST_CASE("correction coefficients of x1^3 vanish")
  {
    const StructuredMesh m(grid(2, 3));
    const ManufacturedSolution u = ManufacturedSolution::polynomial(2, {{1.0, {3, 0, 0}}});
    const CorrectionCoeffs r = correction_coeffs(m, u, 5);
    for (const CellCorrection& c : r.cells)
      for (int a = 0; a < 2; ++a)
      {
        CHECK(c.plus[a] == 0.0);
        CHECK(c.minus[a] == 0.0);
      }
  }

  TEST_CASE("correction coefficient of x1 x2^2")
  {
    // on [0, 2h★]^2: a5 = -(h★/6) * 2 * (2h★) = -(2/3) h★^2
    const StructuredMesh m(grid(2, 4));
    const ManufacturedSolution u = ManufacturedSolution::polynomial(2, {{1.0, {1, 2, 0}}});
    const CorrectionCoeffs r = correction_coeffs(m, u, 5);
    const double h = m.half();
    CHECK(h == 0.125);
    for (const CellCorrection& c : r.cells)
    {
      CHECK(c.plus[0] == doctest::Approx(-2.0 / 3.0 * h * h).epsilon(1e-14));
      CHECK(c.minus[0] == c.plus[0]);
      CHECK(c.plus[1] == 0.0);
      CHECK(c.minus[1] == 0.0);
    }
    CHECK(r.length == h);

    const CorrectionCoeffs alt = correction_coeffs(m, u, 5, CorrectionScale::cell_side);
    CHECK(alt.cells[0].plus[0] == doctest::Approx(-2.0 / 3.0 * 2 * h * h).epsilon(1e-14));
  }

  TEST_CASE("correction pairs are identical")
  {
    const StructuredMesh m2(grid(2, 12));
    const CorrectionCoeffs r2 = correction_coeffs(m2, ManufacturedSolution::by_name("u2"), 5);
    for (const CellCorrection& c : r2.cells)
      for (int a = 0; a < 2; ++a)
        CHECK(c.plus[a] == c.minus[a]);
    const StructuredMesh m3(grid(3, 3));
    const CorrectionCoeffs r3 = correction_coeffs(m3, ManufacturedSolution::by_name("u3"), 5);
    for (const CellCorrection& c : r3.cells)
      for (int a = 0; a < 3; ++a)
        CHECK(c.plus[a] == c.minus[a]);
  }

  TEST_CASE("3D correction coefficient from the +x1 face")
  {
    // u = x1 x2^2 + x1 x3^2: u_122 + u_133 = 4 on F1, area (2h★)^2
    const StructuredMesh m(grid(3, 2));
    const ManufacturedSolution u
        = ManufacturedSolution::polynomial(3, {{1.0, {1, 2, 0}}, {1.0, {1, 0, 2}}});
    const CorrectionCoeffs r = correction_coeffs(m, u, 5);
    const double h = m.half();
    for (const CellCorrection& c : r.cells)
    {
      CHECK(c.plus[0] == doctest::Approx(-4.0 * 4.0 * h * h / 12.0).epsilon(1e-14));
      CHECK(c.plus[1] == 0.0);
      CHECK(c.plus[2] == 0.0);
    }
  }

  TEST_CASE("corrections vanish at vertices")
  {
    const StructuredMesh m(grid(2, 6));
    const DofMap d(m);
    const NodalBasis b = NodalBasis::reference(2);
    const ManufacturedSolution u = ManufacturedSolution::by_name("u1");
    const CorrectedInterpolant star = corrected_interpolate(m, d, b, u);
    for (int c = 0; c < m.num_cells(); ++c)
      for (int k = 0; k < 4; ++k)
      {
        const Point xi = reference_vertex(2, k);
        CHECK(correction_value(star.correction, c, xi) == 0.0);
        const Point x = m.to_physical(c, xi);
        CHECK(std::abs(star.poly.value(c, xi) - u.value(x)) < 1e-12);
      }
  }

  TEST_CASE("correction monomials match the factored form")
  {
    const StructuredMesh m(grid(3, 3));
    const CorrectionCoeffs r = correction_coeffs(m, ManufacturedSolution::by_name("u3"), 5);
    const MonomialSet set = MonomialSet::morley(3);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int c = 0; c < m.num_cells(); c += 5)
    {
      const Eigen::VectorXd mono = correction_monomials(r, c);
      const Point xi{dist(rng), dist(rng), dist(rng)};
      CHECK(eval_poly(set, std::span<const double>(mono.data(), mono.size()), xi)
            == doctest::Approx(correction_value(r, c, xi)).epsilon(1e-12));
    }
  }

  TEST_CASE("corrected interpolant of x1 x2^2")
  {
    const StructuredMesh m(grid(2, 3));
    const DofMap d(m);
    const NodalBasis b = NodalBasis::reference(2);
    const ManufacturedSolution u = ManufacturedSolution::polynomial(2, {{1.0, {1, 2, 0}}});
    const CorrectedInterpolant star = corrected_interpolate(m, d, b, u);
    const double a5 = star.correction.cells[0].plus[0];
    for (const CellCorrection& c : star.correction.cells)
      CHECK(c.plus[0] == a5);
    // the interpolant of the P2 part is reproduced exactly
    const ManufacturedSolution p2 = ManufacturedSolution::polynomial(
        2, {{1.0, {2, 0, 0}}, {-2.0, {1, 1, 0}}, {0.5, {0, 2, 0}}});
    const PiecewisePoly q = corrected_interpolate(m, d, b, p2).poly;
    for (int c = 0; c < m.num_cells(); ++c)
      CHECK(std::abs(q.value(c, {0.3, -0.4, 0.0}) - p2.value(m.to_physical(c, {0.3, -0.4, 0.0})))
            < 1e-13);
  }

  TEST_CASE("facet DOF mismatch of the correction is measurable")
  {
    const StructuredMesh m(grid(2, 6));
    const CorrectionCoeffs r = correction_coeffs(m, ManufacturedSolution::by_name("u1"), 5);
    const double mismatch = correction_dof_mismatch(m, r);
    CHECK(std::isfinite(mismatch));
    MESSAGE("max inter-cell facet DOF mismatch of R_h u1, N=6: " << mismatch);
    const StructuredMesh m1(grid(2, 3));
    const CorrectionCoeffs r1
        = correction_coeffs(m1, ManufacturedSolution::polynomial(2, {{1.0, {1, 2, 0}}}), 5);
    CHECK(correction_dof_mismatch(m1, r1) < 1e-14);
  }
}
