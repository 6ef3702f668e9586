#include <doctest.h>

#include <cmath>

#include "tasep/contour.hpp"
#include "tasep/errors.hpp"
#include "tasep/formulas.hpp"

using tasep::Complex;
using tasep::QuadratureSpec;
using tasep::residue_value;

namespace {

Complex residue_integrand(Complex xi, int k, int e, double t) {
  return std::pow(xi, k) * std::pow(1.0 - xi, e) * std::exp((1.0 / xi - 1.0) * t);
}

}  // namespace

TEST_CASE("residue series examples") {
  CHECK(residue_value({-1, 0, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(residue_value({-2, 0, 1.0}) == 0.0);
  for (double t : {0.1, 1.0, 5.0})
    CHECK(residue_value({0, -1, t}) == doctest::Approx(1.0 - std::exp(-t)).epsilon(1e-14));
}

TEST_CASE("e = 0 gives Poisson masses") {
  for (double t : {0.1, 1.0, 5.0}) {
    double mass = std::exp(-t);
    for (int k = -1; k <= 10; ++k) {
      CHECK(residue_value({k, 0, t}) == doctest::Approx(mass).epsilon(1e-13));
      mass *= t / (k + 2);
    }
    for (int k = -6; k < -1; ++k) CHECK(residue_value({k, 0, t}) == 0.0);
  }
}

TEST_CASE("t = 0 gives Laurent coefficients") {
  // (1 - xi)^{-2} = sum (j+1) xi^j, so the xi^{-1} coefficient of xi^k(...) is -k.
  for (int k = -6; k <= -1; ++k) CHECK(residue_value({k, -2, 0.0}) == static_cast<double>(-k));
  CHECK(residue_value({0, -2, 0.0}) == 0.0);
  // (1 - xi)^3: coefficients 1, -3, 3, -1.
  CHECK(residue_value({-2, 3, 0.0}) == -3.0);
  CHECK(residue_value({-4, 3, 0.0}) == -1.0);
  CHECK(residue_value({-5, 3, 0.0}) == 0.0);
}

TEST_CASE("residue table matches direct evaluation") {
  const tasep::ResidueTable table(1.3, -4, 6, -3, 2);
  for (int k = -4; k <= 6; ++k)
    for (int e = -3; e <= 2; ++e) CHECK(static_cast<double>(table(k, e)) == residue_value({k, e, 1.3}));
  CHECK(static_cast<double>(table(9, -5)) == residue_value({9, -5, 1.3}));
}

TEST_CASE("circle quadrature examples") {
  QuadratureSpec spec;
  CHECK(std::abs(tasep::circle_quadrature([](Complex z) { return 1.0 / z; }, spec).value - 1.0) < 1e-15);
  CHECK(std::abs(tasep::circle_quadrature([](Complex z) { return z * z * z; }, spec).value) < 1e-15);
  const auto r = tasep::circle_quadrature([](Complex z) { return residue_integrand(z, -1, -1, 1.0); }, spec);
  CHECK(std::abs(r.value.real() - residue_value({-1, -1, 1.0})) < 1e-12);
}

TEST_CASE("series and quadrature agree on the (k, e, t) grid") {
  for (double t : {0.1, 1.0, 5.0})
    for (int k = -6; k <= 6; ++k)
      for (int e = -5; e <= 3; ++e) {
        QuadratureSpec spec;
        spec.radius = tasep::saddle_radius(k, t);
        const double exact = residue_value({k, e, t});
        const auto q = tasep::circle_quadrature([&](Complex z) { return residue_integrand(z, k, e, t); }, spec);
        CAPTURE(k);
        CAPTURE(e);
        CAPTURE(t);
        if (exact == 0.0)
          CHECK(std::abs(q.value.real()) < 1e-12);
        else
          CHECK(std::abs(q.value.real() - exact) <= 1e-10 * std::abs(exact));
      }
}

TEST_CASE("multi contour") {
  QuadratureSpec spec;
  const auto inv = tasep::multi_contour(
      [](std::span<const Complex> xi) {
        Complex v = 1.0;
        for (const auto& z : xi) v /= z;
        return v;
      },
      3, spec);
  CHECK(std::abs(inv.value - 1.0) < 1e-14);

  // Separable integrand: product of one-dimensional values.
  const auto f = [](Complex z, int i) { return residue_integrand(z, i - 1, -i, 0.7); };
  const auto sep = tasep::multi_contour(
      [&](std::span<const Complex> xi) { return f(xi[0], 0) * f(xi[1], 1) * f(xi[2], 2); }, 3, spec);
  double product = 1.0;
  for (int i = 0; i < 3; ++i) product *= residue_value({i - 1, -i, 0.7});
  CHECK(std::abs(sep.value.real() - product) < 1e-12);
}

TEST_CASE("leftmost integrand by quadrature, N = 2 step, x = 1") {
  const auto y = tasep::step_initial(2, 0);
  const auto v = tasep::leftmost_probability(y, 1, 1.0, tasep::Method::quadrature);
  CHECK(std::abs(v.value - std::exp(-1.0)) < 1e-12);
  CHECK(v.quadrature_points >= 64);
}

TEST_CASE("quadrature spec validation and budget") {
  QuadratureSpec bad;
  bad.radius = 1.2;
  CHECK_THROWS(bad.validate());
  bad.radius = 0.5;
  bad.points = 12;
  CHECK_THROWS(bad.validate());

  QuadratureSpec tight;
  tight.max_log2_evaluations = 15;
  // Three variables at t = 3 need 64 nodes per circle; the budget allows 32.
  CHECK_THROWS_AS(tasep::leftmost_probability(tasep::step_initial(3, 0), 3, 3.0, tasep::Method::quadrature, tight),
                  tasep::AccuracyError);
  tight.max_log2_evaluations = 10;
  CHECK_THROWS_AS(tasep::leftmost_probability(tasep::step_initial(3, 0), 3, 3.0, tasep::Method::quadrature, tight),
                  tasep::SizeError);
}

TEST_CASE("saddle radius clamps") {
  CHECK(tasep::saddle_radius(-3, 1.0) == 0.5);
  CHECK(tasep::saddle_radius(6, 0.1) == doctest::Approx(0.1 / 7));
  CHECK(tasep::saddle_radius(6, 1e-9) == 1e-3);
}
