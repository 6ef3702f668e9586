#include <doctest.h>

#include <random>
#include <vector>

#include "tasep/errors.hpp"
#include "tasep/identities.hpp"

using tasep::Rational;

namespace {

std::vector<Rational> point(std::initializer_list<std::pair<long, long>> v) {
  std::vector<Rational> xi;
  for (auto [p, q] : v) xi.emplace_back(p, q);
  return xi;
}

}  // namespace

TEST_CASE("main identity at hand-checked points") {
  const auto two = point({{1, 2}, {1, 3}});
  const auto c2 = tasep::main_identity(two);
  CHECK(c2.equal());
  CHECK(c2.rhs == Rational(-1, 2));

  const auto three = point({{1, 2}, {1, 3}, {1, 5}});
  const auto c3 = tasep::main_identity(three);
  CHECK(c3.equal());
  CHECK(c3.rhs == Rational(-3, 40));
}

TEST_CASE("equivalent and single-species forms") {
  std::mt19937_64 rng(11);
  for (int n = 2; n <= 5; ++n)
    for (int rep = 0; rep < 3; ++rep) {
      const auto xi = tasep::random_rational_point(rng, n);
      CHECK(tasep::equivalent_identity(xi, tasep::EquivalentVariant::a).equal());
      CHECK(tasep::equivalent_identity(xi, tasep::EquivalentVariant::b).equal());
      CHECK(tasep::tasep_identity(xi, tasep::TasepVariant::amplitude).equal());
      CHECK(tasep::tasep_identity(xi, tasep::TasepVariant::sign).equal());
      CHECK(tasep::tasep_identity(xi, tasep::TasepVariant::substituted).equal());
      CHECK(tasep::substitution_maps_a_to_b(xi));
      CHECK(tasep::substitution_maps_tasep(xi));
    }
  // The reciprocal forms also hold away from (0, 1).
  const auto outside = point({{3, 1}, {2, 1}});
  CHECK(tasep::tasep_identity(outside, tasep::TasepVariant::substituted).equal());
  CHECK(tasep::equivalent_identity(outside, tasep::EquivalentVariant::b).equal());
}

TEST_CASE("reciprocal reversal") {
  const auto xi = point({{1, 2}, {1, 3}, {2, 7}});
  const auto r = tasep::reciprocal_reversal(xi);
  REQUIRE(r.size() == 3);
  CHECK(r[0] == Rational(7, 2));
  CHECK(r[1] == Rational(3));
  CHECK(r[2] == Rational(2));
  CHECK(tasep::reciprocal_reversal(r) == xi);
}

TEST_CASE("Vandermonde cofactor expansion") {
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 7; ++n) CHECK(tasep::vandermonde_cofactor(tasep::random_rational_point(rng, n)).equal());
}

TEST_CASE("determinant collapse") {
  const auto xi = point({{1, 2}, {1, 3}, {1, 5}});
  const std::vector<int> nonzero{0, 1};
  const auto c = tasep::det_collapse(xi, 0, nonzero);
  CHECK(c.equal());
  CHECK(c.lhs == 0);

  const std::vector<int> zero{0, 0};
  for (int l = 0; l <= 3; ++l) {
    const auto z = tasep::det_collapse(xi, l, zero);
    CHECK(z.equal());
    CHECK(z.rhs != 0);
  }
  CHECK(tasep::complete_symmetric(xi, 0) == 1);
  CHECK(tasep::complete_symmetric(xi, 1) == Rational(31, 30));
  // h_2 = sum_{i <= j} xi_i xi_j
  Rational h2 = 0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = i; j < 3; ++j) h2 += xi[i] * xi[j];
  CHECK(tasep::complete_symmetric(xi, 2) == h2);

  const std::vector<int> bad{1, 0};
  CHECK_THROWS_AS(tasep::det_collapse(xi, 0, bad), tasep::DomainError);
}

TEST_CASE("exact determinant") {
  std::vector<std::vector<Rational>> m{{Rational(2), Rational(1)}, {Rational(1, 2), Rational(3)}};
  CHECK(tasep::exact_determinant(m) == Rational(11, 2));
  std::vector<std::vector<Rational>> singular{{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  CHECK(tasep::exact_determinant(singular) == 0);
  std::vector<std::vector<Rational>> pivot{{Rational(0), Rational(1)}, {Rational(1), Rational(0)}};
  CHECK(tasep::exact_determinant(pivot) == -1);
}

TEST_CASE("a perturbed right side is detected") {
  const auto xi = point({{1, 2}, {1, 3}, {1, 5}});
  auto c = tasep::main_identity(xi);
  c.rhs += Rational(1, 1000000);
  CHECK_FALSE(c.equal());
}

TEST_CASE("closed form amplitudes") {
  std::mt19937_64 rng(2);
  for (int n = 2; n <= 5; ++n) CHECK(tasep::closed_form_all(tasep::random_rational_point(rng, n)));
}

TEST_CASE("identity suite") {
  for (auto id : tasep::all_identities()) {
    const auto r = tasep::run_identity_suite(id, 3, 10, 42);
    CAPTURE(tasep::to_string(id));
    CHECK(r.pass());
    CHECK(r.points == 10);
    CHECK(r.degree_bound > 0);
  }
  const auto a = tasep::run_identity_suite(tasep::Identity::main, 4, 5, 9);
  const auto b = tasep::run_identity_suite(tasep::Identity::main, 4, 5, 9);
  CHECK(a.failures == b.failures);
  CHECK(a.resamples == b.resamples);
  CHECK_THROWS_AS(tasep::run_identity_suite(tasep::Identity::braid, 6, 1, 1), tasep::SizeError);
  CHECK(tasep::parse_identity("equivA") == tasep::Identity::equiv_a);
  CHECK_THROWS_AS(tasep::parse_identity("nope"), tasep::DomainError);
}

TEST_CASE("random points") {
  std::mt19937_64 rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const auto xi = tasep::random_rational_point(rng, 6);
    for (std::size_t i = 0; i < xi.size(); ++i) {
      CHECK(xi[i] > 0);
      CHECK(xi[i] < 1);
      CHECK(xi[i].get_den() <= tasep::kMaxPointDenominator);
      for (std::size_t j = 0; j < i; ++j) CHECK(xi[i] != xi[j]);
    }
  }
}
