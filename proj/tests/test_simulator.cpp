#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <vector>

#include "tasep/errors.hpp"
#include "tasep/simulator.hpp"

using tasep::Configuration;
using tasep::JumpOutcome;

TEST_CASE("single jumps") {
  auto free_move = Configuration::make({0, 5}, {2, 1});
  CHECK(tasep::attempt_jump(free_move, 1) == JumpOutcome::moved);
  CHECK(free_move == Configuration::make({1, 5}, {2, 1}));

  auto swap = Configuration::make({0, 1}, {2, 1});
  CHECK(tasep::attempt_jump(swap, 1) == JumpOutcome::swapped);
  CHECK(swap == Configuration::make({0, 1}, {1, 2}));

  auto blocked = Configuration::make({0, 1}, {1, 2});
  CHECK(tasep::attempt_jump(blocked, 1) == JumpOutcome::blocked);
  CHECK(blocked == Configuration::make({0, 1}, {1, 2}));

  auto same = Configuration::make({0, 1}, {2, 2});
  CHECK(tasep::attempt_jump(same, 1) == JumpOutcome::blocked);

  auto last = Configuration::make({0, 1}, {1, 2});
  CHECK(tasep::attempt_jump(last, 2) == JumpOutcome::moved);
  CHECK(last.positions[1] == 2);

  CHECK_THROWS_AS(tasep::attempt_jump(last, 3), tasep::DomainError);
  CHECK_THROWS_AS(tasep::attempt_jump(last, 0), tasep::DomainError);
}

TEST_CASE("dynamics keep the state valid") {
  tasep::Rng rng(17);
  auto state = Configuration::make({0, 1, 2, 3}, {2, 1, 2, 1});
  const auto before = state;
  int firsts = 0;
  for (int s : state.species) firsts += s == tasep::kFirstClass;
  for (int step = 0; step < 5000; ++step) {
    const auto old = state;
    const auto r = tasep::step_dynamics(state, rng);
    CHECK(r.dwell > 0.0);
    CHECK(r.mover >= 1);
    CHECK(r.mover <= 4);
    CHECK_NOTHROW(state.validate());
    long moved = 0;
    for (int i = 0; i < 4; ++i) {
      CHECK(state.positions[i] >= old.positions[i]);
      moved += state.positions[i] - old.positions[i];
    }
    CHECK(moved == (r.outcome == JumpOutcome::moved ? 1 : 0));
    int now = 0;
    for (int s : state.species) now += s == tasep::kFirstClass;
    CHECK(now == firsts);
  }
  CHECK(state.positions[3] > before.positions[3]);
}

TEST_CASE("a lone particle performs a Poisson walk") {
  const auto one = Configuration::make({0}, {2});
  const double t = 2.0;
  const int runs = 100000;
  std::map<long, long> counts;
  for (int run = 0; run < runs; ++run) {
    auto rng = tasep::run_stream(2024, static_cast<std::uint64_t>(run));
    ++counts[tasep::simulate_until(one, t, rng).positions[0]];
  }
  // Bins 0..7 plus an upper tail bin.
  constexpr int kBins = 9;
  double chi2 = 0.0;
  double cdf = 0.0;
  for (int k = 0; k < kBins; ++k) {
    double p;
    long observed = 0;
    if (k < kBins - 1) {
      p = std::exp(-t + k * std::log(t) - std::lgamma(k + 1.0));
      cdf += p;
      observed = counts[k];
    } else {
      p = 1.0 - cdf;
      for (const auto& [x, c] : counts)
        if (x >= kBins - 1) observed += c;
    }
    const double expected = p * runs;
    chi2 += (observed - expected) * (observed - expected) / expected;
  }
  const boost::math::chi_squared dist(kBins - 1);
  const double p_value = 1.0 - boost::math::cdf(dist, chi2);
  CAPTURE(chi2);
  CHECK(p_value > 0.01);
}

TEST_CASE("the rightmost particle is never blocked") {
  const auto y = Configuration::make({1, 2, 3}, {2, 1, 1});
  const double t = 1.5;
  const int runs = 40000;
  double sum = 0.0;
  for (int run = 0; run < runs; ++run) {
    auto rng = tasep::run_stream(7, static_cast<std::uint64_t>(run));
    sum += static_cast<double>(tasep::simulate_until(y, t, rng).positions[2] - 3);
  }
  const double mean = sum / runs;
  CHECK(std::abs(mean - t) < 3.0 * std::sqrt(t / runs));
}

TEST_CASE("seeded runs are reproducible") {
  const auto y = tasep::step_initial(3, 0);
  const auto a = tasep::estimate_event(y, tasep::leftmost_event(2), 1.0, 5000, 99);
  const auto b = tasep::estimate_event(y, tasep::leftmost_event(2), 1.0, 5000, 99);
  CHECK(a.hits == b.hits);
  CHECK(a.estimate == b.estimate);
  const auto c = tasep::estimate_event(y, tasep::leftmost_event(2), 1.0, 5000, 100);
  CHECK(c.seed == 100);

  const auto h = tasep::leftmost_histogram(y, 1.0, 5000, 99);
  CHECK(h.at(2).hits == a.hits);
  std::uint64_t total = 0;
  for (const auto& [x, n] : h.counts) total += n;
  CHECK(total <= 5000);
  const auto all = tasep::leftmost_histogram(y, 1.0, 5000, 99, false);
  total = 0;
  for (const auto& [x, n] : all.counts) total += n;
  CHECK(total == 5000);
}

TEST_CASE("estimate edge cases") {
  const auto y = tasep::step_initial(2, 0);
  const auto sure = tasep::estimate_event(y, [](const Configuration&) { return true; }, 1.0, 1000, 1);
  CHECK(sure.estimate == 1.0);
  CHECK(sure.std_error == 0.0);
  const auto still = tasep::estimate_event(y, tasep::transition_event(y), 0.0, 100, 1);
  CHECK(still.estimate == 1.0);
  CHECK_THROWS_AS(tasep::estimate_event(y, tasep::leftmost_event(1), 1.0, 0, 1), tasep::DomainError);
  CHECK_THROWS_AS(tasep::leftmost_histogram(y, 1.0, 0, 1), tasep::DomainError);

  const auto e = tasep::make_estimate(25, 100, 3, 0.0);
  CHECK(e.estimate == 0.25);
  CHECK(e.std_error == doctest::Approx(std::sqrt(0.25 * 0.75 / 100)));
}

TEST_CASE("event predicates") {
  const auto head = Configuration::make({2, 4}, {2, 1});
  const auto tail = Configuration::make({2, 4}, {1, 2});
  CHECK(tasep::leftmost_event(2)(head));
  CHECK_FALSE(tasep::leftmost_event(2)(tail));
  CHECK_FALSE(tasep::leftmost_event(3)(head));
  CHECK(tasep::single_species_leftmost_event(2)(tail));
  CHECK(tasep::transition_event(tail)(tail));
  CHECK_FALSE(tasep::transition_event(tail)(head));
}
