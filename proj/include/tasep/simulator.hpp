#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>

#include "tasep/configuration.hpp"

namespace tasep {

using Rng = std::mt19937_64;

enum class JumpOutcome { moved, swapped, blocked };

/// One clock ring of particle `mover` (1-based from the left): an empty
/// target site means a move, a second class neighbour in front of a first
/// class mover means an exchange of species labels, anything else blocks.
JumpOutcome attempt_jump(Configuration& state, int mover);

struct StepResult {
  double dwell = 0.0;
  int mover = 0;
  JumpOutcome outcome = JumpOutcome::blocked;
};

/// Exponential(N) dwell followed by a uniformly chosen clock ring.
StepResult step_dynamics(Configuration& state, Rng& rng);

/// State at time t, starting from `initial`.
Configuration simulate_until(const Configuration& initial, double t, Rng& rng);

/// Independent generator for run `run` of a seeded experiment.
Rng run_stream(std::uint64_t seed, std::uint64_t run);

using EventPredicate = std::function<bool(const Configuration&)>;

struct SimulationEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t runs = 0;
  std::uint64_t hits = 0;
  std::uint64_t seed = 0;
  double elapsed = 0.0;  // seconds, informational
};

/// Fraction of runs whose state at time t satisfies `event`.
SimulationEstimate estimate_event(const Configuration& initial, const EventPredicate& event, double t,
                                  std::uint64_t runs, std::uint64_t seed);

/// Leftmost-particle histogram: counts of runs with species word 21...1 and
/// x_1(t) = x, keyed by x. One simulation serves a whole sweep.
struct LeftmostHistogram {
  std::map<long, std::uint64_t> counts;
  std::uint64_t runs = 0;
  std::uint64_t seed = 0;
  double elapsed = 0.0;

  SimulationEstimate at(long x) const;
};

/// `head_word` selects the event: word 21...1 with x_1 = x (true) or just
/// x_1 = x (false, the single-species event).
LeftmostHistogram leftmost_histogram(const Configuration& initial, double t, std::uint64_t runs, std::uint64_t seed,
                                     bool head_word = true);

/// Estimate with the usual binomial standard error sqrt(p(1-p)/runs).
SimulationEstimate make_estimate(std::uint64_t hits, std::uint64_t runs, std::uint64_t seed, double elapsed);

EventPredicate leftmost_event(long x);
EventPredicate single_species_leftmost_event(long x);
EventPredicate transition_event(const Configuration& target);

}  // namespace tasep
