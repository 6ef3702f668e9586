#include "tasep/simulator.hpp"

#include <chrono>
#include <cmath>

#include "tasep/errors.hpp"
#include "tasep/parallel.hpp"

namespace tasep {

JumpOutcome attempt_jump(Configuration& state, int mover) {
  const int n = state.size();
  if (mover < 1 || mover > n) throw DomainError("mover index out of range");
  const int i = mover - 1;
  const long target = state.positions[i] + 1;
  if (i + 1 == n || state.positions[i + 1] != target) {
    state.positions[i] = target;
    return JumpOutcome::moved;
  }
  if (state.species[i] == kFirstClass && state.species[i + 1] == kSecondClass) {
    std::swap(state.species[i], state.species[i + 1]);
    return JumpOutcome::swapped;
  }
  return JumpOutcome::blocked;
}

StepResult step_dynamics(Configuration& state, Rng& rng) {
  const int n = state.size();
  StepResult r;
  r.dwell = std::exponential_distribution<double>(static_cast<double>(n))(rng);
  r.mover = std::uniform_int_distribution<int>(1, n)(rng);
  r.outcome = attempt_jump(state, r.mover);
  return r;
}

Configuration simulate_until(const Configuration& initial, double t, Rng& rng) {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  Configuration state = initial;
  if (state.size() == 0) return state;
  const int n = state.size();
  std::exponential_distribution<double> dwell(static_cast<double>(n));
  std::uniform_int_distribution<int> pick(1, n);
  double clock = dwell(rng);
  while (clock <= t) {
    attempt_jump(state, pick(rng));
    clock += dwell(rng);
  }
  return state;
}

Rng run_stream(std::uint64_t seed, std::uint64_t run) { return Rng(mix_seed(seed, run)); }

SimulationEstimate make_estimate(std::uint64_t hits, std::uint64_t runs, std::uint64_t seed, double elapsed) {
  SimulationEstimate e;
  e.runs = runs;
  e.hits = hits;
  e.seed = seed;
  e.elapsed = elapsed;
  e.estimate = runs ? static_cast<double>(hits) / static_cast<double>(runs) : 0.0;
  e.std_error = runs ? std::sqrt(e.estimate * (1.0 - e.estimate) / static_cast<double>(runs)) : 0.0;
  return e;
}

namespace {

inline constexpr std::uint64_t kBlock = 4096;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void require_runs(std::uint64_t runs) {
  if (runs == 0) throw DomainError("runs must be positive");
}

}  // namespace

SimulationEstimate estimate_event(const Configuration& initial, const EventPredicate& event, double t,
                                  std::uint64_t runs, std::uint64_t seed) {
  initial.validate();
  require_runs(runs);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t blocks = (runs + kBlock - 1) / kBlock;
  std::vector<std::uint64_t> hits(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t end = std::min<std::uint64_t>(runs, (b + 1) * kBlock);
    for (std::uint64_t run = b * kBlock; run < end; ++run) {
      Rng rng = run_stream(seed, run);
      if (event(simulate_until(initial, t, rng))) ++hits[b];
    }
  });
  std::uint64_t total = 0;
  for (auto h : hits) total += h;
  return make_estimate(total, runs, seed, seconds_since(start));
}

SimulationEstimate LeftmostHistogram::at(long x) const {
  const auto it = counts.find(x);
  return make_estimate(it == counts.end() ? 0 : it->second, runs, seed, elapsed);
}

LeftmostHistogram leftmost_histogram(const Configuration& initial, double t, std::uint64_t runs, std::uint64_t seed,
                                     bool head_word) {
  initial.validate();
  require_runs(runs);
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t blocks = (runs + kBlock - 1) / kBlock;
  std::vector<std::map<long, std::uint64_t>> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    const std::uint64_t end = std::min<std::uint64_t>(runs, (b + 1) * kBlock);
    for (std::uint64_t run = b * kBlock; run < end; ++run) {
      Rng rng = run_stream(seed, run);
      const auto state = simulate_until(initial, t, rng);
      if (!head_word || state.has_head_word()) ++partial[b][state.positions[0]];
    }
  });
  LeftmostHistogram h;
  h.runs = runs;
  h.seed = seed;
  for (const auto& block : partial)
    for (const auto& [x, c] : block) h.counts[x] += c;
  h.elapsed = seconds_since(start);
  return h;
}

EventPredicate leftmost_event(long x) {
  return [x](const Configuration& c) { return c.has_head_word() && c.positions[0] == x; };
}

EventPredicate single_species_leftmost_event(long x) {
  return [x](const Configuration& c) { return c.positions[0] == x; };
}

EventPredicate transition_event(const Configuration& target) {
  return [target](const Configuration& c) { return c == target; };
}

}  // namespace tasep
