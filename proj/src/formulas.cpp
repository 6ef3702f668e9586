#include "tasep/formulas.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>

#include "tasep/bethe.hpp"
#include "tasep/errors.hpp"
#include "tasep/parallel.hpp"
#include "tasep/permutation.hpp"

namespace tasep {

std::string to_string(Method m) {
  switch (m) {
    case Method::residue: return "residue";
    case Method::quadrature: return "quadrature";
    case Method::determinant: return "determinant";
    case Method::expansion: return "expansion";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  if (name == "residue") return Method::residue;
  if (name == "quadrature") return Method::quadrature;
  if (name == "determinant") return Method::determinant;
  if (name == "expansion") return Method::expansion;
  throw DomainError("unknown method '" + std::string(name) + "'");
}

double poisson_mass(double t, long k) {
  if (k < 0) return 0.0;
  return residue_value({static_cast<int>(k - 1), 0, t});
}

double poisson_tail(double t, long k) {
  if (k < 0) return 1.0;
  if (t == 0.0) return 0.0;
  // Upper terms summed directly; they decay monotonically once j > t.
  CompensatedSum<long double> sum;
  long double term = static_cast<long double>(poisson_mass(t, k + 1));
  for (long j = k + 1; j < k + 100000; ++j) {
    sum.add(term);
    term *= static_cast<long double>(t) / static_cast<long double>(j + 1);
    if (j + 1 > t && term <= 1e-20L * sum.value()) break;
  }
  return static_cast<double>(sum.value());
}

namespace {

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("time must be finite and nonnegative");
}

int sign_of(int n) { return n % 2 == 0 ? 1 : -1; }

// Drops the sign of a negative zero.
double clean(long double v) { return static_cast<double>(v) + 0.0; }

Complex energy_factor(std::span<const Complex> xi, double t) {
  Complex eps{0.0, 0.0};
  for (const Complex& v : xi) eps += 1.0 / v - 1.0;
  return std::exp(eps * t);
}

Complex vandermonde(std::span<const Complex> xi) {
  Complex v{1.0, 0.0};
  for (std::size_t i = 0; i < xi.size(); ++i)
    for (std::size_t j = i + 1; j < xi.size(); ++j) v *= xi[j] - xi[i];
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Transition probabilities

namespace {

bool positions_reachable(const Configuration& from, const Configuration& to) {
  for (int i = 0; i < from.size(); ++i)
    if (to.positions[i] < from.positions[i]) return false;
  return true;
}

void check_transition_pair(const Configuration& from, const Configuration& to) {
  from.validate();
  to.validate();
  if (from.size() != to.size()) throw DomainError("configurations have different particle counts");
  if (!same_species_content(from.species, to.species))
    throw DomainError("species multisets differ: the rearrangement is unreachable");
}

// Integrand for all entries (pi_k, nu) at several target positions sharing
// one amplitude evaluation per node.
struct TransitionBatch {
  const Configuration* from;
  std::vector<std::vector<long>> targets;
  std::vector<std::size_t> rows;  // species indices pi
  double t;

  int outputs() const { return static_cast<int>(targets.size() * rows.size()); }

  void operator()(std::span<const Complex> xi, std::span<Complex> out) const {
    const int n = from->size();
    const std::size_t column = species_index(from->species);
    const auto columns = amplitude_columns<Complex>(n, xi, column);
    const Complex energy = energy_factor(xi, t);
    const auto perms = enumerate_permutations(n, kMaxAmplitudeParticles);
    for (std::size_t target = 0; target < targets.size(); ++target) {
      const auto& x = targets[target];
      for (const auto& sigma : perms) {
        Complex wave{1.0, 0.0};
        for (int i = 1; i <= n; ++i) {
          const int a = sigma(i);
          wave *= ScalarTraits<Complex>::pow(xi[a - 1], x[i - 1] - from->positions[a - 1] - 1);
        }
        const auto& col = columns[sigma.rank()];
        for (std::size_t r = 0; r < rows.size(); ++r) out[target * rows.size() + r] += col[rows[r]] * wave;
      }
      for (std::size_t r = 0; r < rows.size(); ++r) out[target * rows.size() + r] *= energy;
    }
  }
};

}  // namespace

Evaluation transition_probability(const Configuration& from, const Configuration& to, double t, Method method,
                                  const QuadratureSpec& spec) {
  check_transition_pair(from, to);
  require_time(t);
  if (t == 0.0) return {from == to ? 1.0 : 0.0, 0.0, method, 0};
  if (method == Method::residue) {
    if (from.size() == 1) return {poisson_mass(t, to.positions[0] - from.positions[0]), 0.0, method, 0};
    if (from.has_head_word() && to.has_head_word()) return head_transition_probability(from, to, t);
    throw DomainError("residue method needs species words 21...1 on both sides");
  }
  if (method != Method::quadrature) throw DomainError("transition probabilities support residue or quadrature");
  if (from.size() > kMaxTransitionQuadratureParticles)
    throw SizeError("transition quadrature is limited to N <= 4");
  if (!positions_reachable(from, to)) return {0.0, 0.0, method, 0};

  TransitionBatch batch{&from, {to.positions}, {species_index(to.species)}, t};
  const auto r = multi_contour_vector(std::cref(batch), from.size(), batch.outputs(), spec);
  return {r.values[0].real(), r.delta, Method::quadrature, r.points};
}

Evaluation head_transition_probability(const Configuration& from, const Configuration& to, double t) {
  check_transition_pair(from, to);
  require_time(t);
  if (!from.has_head_word() || !to.has_head_word())
    throw DomainError("head transition needs species words 21...1 on both sides");
  const int n = from.size();
  if (n > kMaxResidueParticles) throw SizeError("permutation sums are limited to N <= 8");
  if (!positions_reachable(from, to)) return {0.0, 0.0, Method::residue, 0};

  // Separating [A_sigma] per variable: xi_a carries exponent
  // x_{sigma^{-1}(a)} - y_a - 1 and (1 - xi_a) carries (a-2)_+ - (p-2)_+
  // where p = sigma^{-1}(a).
  CompensatedSum<long double> sum;
  for (const auto& sigma : enumerate_permutations(n, kMaxResidueParticles)) {
    const Permutation inv = sigma.inverse();
    long double term = sigma.sign();
    for (int a = 1; a <= n; ++a) {
      const int p = inv(a);
      const long k = to.positions[p - 1] - from.positions[a - 1] - 1;
      const int e = std::max(a - 2, 0) - std::max(p - 2, 0);
      term *= residue_value_extended({static_cast<int>(k), e, t});
      if (term == 0) break;
    }
    sum.add(term);
  }
  return {clean(sum.value()), 0.0, Method::residue, 0};
}

// ---------------------------------------------------------------------------
// Leftmost first class particle

namespace {

void check_head_initial(const Configuration& from) {
  from.validate();
  if (!from.has_head_word()) throw DomainError("initial species word must be 21...1");
}

// sum_sigma sgn(sigma) prod_i R(x - y_i - 1 + sigma(i) - 1 + shift, e_i) with
// e_i = -(N - i + 1) + first_bonus * [i = 1].
long double vandermonde_residue_sum(const Configuration& from, long x, double t, int first_bonus, int shift) {
  const int n = from.size();
  CompensatedSum<long double> sum;
  for (const auto& sigma : enumerate_permutations(n, kMaxResidueParticles)) {
    long double term = sigma.sign();
    for (int i = 1; i <= n; ++i) {
      const long k = x - from.positions[i - 1] - 1 + sigma(i) - 1 + shift;
      const int e = -(n - i + 1) + (i == 1 ? first_bonus : 0);
      term *= residue_value_extended({static_cast<int>(k), e, t});
      if (term == 0) break;
    }
    sum.add(term);
  }
  return sum.value();
}

// Integrands of the form base(xi) * (xi_1 ... xi_N)^x, one output per x,
// integrated on a shared grid. Entries with x below `lowest` are exact zeros;
// at t = 0 the mass sits at x = lowest.
std::vector<Evaluation> sweep_quadrature(const std::function<Complex(std::span<const Complex>)>& base, int n,
                                         std::span<const long> xs, long lowest, double t, const QuadratureSpec& spec) {
  std::vector<Evaluation> out(xs.size(), Evaluation{0.0, 0.0, Method::quadrature, 0});
  if (t == 0.0) {
    // The rule is only accurate to rounding here, so the atom is returned as is.
    for (std::size_t i = 0; i < xs.size(); ++i) out[i].value = xs[i] == lowest ? 1.0 : 0.0;
    return out;
  }
  std::vector<long> live;
  std::vector<std::size_t> slot;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (xs[i] >= lowest) {
      live.push_back(xs[i]);
      slot.push_back(i);
    }
  if (live.empty()) return out;
  const auto integrand = [&](std::span<const Complex> xi, std::span<Complex> values) {
    Complex product{1.0, 0.0};
    for (const Complex& v : xi) product *= v;
    const Complex b = base(xi);
    for (std::size_t i = 0; i < live.size(); ++i) values[i] = b * ScalarTraits<Complex>::pow(product, live[i]);
  };
  const auto r = multi_contour_vector(integrand, n, static_cast<int>(live.size()), spec);
  for (std::size_t i = 0; i < live.size(); ++i)
    out[slot[i]] = {r.values[i].real(), r.delta, Method::quadrature, r.points};
  return out;
}

// prod_{i<j} (xi_j - xi_i) / (1 - xi_i) * prod_i xi_i^{-y_i - 1} / (1 - xi_i) * e^{eps t}.
Complex ordered_base(std::span<const Complex> xi, const Configuration& from, double t) {
  const int n = static_cast<int>(xi.size());
  Complex v{1.0, 0.0};
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) v *= (xi[j] - xi[i]) / (1.0 - xi[i]);
  for (int i = 0; i < n; ++i) v *= ScalarTraits<Complex>::pow(xi[i], -from.positions[i] - 1) / (1.0 - xi[i]);
  return v * energy_factor(xi, t);
}

}  // namespace

std::vector<Evaluation> leftmost_probability_sweep(const Configuration& from, std::span<const long> xs, double t,
                                                   Method method, const QuadratureSpec& spec) {
  check_head_initial(from);
  require_time(t);
  const int n = from.size();
  if (method == Method::residue) {
    if (n > kMaxResidueParticles) throw SizeError("permutation sums are limited to N <= 8");
    std::vector<Evaluation> out;
    for (long x : xs)
      out.push_back({x < from.positions[0] ? 0.0 : clean(vandermonde_residue_sum(from, x, t, 1, 0)), 0.0,
                     method, 0});
    return out;
  }
  if (method != Method::quadrature) throw DomainError("leftmost probability supports residue or quadrature");
  const auto base = [&](std::span<const Complex> xi) { return (1.0 - xi[0]) * ordered_base(xi, from, t); };
  return sweep_quadrature(base, n, xs, from.positions[0], t, spec);
}

Evaluation leftmost_probability(const Configuration& from, long x, double t, Method method,
                                const QuadratureSpec& spec) {
  return leftmost_probability_sweep(from, std::span<const long>(&x, 1), t, method, spec)[0];
}

namespace {

// Exponent vectors m with |m| = l, i.e. the monomials of h_l in n variables.
void for_each_composition(int n, int l, const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> m(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int remaining) {
    if (pos == n - 1) {
      m[pos] = remaining;
      visit(m);
      return;
    }
    for (int v = remaining; v >= 0; --v) {
      m[pos] = v;
      rec(pos + 1, remaining - v);
    }
  };
  rec(0, l);
}

}  // namespace

std::vector<Evaluation> leftmost_probability_shifted_step_sweep(int l, int n, std::span<const long> xs, double t,
                                                                Method method, const QuadratureSpec& spec) {
  require_time(t);
  if (n < 1) throw DomainError("need at least one particle");
  if (l < 0) throw DomainError("shift l must be nonnegative");
  const double prefactor = sign_of(n * (n - 1) / 2) / static_cast<double>(factorial(n));

  if (method == Method::expansion || method == Method::residue) {
    if (n > kMaxExpansionParticles) throw SizeError("double permutation expansion is limited to N <= 6");
    // (xi - 1)^{-(N-1)} = (-1)^{N-1} (1 - xi)^{-(N-1)} in every variable; the
    // N signs multiply to (-1)^{N(N-1)} = 1.
    const auto perms = enumerate_permutations(n, kMaxExpansionParticles);
    std::vector<Evaluation> out;
    for (long x : xs) {
      if (x < 1) {
        out.push_back({0.0, 0.0, Method::expansion, 0});
        continue;
      }
      const long base = x - n - l - 1;
      const ResidueTable table(t, static_cast<int>(base), static_cast<int>(base + l + 2 * (n - 1)), -(n - 1),
                               -(n - 1));
      CompensatedSum<long double> sum;
      for_each_composition(n, l, [&](std::span<const int> m) {
        for (const auto& sigma : perms)
          for (const auto& tau : perms) {
            long double term = sigma.sign() * tau.sign();
            for (int i = 1; i <= n; ++i) {
              term *= table(static_cast<int>(base + m[i - 1] + sigma(i) - 1 + tau(i) - 1), -(n - 1));
              if (term == 0) break;
            }
            sum.add(term);
          }
      });
      out.push_back({clean(prefactor * sum.value()), 0.0, Method::expansion, 0});
    }
    return out;
  }
  if (method != Method::quadrature) throw DomainError("shifted step supports expansion or quadrature");

  const auto base = [&](std::span<const Complex> xi) {
    // h_l by the recurrence h_j(x_1..x_i) = h_j(x_1..x_{i-1}) + x_i h_{j-1}(x_1..x_i).
    std::vector<Complex> h(static_cast<std::size_t>(l) + 1, Complex{});
    h[0] = 1.0;
    for (const Complex& v : xi)
      for (int j = 1; j <= l; ++j) h[j] += v * h[j - 1];
    const Complex vdm = vandermonde(xi);
    Complex value = prefactor * h[l] * vdm * vdm;
    for (const Complex& v : xi)
      value *= ScalarTraits<Complex>::pow(v - 1.0, -(n - 1)) * ScalarTraits<Complex>::pow(v, -n - l - 1);
    return value * energy_factor(xi, t);
  };
  return sweep_quadrature(base, n, xs, 1, t, spec);
}

Evaluation leftmost_probability_shifted_step(int l, int n, long x, double t, Method method,
                                             const QuadratureSpec& spec) {
  return leftmost_probability_shifted_step_sweep(l, n, std::span<const long>(&x, 1), t, method, spec)[0];
}

Evaluation leftmost_probability_step_det(int n, long x, double t) {
  require_time(t);
  if (n < 1) throw DomainError("need at least one particle");
  if (x < 1) return {0.0, 0.0, Method::determinant, 0};
  using Matrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix m(n, n);
  const long double entry_sign = sign_of(n - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m(i, j) = entry_sign * residue_value_extended({static_cast<int>(i + j + x - n - 1), -(n - 1), t});
  const long double det = m.fullPivLu().determinant();
  return {clean(sign_of(n * (n - 1) / 2) * det), 0.0, Method::determinant, 0};
}

std::vector<Evaluation> tasep_leftmost_probability_sweep(const Configuration& from, std::span<const long> xs, double t,
                                                         Method method, const QuadratureSpec& spec) {
  from.validate();
  require_time(t);
  if (!from.single_species()) throw DomainError("single-species formula needs identical species labels");
  const int n = from.size();
  if (method == Method::residue) {
    if (n > kMaxResidueParticles) throw SizeError("permutation sums are limited to N <= 8");
    std::vector<Evaluation> out;
    for (long x : xs) {
      // (1 - xi_1...xi_N) splits into the plain sum minus every exponent shifted by one.
      const long double v = x < from.positions[0] ? 0.0L
                                                  : vandermonde_residue_sum(from, x, t, 0, 0) -
                                                        vandermonde_residue_sum(from, x, t, 0, 1);
      out.push_back({clean(v), 0.0, method, 0});
    }
    return out;
  }
  if (method != Method::quadrature) throw DomainError("single-species formula supports residue or quadrature");
  const auto base = [&](std::span<const Complex> xi) {
    Complex product{1.0, 0.0};
    for (const Complex& v : xi) product *= v;
    return (1.0 - product) * ordered_base(xi, from, t);
  };
  return sweep_quadrature(base, n, xs, from.positions[0], t, spec);
}

Evaluation tasep_leftmost_probability(const Configuration& from, long x, double t, Method method,
                                      const QuadratureSpec& spec) {
  return tasep_leftmost_probability_sweep(from, std::span<const long>(&x, 1), t, method, spec)[0];
}

// ---------------------------------------------------------------------------
// Conservation and summation checks

namespace {

// All X with lower[i] <= x_i, strictly increasing, x_1 == first (if set), and
// x_N <= top.
std::vector<std::vector<long>> windowed_positions(std::span<const long> lower, long top, const long* first) {
  const int n = static_cast<int>(lower.size());
  std::vector<std::vector<long>> out;
  std::vector<long> x(static_cast<std::size_t>(n));
  std::function<void(int, long)> rec = [&](int i, long min_value) {
    if (i == n) {
      out.push_back(x);
      return;
    }
    const long lo = std::max(min_value, lower[i]);
    // Leave room for the particles to the right.
    const long hi = top - (n - 1 - i);
    if (i == 0 && first) {
      if (*first < lo || *first > hi) return;
      x[0] = *first;
      rec(1, *first + 1);
      return;
    }
    for (long v = lo; v <= hi; ++v) {
      x[i] = v;
      rec(i + 1, v + 1);
    }
  };
  rec(0, lower.empty() ? 0 : lower[0]);
  return out;
}

}  // namespace

MassCheck probability_mass_check(const Configuration& from, double t, long window, const QuadratureSpec& spec) {
  from.validate();
  require_time(t);
  const int n = from.size();
  if (n > 3) throw SizeError("mass check is limited to N <= 3");
  if (window < 0) throw DomainError("window must be nonnegative");
  MassCheck check;
  check.window = window;
  check.tail_bound = poisson_tail(t, window);
  check.window_too_small = check.tail_bound > 1e-8;
  if (t == 0.0) {
    check.total = 1.0;
    check.configurations = 1;
    return check;
  }
  const long top = from.positions.back() + window;
  TransitionBatch batch{&from, windowed_positions(from.positions, top, nullptr), {}, t};
  for (std::size_t row = 0; row < (std::size_t{1} << n); ++row)
    if (same_species_content(species_word(row, n), from.species)) batch.rows.push_back(row);
  const auto r = multi_contour_vector(std::cref(batch), n, batch.outputs(), spec);
  std::vector<long double> values;
  values.reserve(r.values.size());
  for (const auto& v : r.values) values.push_back(v.real());
  check.total = static_cast<double>(pairwise_sum(values));
  check.configurations = batch.outputs();
  check.quadrature_delta = r.delta;
  return check;
}

SummationCheck summed_head_probability(const Configuration& from, long x, double t, long window) {
  check_head_initial(from);
  require_time(t);
  if (window < 0) throw DomainError("window must be nonnegative");
  const int n = from.size();
  SummationCheck check;
  const long top = x + window;
  check.tail_bound = poisson_tail(t, top - from.positions.back());
  const auto targets = windowed_positions(from.positions, top, &x);
  std::vector<long double> values(targets.size());
  parallel_for(targets.size(), [&](std::size_t i) {
    const auto to = Configuration::make(targets[i], head_word(n));
    values[i] = head_transition_probability(from, to, t).value;
  });
  check.summed = static_cast<double>(pairwise_sum(values));
  check.configurations = static_cast<int>(targets.size());
  return check;
}

}  // namespace tasep
