#pragma once

#include <span>
#include <string>
#include <vector>
#include <string_view>

#include "tasep/configuration.hpp"
#include "tasep/contour.hpp"

namespace tasep {

enum class Method {
  residue,      // separable residue series summed over permutations
  quadrature,   // tensor trapezoidal rule on the N-fold contour integral
  determinant,  // N x N determinant of one-dimensional residues (step data)
  expansion,    // double permutation / monomial expansion (shifted step data)
};

std::string to_string(Method m);
Method parse_method(std::string_view name);

inline constexpr int kMaxResidueParticles = 8;
inline constexpr int kMaxExpansionParticles = 6;
inline constexpr int kMaxTransitionQuadratureParticles = 4;

struct Evaluation {
  double value = 0.0;
  double error_estimate = 0.0;
  Method method = Method::residue;
  int quadrature_points = 0;  // nodes per circle, quadrature only
};

/// P_{(Y, nu)}(X, pi; t): entry (pi, nu) of the N-fold contour integral of
/// sum_sigma A_sigma prod_i xi_{sigma(i)}^{x_i - y_{sigma(i)} - 1} e^{eps(xi_i) t}.
/// Quadrature works for any species words (N <= 4); the residue method is
/// available when both words are 21...1 and delegates to the closed form.
/// Returns an exact indicator at t = 0.
Evaluation transition_probability(const Configuration& from, const Configuration& to, double t, Method method,
                                  const QuadratureSpec& spec = {});

/// P_{(Y, 21..1)}(X, 21..1; t) from the closed-form center amplitude: an N!
/// sum of products of one-dimensional residues.
Evaluation head_transition_probability(const Configuration& from, const Configuration& to, double t);

/// Probability that at time t the first class particle, initially leftmost,
/// is at x and still leftmost. `from` must carry the word 21...1.
Evaluation leftmost_probability(const Configuration& from, long x, double t, Method method,
                                const QuadratureSpec& spec = {});

/// Several positions at once; quadrature shares one node grid.
std::vector<Evaluation> leftmost_probability_sweep(const Configuration& from, std::span<const long> xs, double t,
                                                   Method method, const QuadratureSpec& spec = {});

/// Shifted step data y = (1, 2 + l, ..., N + l); residue-free quadrature of
/// the h_l-weighted squared-Vandermonde integrand or its exact expansion.
Evaluation leftmost_probability_shifted_step(int l, int n, long x, double t, Method method,
                                             const QuadratureSpec& spec = {});

std::vector<Evaluation> leftmost_probability_shifted_step_sweep(int l, int n, std::span<const long> xs, double t,
                                                                Method method, const QuadratureSpec& spec = {});

/// Step data as (-1)^{N(N-1)/2} det[ \oint xi^{i+j+x-N-1} (xi-1)^{-(N-1)} e^{(1/xi-1)t} ].
Evaluation leftmost_probability_step_det(int n, long x, double t);

/// Single-species companion: the leftmost particle of an ordinary TASEP is at x.
Evaluation tasep_leftmost_probability(const Configuration& from, long x, double t, Method method,
                                      const QuadratureSpec& spec = {});

std::vector<Evaluation> tasep_leftmost_probability_sweep(const Configuration& from, std::span<const long> xs, double t,
                                                         Method method, const QuadratureSpec& spec = {});

struct MassCheck {
  double total = 0.0;
  double tail_bound = 0.0;  // probability mass outside the window
  long window = 0;
  int configurations = 0;
  bool window_too_small = false;
  double quadrature_delta = 0.0;
};

/// Sums transition probabilities over every reachable (X, pi) with
/// y_i <= x_i and x_N <= y_N + window. Since x_N(t) - y_N is Poisson(t), the
/// neglected mass is exactly a Poisson tail.
MassCheck probability_mass_check(const Configuration& from, double t, long window, const QuadratureSpec& spec = {});

struct SummationCheck {
  double summed = 0.0;
  double tail_bound = 0.0;
  int configurations = 0;
};

/// Sum of head_transition_probability over x = x_1 < x_2 < ... < x_N <= x + window.
SummationCheck summed_head_probability(const Configuration& from, long x, double t, long window);

/// P(Poisson(t) > k).
double poisson_tail(double t, long k);

/// e^{-t} t^k / k!.
double poisson_mass(double t, long k);

}  // namespace tasep
