#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tasep/permutation.hpp"
#include "tasep/scalar.hpp"

namespace tasep {

/// Both sides of a rational identity evaluated exactly.
struct IdentityCheck {
  Rational lhs;
  Rational rhs;
  bool equal() const { return lhs == rhs; }
};

inline constexpr int kMaxPointDenominator = 1000;

/// Pairwise distinct rationals in (0, 1) with denominators <= 1000.
std::vector<Rational> random_rational_point(std::mt19937_64& rng, int n);

/// xi_i -> 1 / xi_{N-i+1}.
std::vector<Rational> reciprocal_reversal(std::span<const Rational> xi);

/// sum_sigma [A_sigma] xi_{s(2)} xi_{s(3)}^2 ... / prod_k (1 - xi_{s(k)}...xi_{s(N)})
///   = (1 - xi_1) prod_{i<j} (xi_j - xi_i)/(1 - xi_i) prod_i 1/(1 - xi_i).
IdentityCheck main_identity(std::span<const Rational> xi);

enum class EquivalentVariant {
  a,  // (1 - xi)-power form, right side prod (1 - xi_i)^{-(N-1)} times Vandermonde
  b,  // reciprocal form, right side prod (xi_i - 1)^{-(N-1)} times Vandermonde
};
IdentityCheck equivalent_identity(std::span<const Rational> xi, EquivalentVariant variant);

enum class TasepVariant {
  amplitude,    // single-species amplitudes times the geometric factors
  sign,         // the same with amplitudes reduced to signs and (1 - xi) powers
  substituted,  // the reciprocal form used to prove variant b
};
IdentityCheck tasep_identity(std::span<const Rational> xi, TasepVariant variant);

/// Variant a at reciprocal_reversal(xi) against variant b at xi, side by side:
/// lhs compares the two left sides, rhs the two right sides.
bool substitution_maps_a_to_b(std::span<const Rational> xi);
/// Same for the TASEP sign form and its substituted form.
bool substitution_maps_tasep(std::span<const Rational> xi);

/// sum_alpha (-1)^{N+alpha} (xi_alpha - 1)^{N-1} prod_{i<j; i,j != alpha}(xi_j - xi_i)
/// against prod_{i<j} (xi_j - xi_i).
IdentityCheck vandermonde_cofactor(std::span<const Rational> xi);

/// Determinant of the power matrix with column exponents N-1+l, N-2+k_2, ...,
/// k_N (k holds k_2..k_N, 0 <= k_i <= i-2) against its predicted value: zero
/// when some k_i != 0 (i >= 3), else h_l prod_{i<j}(xi_i - xi_j).
IdentityCheck det_collapse(std::span<const Rational> xi, int l, std::span<const int> k);

/// Complete homogeneous symmetric polynomial h_l.
Rational complete_symmetric(std::span<const Rational> xi, int l);

/// Exact determinant by fraction-exact Gaussian elimination.
Rational exact_determinant(std::vector<std::vector<Rational>> m);

/// [A_sigma] from the matrix product against the closed form.
bool closed_form_vs_product(std::span<const Rational> xi, const Permutation& sigma);
/// The same for every sigma in S_N at once (head column only).
bool closed_form_all(std::span<const Rational> xi);

enum class Identity { main, equiv_a, equiv_b, tasep, vandermonde, det_collapse, amplitude, braid };

std::string to_string(Identity id);
Identity parse_identity(std::string_view name);
std::vector<Identity> all_identities();
/// Largest N supported by the suite for this identity.
int max_particles(Identity id);

struct SuiteResult {
  Identity identity;
  int n = 0;
  int points = 0;
  int failures = 0;
  int resamples = 0;
  /// Bound on the total degree of the polynomial left after clearing denominators.
  int degree_bound = 0;
  bool pass() const { return failures == 0 && points > 0; }
};

/// Tests `points` random rational points (per-point streams derived from
/// `seed`) in parallel. Degenerate points are redrawn.
SuiteResult run_identity_suite(Identity id, int n, int points, std::uint64_t seed);

int degree_bound(Identity id, int n);

}  // namespace tasep
