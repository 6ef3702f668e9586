#include "tasep/identities.hpp"

#include <algorithm>
#include <stdexcept>

#include "tasep/bethe.hpp"
#include "tasep/errors.hpp"
#include "tasep/parallel.hpp"

namespace tasep {

namespace {

using Traits = ScalarTraits<Rational>;

const Rational kOne(1);

Rational checked_inverse(const Rational& v) {
  if (sgn(v) == 0) throw DegeneratePointError("vanishing denominator at the evaluation point");
  return kOne / v;
}

Rational ascending_vandermonde(std::span<const Rational> xi) {
  Rational v(1);
  for (std::size_t i = 0; i < xi.size(); ++i)
    for (std::size_t j = i + 1; j < xi.size(); ++j) v *= xi[j] - xi[i];
  return v;
}

Rational product(std::span<const Rational> xi) {
  Rational p(1);
  for (const auto& v : xi) p *= v;
  return p;
}

Rational sign_of(const Permutation& sigma) { return Rational(sigma.sign()); }

void require_point(std::span<const Rational> xi, int min_n) {
  if (static_cast<int>(xi.size()) < min_n) throw DomainError("identity needs more variables");
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] == kOne) throw DegeneratePointError("component equal to 1");
    for (std::size_t j = i + 1; j < xi.size(); ++j)
      if (xi[i] == xi[j]) throw DegeneratePointError("repeated component");
  }
}

// xi_{s(2)} xi_{s(3)}^2 ... xi_{s(N)}^{N-1} / prod_{k=2}^N (1 - xi_{s(k)}...xi_{s(N)}).
Rational tail_geometric(std::span<const Rational> xi, const Permutation& s) {
  const int n = s.size();
  Rational num(1), den(1), tail(1);
  for (int k = n; k >= 2; --k) {
    num *= Traits::pow(xi[s(k) - 1], k - 1);
    tail *= xi[s(k) - 1];
    den *= kOne - tail;
  }
  return num * checked_inverse(den);
}

// xi_{s(N-m)} ... xi_{s(1)}^{N-m} / prod_{k=1}^{N-1} (xi_{s(1)}...xi_{s(k)} - 1), with the
// numerator running over p = 1..N-m (exponent N-m+1-p).
Rational head_geometric(std::span<const Rational> xi, const Permutation& s, int m) {
  const int n = s.size();
  Rational num(1), den(1), head(1);
  for (int p = 1; p <= n - m; ++p) num *= Traits::pow(xi[s(p) - 1], n - m + 1 - p);
  for (int k = 1; k <= n - 1; ++k) {
    head *= xi[s(k) - 1];
    den *= head - kOne;
  }
  return num * checked_inverse(den);
}

Rational inverse_power(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  return Traits::pow(checked_inverse(base), e);
}

Rational equivalent_a_lhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational sum(0);
  for (const auto& s : enumerate_permutations(n)) {
    Rational term = sign_of(s) * tail_geometric(xi, s);
    for (int p = 3; p <= n; ++p) term *= inverse_power(kOne - xi[s(p) - 1], p - 2);
    sum += term;
  }
  return sum;
}

Rational equivalent_b_lhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational sum(0);
  for (const auto& s : enumerate_permutations(n)) {
    Rational term = sign_of(s) * head_geometric(xi, s, 2);
    for (int p = 1; p <= n - 2; ++p) term *= inverse_power(xi[s(p) - 1] - kOne, n - 1 - p);
    sum += term;
  }
  return sum;
}

Rational equivalent_a_rhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational v = ascending_vandermonde(xi);
  for (const auto& x : xi) v *= inverse_power(kOne - x, n - 1);
  return v;
}

Rational equivalent_b_rhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational v = ascending_vandermonde(xi);
  for (const auto& x : xi) v *= inverse_power(x - kOne, n - 1);
  return v;
}

Rational tasep_sign_lhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational sum(0);
  for (const auto& s : enumerate_permutations(n)) {
    Rational term = sign_of(s) * tail_geometric(xi, s);
    for (int p = 2; p <= n; ++p) term *= inverse_power(kOne - xi[s(p) - 1], p - 1);
    sum += term;
  }
  return sum;
}

Rational tasep_sign_rhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational v = (kOne - product(xi)) * ascending_vandermonde(xi);
  for (const auto& x : xi) v *= inverse_power(kOne - x, n);
  return v;
}

Rational tasep_substituted_lhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational sum(0);
  for (const auto& s : enumerate_permutations(n)) {
    Rational term = sign_of(s) * head_geometric(xi, s, 1);
    for (int p = 1; p <= n - 1; ++p) term *= inverse_power(xi[s(p) - 1] - kOne, n - p);
    sum += term;
  }
  return sum;
}

Rational tasep_substituted_rhs(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  Rational v = (product(xi) - kOne) * ascending_vandermonde(xi);
  for (const auto& x : xi) v *= inverse_power(x - kOne, n);
  return v;
}

}  // namespace

std::vector<Rational> random_rational_point(std::mt19937_64& rng, int n) {
  if (n < 1) throw DomainError("point needs at least one component");
  std::uniform_int_distribution<long> den_dist(2, kMaxPointDenominator);
  std::vector<Rational> xi;
  while (static_cast<int>(xi.size()) < n) {
    const long den = den_dist(rng);
    std::uniform_int_distribution<long> num_dist(1, den - 1);
    Rational q(num_dist(rng), den);
    q.canonicalize();
    if (std::find(xi.begin(), xi.end(), q) == xi.end()) xi.push_back(q);
  }
  return xi;
}

std::vector<Rational> reciprocal_reversal(std::span<const Rational> xi) {
  std::vector<Rational> out;
  out.reserve(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) out.push_back(checked_inverse(xi[xi.size() - 1 - i]));
  return out;
}

IdentityCheck main_identity(std::span<const Rational> xi) {
  require_point(xi, 2);
  const int n = static_cast<int>(xi.size());
  Rational lhs(0);
  for (const auto& s : enumerate_permutations(n)) lhs += amplitude_center(s, xi) * tail_geometric(xi, s);
  Rational rhs = kOne - xi[0];
  for (int i = 0; i < n; ++i) {
    rhs *= checked_inverse(kOne - xi[i]);
    for (int j = i + 1; j < n; ++j) rhs *= (xi[j] - xi[i]) * checked_inverse(kOne - xi[i]);
  }
  return {lhs, rhs};
}

IdentityCheck equivalent_identity(std::span<const Rational> xi, EquivalentVariant variant) {
  require_point(xi, 2);
  if (variant == EquivalentVariant::a) return {equivalent_a_lhs(xi), equivalent_a_rhs(xi)};
  return {equivalent_b_lhs(xi), equivalent_b_rhs(xi)};
}

IdentityCheck tasep_identity(std::span<const Rational> xi, TasepVariant variant) {
  require_point(xi, 2);
  const int n = static_cast<int>(xi.size());
  switch (variant) {
    case TasepVariant::amplitude: {
      Rational lhs(0);
      for (const auto& s : enumerate_permutations(n)) {
        Rational a = sign_of(s);
        for (int p = 2; p <= n; ++p)
          a *= Traits::pow((kOne - xi[p - 1]) * checked_inverse(kOne - xi[s(p) - 1]), p - 1);
        lhs += a * tail_geometric(xi, s);
      }
      Rational rhs = kOne - product(xi);
      for (int i = 0; i < n; ++i) {
        rhs *= checked_inverse(kOne - xi[i]);
        for (int j = i + 1; j < n; ++j) rhs *= (xi[j] - xi[i]) * checked_inverse(kOne - xi[i]);
      }
      return {lhs, rhs};
    }
    case TasepVariant::sign: return {tasep_sign_lhs(xi), tasep_sign_rhs(xi)};
    case TasepVariant::substituted: return {tasep_substituted_lhs(xi), tasep_substituted_rhs(xi)};
  }
  throw DomainError("unknown variant");
}

bool substitution_maps_a_to_b(std::span<const Rational> xi) {
  require_point(xi, 2);
  const auto sub = reciprocal_reversal(xi);
  return equivalent_a_lhs(sub) == equivalent_b_lhs(xi) && equivalent_a_rhs(sub) == equivalent_b_rhs(xi);
}

bool substitution_maps_tasep(std::span<const Rational> xi) {
  require_point(xi, 2);
  const auto sub = reciprocal_reversal(xi);
  return tasep_sign_lhs(sub) == tasep_substituted_lhs(xi) && tasep_sign_rhs(sub) == tasep_substituted_rhs(xi);
}

IdentityCheck vandermonde_cofactor(std::span<const Rational> xi) {
  require_point(xi, 2);
  const int n = static_cast<int>(xi.size());
  Rational lhs(0);
  for (int alpha = 1; alpha <= n; ++alpha) {
    Rational term = Traits::pow(xi[alpha - 1] - kOne, n - 1);
    if ((n + alpha) % 2 != 0) term = -term;
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j)
        if (i != alpha && j != alpha) term *= xi[j - 1] - xi[i - 1];
    lhs += term;
  }
  return {lhs, ascending_vandermonde(xi)};
}

Rational complete_symmetric(std::span<const Rational> xi, int l) {
  if (l < 0) return Rational(0);
  std::vector<Rational> h(static_cast<std::size_t>(l) + 1, Rational(0));
  h[0] = 1;
  for (const auto& v : xi)
    for (int j = 1; j <= l; ++j) h[j] += v * h[j - 1];
  return h[l];
}

Rational exact_determinant(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(m[pivot][col]) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(m[r][col]) == 0) continue;
      const Rational factor = m[r][col] / m[col][col];
      for (std::size_t c = col; c < n; ++c) m[r][c] -= factor * m[col][c];
    }
  }
  return det;
}

IdentityCheck det_collapse(std::span<const Rational> xi, int l, std::span<const int> k) {
  require_point(xi, 2);
  const int n = static_cast<int>(xi.size());
  if (l < 0) throw DomainError("degree l must be nonnegative");
  if (static_cast<int>(k.size()) != n - 1) throw DomainError("exponent pattern needs k_2..k_N");
  bool any_nonzero = false;
  for (int i = 2; i <= n; ++i) {
    const int ki = k[i - 2];
    if (ki < 0 || ki > i - 2) throw DomainError("exponent pattern needs 0 <= k_i <= i-2");
    if (ki != 0) any_nonzero = true;
  }
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  for (int r = 0; r < n; ++r) {
    m[r][0] = Traits::pow(xi[r], n - 1 + l);
    for (int c = 2; c <= n; ++c) m[r][c - 1] = Traits::pow(xi[r], n - c + k[c - 2]);
  }
  Rational predicted(0);
  if (!any_nonzero) {
    predicted = complete_symmetric(xi, l);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) predicted *= xi[i] - xi[j];
  }
  return {exact_determinant(std::move(m)), predicted};
}

bool closed_form_vs_product(std::span<const Rational> xi, const Permutation& sigma) {
  const int n = sigma.size();
  const std::size_t h = head_index(n);
  return amplitude<Rational>(sigma, xi)(h, h) == amplitude_center(sigma, xi);
}

bool closed_form_all(std::span<const Rational> xi) {
  const int n = static_cast<int>(xi.size());
  require_spectral_point(xi);
  const std::size_t h = head_index(n);
  const auto columns = amplitude_columns<Rational>(n, xi, h);
  for (const auto& s : enumerate_permutations(n))
    if (columns[s.rank()][h] != amplitude_center(s, xi)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Suites

std::string to_string(Identity id) {
  switch (id) {
    case Identity::main: return "main";
    case Identity::equiv_a: return "equivA";
    case Identity::equiv_b: return "equivB";
    case Identity::tasep: return "tasep";
    case Identity::vandermonde: return "vandermonde";
    case Identity::det_collapse: return "detcollapse";
    case Identity::amplitude: return "amplitude";
    case Identity::braid: return "braid";
  }
  return "unknown";
}

Identity parse_identity(std::string_view name) {
  for (Identity id : all_identities())
    if (to_string(id) == name) return id;
  throw DomainError("unknown identity '" + std::string(name) + "'");
}

std::vector<Identity> all_identities() {
  return {Identity::main,        Identity::equiv_a,      Identity::equiv_b,   Identity::tasep,
          Identity::vandermonde, Identity::det_collapse, Identity::amplitude, Identity::braid};
}

int max_particles(Identity id) {
  switch (id) {
    case Identity::braid: return 5;
    case Identity::amplitude: return 6;
    case Identity::vandermonde:
    case Identity::det_collapse: return 8;
    default: return 6;
  }
}

int degree_bound(Identity id, int n) {
  const int pairs = n * (n - 1) / 2;
  switch (id) {
    case Identity::main:
    case Identity::equiv_a:
    case Identity::equiv_b:
    case Identity::tasep:
      // Common denominator: one factor (1 - prod_S xi) per proper subset S
      // plus the (1 - xi_i) powers; numerator monomials and Vandermonde.
      return n * ((1 << (n - 1)) - 1) + n * n + n + 2 * pairs;
    case Identity::vandermonde: return pairs;
    case Identity::det_collapse: return pairs + 3 + (n - 1) * (n - 2) / 2 + n * (n - 1);
    case Identity::amplitude: return 2 * pairs;
    case Identity::braid: return 6;
  }
  return 0;
}

namespace {

inline constexpr int kMaxResamples = 50;

// Draws an exponent pattern: all zero or, when N >= 3, at least one k_i != 0 for i >= 3.
std::vector<int> random_pattern(std::mt19937_64& rng, int n, bool zero) {
  std::vector<int> k(static_cast<std::size_t>(n - 1), 0);
  if (zero || n < 3) return k;
  for (int i = 3; i <= n; ++i) k[i - 2] = std::uniform_int_distribution<int>(0, i - 2)(rng);
  if (std::all_of(k.begin(), k.end(), [](int v) { return v == 0; })) {
    const int i = std::uniform_int_distribution<int>(3, n)(rng);
    k[i - 2] = std::uniform_int_distribution<int>(1, i - 2)(rng);
  }
  return k;
}

bool check_point(Identity id, std::span<const Rational> xi, std::mt19937_64& rng, std::size_t point_index) {
  switch (id) {
    case Identity::main: return main_identity(xi).equal();
    case Identity::equiv_a: return equivalent_identity(xi, EquivalentVariant::a).equal();
    case Identity::equiv_b:
      return equivalent_identity(xi, EquivalentVariant::b).equal() && substitution_maps_a_to_b(xi);
    case Identity::tasep:
      return tasep_identity(xi, TasepVariant::amplitude).equal() && tasep_identity(xi, TasepVariant::sign).equal() &&
             tasep_identity(xi, TasepVariant::substituted).equal() && substitution_maps_tasep(xi);
    case Identity::vandermonde: return vandermonde_cofactor(xi).equal();
    case Identity::det_collapse: {
      const int n = static_cast<int>(xi.size());
      const int l = std::uniform_int_distribution<int>(0, 3)(rng);
      // Alternate between the two parts of the lemma.
      const auto k = random_pattern(rng, n, point_index % 2 == 0);
      return det_collapse(xi, l, k).equal();
    }
    case Identity::amplitude: return closed_form_all(xi);
    case Identity::braid: return braid_check<Rational>(xi).all();
  }
  return false;
}

}  // namespace

SuiteResult run_identity_suite(Identity id, int n, int points, std::uint64_t seed) {
  if (n < 2 || n > max_particles(id))
    throw SizeError("identity '" + to_string(id) + "' supports N in 2.." + std::to_string(max_particles(id)));
  if (points < 1) throw DomainError("need at least one point");
  SuiteResult result{id, n, points, 0, 0, degree_bound(id, n)};
  std::vector<int> failed(static_cast<std::size_t>(points), 0);
  std::vector<int> redraws(static_cast<std::size_t>(points), 0);
  const std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(id) * 64 + static_cast<std::uint64_t>(n));
  parallel_for(static_cast<std::size_t>(points), [&](std::size_t p) {
    std::mt19937_64 rng(mix_seed(stream, p));
    for (int attempt = 0;; ++attempt) {
      try {
        const auto xi = random_rational_point(rng, n);
        failed[p] = check_point(id, xi, rng, p) ? 0 : 1;
        return;
      } catch (const DegeneratePointError&) {
        if (attempt >= kMaxResamples) throw;
        ++redraws[p];
      } catch (const PoleError&) {
        if (attempt >= kMaxResamples) throw;
        ++redraws[p];
      }
    }
  });
  for (int p = 0; p < points; ++p) {
    result.failures += failed[p];
    result.resamples += redraws[p];
  }
  return result;
}

}  // namespace tasep
