#pragma once

// Scattering matrices, tensor-embedded exchange operators and the Bethe
// amplitude matrices A_sigma for the two-species TASEP.
//
// Species words index rows and columns in reverse lexicographic order
// (11, 12, 21, 22 for two particles): particle p (1-based, counted from the
// left) occupies bit N-p of the index, species 2 sets the bit. The word
// 21...1 therefore sits at 0-based index 2^{N-1}.

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tasep/errors.hpp"
#include "tasep/permutation.hpp"
#include "tasep/scalar.hpp"

namespace tasep {

inline constexpr int kMaxAmplitudeParticles = 10;

/// Row/column index of a species word (entries 1 or 2).
std::size_t species_index(std::span<const int> word);
std::vector<int> species_word(std::size_t index, int n);
inline std::size_t head_index(int n) { return std::size_t{1} << (n - 1); }

template <class S>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, ScalarTraits<S>::zero()) {}

  static DenseMatrix identity(std::size_t dim) {
    DenseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = ScalarTraits<S>::one();
    return m;
  }

  std::size_t dim() const { return dim_; }
  S& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const S& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  DenseMatrix operator*(const DenseMatrix& rhs) const {
    DenseMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t k = 0; k < dim_; ++k) {
        const S& a = (*this)(r, k);
        if (ScalarTraits<S>::is_zero(a)) continue;
        for (std::size_t c = 0; c < dim_; ++c) out(r, c) += a * rhs(k, c);
      }
    return out;
  }

  DenseMatrix operator-(const DenseMatrix& rhs) const {
    DenseMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
    return out;
  }
  DenseMatrix& operator+=(const DenseMatrix& rhs) {
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
    return *this;
  }
  DenseMatrix operator*(const S& s) const {
    DenseMatrix out(*this);
    for (auto& v : out.data_) v *= s;
    return out;
  }

  bool is_upper_triangular() const {
    for (std::size_t r = 0; r < dim_; ++r)
      for (std::size_t c = 0; c < r; ++c)
        if (!ScalarTraits<S>::is_zero((*this)(r, c))) return false;
    return true;
  }

  /// Largest entry modulus.
  typename ScalarTraits<S>::Norm max_abs() const {
    auto best = typename ScalarTraits<S>::Norm(0);
    for (const auto& v : data_) best = std::max(best, typename ScalarTraits<S>::Norm(ScalarTraits<S>::abs(v)));
    return best;
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.dim_ == b.dim_ && a.data_ == b.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<S> data_;
};

/// The diagonal scalar S_{beta alpha} = -(1 - xi_beta) / (1 - xi_alpha).
template <class S>
S s_scalar(const S& xi_alpha, const S& xi_beta) {
  const S denom = ScalarTraits<S>::one() - xi_alpha;
  if (ScalarTraits<S>::is_zero(denom)) throw PoleError("scattering matrix pole: xi_alpha = 1");
  return -(ScalarTraits<S>::one() - xi_beta) / denom;
}

/// The 4x4 scattering matrix S_{beta alpha} on two adjacent species slots.
template <class S>
DenseMatrix<S> s_matrix(const S& xi_alpha, const S& xi_beta) {
  const S s = s_scalar(xi_alpha, xi_beta);
  DenseMatrix<S> m(4);
  m(0, 0) = s;
  m(1, 1) = s;
  m(2, 2) = -ScalarTraits<S>::one();
  m(3, 3) = s;
  m(1, 2) = (xi_beta - xi_alpha) / (ScalarTraits<S>::one() - xi_alpha);
  return m;
}

/// Boundary matrix B relating U(x, x) to U(x, x + 1) for a colliding pair.
template <class S>
DenseMatrix<S> b_matrix() {
  DenseMatrix<S> b(4);
  b(0, 0) = ScalarTraits<S>::one();
  b(1, 1) = ScalarTraits<S>::one();
  b(1, 2) = ScalarTraits<S>::one();
  b(3, 3) = ScalarTraits<S>::one();
  return b;
}

/// A 4x4 block acting on slots (l, l+1) of an N-slot tensor product, with
/// identities elsewhere. Never densified; rows carry at most two nonzeros.
template <class S>
class SlotOperator {
 public:
  SlotOperator(int l, int n, DenseMatrix<S> block) : l_(l), n_(n), block_(std::move(block)) {
    if (n < 2 || l < 1 || l > n - 1) throw DomainError("slot index out of range");
    if (n > kMaxAmplitudeParticles) throw SizeError("tensor operator too large");
  }

  int slot() const { return l_; }
  int particles() const { return n_; }
  std::size_t dim() const { return std::size_t{1} << n_; }
  const DenseMatrix<S>& block() const { return block_; }

  /// Entry (r, c) of the full 2^N x 2^N matrix.
  S entry(std::size_t r, std::size_t c) const {
    const int shift = n_ - l_ - 1;
    const std::size_t mask = std::size_t{3} << shift;
    if ((r & ~mask) != (c & ~mask)) return ScalarTraits<S>::zero();
    return block_((r & mask) >> shift, (c & mask) >> shift);
  }

  /// this * a.
  DenseMatrix<S> apply(const DenseMatrix<S>& a) const {
    const std::size_t d = dim();
    DenseMatrix<S> out(d);
    const int shift = n_ - l_ - 1;
    const std::size_t mask = std::size_t{3} << shift;
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t local_r = (r & mask) >> shift;
      const std::size_t base = r & ~mask;
      for (std::size_t local_c = 0; local_c < 4; ++local_c) {
        const S& w = block_(local_r, local_c);
        if (ScalarTraits<S>::is_zero(w)) continue;
        const std::size_t k = base | (local_c << shift);
        for (std::size_t c = 0; c < d; ++c) {
          const S& v = a(k, c);
          if (!ScalarTraits<S>::is_zero(v)) out(r, c) += w * v;
        }
      }
    }
    return out;
  }

  /// this * v for a column vector.
  std::vector<S> apply(std::span<const S> v) const {
    const std::size_t d = dim();
    std::vector<S> out(d, ScalarTraits<S>::zero());
    const int shift = n_ - l_ - 1;
    const std::size_t mask = std::size_t{3} << shift;
    for (std::size_t r = 0; r < d; ++r) {
      const std::size_t local_r = (r & mask) >> shift;
      const std::size_t base = r & ~mask;
      for (std::size_t local_c = 0; local_c < 4; ++local_c) {
        const S& w = block_(local_r, local_c);
        if (ScalarTraits<S>::is_zero(w)) continue;
        out[r] += w * v[base | (local_c << shift)];
      }
    }
    return out;
  }

  DenseMatrix<S> to_dense() const {
    const std::size_t d = dim();
    DenseMatrix<S> m(d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m(r, c) = entry(r, c);
    return m;
  }

 private:
  int l_;
  int n_;
  DenseMatrix<S> block_;
};

/// T_l(alpha, beta) = I^{(l-1)} (x) S_{beta alpha} (x) I^{(N-l-1)}.
template <class S>
SlotOperator<S> t_operator(int l, const S& xi_alpha, const S& xi_beta, int n) {
  return SlotOperator<S>(l, n, s_matrix(xi_alpha, xi_beta));
}

/// I^{(i-1)} (x) B (x) I^{(N-i-1)}.
template <class S>
SlotOperator<S> boundary_operator(int i, int n) {
  return SlotOperator<S>(i, n, b_matrix<S>());
}

template <class S>
void require_spectral_point(std::span<const S> xi) {
  for (const S& v : xi) {
    if (ScalarTraits<S>::is_zero(v)) throw DomainError("spectral parameter must be nonzero");
    if (ScalarTraits<S>::is_zero(v - ScalarTraits<S>::one()))
      throw PoleError("spectral parameter equals the pole at 1");
  }
}

/// A_sigma = T_{a_n}...T_{a_1} along the given word. Each factor exchanges the
/// labels (alpha, beta) currently at positions (a_i, a_i + 1), found by
/// replaying the word on the identity.
template <class S>
DenseMatrix<S> amplitude_from_word(int n, std::span<const int> word, std::span<const S> xi) {
  if (static_cast<int>(xi.size()) != n) throw DomainError("spectral point has wrong length");
  if (n > kMaxAmplitudeParticles) throw SizeError("amplitude matrix too large");
  require_spectral_point(xi);
  DenseMatrix<S> a = DenseMatrix<S>::identity(std::size_t{1} << n);
  Permutation current = Permutation::identity(n);
  for (int pos : word) {
    const int alpha = current(pos);
    const int beta = current(pos + 1);
    a = t_operator(pos, xi[alpha - 1], xi[beta - 1], n).apply(a);
    current = current.swap_positions(pos);
  }
  return a;
}

template <class S>
DenseMatrix<S> amplitude(const Permutation& sigma, std::span<const S> xi) {
  const auto word = sigma.adjacent_decomposition();
  return amplitude_from_word<S>(sigma.size(), word, xi);
}

namespace detail {

/// Visits every sigma in S_n once, parents (one fewer inversion) first,
/// calling step(child_rank, parent_rank, position, alpha, beta) where
/// child = T_position parent and alpha < beta are the exchanged labels.
template <class Step>
void walk_weak_order(int n, Step&& step) {
  const auto perms = enumerate_permutations(n, kMaxAmplitudeParticles);
  std::vector<const Permutation*> order;
  order.reserve(perms.size());
  for (const auto& p : perms) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const Permutation* a, const Permutation* b) { return a->inversions() < b->inversions(); });
  for (const Permutation* p : order) {
    if (p->is_identity()) continue;
    // Any descent of p identifies a parent with one fewer inversion.
    for (int i = 1; i < n; ++i) {
      if ((*p)(i) > (*p)(i + 1)) {
        const Permutation parent = p->swap_positions(i);
        step(p->rank(), parent.rank(), i, parent(i), parent(i + 1));
        break;
      }
    }
  }
}

}  // namespace detail

/// All A_sigma indexed by Permutation::rank(), each built from its parent
/// with a single operator application.
template <class S>
std::vector<DenseMatrix<S>> amplitude_table(int n, std::span<const S> xi) {
  if (static_cast<int>(xi.size()) != n) throw DomainError("spectral point has wrong length");
  require_spectral_point(xi);
  std::vector<DenseMatrix<S>> table(factorial(n));
  table[0] = DenseMatrix<S>::identity(std::size_t{1} << n);
  if (n == 1) return table;
  detail::walk_weak_order(n, [&](std::size_t child, std::size_t parent, int pos, int alpha, int beta) {
    table[child] = t_operator(pos, xi[alpha - 1], xi[beta - 1], n).apply(table[parent]);
  });
  return table;
}

/// Column `column` of every A_sigma, indexed by Permutation::rank().
template <class S>
std::vector<std::vector<S>> amplitude_columns(int n, std::span<const S> xi, std::size_t column) {
  if (static_cast<int>(xi.size()) != n) throw DomainError("spectral point has wrong length");
  const std::size_t dim = std::size_t{1} << n;
  std::vector<std::vector<S>> table(factorial(n));
  table[0].assign(dim, ScalarTraits<S>::zero());
  table[0][column] = ScalarTraits<S>::one();
  if (n == 1) return table;
  detail::walk_weak_order(n, [&](std::size_t child, std::size_t parent, int pos, int alpha, int beta) {
    table[child] = t_operator(pos, xi[alpha - 1], xi[beta - 1], n).apply(std::span<const S>(table[parent]));
  });
  return table;
}

/// Closed form of the (21...1, 21...1) entry:
/// sgn(sigma) prod_{i=0}^{N-2} ((1 - xi_{2+i}) / (1 - xi_{sigma(2+i)}))^i.
template <class S>
S amplitude_center(const Permutation& sigma, std::span<const S> xi) {
  const int n = sigma.size();
  if (static_cast<int>(xi.size()) != n) throw DomainError("spectral point has wrong length");
  S value = sigma.sign() > 0 ? ScalarTraits<S>::one() : -ScalarTraits<S>::one();
  for (int p = 3; p <= n; ++p) {
    const S denom = ScalarTraits<S>::one() - xi[sigma(p) - 1];
    if (ScalarTraits<S>::is_zero(denom)) throw PoleError("amplitude center pole");
    value *= ScalarTraits<S>::pow((ScalarTraits<S>::one() - xi[p - 1]) / denom, p - 2);
  }
  return value;
}

struct BraidReport {
  bool commuting = true;     // T_i T_j = T_j T_i, |i - j| >= 2
  bool yang_baxter = true;   // the cubic relation, |i - j| = 1
  bool inverse = true;       // T_i(beta, alpha) T_i(alpha, beta) = I
  int relations_checked = 0;
  bool all() const { return commuting && yang_baxter && inverse; }
};

template <class S>
bool matrices_match(const DenseMatrix<S>& a, const DenseMatrix<S>& b, double tol) {
  if constexpr (ScalarTraits<S>::exact) {
    (void)tol;
    return a == b;
  } else {
    return (a - b).max_abs() <= tol;
  }
}

/// Checks the braid-type relations of the T operators on every admissible
/// slot pair. Labels are drawn from the point's components: with
/// `all_labels` every ordered pair / triple of distinct labels is used,
/// otherwise one label set per slot pair (consecutive labels starting at the
/// lower slot), which keeps exact N = 5 checks cheap.
template <class S>
BraidReport braid_check(std::span<const S> xi, double tol = 1e-12, bool all_labels = false) {
  const int n = static_cast<int>(xi.size());
  require_spectral_point(xi);
  BraidReport report;
  const std::size_t dim = std::size_t{1} << n;
  const auto eye = DenseMatrix<S>::identity(dim);
  auto T = [&](int l, int a, int b) { return t_operator(l, xi[a], xi[b], n); };
  auto labels = [&](int slot, int count) {
    std::vector<std::vector<int>> sets;
    if (!all_labels) {
      std::vector<int> one;
      for (int c = 0; c < count; ++c) one.push_back((slot - 1 + c) % n);
      sets.push_back(one);
      return sets;
    }
    std::vector<int> pick(static_cast<std::size_t>(count));
    auto rec = [&](auto&& self, int depth) -> void {
      if (depth == count) {
        sets.push_back(pick);
        return;
      }
      for (int v = 0; v < n; ++v) {
        if (std::find(pick.begin(), pick.begin() + depth, v) != pick.begin() + depth) continue;
        pick[depth] = v;
        self(self, depth + 1);
      }
    };
    rec(rec, 0);
    return sets;
  };
  for (int i = 1; i < n; ++i)
    for (const auto& ab : labels(i, 2)) {
      ++report.relations_checked;
      if (!matrices_match(T(i, ab[1], ab[0]).apply(T(i, ab[0], ab[1]).to_dense()), eye, tol)) report.inverse = false;
    }
  for (int i = 1; i < n; ++i)
    for (int j : {i - 1, i + 1}) {
      if (j < 1 || j > n - 1) continue;
      for (const auto& abc : labels(std::min(i, j), 3)) {
        const int a = abc[0], b = abc[1], c = abc[2];
        ++report.relations_checked;
        const auto lhs = T(i, b, c).apply(T(j, a, c).apply(T(i, a, b).to_dense()));
        const auto rhs = T(j, a, b).apply(T(i, a, c).apply(T(j, b, c).to_dense()));
        if (!matrices_match(lhs, rhs, tol)) report.yang_baxter = false;
      }
    }
  for (int i = 1; i < n; ++i)
    for (int j = i + 2; j < n; ++j) {
      // Two disjoint label pairs.
      const int a = (i - 1) % n, b = i % n, c = (j - 1) % n, d = j % n;
      ++report.relations_checked;
      const auto lhs = T(i, a, b).apply(T(j, c, d).to_dense());
      const auto rhs = T(j, c, d).apply(T(i, a, b).to_dense());
      if (!matrices_match(lhs, rhs, tol)) report.commuting = false;
    }
  return report;
}

template <class S>
struct BetheResiduals {
  typename ScalarTraits<S>::Norm free_residual;
  std::vector<typename ScalarTraits<S>::Norm> boundary_residuals;
};

/// F(X) = sum_sigma A_sigma prod_i xi_{sigma(i)}^{x_i} from a precomputed table.
template <class S>
DenseMatrix<S> plane_wave_sum(const std::vector<DenseMatrix<S>>& table, std::span<const S> xi,
                              std::span<const long> x) {
  const int n = static_cast<int>(xi.size());
  DenseMatrix<S> f(std::size_t{1} << n);
  for (const auto& sigma : enumerate_permutations(n, kMaxAmplitudeParticles)) {
    S weight = ScalarTraits<S>::one();
    for (int i = 1; i <= n; ++i) weight *= ScalarTraits<S>::pow(xi[sigma(i) - 1], x[i - 1]);
    f += table[sigma.rank()] * weight;
  }
  return f;
}

/// Residuals of the free evolution equation at X and of the boundary
/// condition F(..x, x..) = B_i F(..x, x+1..) for each adjacent slot i, with
/// x taken as x_i.
template <class S>
BetheResiduals<S> bethe_residuals(std::span<const S> xi, std::span<const long> x) {
  const int n = static_cast<int>(xi.size());
  if (static_cast<int>(x.size()) != n) throw DomainError("position vector has wrong length");
  const auto table = amplitude_table<S>(n, xi);
  S energy = ScalarTraits<S>::zero();
  for (const S& v : xi) energy += ScalarTraits<S>::one() / v - ScalarTraits<S>::one();

  const auto f = plane_wave_sum(table, xi, x);
  DenseMatrix<S> lhs = f * (energy + S(n));
  std::vector<long> shifted(x.begin(), x.end());
  for (int i = 0; i < n; ++i) {
    --shifted[i];
    lhs = lhs - plane_wave_sum(table, xi, std::span<const long>(shifted));
    ++shifted[i];
  }
  BetheResiduals<S> out{lhs.max_abs(), {}};
  for (int i = 1; i < n; ++i) {
    std::vector<long> coincide(x.begin(), x.end());
    coincide[i] = coincide[i - 1];
    std::vector<long> apart = coincide;
    apart[i] = coincide[i - 1] + 1;
    const auto left = plane_wave_sum(table, xi, std::span<const long>(coincide));
    const auto right = boundary_operator<S>(i, n).apply(plane_wave_sum(table, xi, std::span<const long>(apart)));
    out.boundary_residuals.push_back((left - right).max_abs());
  }
  return out;
}

}  // namespace tasep
