#include "tasep/permutation.hpp"

#include <algorithm>
#include <numeric>

#include "tasep/errors.hpp"

namespace tasep {

std::size_t factorial(int n) {
  std::size_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::size_t>(i);
  return f;
}

Permutation Permutation::identity(int n) {
  if (n < 1) throw DomainError("permutation size must be positive");
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  return Permutation(std::move(images));
}

Permutation Permutation::from_images(std::vector<int> images) {
  const int n = static_cast<int>(images.size());
  if (n < 1) throw DomainError("permutation size must be positive");
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  for (int v : images) {
    if (v < 1 || v > n || seen[v]) throw DomainError("not a permutation of 1..n");
    seen[v] = true;
  }
  return Permutation(std::move(images));
}

Permutation Permutation::from_adjacent_word(int n, std::span<const int> word) {
  Permutation p = identity(n);
  for (int a : word) p = p.swap_positions(a);
  return p;
}

int Permutation::inversions() const {
  int count = 0;
  for (std::size_t i = 0; i < images_.size(); ++i)
    for (std::size_t j = i + 1; j < images_.size(); ++j)
      if (images_[i] > images_[j]) ++count;
  return count;
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i)
    if (images_[i] != static_cast<int>(i) + 1) return false;
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i] - 1] = static_cast<int>(i) + 1;
  return Permutation(std::move(inv));
}

Permutation Permutation::swap_positions(int i) const {
  if (i < 1 || i >= size()) throw DomainError("adjacent transposition index out of range");
  std::vector<int> images = images_;
  std::swap(images[i - 1], images[i]);
  return Permutation(std::move(images));
}

std::vector<int> Permutation::adjacent_decomposition() const {
  // Sorting sigma back to the identity by adjacent swaps p_1..p_m gives
  // sigma = T_{p_1}...T_{p_m}, so the word a_1..a_n is the reversed swap list.
  std::vector<int> work = images_;
  std::vector<int> swaps;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < work.size(); ++i) {
      if (work[i] > work[i + 1]) {
        std::swap(work[i], work[i + 1]);
        swaps.push_back(static_cast<int>(i) + 1);
        changed = true;
      }
    }
  }
  std::reverse(swaps.begin(), swaps.end());
  return swaps;
}

std::size_t Permutation::rank() const {
  const int n = size();
  std::size_t r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller_later = 0;
    for (int j = i + 1; j < n; ++j)
      if (images_[j] < images_[i]) ++smaller_later;
    r += static_cast<std::size_t>(smaller_later) * factorial(n - 1 - i);
  }
  return r;
}

std::string Permutation::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(images_[i]);
  }
  return s + ")";
}

std::vector<Permutation> enumerate_permutations(int n, int cap) {
  if (n < 1) throw DomainError("permutation size must be positive");
  if (n > cap) throw SizeError("permutation enumeration capped at n=" + std::to_string(cap));
  std::vector<Permutation> out;
  out.reserve(factorial(n));
  std::vector<int> images(static_cast<std::size_t>(n));
  std::iota(images.begin(), images.end(), 1);
  do {
    out.push_back(Permutation::from_images(images));
  } while (std::next_permutation(images.begin(), images.end()));
  return out;
}

}  // namespace tasep
