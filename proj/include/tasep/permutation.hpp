#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tasep {

inline constexpr int kDefaultPermutationCap = 10;

/// Element of S_N in one-line notation, 1-indexed: images()[i-1] == sigma(i).
class Permutation {
 public:
  static Permutation identity(int n);
  /// Throws DomainError unless `images` is a bijection of {1..n}.
  static Permutation from_images(std::vector<int> images);
  /// Recomposes T_{a_n}...T_{a_1} applied to the identity of S_n.
  static Permutation from_adjacent_word(int n, std::span<const int> word);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[i - 1]; }
  std::span<const int> images() const { return images_; }

  int inversions() const;
  int sign() const { return inversions() % 2 == 0 ? 1 : -1; }
  bool is_identity() const;

  Permutation inverse() const;
  /// T_i sigma: the one-line word with positions i and i+1 exchanged.
  Permutation swap_positions(int i) const;

  /// Reduced word a_1..a_n with sigma = T_{a_n}...T_{a_1}, obtained by
  /// bubble-sort descent. Length equals inversions().
  std::vector<int> adjacent_decomposition() const;

  /// Lexicographic rank in [0, n!).
  std::size_t rank() const;

  std::string to_string() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {}
  std::vector<int> images_;
};

/// All n! permutations in lexicographic order; throws SizeError above `cap`.
std::vector<Permutation> enumerate_permutations(int n, int cap = kDefaultPermutationCap);

std::size_t factorial(int n);

}  // namespace tasep
