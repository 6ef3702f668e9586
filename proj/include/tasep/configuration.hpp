#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tasep {

/// Species labels. First class particles have priority over second class.
inline constexpr int kSecondClass = 1;
inline constexpr int kFirstClass = 2;

/// Ordered positions x_1 < ... < x_N together with the species word: the
/// i-th particle from the left sits at positions[i] and has species[i].
struct Configuration {
  std::vector<long> positions;
  std::vector<int> species;

  /// Throws DomainError on unordered positions or bad labels.
  static Configuration make(std::vector<long> positions, std::vector<int> species);

  int size() const { return static_cast<int>(positions.size()); }
  void validate() const;
  /// Species word 21...1: one first class particle in front.
  bool has_head_word() const;
  bool single_species() const;
  std::string species_string() const;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

/// 21...1 of length n.
std::vector<int> head_word(int n);

/// y_1 = 1 and y_i = i + l for i > 1, species 21...1. l = 0 is the step.
Configuration step_initial(int n, int l);

/// "211" -> {2, 1, 1}.
std::vector<int> parse_species(std::string_view text);

/// True when both words carry the same number of first class particles.
bool same_species_content(std::span<const int> a, std::span<const int> b);

}  // namespace tasep
