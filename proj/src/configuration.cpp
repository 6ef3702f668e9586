#include "tasep/configuration.hpp"

#include <algorithm>

#include "tasep/bethe.hpp"
#include "tasep/errors.hpp"

namespace tasep {

std::size_t species_index(std::span<const int> word) {
  std::size_t index = 0;
  for (int s : word) {
    if (s != kSecondClass && s != kFirstClass) throw DomainError("species labels must be 1 or 2");
    index = (index << 1) | static_cast<std::size_t>(s - 1);
  }
  return index;
}

std::vector<int> species_word(std::size_t index, int n) {
  std::vector<int> word(static_cast<std::size_t>(n));
  for (int p = n - 1; p >= 0; --p) {
    word[p] = static_cast<int>(index & 1u) + 1;
    index >>= 1;
  }
  return word;
}

Configuration Configuration::make(std::vector<long> positions, std::vector<int> species) {
  Configuration c{std::move(positions), std::move(species)};
  c.validate();
  return c;
}

void Configuration::validate() const {
  if (positions.empty()) throw DomainError("configuration needs at least one particle");
  if (positions.size() != species.size()) throw DomainError("positions and species word differ in length");
  for (std::size_t i = 1; i < positions.size(); ++i)
    if (positions[i - 1] >= positions[i]) throw DomainError("positions must be strictly increasing");
  for (int s : species)
    if (s != kSecondClass && s != kFirstClass) throw DomainError("species labels must be 1 or 2");
}

bool Configuration::has_head_word() const { return species == head_word(size()); }

bool Configuration::single_species() const {
  return std::all_of(species.begin(), species.end(), [&](int s) { return s == species.front(); });
}

std::string Configuration::species_string() const {
  std::string s;
  for (int v : species) s += static_cast<char>('0' + v);
  return s;
}

std::vector<int> head_word(int n) {
  std::vector<int> w(static_cast<std::size_t>(n), kSecondClass);
  if (n > 0) w[0] = kFirstClass;
  return w;
}

Configuration step_initial(int n, int l) {
  if (n < 1) throw DomainError("need at least one particle");
  if (l < 0) throw DomainError("shift l must be nonnegative");
  std::vector<long> y(static_cast<std::size_t>(n));
  y[0] = 1;
  for (int i = 2; i <= n; ++i) y[i - 1] = i + l;
  return Configuration::make(std::move(y), head_word(n));
}

std::vector<int> parse_species(std::string_view text) {
  std::vector<int> word;
  for (char ch : text) {
    if (ch == ',' || ch == ' ') continue;
    if (ch != '1' && ch != '2') throw DomainError("species word may only contain 1 and 2");
    word.push_back(ch - '0');
  }
  if (word.empty()) throw DomainError("empty species word");
  return word;
}

bool same_species_content(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) return false;
  return std::count(a.begin(), a.end(), kFirstClass) == std::count(b.begin(), b.end(), kFirstClass);
}

}  // namespace tasep
