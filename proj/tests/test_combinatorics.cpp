#include <doctest.h>

#include <random>

#include "tasep/errors.hpp"
#include "tasep/permutation.hpp"

using tasep::Permutation;

TEST_CASE("enumerate small symmetric groups") {
  const auto s1 = tasep::enumerate_permutations(1);
  REQUIRE(s1.size() == 1);
  CHECK(s1[0].is_identity());
  CHECK(s1[0].sign() == 1);

  const auto s2 = tasep::enumerate_permutations(2);
  REQUIRE(s2.size() == 2);
  CHECK(s2[0].to_string() == "(1,2)");
  CHECK(s2[0].sign() == 1);
  CHECK(s2[1].to_string() == "(2,1)");
  CHECK(s2[1].sign() == -1);

  const auto s3 = tasep::enumerate_permutations(3);
  REQUIRE(s3.size() == 6);
  int odd = 0;
  for (const auto& p : s3) odd += p.sign() < 0;
  CHECK(odd == 3);
}

TEST_CASE("ranks follow lexicographic order") {
  const auto s4 = tasep::enumerate_permutations(4);
  for (std::size_t i = 0; i < s4.size(); ++i) CHECK(s4[i].rank() == i);
}

TEST_CASE("enumeration refuses large n") {
  CHECK_THROWS_AS(tasep::enumerate_permutations(11), tasep::SizeError);
  CHECK_THROWS_AS(tasep::enumerate_permutations(5, 4), tasep::SizeError);
}

TEST_CASE("from_images validates bijections") {
  CHECK_THROWS_AS(Permutation::from_images({1, 1, 2}), tasep::DomainError);
  CHECK_THROWS_AS(Permutation::from_images({0, 1}), tasep::DomainError);
  CHECK_NOTHROW(Permutation::from_images({2, 3, 1}));
}

TEST_CASE("signs by inversion count") {
  CHECK(Permutation::identity(4).sign() == 1);
  CHECK(Permutation::from_images({2, 1}).sign() == -1);
  CHECK(Permutation::from_images({2, 3, 1}).inversions() == 2);
  CHECK(Permutation::from_images({2, 3, 1}).sign() == 1);
}

TEST_CASE("adjacent decompositions") {
  CHECK(Permutation::identity(3).adjacent_decomposition().empty());
  CHECK(Permutation::from_images({2, 1}).adjacent_decomposition() == std::vector<int>{1});

  const auto rev = Permutation::from_images({3, 2, 1});
  const auto word = rev.adjacent_decomposition();
  CHECK(word == std::vector<int>{1, 2, 1});
  CHECK(Permutation::from_adjacent_word(3, word) == rev);
}

TEST_CASE("decompositions recompose for every sigma up to S_6") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& p : tasep::enumerate_permutations(n)) {
      const auto word = p.adjacent_decomposition();
      CHECK(static_cast<int>(word.size()) == p.inversions());
      for (int a : word) CHECK((a >= 1 && a <= n - 1));
      CHECK(Permutation::from_adjacent_word(n, word) == p);
    }
}

TEST_CASE("inverse and swap") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int> images{1, 2, 3, 4, 5};
    std::shuffle(images.begin(), images.end(), rng);
    const auto p = Permutation::from_images(images);
    const auto q = p.inverse();
    for (int i = 1; i <= 5; ++i) CHECK(q(p(i)) == i);
    CHECK(q.sign() == p.sign());
    CHECK(p.swap_positions(2).sign() == -p.sign());
  }
}

TEST_CASE("factorial") {
  CHECK(tasep::factorial(0) == 1);
  CHECK(tasep::factorial(5) == 120);
  CHECK(tasep::factorial(8) == 40320);
}
