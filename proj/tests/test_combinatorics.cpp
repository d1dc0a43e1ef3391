#include <doctest.h>

#include <map>
#include <numeric>

#include "photonstat/combinatorics.hpp"
#include "photonstat/errors.hpp"

using namespace photonstat;
using namespace photonstat::combinatorics;

namespace {

// Ordered pairs of j-tuples over [0, N) whose multisets coincide.
long long brute_classical_count(int j, int N) {
  long long total = 0, tuples = 1;
  for (int i = 0; i < j; ++i) tuples *= N;
  auto decode = [&](long long code) {
    std::vector<int> v(j);
    for (int i = 0; i < j; ++i) {
      v[i] = static_cast<int>(code % N);
      code /= N;
    }
    std::sort(v.begin(), v.end());
    return v;
  };
  std::map<std::vector<int>, long long> counts;
  for (long long c = 0; c < tuples; ++c) ++counts[decode(c)];
  for (const auto& [k, v] : counts) total += v * v;
  return total;
}

}  // namespace

TEST_CASE("permutations are enumerated lexicographically") {
  const auto p3 = enumerate_permutations(3);
  REQUIRE(p3.size() == 6);
  CHECK(p3.front() == std::vector<int>{0, 1, 2});
  CHECK(p3[1] == std::vector<int>{0, 2, 1});
  CHECK(p3.back() == std::vector<int>{2, 1, 0});
  CHECK(enumerate_permutations(0).empty());
  CHECK(enumerate_permutations(1).size() == 1);
  CHECK(enumerate_permutations(6).size() == 720);
  CHECK_THROWS_AS(enumerate_permutations(9), CapacityError);
  CHECK_NOTHROW(enumerate_permutations(9, 9));
  CHECK_THROWS_AS(enumerate_permutations(-1), DomainError);
}

TEST_CASE("pair partitions map slot i to m+1+sigma(i)") {
  const auto pp = enumerate_pair_partitions(2);
  REQUIRE(pp.size() == 2);
  CHECK(pp[0].pairs == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
  CHECK(pp[1].pairs == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});
  for (const auto& p : enumerate_pair_partitions(4)) {
    std::vector<int> seen;
    for (auto [a, b] : p.pairs) {
      CHECK(a >= 1);
      CHECK(a <= 4);
      CHECK(b >= 5);
      CHECK(b <= 8);
      seen.push_back(b);
    }
    std::sort(seen.begin(), seen.end());
    CHECK(seen == std::vector<int>{5, 6, 7, 8});
  }
}

TEST_CASE("integer partitions") {
  const int expected[] = {1, 1, 2, 3, 5, 7, 11, 15, 22};
  for (int j = 0; j <= 8; ++j) {
    const auto parts = enumerate_integer_partitions(j);
    CHECK(static_cast<int>(parts.size()) == expected[j]);
    for (const auto& l : parts) CHECK(l.size() == j);
  }
  const auto p4 = enumerate_integer_partitions(4);
  CHECK(p4[0].parts_descending() == std::vector<int>{1, 1, 1, 1});
  CHECK(p4[1].parts_descending() == std::vector<int>{2, 1, 1});
  CHECK(p4[2].parts_descending() == std::vector<int>{2, 2});
  CHECK(p4[3].parts_descending() == std::vector<int>{3, 1});
  CHECK(p4[4].parts_descending() == std::vector<int>{4});
  CHECK(enumerate_integer_partitions(0).front().parts() == 0);

  const IntegerPartition l({1, 0, 2, 0, 0});
  CHECK(l.size() == 7);
  CHECK(l.parts() == 3);
  CHECK(l.multiplicity(3) == 2);
  CHECK(l.multiplicity(5) == 0);
  CHECK(l.multiplicities().size() == 3);
  CHECK_THROWS_AS(IntegerPartition({-1}), DomainError);
}

TEST_CASE("stirling numbers of the first kind") {
  CHECK(stirling_first(0, 0) == 1);
  CHECK(stirling_first(4, 4) == 1);
  CHECK(stirling_first(4, 3) == -6);
  CHECK(stirling_first(4, 2) == 11);
  CHECK(stirling_first(4, 1) == -6);
  CHECK(stirling_first(4, 0) == 0);
  CHECK(stirling_first(6, 3) == -225);
  CHECK_THROWS_AS(stirling_first(3, 4), DomainError);
  for (int m = 0; m <= 8; ++m)
    for (long long N = 0; N <= 12; ++N) {
      BigInt sum = 0;
      for (int l = 0; l <= m; ++l) sum += stirling_first(m, l) * boost::multiprecision::pow(BigInt(N), l);
      CHECK(sum == falling_factorial(N, m));
    }
}

TEST_CASE("factorials and binomials") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(20) == BigInt("2432902008176640000"));
  CHECK(factorial(25) == BigInt("15511210043330985984000000"));
  CHECK(falling_factorial(5, 0) == 1);
  CHECK(falling_factorial(5, 3) == 60);
  CHECK(falling_factorial(3, 5) == 0);
  CHECK(binomial(10, 3) == 120);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(5, -1) == 0);
  CHECK(binomial(100, 50) == BigInt("100891344545564193334812497256"));
  CHECK_THROWS_AS(factorial(-1), DomainError);
}

TEST_CASE("index sums") {
  const auto s = index_sums(5, 3);
  CHECK(s.all == 125);
  CHECK(s.mutually_different == 60);
  CHECK(s.strictly_increasing == 10);
  CHECK(index_sums(2, 3).mutually_different == 0);
}

TEST_CASE("configuration and permutation counts") {
  const IntegerPartition l({1, 1});  // 2 + 1
  CHECK(configuration_count(l, 5) == 20);
  CHECK(permutation_count(l) == 3);
  CHECK(configuration_count(IntegerPartition({3}), 5) == 10);
  CHECK(permutation_count(IntegerPartition({3})) == 6);
  CHECK(configuration_count(IntegerPartition({3}), 2) == 0);
}

TEST_CASE("partition sum recovers N^j") {
  for (int j = 0; j <= 6; ++j)
    for (long long N = 1; N <= 12; ++N) {
      BigInt sum = 0;
      for (const auto& l : enumerate_integer_partitions(j)) sum += configuration_count(l, N) * permutation_count(l);
      CHECK(sum == boost::multiprecision::pow(BigInt(N), j));
    }
}

TEST_CASE("classical count matches multiset enumeration") {
  for (int j = 0; j <= 3; ++j)
    for (int N = 1; N <= 6; ++N) CHECK(classical_count(j, N) == brute_classical_count(j, N));
  for (long long N = 1; N <= 12; ++N) CHECK(classical_count(2, N) == N * (2 * N - 1));
  CHECK(classical_count(0, 7) == 1);
  CHECK(classical_count(1, 7) == 7);
  CHECK_THROWS_AS(classical_count(2, 0), DomainError);
}

TEST_CASE("big counts convert to floating point") {
  CHECK(to_double(factorial(10)) == 3628800.0);
  CHECK(to_long_double(binomial(60, 30)) == doctest::Approx(1.1826458156486e17).epsilon(1e-12));
}
