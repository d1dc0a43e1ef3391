#pragma once

// Exact counting primitives. All counts are arbitrary precision; conversion
// to floating point is left to the callers that normalize correlators.

#include <cstddef>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace photonstat::combinatorics {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr int kDefaultOrderCap = 8;

/// A partition of j stored by multiplicities: r[n-1] parts of size n.
class IntegerPartition {
 public:
  IntegerPartition() = default;
  /// Throws DomainError if some r_n < 0.
  explicit IntegerPartition(std::vector<int> multiplicities);

  /// j = sum n * r_n
  int size() const noexcept { return size_; }
  /// l(lambda) = sum r_n
  int parts() const noexcept { return parts_; }
  /// r_n for n >= 1; zero beyond the stored range.
  int multiplicity(int n) const noexcept;
  const std::vector<int>& multiplicities() const noexcept { return r_; }
  /// Parts in non-increasing order, e.g. (2,1,1).
  std::vector<int> parts_descending() const;

  bool operator==(const IntegerPartition&) const = default;

 private:
  std::vector<int> r_;
  int size_ = 0;
  int parts_ = 0;
};

/// Pairs (i, j_sigma(i)), 1-based; i runs over 1..m, partners over m+1..2m.
struct PairPartition {
  std::vector<std::pair<int, int>> pairs;
  bool operator==(const PairPartition&) const = default;
};

/// All m! pair partitions, permutations of S_m in lexicographic order.
/// m = 0 gives an empty sequence. m > cap throws CapacityError.
std::vector<PairPartition> enumerate_pair_partitions(int m, int cap = kDefaultOrderCap);

/// Every permutation of {0..m-1} in lexicographic order (same cap rule).
std::vector<std::vector<int>> enumerate_permutations(int m, int cap = kDefaultOrderCap);

/// Partitions of j, ordered lexicographically by their non-increasing part
/// sequence: j=4 gives 1111, 211, 22, 31, 4. j = 0 yields the empty partition.
std::vector<IntegerPartition> enumerate_integer_partitions(int j);

/// Signed Stirling number of the first kind: coefficient of N^l in the
/// falling factorial N(N-1)...(N-m+1). Throws DomainError unless 0 <= l <= m.
BigInt stirling_first(int m, int l);

/// N(N-1)...(N-m+1); zero when m > N.
BigInt falling_factorial(long long N, int m);
BigInt factorial(int n);
BigInt binomial(long long n, long long k);

/// Index-sum counts: Sigma1 = N^m, Sigma2 = m! C(N,m), Sigma3 = C(N,m).
struct IndexSums {
  BigInt all;                  // Sigma1
  BigInt mutually_different;   // Sigma2
  BigInt strictly_increasing;  // Sigma3
};
IndexSums index_sums(long long N, int m);

/// B_{lambda,N} = N! / ((N - l(lambda))! prod r_n!); zero when l(lambda) > N.
BigInt configuration_count(const IntegerPartition& lambda, long long N);

/// P_lambda = j! / prod (n!)^{r_n}
BigInt permutation_count(const IntegerPartition& lambda);

/// C_{j,N} = sum over partitions of B P^2: the number of index tuples
/// (mu_1..mu_j, nu_1..nu_j) whose multisets coincide. C_{0,N} = 1.
BigInt classical_count(int j, long long N);

double to_double(const BigInt& x);
long double to_long_double(const BigInt& x);

}  // namespace photonstat::combinatorics
