#include "photonstat/combinatorics.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "photonstat/errors.hpp"

namespace photonstat::combinatorics {

IntegerPartition::IntegerPartition(std::vector<int> multiplicities) : r_(std::move(multiplicities)) {
  for (std::size_t i = 0; i < r_.size(); ++i) {
    if (r_[i] < 0) throw DomainError("partition multiplicity r_" + std::to_string(i + 1) + " is negative");
    size_ += static_cast<int>(i + 1) * r_[i];
    parts_ += r_[i];
  }
  while (!r_.empty() && r_.back() == 0) r_.pop_back();
}

int IntegerPartition::multiplicity(int n) const noexcept {
  if (n < 1 || n > static_cast<int>(r_.size())) return 0;
  return r_[n - 1];
}

std::vector<int> IntegerPartition::parts_descending() const {
  std::vector<int> out;
  out.reserve(parts_);
  for (int n = static_cast<int>(r_.size()); n >= 1; --n)
    out.insert(out.end(), r_[n - 1], n);
  return out;
}

std::vector<std::vector<int>> enumerate_permutations(int m, int cap) {
  if (m < 0) throw DomainError("permutation order must be non-negative");
  if (m > cap) throw CapacityError("order " + std::to_string(m) + " exceeds cap " + std::to_string(cap));
  std::vector<std::vector<int>> out;
  if (m == 0) return out;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<PairPartition> enumerate_pair_partitions(int m, int cap) {
  std::vector<PairPartition> out;
  for (const auto& perm : enumerate_permutations(m, cap)) {
    PairPartition pp;
    pp.pairs.reserve(m);
    for (int i = 0; i < m; ++i) pp.pairs.emplace_back(i + 1, m + 1 + perm[i]);
    out.push_back(std::move(pp));
  }
  return out;
}

namespace {

// Non-increasing sequences summing to `remaining` with parts <= `max_part`,
// emitted in increasing lexicographic order.
void partitions_rec(int remaining, int max_part, std::vector<int>& prefix,
                    std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(prefix);
    return;
  }
  for (int part = 1; part <= std::min(remaining, max_part); ++part) {
    prefix.push_back(part);
    partitions_rec(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<IntegerPartition> enumerate_integer_partitions(int j) {
  if (j < 0) throw DomainError("partition size must be non-negative");
  std::vector<std::vector<int>> seqs;
  std::vector<int> prefix;
  partitions_rec(j, j, prefix, seqs);
  std::vector<IntegerPartition> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) {
    std::vector<int> r(j, 0);
    for (int part : s) ++r[part - 1];
    out.emplace_back(std::move(r));
  }
  return out;
}

BigInt stirling_first(int m, int l) {
  if (m < 0 || l < 0 || l > m) throw DomainError("stirling_first requires 0 <= l <= m");
  // Coefficients of N(N-1)...(N-k+1), built one factor at a time.
  std::vector<BigInt> coeff{1};
  for (int k = 0; k < m; ++k) {
    std::vector<BigInt> next(coeff.size() + 1, 0);
    for (std::size_t d = 0; d < coeff.size(); ++d) {
      next[d + 1] += coeff[d];
      next[d] -= coeff[d] * k;
    }
    coeff = std::move(next);
  }
  return coeff[l];
}

BigInt falling_factorial(long long N, int m) {
  if (N < 0 || m < 0) throw DomainError("falling_factorial requires N, m >= 0");
  BigInt out = 1;
  for (int i = 0; i < m; ++i) {
    if (N - i <= 0) return 0;
    out *= N - i;
  }
  return out;
}

BigInt factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  BigInt out = 1;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

BigInt binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt out = 1;
  for (long long i = 1; i <= k; ++i) {
    out *= n - k + i;
    out /= i;
  }
  return out;
}

IndexSums index_sums(long long N, int m) {
  IndexSums s;
  s.all = boost::multiprecision::pow(BigInt(N), m);
  s.mutually_different = falling_factorial(N, m);
  s.strictly_increasing = binomial(N, m);
  return s;
}

BigInt configuration_count(const IntegerPartition& lambda, long long N) {
  if (lambda.parts() > N) return 0;
  BigInt out = falling_factorial(N, lambda.parts());
  for (int r : lambda.multiplicities()) out /= factorial(r);
  return out;
}

BigInt permutation_count(const IntegerPartition& lambda) {
  BigInt denom = 1;
  for (int n = 1; n <= static_cast<int>(lambda.multiplicities().size()); ++n)
    denom *= boost::multiprecision::pow(factorial(n), lambda.multiplicity(n));
  return factorial(lambda.size()) / denom;
}

BigInt classical_count(int j, long long N) {
  if (j < 0) throw DomainError("classical_count requires j >= 0");
  if (N < 1) throw DomainError("classical_count requires N >= 1");
  BigInt total = 0;
  for (const auto& lambda : enumerate_integer_partitions(j)) {
    const BigInt p = permutation_count(lambda);
    total += configuration_count(lambda, N) * p * p;
  }
  return total;
}

double to_double(const BigInt& x) { return x.convert_to<double>(); }
long double to_long_double(const BigInt& x) { return x.convert_to<long double>(); }

}  // namespace photonstat::combinatorics
