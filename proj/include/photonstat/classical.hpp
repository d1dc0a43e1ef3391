#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "photonstat/ensemble.hpp"
#include "photonstat/multilinear.hpp"
#include "photonstat/order.hpp"
#include "photonstat/states.hpp"

namespace photonstat {

/// Phase-averaged single-oscillator moments
///   w(a, b) = < (E_c* + E_i e^{-i phi})^a (E_c + E_i e^{i phi})^b >
///           = sum_t C(a,t) C(b,t) |E_i|^{2t} E_c*^{a-t} E_c^{b-t}
/// for a minus-frequency and b plus-frequency factors on one oscillator.
class ClassicalMoments {
 public:
  ClassicalMoments(const ClassicalEmitterModel& model, int max_minus, int max_plus);

  std::complex<double> operator()(int a, int b) const { return table_[a * (max_plus_ + 1) + b]; }
  int max_minus() const noexcept { return max_minus_; }
  int max_plus() const noexcept { return max_plus_; }

 private:
  int max_minus_, max_plus_;
  std::vector<std::complex<double>> table_;
};

/// g^(m)(0) = sum_j C(m,j)^2 (N^2 R)^{m-j} C_{j,N} / (N^m (1+NR)^m), evaluated
/// in amplitude form so that E_incoh = 0 is allowed.
long double classical_forward_g(const ClassicalEmitterModel& model, long long N, int m);

/// G^(m,n)(0) = sum_t C(m,t) C(n,t) (N E_c*)^{m-t} (N E_c)^{n-t} |E_i|^{2t} C_{t,N}.
std::complex<long double> classical_forward_G(const ClassicalEmitterModel& model, long long N,
                                              const CorrelationOrder& order);

/// Forward normalized g^(m,n) for m != n, divided by I(0)^{(m+n)/2} with
/// I(0) = N |E_i|^2 + N^2 |E_c|^2. Throws DomainError for m == n.
std::complex<long double> classical_forward_g_unequal(const ClassicalEmitterModel& model, long long N, int m, int n);

/// N |E_i|^2 + N^2 |E_c|^2.
long double classical_forward_intensity(const ClassicalEmitterModel& model, long long N);

/// N |E_i|^2 + |E_c|^2 |S(k)|^2.
double classical_intensity(const ClassicalEmitterModel& model, const Ensemble& ensemble, const Vec3& k);

/// Brute-force tuple sum with per-oscillator moments; CapacityError when
/// N^{m+n} exceeds `term_limit`.
std::complex<double> classical_oracle_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                        const CorrelationOrder& order, std::span<const Vec3> directions,
                                        double term_limit = 1e8);

/// Exact phase-averaged G for arbitrary directions.
std::complex<double> classical_exact_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                       const CorrelationOrder& order, std::span<const Vec3> directions,
                                       int cap = kDefaultSlotCap);

/// classical_exact_G normalized by prod_j sqrt(classical_intensity(k_j)).
std::complex<double> classical_exact_g(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                       const CorrelationOrder& order, std::span<const Vec3> directions,
                                       int cap = kDefaultSlotCap);

struct MonteCarloEstimate {
  std::complex<double> estimate;
  double std_error = 0.0;  // sqrt(SE_re^2 + SE_im^2) from batch means
  std::size_t samples = 0;
  std::size_t batches = 0;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kDefaultBatches = 100;

/// Sample mean of prod_j E^{-}(k_i) E^{+}(k_j) over i.i.d. uniform phases.
/// Batch b draws from stream b of `seed`, so results do not depend on
/// `threads`.
MonteCarloEstimate classical_mc_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                  const CorrelationOrder& order, std::span<const Vec3> directions,
                                  std::size_t samples, std::uint64_t seed, std::size_t batches = kDefaultBatches,
                                  unsigned threads = 1);

}  // namespace photonstat
