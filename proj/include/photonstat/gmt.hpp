#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "photonstat/ensemble.hpp"
#include "photonstat/multilinear.hpp"
#include "photonstat/order.hpp"
#include "photonstat/quantum.hpp"
#include "photonstat/states.hpp"

namespace photonstat {

/// Normalized first-order correlator g1(k_minus, k_plus).
using FirstOrderFn = std::function<std::complex<double>(const Vec3&, const Vec3&)>;

/// Pair-partition sum: m = n gives sum_sigma prod_i g1(k_i, k_{m+sigma(i)});
/// m != n gives 0.
std::complex<double> gmt_predict(const CorrelationOrder& order, std::span<const Vec3> directions,
                                 const FirstOrderFn& g1);

/// Permanent of a square matrix via the permutation enumeration.
template <typename Scalar>
Complex<Scalar> permanent(const Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a);

/// g1 for a product state: (f S(k_i - k_j) + |c|^2 S(k_i) S(k_j)*) / sqrt(I_i I_j).
FirstOrderFn quantum_first_order(const SingleAtomState& state, const Ensemble& ensemble);

/// Geometry-only quantities for one direction list, reusable across states.
template <typename Scalar>
struct Geometry {
  CorrelationOrder order;
  Eigen::Index emitters = 0;
  SlotGroups groups;
  PhaseTable<Scalar> phases;
  std::vector<Complex<Scalar>> slot_s;                                    // S(k_s) per slot
  Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> pair_s;  // S(k_i - k_{m+j})
};

template <typename Scalar>
Geometry<Scalar> make_geometry(const Ensemble& ensemble, const CorrelationOrder& order,
                               std::span<const Vec3> directions, int cap = kDefaultSlotCap);

template <typename Scalar>
struct ExactAndGmt {
  Complex<Scalar> g_exact, g_gmt;
};

/// Normalized exact correlator and its pair-partition prediction.
template <typename Scalar>
ExactAndGmt<Scalar> exact_and_gmt(const SingleAtomState& state, const Geometry<Scalar>& geometry);

template <typename Scalar>
struct DeviationValues {
  Complex<Scalar> g_exact, g_gmt, delta_total, delta_n, delta_coh;
};

/// Exact and GMT values for `state` and for its coherence-zeroed copy.
/// Throws ZeroIntensityError when either normalization vanishes.
template <typename Scalar>
DeviationValues<Scalar> deviation_values(const SingleAtomState& state, const Geometry<Scalar>& geometry);

struct ConditionMargin {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
  bool flagged = false;
};

inline constexpr double kDefaultFlagRatio = 0.1;

struct ConditionReport {
  std::vector<ConditionMargin> margins;
  bool any_flagged = false;
  bool vanishes = false;  // m > N or n > N: g^(m,n) = 0 identically

  const ConditionMargin* find(const std::string& name) const;
};

/// finite_n:            m! m (m-1) / (2N) vs 1 (m = n; 0 otherwise)
/// spin_coherence:      R^2 vs 4 / (N^2 m (m-1))          (m = n)
/// spin_coherence_linear: R vs 1 / (m (N - m + 1))        (m = n)
/// spin_coherence_unequal: sqrt(R) vs N^x / (x! N!/(N-x)! sqrt(N)), x = max(m, n)
/// spin_coherence_unequal_approx: sqrt(R) vs 1 / (x! sqrt(N))
/// Rows with ratio >= flag_ratio are flagged.
ConditionReport check_conditions(const SingleAtomState& state, long long N, const CorrelationOrder& order,
                                 double flag_ratio = kDefaultFlagRatio);

struct DeviationReport {
  CorrelationOrder order;
  DirectionSet directions;
  Method method = Method::Multilinear;
  std::complex<double> g_exact, g_gmt;
  std::complex<double> delta_total;  // g_gmt - g_exact
  std::complex<double> delta_n;      // same with <sigma-> = 0 and f kept
  std::complex<double> delta_coh;    // delta_total - delta_n
  double epsilon = 0.0;              // m! sqrt(R)
  ConditionReport conditions;
};

/// Full decomposition. Auto uses the forward closed form when every
/// direction is zero and the long-double multilinear product otherwise.
DeviationReport deviation(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                          std::span<const Vec3> directions, Method method = Method::Auto);

/// Displayed fully-inverted closed forms, which equal g - g_gmt at c = 0:
///   m = 2: -(2/N^2) S(k1 + k2 - k3 - k4)
///   m = 3: -(1/2N^3) sum_{s,s'} S(k_s1 - k_{3+s'1}) S(k_s2 + k_s3 - k_{3+s'2} - k_{3+s'3})
///          + (12/N^3) S(k1 + k2 + k3 - k4 - k5 - k6)
/// Throws DomainError for other m.
std::complex<double> deviation_N_closed_form(const Ensemble& ensemble, int m, std::span<const Vec3> directions);

struct SeriesValue {
  double value = 0.0;
  int order = 2;            // truncation order in the expansion variable
  double next_term = 0.0;   // magnitude estimate of the first omitted term
  double finite_n_term = 0.0;  // leading 1/N term a large-N series drops; 0 otherwise

  double remainder_budget() const noexcept { return next_term + finite_n_term; }
};

enum class TaylorVariant { ExactN, LargeN };

/// Forward m = n Taylor polynomial to O(R^2):
///   exact-N: A - A m(m-1) R - (1/4) A (N^2 - 3N - 2mN + 3m - m^2 - 2) m(m-1) R^2,
///            A = (m!)^2 C(N,m) / N^m
///   large-N: m! - m! m(m-1) R - (1/4) m! m(m-1) N^2 R^2
/// next_term is the (NR)^3 coefficient of the large-N resummation
/// m! L_m(-u) / (1+u)^m, u = NR, times (NR)^3; the large-N variant also
/// reports m! m(m-1) / (2N) as finite_n_term.
SeriesValue taylor_forward_equal(long long N, int m, double R, TaylorVariant variant = TaylorVariant::LargeN);

/// R at which the first- and second-order large-N terms are equal: 4/N^2.
double taylor_crossover(long long N);

/// Large-N classical series m! + (1/2) m! m(m-1) R - (1/4) m! m(m-1) N^2 R^2;
/// finite_n_term is m! m(m-1) / (4N).
SeriesValue classical_taylor_forward(long long N, int m, double R);

/// Coefficient of (NR)^3 in m! L_m(-u) / (1+u)^m.
double forward_cubic_coefficient(int m);

struct OffAxisSeries {
  int m = 2;
  double epsilon = 0.0;             // m! sqrt(R)
  std::complex<double> eps2_coeff;  // m = 2 only
  std::complex<double> eps4_coeff;  // m = 2 only
  std::complex<double> value;       // truncated series for this geometry (m = 2) or averaged form (m = 3)
  double averaged = 0.0;            // (2N-11)/(16N) eps^4, or (2N^2-19N+32)/(144N^2) eps^4
  double large_n_limit = 0.0;       // 2 R^2 or 18 R^2
};

/// Off-axis spin-coherence expansion in eps = m! sqrt(R). Throws DomainError
/// unless m is 2 or 3.
OffAxisSeries taylor_offaxis_coh(const Ensemble& ensemble, int m, const Vec3& k, double R);

/// 2 sqrt(NR), 3 NR, 6 sqrt(NR) for (2,1), (3,1), (3,2); DomainError otherwise.
double leading_unequal(long long N, double R, const CorrelationOrder& order);

}  // namespace photonstat

#include "photonstat/gmt_impl.hpp"
