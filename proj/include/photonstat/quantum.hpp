#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "photonstat/ensemble.hpp"
#include "photonstat/multilinear.hpp"
#include "photonstat/order.hpp"
#include "photonstat/states.hpp"

namespace photonstat {

enum class Method { Auto, Oracle, Multilinear, ForwardClosedForm };

std::string to_string(Method m);

struct CorrelationResult {
  std::complex<double> raw;  // G^(m,n)
  std::complex<double> g;    // G / prod_j sqrt(G^(1)(k_j, k_j))
  Method method = Method::Multilinear;
  CorrelationOrder order;
  DirectionSet directions;
};

inline constexpr double kOracleTermLimit = 1e8;

/// Brute-force tuple sum over (mu_1..mu_m, nu_1..nu_n). Throws CapacityError
/// when N^{m+n} exceeds `term_limit`.
std::complex<double> oracle_G(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                              std::span<const Vec3> directions, double term_limit = kOracleTermLimit);

/// Exact G through the square-free product of per-emitter factors
/// 1 + <s+> e^{ik_i.R} x_i + <s-> e^{-ik_j.R} y_j + <s+s-> e^{i(k_i-k_j).R} x_i y_j.
template <typename Scalar = double>
Complex<Scalar> multilinear_G(const SingleAtomState& state, const SlotGroups& groups, const PhaseTable<Scalar>& phases) {
  const auto terms = nilpotent_terms(groups);
  const Complex<Scalar> sp(state.sigma_plus().real(), state.sigma_plus().imag());
  const Complex<Scalar> sm(state.sigma_minus().real(), state.sigma_minus().imag());
  const Scalar p = static_cast<Scalar>(state.population());
  // Which group(s) each term touches: nilpotent_terms emits singles on the
  // minus side, then singles on the plus side, then all (minus, plus) pairs.
  struct Touch {
    int a = -1, b = -1;
  };
  std::vector<Touch> touch(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t)
    for (int g = 0; g < groups.groups(); ++g)
      if (terms[t].increments[g]) (groups.is_minus(g) ? touch[t].a : touch[t].b) = g;
  return square_free_product<Scalar>(groups, terms, phases.rows(), [&](Eigen::Index mu, std::size_t t) {
    const Touch& tc = touch[t];
    if (tc.b < 0) return sp * phases(mu, tc.a);
    if (tc.a < 0) return sm * phases(mu, tc.b);
    return p * phases(mu, tc.a) * phases(mu, tc.b);
  });
}

template <typename Scalar = double>
Complex<Scalar> multilinear_G(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                              std::span<const Vec3> directions, int cap = kDefaultSlotCap) {
  const SlotGroups groups = group_slots(order, directions, cap);
  return multilinear_G<Scalar>(state, groups, slot_phases<Scalar>(groups, ensemble));
}

/// G^(m,n)(0,...,0) for any order from the forward double sum
/// sum_j C(m,j) C(n,j) j! (2a-j)! C(N,2a-j) (m-a)! C(N-2a+j, m-a) (n-a)! C(N-2a+j, n-a)
///       * sum_l C(j,l) f^l <s+>^{m-l} <s->^{n-l},  a = min(m, n).
std::complex<long double> forward_G(const SingleAtomState& state, long long N, const CorrelationOrder& order);
/// m = n case; real.
double forward_G_equal(const SingleAtomState& state, long long N, int m);
/// m != n case; throws DomainError for m == n.
std::complex<double> forward_G_unequal(const SingleAtomState& state, long long N, int m, int n);

/// Forward intensity G^(1)(0,0) = N f + N^2 |c|^2.
long double forward_intensity(const SingleAtomState& state, long long N);
/// Normalized forward correlator; throws ZeroIntensityError for the dark state.
std::complex<long double> forward_g(const SingleAtomState& state, long long N, const CorrelationOrder& order);

/// G^(1)(k,k) = N f + |c|^2 |S(k)|^2.
double intensity(const SingleAtomState& state, const Ensemble& ensemble, const Vec3& k);

/// g = G / prod_j sqrt(I_j); throws ZeroIntensityError if some I_j <= 0.
std::complex<double> normalize(std::complex<double> G, std::span<const double> intensities);

/// Evaluates and normalizes g^(m,n). Method::Auto uses the forward closed
/// form when every direction is zero and the multilinear product otherwise.
CorrelationResult correlate(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                            std::span<const Vec3> directions, Method method = Method::Auto);

/// Long-double normalized multilinear correlator for precision-sensitive
/// sweeps; phases can be shared between calls with the same geometry.
template <typename Scalar>
Complex<Scalar> multilinear_g(const SingleAtomState& state, const Ensemble& ensemble, const SlotGroups& groups,
                              const PhaseTable<Scalar>& phases) {
  const Complex<Scalar> G = multilinear_G<Scalar>(state, groups, phases);
  Scalar denom = 1;
  for (int g = 0; g < groups.groups(); ++g) {
    const Complex<Scalar> s = structure_factor<Scalar>(ensemble, groups.wave_vectors[g]);
    const Scalar I = static_cast<Scalar>(ensemble.size()) * static_cast<Scalar>(state.fluctuation()) +
                     static_cast<Scalar>(state.coherence_sq()) * std::norm(s);
    if (!(I > 0)) throw ZeroIntensityError("zero single-direction intensity; cannot normalize");
    denom *= ipow(std::sqrt(I), groups.mult[g]);
  }
  return G / denom;
}

}  // namespace photonstat
