#pragma once

// Template definitions for gmt.hpp.

#include "photonstat/combinatorics.hpp"

namespace photonstat {

template <typename Scalar>
Complex<Scalar> permanent(const Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>& a) {
  if (a.rows() != a.cols()) throw DomainError("permanent needs a square matrix");
  const int m = static_cast<int>(a.rows());
  if (m == 0) return Complex<Scalar>(1);
  Complex<Scalar> total(0);
  for (const auto& perm : combinatorics::enumerate_permutations(m)) {
    Complex<Scalar> term(1);
    for (int i = 0; i < m; ++i) term *= a(i, perm[i]);
    total += term;
  }
  return total;
}

template <typename Scalar>
Geometry<Scalar> make_geometry(const Ensemble& ensemble, const CorrelationOrder& order,
                               std::span<const Vec3> directions, int cap) {
  Geometry<Scalar> geo;
  geo.order = order;
  geo.emitters = ensemble.size();
  geo.groups = group_slots(order, directions, cap);
  geo.phases = slot_phases<Scalar>(geo.groups, ensemble);
  const int G = geo.groups.groups();
  std::vector<Complex<Scalar>> group_s(G, Complex<Scalar>(0));
  for (int g = 0; g < G; ++g) {
    for (Eigen::Index mu = 0; mu < geo.emitters; ++mu) group_s[g] += geo.phases(mu, g);
    // plus-group phases carry exp(-ik.R)
    if (!geo.groups.is_minus(g)) group_s[g] = std::conj(group_s[g]);
  }
  std::vector<int> slot_group;
  for (int g = 0; g < G; ++g) slot_group.insert(slot_group.end(), geo.groups.mult[g], g);
  for (int g : slot_group) geo.slot_s.push_back(group_s[g]);
  geo.pair_s.resize(order.m, order.n);
  for (int i = 0; i < order.m; ++i)
    for (int j = 0; j < order.n; ++j) {
      const int gi = slot_group[i], gj = slot_group[order.m + j];
      Complex<Scalar> s(0);
      for (Eigen::Index mu = 0; mu < geo.emitters; ++mu) s += geo.phases(mu, gi) * geo.phases(mu, gj);
      geo.pair_s(i, j) = s;
    }
  return geo;
}

template <typename Scalar>
ExactAndGmt<Scalar> exact_and_gmt(const SingleAtomState& state, const Geometry<Scalar>& geo) {
  const Scalar f = static_cast<Scalar>(state.fluctuation());
  const Scalar c2 = static_cast<Scalar>(state.coherence_sq());
  const Scalar n = static_cast<Scalar>(geo.emitters);
  const int m = geo.order.m, total = geo.order.total();
  std::vector<Scalar> root_i(total);
  Scalar denom = 1;
  for (int s = 0; s < total; ++s) {
    const Scalar I = n * f + c2 * std::norm(geo.slot_s[s]);
    if (!(I > 0)) throw ZeroIntensityError("zero single-direction intensity; cannot normalize");
    root_i[s] = std::sqrt(I);
    denom *= root_i[s];
  }
  const Complex<Scalar> g = multilinear_G<Scalar>(state, geo.groups, geo.phases) / denom;
  if (!geo.order.equal_order()) return {g, Complex<Scalar>(0)};
  Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic> g1(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      g1(i, j) = (f * geo.pair_s(i, j) + c2 * geo.slot_s[i] * std::conj(geo.slot_s[m + j])) /
                 (root_i[i] * root_i[m + j]);
  return {g, permanent<Scalar>(g1)};
}

template <typename Scalar>
DeviationValues<Scalar> deviation_values(const SingleAtomState& state, const Geometry<Scalar>& geometry) {
  DeviationValues<Scalar> out;
  const auto full = exact_and_gmt(state, geometry);
  const auto zeroed = exact_and_gmt(state.without_coherence(), geometry);
  out.g_exact = full.g_exact;
  out.g_gmt = full.g_gmt;
  out.delta_total = out.g_gmt - out.g_exact;
  out.delta_n = zeroed.g_gmt - zeroed.g_exact;
  out.delta_coh = out.delta_total - out.delta_n;
  return out;
}

}  // namespace photonstat
