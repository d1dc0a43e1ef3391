#include "photonstat/gmt.hpp"

#include <cmath>
#include <limits>

#include "photonstat/combinatorics.hpp"
#include "photonstat/errors.hpp"

namespace photonstat {

namespace cb = combinatorics;

std::complex<double> gmt_predict(const CorrelationOrder& order, std::span<const Vec3> directions,
                                 const FirstOrderFn& g1) {
  check_directions(order, directions);
  if (!order.equal_order()) return 0.0;
  const int m = order.m;
  Eigen::MatrixXcd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = g1(directions[i], directions[m + j]);
  return permanent<double>(a);
}

FirstOrderFn quantum_first_order(const SingleAtomState& state, const Ensemble& ensemble) {
  return [state, &ensemble](const Vec3& ki, const Vec3& kj) {
    const std::complex<double> si = structure_factor(ensemble, ki), sj = structure_factor(ensemble, kj);
    const double n = static_cast<double>(ensemble.size());
    const double ii = n * state.fluctuation() + state.coherence_sq() * std::norm(si);
    const double ij = n * state.fluctuation() + state.coherence_sq() * std::norm(sj);
    if (!(ii > 0.0 && ij > 0.0)) throw ZeroIntensityError("zero single-direction intensity; cannot normalize");
    const std::complex<double> G =
        state.fluctuation() * structure_factor(ensemble, Vec3(ki - kj)) + state.coherence_sq() * si * std::conj(sj);
    return G / std::sqrt(ii * ij);
  };
}

const ConditionMargin* ConditionReport::find(const std::string& name) const {
  for (const auto& m : margins)
    if (m.name == name) return &m;
  return nullptr;
}

ConditionReport check_conditions(const SingleAtomState& state, long long N, const CorrelationOrder& order,
                                 double flag_ratio) {
  if (N < 1) throw DomainError("check_conditions needs N >= 1");
  ConditionReport out;
  out.vanishes = order.m > N || order.n > N;
  const double n = static_cast<double>(N);
  const double R = state.is_dark() ? 0.0 : state.ratio();
  const double inf = std::numeric_limits<double>::infinity();
  auto add = [&](std::string name, double lhs, double rhs) {
    ConditionMargin c{std::move(name), lhs, rhs, 0.0, false};
    c.ratio = rhs == inf ? 0.0 : (rhs > 0.0 ? lhs / rhs : inf);
    c.flagged = c.ratio >= flag_ratio;
    out.any_flagged |= c.flagged;
    out.margins.push_back(std::move(c));
  };
  const int m = order.m;
  if (order.equal_order()) {
    const double mm1 = static_cast<double>(m) * (m - 1);
    add("finite_n", cb::to_double(cb::factorial(m)) * mm1 / (2 * n), 1.0);
    add("spin_coherence", R * R, mm1 > 0 ? 4.0 / (n * n * mm1) : inf);
    add("spin_coherence_linear", R, mm1 > 0 && N - m + 1 > 0 ? 1.0 / (m * (n - m + 1)) : inf);
  } else {
    add("finite_n", 0.0, 1.0);
    const int x = order.x();
    const double xf = cb::to_double(cb::factorial(x));
    const double ff = cb::to_double(cb::falling_factorial(N, x));
    add("spin_coherence_unequal", std::sqrt(R), ff > 0 ? std::pow(n, x) / (xf * ff * std::sqrt(n)) : inf);
    add("spin_coherence_unequal_approx", std::sqrt(R), 1.0 / (xf * std::sqrt(n)));
  }
  return out;
}

DeviationReport deviation(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                          std::span<const Vec3> directions, Method method) {
  check_directions(order, directions);
  bool forward = true;
  for (const auto& k : directions) forward &= k.isZero(0.0);
  if (method == Method::Auto) method = forward ? Method::ForwardClosedForm : Method::Multilinear;

  DeviationReport r;
  r.order = order;
  r.directions.assign(directions.begin(), directions.end());
  r.method = method;
  r.conditions = check_conditions(state, ensemble.size(), order);
  r.epsilon = cb::to_double(cb::factorial(order.x())) * std::sqrt(state.is_dark() ? 0.0 : state.ratio());
  auto to_d = [](std::complex<long double> z) {
    return std::complex<double>(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  };

  switch (method) {
    case Method::ForwardClosedForm: {
      if (!forward) throw DomainError("forward closed form requires all directions k = 0");
      const long long N = ensemble.size();
      const long double gmt = order.equal_order() ? cb::to_long_double(cb::factorial(order.m)) : 0.0L;
      const auto g = forward_g(state, N, order);
      const auto g0 = forward_g(state.without_coherence(), N, order);
      const auto total = gmt - g, dn = gmt - g0;
      r.g_exact = to_d(g);
      r.g_gmt = static_cast<double>(gmt);
      r.delta_total = to_d(total);
      r.delta_n = to_d(dn);
      r.delta_coh = to_d(total - dn);
      break;
    }
    case Method::Oracle: {
      const auto exact = [&](const SingleAtomState& s) { return correlate(s, ensemble, order, directions, method).g; };
      const auto gmt = [&](const SingleAtomState& s) {
        return gmt_predict(order, directions, quantum_first_order(s, ensemble));
      };
      const SingleAtomState s0 = state.without_coherence();
      r.g_exact = exact(state);
      r.g_gmt = gmt(state);
      r.delta_total = r.g_gmt - r.g_exact;
      r.delta_n = gmt(s0) - exact(s0);
      r.delta_coh = r.delta_total - r.delta_n;
      break;
    }
    default: {
      const auto geo = make_geometry<long double>(ensemble, order, directions);
      const auto v = deviation_values(state, geo);
      r.g_exact = to_d(v.g_exact);
      r.g_gmt = to_d(v.g_gmt);
      r.delta_total = to_d(v.delta_total);
      r.delta_n = to_d(v.delta_n);
      r.delta_coh = to_d(v.delta_coh);
      break;
    }
  }
  return r;
}

std::complex<double> deviation_N_closed_form(const Ensemble& ensemble, int m, std::span<const Vec3> k) {
  if (m != 2 && m != 3) throw DomainError("closed-form finite-N deviation is available for m = 2, 3 only");
  check_directions({m, m}, k);
  const double n = static_cast<double>(ensemble.size());
  auto S = [&](const Vec3& v) { return structure_factor(ensemble, v); };
  if (m == 2) return -2.0 / (n * n) * S(Vec3(k[0] + k[1] - k[2] - k[3]));
  std::complex<double> first = 0.0;
  const auto perms = cb::enumerate_permutations(3);
  for (const auto& s : perms)
    for (const auto& t : perms)
      first += S(Vec3(k[s[0]] - k[3 + t[0]])) * S(Vec3(k[s[1]] + k[s[2]] - k[3 + t[1]] - k[3 + t[2]]));
  return -first / (2 * n * n * n) + 12.0 / (n * n * n) * S(Vec3(k[0] + k[1] + k[2] - k[3] - k[4] - k[5]));
}

double forward_cubic_coefficient(int m) {
  // m! sum_k C(m,k) u^k / k!  times  (1+u)^{-m} = sum_i C(-m, i) u^i
  double total = 0.0;
  for (int k = 0; k <= std::min(m, 3); ++k) {
    const int i = 3 - k;
    double binom_neg = 1.0;  // C(-m, i) = (-1)^i C(m+i-1, i)
    for (int r = 0; r < i; ++r) binom_neg *= -static_cast<double>(m + r) / (r + 1);
    total += cb::to_double(cb::binomial(m, k)) / cb::to_double(cb::factorial(k)) * binom_neg;
  }
  return cb::to_double(cb::factorial(m)) * total;
}

SeriesValue taylor_forward_equal(long long N, int m, double R, TaylorVariant variant) {
  if (!(R >= 0.0)) throw DomainError("taylor_forward_equal needs R >= 0");
  if (m < 1 || N < 1) throw DomainError("taylor_forward_equal needs m, N >= 1");
  const double n = static_cast<double>(N), mm1 = static_cast<double>(m) * (m - 1);
  SeriesValue out;
  if (variant == TaylorVariant::LargeN) {
    const double mf = cb::to_double(cb::factorial(m));
    out.value = mf - mf * mm1 * R - 0.25 * mf * mm1 * n * n * R * R;
    out.finite_n_term = mf * mm1 / (2 * n);
  } else {
    const double A = cb::to_double(cb::factorial(m) * cb::factorial(m) * cb::binomial(N, m)) / std::pow(n, m);
    out.value = A - A * mm1 * R - 0.25 * A * (n * n - 3 * n - 2.0 * m * n + 3.0 * m - m * m - 2) * mm1 * R * R;
  }
  out.next_term = std::abs(forward_cubic_coefficient(m)) * std::pow(n * R, 3);
  return out;
}

double taylor_crossover(long long N) { return 4.0 / (static_cast<double>(N) * static_cast<double>(N)); }

SeriesValue classical_taylor_forward(long long N, int m, double R) {
  if (!(R >= 0.0)) throw DomainError("classical_taylor_forward needs R >= 0");
  if (m < 1 || N < 1) throw DomainError("classical_taylor_forward needs m, N >= 1");
  const double n = static_cast<double>(N), mm1 = static_cast<double>(m) * (m - 1);
  const double mf = cb::to_double(cb::factorial(m));
  SeriesValue out;
  out.value = mf + 0.5 * mf * mm1 * R - 0.25 * mf * mm1 * n * n * R * R;
  out.finite_n_term = mf * mm1 / (4 * n);
  out.next_term = std::abs(forward_cubic_coefficient(m)) * std::pow(n * R, 3);
  return out;
}

OffAxisSeries taylor_offaxis_coh(const Ensemble& ensemble, int m, const Vec3& k, double R) {
  if (m != 2 && m != 3) throw DomainError("off-axis expansion is available for m = 2, 3 only");
  if (!(R >= 0.0)) throw DomainError("taylor_offaxis_coh needs R >= 0");
  const double n = static_cast<double>(ensemble.size());
  OffAxisSeries out;
  out.m = m;
  out.epsilon = cb::to_double(cb::factorial(m)) * std::sqrt(R);
  const double e2 = out.epsilon * out.epsilon, e4 = e2 * e2;
  if (m == 2) {
    const std::complex<double> s1 = structure_factor(ensemble, k), s2 = structure_factor(ensemble, Vec3(2.0 * k));
    const double a1 = std::norm(s1), a2 = std::norm(s2);
    const std::complex<double> cross = s2 * std::conj(s1) * std::conj(s1);
    out.eps2_coeff = (a1 - n) / (n * n);
    out.eps4_coeff = -(n * a2 - (n - 10) * a1 * a1 - 8 * n * a1 - n * (cross + std::conj(cross))) / (16 * n * n * n);
    out.value = out.eps2_coeff * e2 + out.eps4_coeff * e4;
    out.averaged = (2 * n - 11) / (16 * n) * e4;
    out.large_n_limit = 2 * R * R;
  } else {
    out.averaged = (2 * n * n - 19 * n + 32) / (144 * n * n) * e4;
    out.value = out.averaged;
    out.large_n_limit = 18 * R * R;
  }
  return out;
}

double leading_unequal(long long N, double R, const CorrelationOrder& order) {
  const double n = static_cast<double>(N);
  if (order == CorrelationOrder(2, 1)) return 2 * std::sqrt(n * R);
  if (order == CorrelationOrder(3, 1)) return 3 * n * R;
  if (order == CorrelationOrder(3, 2)) return 6 * std::sqrt(n * R);
  throw DomainError("leading_unequal covers (2,1), (3,1), (3,2) only");
}

}  // namespace photonstat
