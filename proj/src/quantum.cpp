#include "photonstat/quantum.hpp"

#include <cmath>

#include "photonstat/combinatorics.hpp"

namespace photonstat {

namespace cb = combinatorics;

std::string to_string(Method m) {
  switch (m) {
    case Method::Auto: return "auto";
    case Method::Oracle: return "oracle";
    case Method::Multilinear: return "multilinear";
    case Method::ForwardClosedForm: return "forward-closed-form";
  }
  return "unknown";
}

std::complex<double> oracle_G(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                              std::span<const Vec3> directions, double term_limit) {
  check_directions(order, directions);
  const Eigen::Index n = ensemble.size();
  const int slots = order.total();
  if (std::pow(static_cast<double>(n), slots) > term_limit)
    throw CapacityError("oracle_G would sum N^(m+n) = " + std::to_string(std::pow(double(n), slots)) +
                        " tuples; use multilinear_G");

  // phase[s](mu): e^{+ik.R} for minus slots, e^{-ik.R} for plus slots
  std::vector<std::vector<std::complex<double>>> phase(slots, std::vector<std::complex<double>>(n));
  for (int s = 0; s < slots; ++s) {
    const double sign = s < order.m ? 1.0 : -1.0;
    for (Eigen::Index mu = 0; mu < n; ++mu)
      phase[s][mu] = std::polar(1.0, sign * kTwoPi * directions[s].dot(ensemble.positions().col(mu)));
  }

  const std::complex<double> sp = state.sigma_plus(), sm = state.sigma_minus();
  const double p = state.population();
  std::vector<Eigen::Index> idx(slots, 0);
  std::complex<double> total = 0.0;
  while (true) {
    // Per-emitter normally ordered moment; any repeated raising or
    // lowering operator on one emitter annihilates the term.
    std::complex<double> moment = 1.0;
    for (int s = 0; s < slots && moment != 0.0; ++s) {
      bool seen = false;
      for (int t = 0; t < s; ++t) seen |= idx[t] == idx[s];
      if (seen) continue;
      int raising = 0, lowering = 0;
      for (int t = s; t < slots; ++t)
        if (idx[t] == idx[s]) ++(t < order.m ? raising : lowering);
      if (raising > 1 || lowering > 1)
        moment = 0.0;
      else if (raising && lowering)
        moment *= p;
      else if (raising)
        moment *= sp;
      else
        moment *= sm;
    }
    if (moment != 0.0) {
      std::complex<double> ph = 1.0;
      for (int s = 0; s < slots; ++s) ph *= phase[s][idx[s]];
      total += moment * ph;
    }
    int s = 0;
    while (s < slots && ++idx[s] == n) idx[s++] = 0;
    if (s == slots) break;
  }
  return total;
}

std::complex<long double> forward_G(const SingleAtomState& state, long long N, const CorrelationOrder& order) {
  if (N < 1) throw DomainError("forward_G needs N >= 1");
  const int m = order.m, n = order.n, a = order.alpha();
  const long double f = state.fluctuation();
  const std::complex<long double> sp(state.sigma_plus().real(), state.sigma_plus().imag());
  const std::complex<long double> sm(state.sigma_minus().real(), state.sigma_minus().imag());
  std::complex<long double> total = 0;
  for (int j = 0; j <= a; ++j) {
    const cb::BigInt free_atoms = N - (2LL * a - j) >= 0 ? cb::BigInt(N - (2LL * a - j)) : cb::BigInt(0);
    const long long rest = free_atoms.convert_to<long long>();
    const cb::BigInt prefactor = cb::binomial(m, j) * cb::binomial(n, j) * cb::factorial(j) *
                                 cb::factorial(2 * a - j) * cb::binomial(N, 2LL * a - j) * cb::factorial(m - a) *
                                 cb::binomial(rest, m - a) * cb::factorial(n - a) * cb::binomial(rest, n - a);
    if (prefactor == 0) continue;
    std::complex<long double> inner = 0;
    for (int l = 0; l <= j; ++l)
      inner += cb::to_long_double(cb::binomial(j, l)) * ipow(f, l) * ipow(sp, m - l) * ipow(sm, n - l);
    total += cb::to_long_double(prefactor) * inner;
  }
  return total;
}

double forward_G_equal(const SingleAtomState& state, long long N, int m) {
  if (m < 1) throw DomainError("forward_G_equal needs m >= 1");
  return static_cast<double>(forward_G(state, N, {m, m}).real());
}

std::complex<double> forward_G_unequal(const SingleAtomState& state, long long N, int m, int n) {
  if (m == n) throw DomainError("forward_G_unequal needs m != n");
  const auto G = forward_G(state, N, {m, n});
  return {static_cast<double>(G.real()), static_cast<double>(G.imag())};
}

long double forward_intensity(const SingleAtomState& state, long long N) {
  const long double n = static_cast<long double>(N);
  return n * state.fluctuation() + n * n * static_cast<long double>(state.coherence_sq());
}

std::complex<long double> forward_g(const SingleAtomState& state, long long N, const CorrelationOrder& order) {
  const long double I = forward_intensity(state, N);
  if (!(I > 0)) throw ZeroIntensityError("forward intensity vanishes (dark state); cannot normalize");
  return forward_G(state, N, order) / ipow(std::sqrt(I), order.total());
}

double intensity(const SingleAtomState& state, const Ensemble& ensemble, const Vec3& k) {
  return static_cast<double>(ensemble.size()) * state.fluctuation() +
         state.coherence_sq() * std::norm(structure_factor(ensemble, k));
}

std::complex<double> normalize(std::complex<double> G, std::span<const double> intensities) {
  double denom = 1.0;
  for (double I : intensities) {
    if (!(I > 0.0)) throw ZeroIntensityError("zero single-direction intensity; cannot normalize");
    denom *= std::sqrt(I);
  }
  return G / denom;
}

CorrelationResult correlate(const SingleAtomState& state, const Ensemble& ensemble, const CorrelationOrder& order,
                            std::span<const Vec3> directions, Method method) {
  check_directions(order, directions);
  if (method == Method::Auto) {
    bool forward = true;
    for (const auto& k : directions) forward &= k.isZero(0.0);
    method = forward ? Method::ForwardClosedForm : Method::Multilinear;
  }
  CorrelationResult r;
  r.method = method;
  r.order = order;
  r.directions.assign(directions.begin(), directions.end());
  std::vector<double> I;
  switch (method) {
    case Method::ForwardClosedForm: {
      for (const auto& k : directions)
        if (!k.isZero(0.0)) throw DomainError("forward closed form requires all directions k = 0");
      const auto G = forward_G(state, ensemble.size(), order);
      r.raw = {static_cast<double>(G.real()), static_cast<double>(G.imag())};
      I.assign(order.total(), static_cast<double>(forward_intensity(state, ensemble.size())));
      break;
    }
    case Method::Oracle: {
      r.raw = oracle_G(state, ensemble, order, directions);
      const CorrelationOrder one(1, 1);
      for (const auto& k : directions) {
        const Vec3 kk[2] = {k, k};
        I.push_back(oracle_G(state, ensemble, one, kk).real());
      }
      break;
    }
    default:
      r.raw = multilinear_G(state, ensemble, order, directions);
      for (const auto& k : directions) I.push_back(intensity(state, ensemble, k));
      break;
  }
  r.g = normalize(r.raw, I);
  return r;
}

}  // namespace photonstat
