#include "photonstat/classical.hpp"

#include <cmath>

#include "photonstat/combinatorics.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/parallel.hpp"
#include "photonstat/rng.hpp"

namespace photonstat {

namespace cb = combinatorics;

ClassicalMoments::ClassicalMoments(const ClassicalEmitterModel& model, int max_minus, int max_plus)
    : max_minus_(max_minus), max_plus_(max_plus), table_((max_minus + 1) * (max_plus + 1)) {
  if (max_minus < 0 || max_plus < 0) throw DomainError("moment table bounds must be non-negative");
  const std::complex<double> cs = std::conj(model.e_coh), c = model.e_coh;
  const double i2 = model.e_incoh * model.e_incoh;
  for (int a = 0; a <= max_minus; ++a)
    for (int b = 0; b <= max_plus; ++b) {
      std::complex<double> w = 0.0;
      for (int t = 0; t <= std::min(a, b); ++t)
        w += cb::to_double(cb::binomial(a, t) * cb::binomial(b, t)) * ipow(i2, t) * ipow(cs, a - t) *
             ipow(c, b - t);
      table_[a * (max_plus + 1) + b] = w;
    }
}

std::complex<long double> classical_forward_G(const ClassicalEmitterModel& model, long long N,
                                              const CorrelationOrder& order) {
  if (N < 1) throw DomainError("classical forward correlator needs N >= 1");
  const long double n = static_cast<long double>(N);
  const std::complex<long double> c(model.e_coh.real(), model.e_coh.imag());
  const std::complex<long double> nc = n * c, ncs = n * std::conj(c);
  const long double i2 = static_cast<long double>(model.e_incoh) * model.e_incoh;
  std::complex<long double> total = 0;
  for (int t = 0; t <= order.alpha(); ++t) {
    const long double count =
        cb::to_long_double(cb::binomial(order.m, t) * cb::binomial(order.n, t) * cb::classical_count(t, N));
    total += count * ipow(i2, t) * ipow(ncs, order.m - t) * ipow(nc, order.n - t);
  }
  return total;
}

long double classical_forward_intensity(const ClassicalEmitterModel& model, long long N) {
  const long double n = static_cast<long double>(N);
  return n * model.e_incoh * model.e_incoh + n * n * static_cast<long double>(std::norm(model.e_coh));
}

namespace {

std::complex<long double> classical_forward_normalized(const ClassicalEmitterModel& model, long long N,
                                                       const CorrelationOrder& order) {
  const long double I = classical_forward_intensity(model, N);
  if (!(I > 0)) throw ZeroIntensityError("classical forward intensity vanishes; cannot normalize");
  return classical_forward_G(model, N, order) / ipow(std::sqrt(I), order.total());
}

}  // namespace

long double classical_forward_g(const ClassicalEmitterModel& model, long long N, int m) {
  if (m < 1) throw DomainError("classical_forward_g needs m >= 1");
  return classical_forward_normalized(model, N, {m, m}).real();
}

std::complex<long double> classical_forward_g_unequal(const ClassicalEmitterModel& model, long long N, int m, int n) {
  if (m == n) throw DomainError("classical_forward_g_unequal needs m != n");
  return classical_forward_normalized(model, N, {m, n});
}

double classical_intensity(const ClassicalEmitterModel& model, const Ensemble& ensemble, const Vec3& k) {
  return static_cast<double>(ensemble.size()) * model.e_incoh * model.e_incoh +
         std::norm(model.e_coh) * std::norm(structure_factor(ensemble, k));
}

std::complex<double> classical_oracle_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                        const CorrelationOrder& order, std::span<const Vec3> directions,
                                        double term_limit) {
  check_directions(order, directions);
  const Eigen::Index n = ensemble.size();
  const int slots = order.total();
  if (std::pow(static_cast<double>(n), slots) > term_limit)
    throw CapacityError("classical_oracle_G would sum N^(m+n) tuples; use classical_exact_G");
  const ClassicalMoments w(model, order.m, order.n);
  std::vector<std::vector<std::complex<double>>> phase(slots, std::vector<std::complex<double>>(n));
  for (int s = 0; s < slots; ++s) {
    const double sign = s < order.m ? 1.0 : -1.0;
    for (Eigen::Index mu = 0; mu < n; ++mu)
      phase[s][mu] = std::polar(1.0, sign * kTwoPi * directions[s].dot(ensemble.positions().col(mu)));
  }
  std::vector<Eigen::Index> idx(slots, 0);
  std::vector<int> minus(n, 0), plus(n, 0);
  std::complex<double> total = 0.0;
  while (true) {
    std::complex<double> term = 1.0;
    for (int s = 0; s < slots; ++s) {
      ++(s < order.m ? minus : plus)[idx[s]];
      term *= phase[s][idx[s]];
    }
    for (int s = 0; s < slots; ++s) {
      const Eigen::Index mu = idx[s];
      if (minus[mu] || plus[mu]) {
        term *= w(minus[mu], plus[mu]);
        minus[mu] = plus[mu] = 0;
      }
    }
    total += term;
    int s = 0;
    while (s < slots && ++idx[s] == n) idx[s++] = 0;
    if (s == slots) break;
  }
  return total;
}

std::complex<double> classical_exact_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                       const CorrelationOrder& order, std::span<const Vec3> directions, int cap) {
  const SlotGroups groups = group_slots(order, directions, cap);
  const auto phases = slot_phases<double>(groups, ensemble);
  const auto terms = unrestricted_terms(groups);
  const ClassicalMoments w(model, order.m, order.n);
  std::vector<std::complex<double>> base(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    double inv = 1.0;
    for (int e : terms[t].increments) inv /= std::tgamma(e + 1.0);
    base[t] = w(terms[t].minus_count, terms[t].plus_count) * inv;
  }
  return square_free_product<double>(groups, terms, ensemble.size(), [&](Eigen::Index mu, std::size_t t) {
    std::complex<double> v = base[t];
    if (v == 0.0) return v;
    for (int g = 0; g < groups.groups(); ++g)
      if (terms[t].increments[g]) v *= ipow(phases(mu, g), terms[t].increments[g]);
    return v;
  });
}

std::complex<double> classical_exact_g(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                       const CorrelationOrder& order, std::span<const Vec3> directions, int cap) {
  const std::complex<double> G = classical_exact_G(model, ensemble, order, directions, cap);
  double denom = 1.0;
  for (const auto& k : directions) {
    const double I = classical_intensity(model, ensemble, k);
    if (!(I > 0.0)) throw ZeroIntensityError("zero classical intensity; cannot normalize");
    denom *= std::sqrt(I);
  }
  return G / denom;
}

MonteCarloEstimate classical_mc_G(const ClassicalEmitterModel& model, const Ensemble& ensemble,
                                  const CorrelationOrder& order, std::span<const Vec3> directions,
                                  std::size_t samples, std::uint64_t seed, std::size_t batches, unsigned threads) {
  if (samples < 2) throw DomainError("classical_mc_G needs at least two samples");
  batches = std::clamp<std::size_t>(batches, 2, samples);
  const SlotGroups groups = group_slots(order, directions, order.total());
  const auto phases = slot_phases<double>(groups, ensemble);
  const Eigen::Index n = ensemble.size();
  const std::complex<double> coh = model.e_coh, coh_conj = std::conj(model.e_coh);
  const double incoh = model.e_incoh;

  struct Batch {
    std::complex<double> sum;
    std::size_t count;
  };
  const auto results = parallel_map(batches, threads, [&](std::size_t b) {
    const std::size_t count = samples / batches + (b < samples % batches ? 1 : 0);
    auto rng = stream_engine(seed, b);
    std::vector<std::complex<double>> osc(n), field(groups.groups());
    std::complex<double> sum = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
      for (Eigen::Index mu = 0; mu < n; ++mu) osc[mu] = std::polar(incoh, kTwoPi * unit_uniform(rng));
      std::complex<double> product = 1.0;
      for (int g = 0; g < groups.groups(); ++g) {
        std::complex<double> e = 0.0;
        if (groups.is_minus(g))
          for (Eigen::Index mu = 0; mu < n; ++mu) e += phases(mu, g) * (coh_conj + std::conj(osc[mu]));
        else
          for (Eigen::Index mu = 0; mu < n; ++mu) e += phases(mu, g) * (coh + osc[mu]);
        product *= ipow(e, groups.mult[g]);
      }
      sum += product;
    }
    return Batch{sum, count};
  });

  MonteCarloEstimate out;
  out.samples = samples;
  out.batches = batches;
  out.seed = seed;
  std::complex<double> total = 0.0;
  for (const auto& r : results) total += r.sum;
  out.estimate = total / static_cast<double>(samples);
  double var = 0.0;
  for (const auto& r : results) {
    const std::complex<double> d = r.sum / static_cast<double>(r.count) - out.estimate;
    var += std::norm(d) * static_cast<double>(r.count);
  }
  // Variance of the overall mean from the spread of batch means.
  var /= static_cast<double>(batches - 1) * static_cast<double>(samples);
  out.std_error = std::sqrt(var);
  return out;
}

}  // namespace photonstat
