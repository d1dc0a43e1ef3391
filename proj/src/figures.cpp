#include <cmath>

#include "photonstat/combinatorics.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/experiment.hpp"
#include "photonstat/gmt.hpp"
#include "photonstat/parallel.hpp"
#include "photonstat/quantum.hpp"

namespace photonstat {

namespace cb = combinatorics;

std::vector<OffAxisAverage> offaxis_coh_average(const OffAxisAverageSpec& spec, unsigned threads) {
  if (spec.realizations < 1) throw DomainError("offaxis_coh_average needs at least one realization");
  if (spec.ratios.empty()) throw DomainError("offaxis_coh_average needs at least one ratio");
  for (int m : spec.orders)
    if (m < 1) throw DomainError("orders must be >= 1");
  std::vector<SingleAtomState> states;
  for (double R : spec.ratios) states.push_back(pulse_state_for_ratio(R));
  const SingleAtomState incoherent = state_from_moments(1.0, 0.0);
  const std::size_t points = spec.orders.size() * spec.ratios.size();

  using Sample = std::vector<std::complex<long double>>;
  const auto samples = parallel_map(spec.realizations, threads, [&](std::size_t r) {
    const Ensemble ens = random_cloud(spec.n, spec.seed, spec.distribution, r);
    Sample out;
    out.reserve(points);
    for (int m : spec.orders) {
      const CorrelationOrder order(m, m);
      const auto geo = make_geometry<long double>(ens, order, resolve_directions(spec.directions, order, r));
      const auto zero = exact_and_gmt(incoherent, geo);
      const auto dn = zero.g_gmt - zero.g_exact;
      for (const auto& s : states) {
        const auto v = exact_and_gmt(s, geo);
        out.push_back((v.g_gmt - v.g_exact) - dn);
      }
    }
    return out;
  });

  std::vector<OffAxisAverage> out;
  const long double n = static_cast<long double>(spec.realizations);
  for (std::size_t p = 0; p < points; ++p) {
    std::complex<long double> sum = 0;
    long double sum_abs = 0;
    for (const auto& s : samples) {
      sum += s[p];
      sum_abs += std::abs(s[p]);
    }
    const std::complex<long double> mean = sum / n;
    long double var = 0;
    for (const auto& s : samples) var += std::norm(s[p] - mean);
    OffAxisAverage a;
    a.m = spec.orders[p / spec.ratios.size()];
    a.ratio = spec.ratios[p % spec.ratios.size()];
    a.mean = {static_cast<double>(mean.real()), static_cast<double>(mean.imag())};
    a.std_error = spec.realizations > 1 ? static_cast<double>(std::sqrt(var / (n - 1) / n)) : 0.0;
    a.mean_abs = static_cast<double>(sum_abs / n);
    a.realizations = spec.realizations;
    out.push_back(a);
  }
  return out;
}

namespace {

std::vector<double> ratios_from_inverse(const std::vector<double>& inverse) {
  std::vector<double> out;
  for (double v : inverse) out.push_back(1.0 / v);
  return out;
}

// d log|y| / d log x by neighbouring differences, one-sided at the ends.
std::vector<double> local_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  if (n < 2) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1, b = i + 1 == n ? n - 1 : i + 1;
    out[i] = (std::log(std::abs(y[b])) - std::log(std::abs(y[a]))) / (std::log(x[b]) - std::log(x[a]));
  }
  return out;
}

ResultTable figure1(const ScenarioConfig& config) {
  const auto ns = config.figure.n_grid.empty() ? std::vector<long long>{10, 32, 100, 316, 1000, 3162, 10000, 31623, 100000}
                                               : config.figure.n_grid;
  const auto inverse =
      config.figure.inverse_ratio_grid.empty() ? log_grid(-2, 8, 2) : config.figure.inverse_ratio_grid;
  ResultTable t({"N", "inverse_R", "R", "g2", "gmt", "NR_squared", "finite_n_ratio", "spin_coherence_ratio"});
  const CorrelationOrder order(2, 2);
  for (long long N : ns)
    for (double inv : inverse) {
      const double R = 1.0 / inv;
      const SingleAtomState s = pulse_state_for_ratio(R);
      const double g = static_cast<double>(forward_g(s, N, order).real());
      const auto cond = check_conditions(s, N, order);
      const double nr = static_cast<double>(N) * R;
      t.add_row({N, inv, R, g, 2.0, nr * nr, cond.find("finite_n")->ratio, cond.find("spin_coherence")->ratio});
    }
  t.summary["figure"] = "fig1";
  return t;
}

ResultTable figure2(const ScenarioConfig& config) {
  const long long N = config.figure.n.value_or(10000);
  const auto inverse =
      config.figure.inverse_ratio_grid.empty() ? log_grid(0, 12, 4) : config.figure.inverse_ratio_grid;
  ResultTable t({"m", "N", "inverse_R", "R", "g", "dg_n", "dg_coh", "dg_coh_abs", "taylor_linear", "taylor_quadratic",
                 "crossover_R", "local_slope"});
  for (int m : {2, 3}) {
    const CorrelationOrder order(m, m);
    const long double gmt = cb::to_long_double(cb::factorial(m));
    const long double g0 = forward_g(state_from_moments(1.0, 0.0), N, order).real();
    std::vector<double> R, dc, g, dn;
    for (double inv : inverse) {
      R.push_back(1.0 / inv);
      const long double gl = forward_g(pulse_state_for_ratio(R.back()), N, order).real();
      g.push_back(static_cast<double>(gl));
      dn.push_back(static_cast<double>(gmt - g0));
      dc.push_back(static_cast<double>(g0 - gl));
    }
    const auto slope = local_slopes(R, dc);
    const double mf = cb::to_double(cb::factorial(m)), mm1 = m * (m - 1.0), n = static_cast<double>(N);
    for (std::size_t i = 0; i < R.size(); ++i)
      t.add_row({static_cast<long long>(m), N, inverse[i], R[i], g[i], dn[i], dc[i], std::abs(dc[i]),
                 mf * mm1 * R[i], 0.25 * mf * mm1 * n * n * R[i] * R[i], taylor_crossover(N), slope[i]});
  }
  t.summary["figure"] = "fig2";
  return t;
}

ResultTable figure3(const ScenarioConfig& config, const RunOptions& options) {
  OffAxisAverageSpec spec;
  spec.n = config.figure.n.value_or(10000);
  const auto inverse = config.figure.inverse_ratio_grid.empty() ? log_grid(0, 8, 2) : config.figure.inverse_ratio_grid;
  spec.ratios = ratios_from_inverse(inverse);
  spec.realizations = config.realizations.value_or(1000);
  spec.seed = config.ensemble.seed;
  spec.distribution = config.ensemble.distribution;
  if (config.figure.wave_vector) {
    spec.directions = DirectionSpec{DirectionSpec::Kind::Explicit, 1.0, std::nullopt, {*config.figure.wave_vector}};
  } else if (config.directions.kind == DirectionSpec::Kind::OffAxis) {
    spec.directions = config.directions;
  }
  const auto avg = offaxis_coh_average(spec, options.threads);
  ResultTable t({"m", "N", "inverse_R", "R", "realizations", "seed", "mean_dg_coh_re", "mean_dg_coh_im",
                 "abs_mean_dg_coh", "std_error", "mean_abs_dg_coh", "abs_mean_over_R2", "series_averaged",
                 "large_n_limit"});
  const double n = static_cast<double>(spec.n);
  for (std::size_t i = 0; i < avg.size(); ++i) {
    const auto& a = avg[i];
    const double mf = cb::to_double(cb::factorial(a.m));
    const double e4 = std::pow(mf * mf * a.ratio, 2);
    const double series = a.m == 2   ? (2 * n - 11) / (16 * n) * e4
                          : a.m == 3 ? (2 * n * n - 19 * n + 32) / (144 * n * n) * e4
                                     : std::numeric_limits<double>::quiet_NaN();
    const double limit = a.m == 2 ? 2 * a.ratio * a.ratio : a.m == 3 ? 18 * a.ratio * a.ratio : series;
    t.add_row({static_cast<long long>(a.m), spec.n, inverse[i % inverse.size()], a.ratio,
               static_cast<long long>(a.realizations), static_cast<long long>(spec.seed), a.mean.real(),
               a.mean.imag(), std::abs(a.mean), a.std_error, a.mean_abs, std::abs(a.mean) / (a.ratio * a.ratio),
               series, limit});
  }
  t.summary["figure"] = "fig3";
  t.summary["directions"] = describe(spec.directions);
  t.summary["distribution"] = describe(spec.distribution);
  return t;
}

ResultTable figure4(const ScenarioConfig& config) {
  const long long N = config.figure.n.value_or(10000);
  const auto inverse =
      config.figure.inverse_ratio_grid.empty() ? log_grid(0, 12, 4) : config.figure.inverse_ratio_grid;
  ResultTable t({"m", "n", "N", "inverse_R", "R", "dg_coh_abs", "leading", "sqrt_R", "local_slope"});
  for (const CorrelationOrder order : {CorrelationOrder(2, 1), CorrelationOrder(3, 1), CorrelationOrder(3, 2)}) {
    std::vector<double> R, d;
    for (double inv : inverse) {
      R.push_back(1.0 / inv);
      d.push_back(std::abs(std::complex<double>(forward_g(pulse_state_for_ratio(R.back()), N, order))));
    }
    const auto slope = local_slopes(R, d);
    for (std::size_t i = 0; i < R.size(); ++i)
      t.add_row({static_cast<long long>(order.m), static_cast<long long>(order.n), N, inverse[i], R[i], d[i],
                 leading_unequal(N, R[i], order), std::sqrt(R[i]), slope[i]});
  }
  t.summary["figure"] = "fig4";
  return t;
}

}  // namespace

ResultTable run_figure(const std::string& id, const ScenarioConfig& config, const RunOptions& options) {
  if (id == "fig1") return figure1(config);
  if (id == "fig2") return figure2(config);
  if (id == "fig3") return figure3(config, options);
  if (id == "fig4") return figure4(config);
  throw DomainError("unknown figure id '" + id + "' (fig1, fig2, fig3, fig4)");
}

}  // namespace photonstat
