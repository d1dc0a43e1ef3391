#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "photonstat/scenario.hpp"
#include "photonstat/table.hpp"

namespace photonstat {

struct RunOptions {
  unsigned threads = 1;
  bool validate = false;
};

/// Row status strings.
inline constexpr const char* kStatusOk = "ok";
inline constexpr const char* kStatusDark = "dark_state";
inline constexpr const char* kStatusCapacity = "capacity_exceeded";

/// Summary keys set by the runners.
inline constexpr const char* kSummaryCapacityRows = "capacity_rows";
inline constexpr const char* kSummaryValidationPassed = "validation_passed";
inline constexpr const char* kSummaryMaxDiscrepancy = "max_discrepancy";

/// g^(m,n) over the sweep: forward closed form at k = 0, multilinear
/// product otherwise. `validate` appends an independent evaluation per row.
ResultTable run_correlate(const ScenarioConfig& config, const RunOptions& options = {});

/// Classical counterpart; `config.samples > 0` adds Monte Carlo columns.
ResultTable run_classical(const ScenarioConfig& config, const RunOptions& options = {});

/// GMT deviation decomposition over the sweep.
ResultTable run_deviation(const ScenarioConfig& config, const RunOptions& options = {});

/// Condition margins over the sweep, flagged at ratio >= 0.1.
ResultTable run_conditions(const ScenarioConfig& config, const RunOptions& options = {});

/// fig1 .. fig4; `config` supplies overrides (figure.*, realizations, seed,
/// ensemble.distribution, directions). Throws DomainError for unknown ids.
ResultTable run_figure(const std::string& id, const ScenarioConfig& config, const RunOptions& options = {});

/// Realizations are clouds drawn from stream r of `seed`.
struct OffAxisAverageSpec {
  long long n = 10000;
  std::vector<int> orders{2, 3};
  std::vector<double> ratios;
  std::size_t realizations = 1000;
  std::uint64_t seed = 1;
  CloudDistribution distribution = UniformCube{};
  DirectionSpec directions{DirectionSpec::Kind::OffAxis, 1.0, std::nullopt, {}};
};

struct OffAxisAverage {
  int m = 2;
  double ratio = 0.0;
  std::complex<double> mean;  // <delta g_coh>
  double std_error = 0.0;     // of the complex mean
  double mean_abs = 0.0;      // <|delta g_coh|>
  std::size_t realizations = 0;
};

/// Disorder average of delta g_coh^(m)(k) for every (m, R), m-major.
std::vector<OffAxisAverage> offaxis_coh_average(const OffAxisAverageSpec& spec, unsigned threads = 1);

/// Least-squares slope of log|y| against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// log10-spaced grid from 10^lo to 10^hi with `per_decade` points per decade.
std::vector<double> log_grid(double lo_exp, double hi_exp, int per_decade);

}  // namespace photonstat
