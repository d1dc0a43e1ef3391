#include "photonstat/experiment.hpp"

#include <cmath>
#include <limits>
#include <optional>

#include "photonstat/classical.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/gmt.hpp"
#include "photonstat/parallel.hpp"
#include "photonstat/quantum.hpp"
#include "photonstat/rng.hpp"

namespace photonstat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Task {
  SweepPoint point;
  std::optional<std::uint64_t> realization;  // empty: closed form or explicit geometry
};

bool is_forward(const DirectionSpec& d, const CorrelationOrder& order) {
  if (d.kind == DirectionSpec::Kind::Forward) return true;
  if (d.kind != DirectionSpec::Kind::Explicit) return false;
  for (const auto& k : resolve_directions(d, order, 0))
    if (!k.isZero(0.0)) return false;
  return true;
}

std::vector<Task> make_tasks(const ScenarioConfig& config) {
  const bool single = is_forward(config.directions, config.order) || config.ensemble.positions.has_value();
  const std::size_t reps = config.realizations.value_or(1);
  std::vector<Task> out;
  for (const auto& p : sweep_points(config)) {
    if (single)
      out.push_back({p, std::nullopt});
    else
      for (std::size_t r = 0; r < reps; ++r) out.push_back({p, r});
  }
  return out;
}

Cell realization_cell(const ScenarioConfig& config, const Task& t) {
  if (t.realization) return static_cast<long long>(*t.realization);
  return std::string(config.ensemble.positions ? "explicit" : "closed-form");
}

double state_ratio(const SingleAtomState& s) { return s.is_dark() ? 0.0 : s.ratio(); }

double discrepancy(std::complex<double> a, std::complex<double> b) {
  if (std::isnan(a.real()) && std::isnan(b.real())) return 0.0;
  return std::abs(a - b) / std::max(1.0, std::abs(b));
}

struct Validation {
  double max = 0.0;
  bool failed = false;
  std::size_t checked = 0;
  void record(double d, double tol) {
    ++checked;
    if (!(d <= tol)) failed = true;
    if (d > max || std::isnan(d)) max = d;
  }
  void write(ResultTable& t, double tol) const {
    t.summary[kSummaryValidationPassed] = !failed;
    t.summary[kSummaryMaxDiscrepancy] = max;
    t.summary["validated_rows"] = checked;
    t.summary["validate_tolerance"] = tol;
  }
};

std::vector<std::string> with(std::vector<std::string> cols, std::initializer_list<const char*> extra, bool cond) {
  if (cond) cols.insert(cols.end(), extra.begin(), extra.end());
  return cols;
}

// Per-row output of a parallel stage: cells plus bookkeeping merged in order.
struct RowResult {
  std::vector<Cell> cells;
  bool capacity = false;
  std::optional<double> discrepancy;
};

void merge(ResultTable& table, std::vector<RowResult>& rows, const ScenarioConfig& config, bool validate) {
  long long capacity = 0;
  Validation v;
  for (auto& r : rows) {
    capacity += r.capacity;
    if (r.discrepancy) v.record(*r.discrepancy, config.validate_tolerance);
    table.add_row(std::move(r.cells));
  }
  table.summary[kSummaryCapacityRows] = capacity;
  if (validate) v.write(table, config.validate_tolerance);
}

}  // namespace

ResultTable run_correlate(const ScenarioConfig& config, const RunOptions& options) {
  const CorrelationOrder order = config.order;
  ResultTable table(with({"N", "state", "R", "directions", "realization", "seed", "method", "m", "n", "g_re", "g_im",
                          "g_abs", "status"},
                         {"validation_method", "validation_g_re", "validation_g_im", "discrepancy"},
                         options.validate));
  const auto tasks = make_tasks(config);
  const bool forward = is_forward(config.directions, order);
  auto rows = parallel_map(tasks.size(), options.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const SingleAtomState state = make_state(t.point.state);
    const DirectionSet dirs = resolve_directions(config.directions, order, t.realization.value_or(0));
    RowResult out;
    std::complex<double> g{kNaN, kNaN};
    std::string status = kStatusOk;
    const Method method = forward ? Method::ForwardClosedForm : Method::Multilinear;
    std::optional<Ensemble> ens;
    auto ensemble = [&]() -> const Ensemble& {
      if (!ens) ens = make_ensemble(config.ensemble, t.point.n, t.realization.value_or(0));
      return *ens;
    };
    try {
      if (forward) {
        const auto gl = forward_g(state, t.point.n, order);
        g = {static_cast<double>(gl.real()), static_cast<double>(gl.imag())};
      } else {
        g = correlate(state, ensemble(), order, dirs, method).g;
      }
    } catch (const ZeroIntensityError&) {
      status = kStatusDark;
    } catch (const CapacityError&) {
      status = kStatusCapacity;
      out.capacity = true;
    }
    out.cells = {t.point.n,        describe(t.point.state),  state_ratio(state),
                 describe(config.directions), realization_cell(config, t), static_cast<long long>(config.ensemble.seed),
                 to_string(method), static_cast<long long>(order.m), static_cast<long long>(order.n),
                 out.capacity ? Cell{} : Cell{g.real()}, out.capacity ? Cell{} : Cell{g.imag()},
                 out.capacity ? Cell{} : Cell{std::abs(g)}, status};
    if (options.validate) {
      std::optional<std::complex<double>> v;
      std::string vm;
      try {
        v = correlate(state, ensemble(), order, dirs, Method::Oracle).g;
        vm = to_string(Method::Oracle);
      } catch (const ZeroIntensityError&) {
        v = std::complex<double>{kNaN, kNaN};
        vm = to_string(Method::Oracle);
      } catch (const CapacityError&) {
        if (forward) {
          try {
            v = correlate(state, ensemble(), order, dirs, Method::Multilinear).g;
          } catch (const ZeroIntensityError&) {
            v = std::complex<double>{kNaN, kNaN};
          } catch (const CapacityError&) {
          }
          if (v) vm = to_string(Method::Multilinear);
        }
      }
      if (v && !out.capacity) {
        out.discrepancy = discrepancy(g, *v);
        out.cells.insert(out.cells.end(), {vm, v->real(), v->imag(), *out.discrepancy});
      } else {
        out.cells.insert(out.cells.end(), {std::string("none"), Cell{}, Cell{}, Cell{}});
      }
    }
    return out;
  });
  merge(table, rows, config, options.validate);
  return table;
}

ResultTable run_classical(const ScenarioConfig& config, const RunOptions& options) {
  const CorrelationOrder order = config.order;
  const bool mc = config.samples > 0;
  auto cols = with({"N", "R", "directions", "realization", "seed", "method", "m", "n", "g_re", "g_im", "g_abs",
                    "status"},
                   {"mc_g_re", "mc_g_im", "mc_std_error", "mc_samples", "mc_batches", "mc_seed"}, mc);
  cols = with(std::move(cols), {"validation_method", "validation_g_re", "validation_g_im", "discrepancy"},
              options.validate);
  ResultTable table(std::move(cols));
  const auto tasks = make_tasks(config);
  const bool forward = is_forward(config.directions, order);
  std::vector<RowResult> rows;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& t = tasks[i];
    RowResult out;
    std::string status = kStatusOk;
    std::optional<ClassicalEmitterModel> model;
    if (config.sweep.state_axis == SweepSpec::StateAxis::None) {
      model = ClassicalEmitterModel(config.classical.coherent, config.classical.incoherent);
    } else if (config.sweep.state_axis == SweepSpec::StateAxis::Ratio) {
      model = ClassicalEmitterModel::from_ratio(t.point.state.value, config.classical.incoherent);
    } else {
      const SingleAtomState s = make_state(t.point.state);
      if (std::isfinite(s.ratio())) model = ClassicalEmitterModel::from_ratio(state_ratio(s), config.classical.incoherent);
    }
    const double R = model ? model->ratio() : std::numeric_limits<double>::infinity();
    const DirectionSet dirs = resolve_directions(config.directions, order, t.realization.value_or(0));
    const Ensemble ens = make_ensemble(config.ensemble, t.point.n, t.realization.value_or(0));
    std::complex<double> g{kNaN, kNaN};
    std::vector<double> intensities;
    try {
      if (!model) throw ZeroIntensityError("no incoherent component");
      for (const auto& k : dirs) intensities.push_back(classical_intensity(*model, ens, k));
      if (forward) {
        const long double I = classical_forward_intensity(*model, t.point.n);
        if (!(I > 0)) throw ZeroIntensityError("zero classical intensity");
        const auto gl = classical_forward_G(*model, t.point.n, order) / ipow(std::sqrt(I), order.total());
        g = {static_cast<double>(gl.real()), static_cast<double>(gl.imag())};
      } else {
        g = classical_exact_g(*model, ens, order, dirs);
      }
    } catch (const ZeroIntensityError&) {
      status = kStatusDark;
    } catch (const CapacityError&) {
      status = kStatusCapacity;
      out.capacity = true;
    }
    const std::uint64_t row_seed = mix_seed(config.ensemble.seed, i);
    out.cells = {t.point.n, R, describe(config.directions), realization_cell(config, t),
                 static_cast<long long>(config.ensemble.seed), std::string(forward ? "forward-closed-form" : "exact"),
                 static_cast<long long>(order.m), static_cast<long long>(order.n),
                 out.capacity ? Cell{} : Cell{g.real()}, out.capacity ? Cell{} : Cell{g.imag()},
                 out.capacity ? Cell{} : Cell{std::abs(g)}, status};
    if (mc) {
      if (model && status == kStatusOk) {
        const auto est = classical_mc_G(*model, ens, order, dirs, config.samples, row_seed, kDefaultBatches,
                                        options.threads);
        double denom = 1.0;
        for (double I : intensities) denom *= std::sqrt(I);
        out.cells.insert(out.cells.end(), {est.estimate.real() / denom, est.estimate.imag() / denom,
                                           est.std_error / denom, static_cast<long long>(est.samples),
                                           static_cast<long long>(est.batches),
                                           std::to_string(est.seed)});
      } else {
        out.cells.insert(out.cells.end(), {Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});
      }
    }
    if (options.validate) {
      std::optional<std::complex<double>> v;
      std::string vm;
      if (model && status == kStatusOk) {
        double denom = 1.0;
        for (double I : intensities) denom *= std::sqrt(I);
        try {
          v = classical_oracle_G(*model, ens, order, dirs) / denom;
          vm = "oracle";
        } catch (const CapacityError&) {
          if (forward) {
            v = classical_exact_g(*model, ens, order, dirs);
            vm = "exact";
          }
        }
      }
      if (v) {
        out.discrepancy = discrepancy(g, *v);
        out.cells.insert(out.cells.end(), {vm, v->real(), v->imag(), *out.discrepancy});
      } else {
        out.cells.insert(out.cells.end(), {std::string("none"), Cell{}, Cell{}, Cell{}});
      }
    }
    rows.push_back(std::move(out));
  }
  merge(table, rows, config, options.validate);
  return table;
}

ResultTable run_deviation(const ScenarioConfig& config, const RunOptions& options) {
  const CorrelationOrder order = config.order;
  ResultTable table(with({"N", "state", "R", "directions", "realization", "seed", "method", "m", "n", "g_exact_re",
                          "g_exact_im", "g_gmt_re", "g_gmt_im", "dg_total_re", "dg_total_im", "dg_n_re", "dg_n_im",
                          "dg_coh_re", "dg_coh_im", "dg_coh_abs", "epsilon", "flagged", "status"},
                         {"validation_method", "validation_dg_total_re", "validation_dg_total_im", "discrepancy"},
                         options.validate));
  const auto tasks = make_tasks(config);
  auto rows = parallel_map(tasks.size(), options.threads, [&](std::size_t i) {
    const Task& t = tasks[i];
    const SingleAtomState state = make_state(t.point.state);
    const DirectionSet dirs = resolve_directions(config.directions, order, t.realization.value_or(0));
    const Ensemble ens = make_ensemble(config.ensemble, t.point.n, t.realization.value_or(0));
    RowResult out;
    std::string status = kStatusOk;
    DeviationReport rep;
    bool have = false;
    try {
      rep = deviation(state, ens, order, dirs);
      have = true;
    } catch (const ZeroIntensityError&) {
      status = kStatusDark;
    } catch (const CapacityError&) {
      status = kStatusCapacity;
      out.capacity = true;
    }
    auto num = [&](double v) { return have ? Cell{v} : (out.capacity ? Cell{} : Cell{kNaN}); };
    const ConditionReport cond = check_conditions(state, t.point.n, order);
    out.cells = {t.point.n,
                 describe(t.point.state),
                 state_ratio(state),
                 describe(config.directions),
                 realization_cell(config, t),
                 static_cast<long long>(config.ensemble.seed),
                 have ? to_string(rep.method) : std::string("none"),
                 static_cast<long long>(order.m),
                 static_cast<long long>(order.n),
                 num(rep.g_exact.real()),
                 num(rep.g_exact.imag()),
                 num(rep.g_gmt.real()),
                 num(rep.g_gmt.imag()),
                 num(rep.delta_total.real()),
                 num(rep.delta_total.imag()),
                 num(rep.delta_n.real()),
                 num(rep.delta_n.imag()),
                 num(rep.delta_coh.real()),
                 num(rep.delta_coh.imag()),
                 num(std::abs(rep.delta_coh)),
                 num(rep.epsilon),
                 static_cast<long long>(cond.any_flagged),
                 status};
    if (options.validate) {
      std::optional<std::complex<double>> v;
      std::string vm;
      if (have) {
        try {
          v = deviation(state, ens, order, dirs, Method::Oracle).delta_total;
          vm = to_string(Method::Oracle);
        } catch (const CapacityError&) {
          if (rep.method == Method::ForwardClosedForm) {
            v = deviation(state, ens, order, dirs, Method::Multilinear).delta_total;
            vm = to_string(Method::Multilinear);
          }
        }
      }
      if (v) {
        out.discrepancy = discrepancy(rep.delta_total, *v);
        out.cells.insert(out.cells.end(), {vm, v->real(), v->imag(), *out.discrepancy});
      } else {
        out.cells.insert(out.cells.end(), {std::string("none"), Cell{}, Cell{}, Cell{}});
      }
    }
    return out;
  });
  merge(table, rows, config, options.validate);
  return table;
}

ResultTable run_conditions(const ScenarioConfig& config, const RunOptions& options) {
  const CorrelationOrder order = config.order;
  static const std::vector<std::string> kMargins = {"finite_n", "spin_coherence", "spin_coherence_linear",
                                                    "spin_coherence_unequal", "spin_coherence_unequal_approx"};
  std::vector<std::string> cols = {"N", "state", "R", "m", "n"};
  for (const auto& name : kMargins)
    for (const char* part : {"_lhs", "_rhs", "_ratio"}) cols.push_back(name + part);
  cols.insert(cols.end(), {"vanishes", "g_forward", "flagged", "status"});
  ResultTable table(cols);
  const auto points = sweep_points(config);
  auto rows = parallel_map(points.size(), options.threads, [&](std::size_t i) {
    const SweepPoint& p = points[i];
    const SingleAtomState state = make_state(p.state);
    const ConditionReport rep = check_conditions(state, p.n, order);
    RowResult out;
    out.cells = {p.n, describe(p.state), state_ratio(state), static_cast<long long>(order.m),
                 static_cast<long long>(order.n)};
    for (const auto& name : kMargins) {
      if (const ConditionMargin* c = rep.find(name))
        out.cells.insert(out.cells.end(), {c->lhs, c->rhs, c->ratio});
      else
        out.cells.insert(out.cells.end(), {Cell{}, Cell{}, Cell{}});
    }
    std::string status = kStatusOk;
    Cell g;
    if (rep.vanishes) {
      g = 0.0;
    } else {
      try {
        g = std::abs(std::complex<double>(forward_g(state, p.n, order)));
      } catch (const ZeroIntensityError&) {
        g = kNaN;
        status = kStatusDark;
      }
    }
    out.cells.insert(out.cells.end(), {static_cast<long long>(rep.vanishes), g,
                                       static_cast<long long>(rep.any_flagged), status});
    return out;
  });
  merge(table, rows, config, false);
  return table;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DomainError("log_log_slope needs two or more matching points");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> log_grid(double lo_exp, double hi_exp, int per_decade) {
  if (per_decade < 1 || hi_exp < lo_exp) throw DomainError("log_grid needs per_decade >= 1 and hi >= lo");
  const int steps = static_cast<int>(std::lround((hi_exp - lo_exp) * per_decade));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) out.push_back(std::pow(10.0, lo_exp + static_cast<double>(i) / per_decade));
  return out;
}

}  // namespace photonstat
