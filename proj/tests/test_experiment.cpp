#include <doctest.h>

#include <cmath>
#include <numbers>

#include "photonstat/errors.hpp"
#include "photonstat/experiment.hpp"
#include "photonstat/quantum.hpp"

using namespace photonstat;
using nlohmann::json;

namespace {

ScenarioConfig cfg(const char* text) { return parse_config(json::parse(text)); }

std::vector<double> column(const ResultTable& t, const std::string& name, const std::string& filter_col = "",
                           double filter = 0) {
  std::vector<double> out;
  for (std::size_t r = 0; r < t.size(); ++r)
    if (filter_col.empty() || t.number(r, filter_col) == filter) out.push_back(t.number(r, name));
  return out;
}

// Least-squares slope of log|y| vs log R restricted to lo <= R <= hi.
double slope_between(const ResultTable& t, const std::string& y, double lo, double hi, const std::string& by,
                     double value) {
  std::vector<double> xs, ys;
  for (std::size_t r = 0; r < t.size(); ++r) {
    const double R = t.number(r, "R");
    if (t.number(r, by) == value && R >= lo * (1 - 1e-12) && R <= hi * (1 + 1e-12)) {
      xs.push_back(R);
      ys.push_back(t.number(r, y));
    }
  }
  return log_log_slope(xs, ys);
}

const std::string& text(const ResultTable& t, std::size_t r, const std::string& name) {
  return std::get<std::string>(t.rows()[r][t.column(name)]);
}

}  // namespace

TEST_CASE("forward sweep of the inverted ensemble") {
  const auto c = cfg(R"({"state": {"kind": "pulse", "theta": 3.141592653589793}, "sweep": {"N": [2, 4, 8]}})");
  const auto t = run_correlate(c);
  REQUIRE(t.size() == 3);
  const auto g = column(t, "g_re");
  CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g[1] == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(g[2] == doctest::Approx(1.75).epsilon(1e-14));
  CHECK(text(t, 0, "method") == "forward-closed-form");
  CHECK(text(t, 0, "realization") == "closed-form");
  CHECK(text(t, 0, "status") == kStatusOk);
  CHECK(t.summary[kSummaryCapacityRows] == 0);
}

TEST_CASE("dark rows are flagged rather than fatal") {
  const auto c = cfg(R"({"sweep": {"N": [3], "theta": [0.0, 1.0]}})");
  const auto t = run_correlate(c);
  REQUIRE(t.size() == 2);
  CHECK(text(t, 0, "status") == kStatusDark);
  CHECK(std::isnan(t.number(0, "g_re")));
  CHECK(text(t, 1, "status") == kStatusOk);
  const auto d = run_deviation(c);
  CHECK(text(d, 0, "status") == kStatusDark);
  const auto k = run_conditions(c);
  CHECK(text(k, 0, "status") == kStatusDark);
}

TEST_CASE("validation against the brute-force oracle") {
  const char* text_cfg = R"({"state": {"kind": "pulse", "theta": 1.3}, "ensemble": {"n": 6, "seed": 3,
      "distribution": {"kind": "uniform_cube", "side": 3}},
      "directions": "off_axis", "realizations": 4, "sweep": {"N": [6], "R": [0.5, 0.01]}})";
  const auto c = cfg(text_cfg);
  const auto plain = run_correlate(c);
  const auto checked = run_correlate(c, {1, true});
  REQUIRE(plain.size() == 8);
  REQUIRE(checked.size() == 8);
  CHECK(checked.summary[kSummaryValidationPassed] == true);
  CHECK(checked.summary[kSummaryMaxDiscrepancy].get<double>() <= 1e-10);
  CHECK(checked.summary["validated_rows"] == 8);
  for (std::size_t r = 0; r < plain.size(); ++r) {
    for (std::size_t col = 0; col < plain.columns().size(); ++col)
      CHECK(plain.rows()[r][col] == checked.rows()[r][col]);
    CHECK(text(checked, r, "validation_method") == "oracle");
    CHECK(text(checked, r, "method") == "multilinear");
  }

  const auto dev = run_deviation(c, {2, true});
  CHECK(dev.summary[kSummaryValidationPassed] == true);
  CHECK(dev.summary[kSummaryMaxDiscrepancy].get<double>() <= 1e-10);

  const auto cl = run_classical(cfg(R"({"ensemble": {"n": 5, "seed": 2}, "directions": "off_axis",
      "sweep": {"R": [0.2]}, "realizations": 2})"), {1, true});
  CHECK(cl.summary[kSummaryValidationPassed] == true);
  CHECK(cl.summary[kSummaryMaxDiscrepancy].get<double>() <= 1e-10);
}

TEST_CASE("forward validation falls back to the multilinear path") {
  const auto t = run_correlate(cfg(R"({"sweep": {"N": [3, 300], "R": [0.1]}})"), {1, true});
  CHECK(text(t, 0, "validation_method") == "oracle");
  CHECK(text(t, 1, "validation_method") == "multilinear");
  CHECK(t.summary[kSummaryValidationPassed] == true);
}

TEST_CASE("capacity rows") {
  const auto t = run_correlate(cfg(R"({"order": [5, 5], "directions": "off_axis", "ensemble": {"n": 20}})"));
  REQUIRE(t.size() == 1);
  CHECK(text(t, 0, "status") == kStatusCapacity);
  CHECK(t.summary[kSummaryCapacityRows] == 1);
  CHECK(std::holds_alternative<std::monostate>(t.rows()[0][t.column("g_re")]));
}

TEST_CASE("results do not depend on the thread count") {
  const auto c = cfg(R"({"ensemble": {"n": 40, "seed": 11}, "directions": {"preset": "off_axis", "rotation_seed": 2},
      "realizations": 9, "sweep": {"R": [1e-3, 1e-5]}})");
  CHECK(to_csv(run_deviation(c, {1, false})) == to_csv(run_deviation(c, {4, false})));
  CHECK(to_csv(run_correlate(c, {1, false})) == to_csv(run_correlate(c, {3, false})));
  const auto sc = cfg(R"({"ensemble": {"n": 8}, "directions": "off_axis", "samples": 2000, "classical": {"ratio": 0.3}})");
  CHECK(to_csv(run_classical(sc, {1, false})) == to_csv(run_classical(sc, {4, false})));
}

TEST_CASE("condition table") {
  const auto t = run_conditions(cfg(R"({"order": 4, "state": {"kind": "pulse", "ratio": 1e-9},
      "sweep": {"N": [10000, 3]}})"));
  CHECK(t.number(0, "finite_n_lhs") == doctest::Approx(1.44e-2));
  CHECK(t.number(0, "vanishes") == 0);
  CHECK(t.number(1, "vanishes") == 1);
  CHECK(t.number(1, "g_forward") == 0.0);
  const auto u = run_conditions(cfg(R"({"order": [2, 1], "sweep": {"N": [10000]}, "state": {"kind": "pulse", "ratio": 1e-8}})"));
  CHECK(u.number(0, "spin_coherence_unequal_approx_rhs") == doctest::Approx(5e-3));
  CHECK(std::holds_alternative<std::monostate>(u.rows()[0][u.column("spin_coherence_lhs")]));
  CHECK(u.number(0, "g_forward") == doctest::Approx(2e-2).epsilon(0.01));
}

TEST_CASE("classical runner") {
  const auto t = run_classical(cfg(R"({"ensemble": {"n": 30}, "sweep": {"R": [0.0, 0.5]}})"));
  CHECK(t.number(0, "g_re") == doctest::Approx(2 - 1.0 / 30));
  const auto mc = run_classical(
      cfg(R"({"ensemble": {"n": 6, "seed": 4}, "directions": "off_axis", "samples": 200000, "classical": {"coherent": 0.4}})"),
      {2, false});
  REQUIRE(mc.size() == 1);
  CHECK(std::abs(mc.number(0, "mc_g_re") - mc.number(0, "g_re")) < 4 * mc.number(0, "mc_std_error"));
  CHECK(mc.number(0, "mc_samples") == 200000);
  CHECK(mc.number(0, "mc_batches") == 100);
}

TEST_CASE("figure 1 grid") {
  const auto t = run_figure("fig1", cfg(R"({"figure": {"N_grid": [10, 1000], "inverse_R": [0.01, 1e6]}})"));
  REQUIRE(t.size() == 4);
  CHECK(t.number(3, "g2") == doctest::Approx(2 - 2e-3).epsilon(1e-4));
  CHECK(t.number(3, "NR_squared") == doctest::Approx(1e-6));
  CHECK(run_figure("fig1", ScenarioConfig{}).size() == 9 * 21);
}

TEST_CASE("forward g2 is constant along contours of NR") {
  for (double u : {1e-2, 0.3, 1.0, 5.0}) {
    double lo = 1e9, hi = -1e9;
    for (long long N : {10000, 20000, 50000, 100000}) {
      const double g = static_cast<double>(forward_g(pulse_state_for_ratio(u / N), N, {2, 2}).real());
      lo = std::min(lo, g);
      hi = std::max(hi, g);
    }
    CHECK(hi - lo < 1e-3);
  }
}

TEST_CASE("figure 2 slopes") {
  const auto t = run_figure("fig2", ScenarioConfig{});
  CHECK(slope_between(t, "dg_coh_abs", 1e-7, 1e-5, "m", 2) == doctest::Approx(2.0).epsilon(0.05));
  CHECK(slope_between(t, "dg_coh_abs", 1e-11, 1e-9, "m", 2) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(slope_between(t, "dg_coh_abs", 1e-11, 1e-9, "m", 3) == doctest::Approx(1.0).epsilon(0.05));
  CHECK(t.number(0, "crossover_R") == doctest::Approx(4e-8));
  CHECK(t.number(0, "dg_n") == doctest::Approx(2e-4).epsilon(1e-8));
}

TEST_CASE("figure 4 slopes") {
  const auto t = run_figure("fig4", ScenarioConfig{});
  for (auto [m, n, s] : {std::tuple{2, 1, 0.5}, std::tuple{3, 1, 1.0}, std::tuple{3, 2, 0.5}}) {
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < t.size(); ++r)
      if (t.number(r, "m") == m && t.number(r, "n") == n && t.number(r, "R") >= 1e-10 * 0.999 &&
          t.number(r, "R") <= 1e-6 * 1.001) {
        xs.push_back(t.number(r, "R"));
        ys.push_back(t.number(r, "dg_coh_abs"));
      }
    CHECK(log_log_slope(xs, ys) == doctest::Approx(s).epsilon(0.05));
  }
}

TEST_CASE("figure 3 plateau shrinks with more realizations") {
  const char* base = R"({"figure": {"N": 300, "inverse_R": [1e8]}, "seed": 5, "realizations": %d})";
  char buf[256];
  std::snprintf(buf, sizeof buf, base, 16);
  const auto few = run_figure("fig3", cfg(buf), {2, false});
  std::snprintf(buf, sizeof buf, base, 1024);
  const auto many = run_figure("fig3", cfg(buf), {2, false});
  REQUIRE(few.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    CHECK(many.number(r, "abs_mean_dg_coh") < few.number(r, "abs_mean_dg_coh"));
    // the plateau is a finite-sample artefact, far above the quadratic law
    const double R = many.number(r, "R");
    CHECK(many.number(r, "abs_mean_over_R2") > 100 * many.number(r, "large_n_limit") / (R * R));
  }
  CHECK(few.number(0, "realizations") == 16);
}

TEST_CASE("disorder-averaged off-axis deviation follows the quadratic law") {
  OffAxisAverageSpec spec;
  spec.n = 10000;
  spec.ratios = {1e-4};
  spec.realizations = 1000;
  spec.seed = 7;
  const auto avg = offaxis_coh_average(spec, 4);
  REQUIRE(avg.size() == 2);
  CHECK(avg[0].m == 2);
  CHECK(std::abs(avg[0].mean) / 1e-8 == doctest::Approx(2.0).epsilon(0.25));
  CHECK(std::abs(avg[1].mean) / 1e-8 == doctest::Approx(18.0).epsilon(0.25));
  spec.realizations = 40;
  const auto a = offaxis_coh_average(spec, 1), b = offaxis_coh_average(spec, 3);
  CHECK(a[1].mean == b[1].mean);
  CHECK(a[1].std_error == b[1].std_error);
}

TEST_CASE("figure ids and helpers") {
  CHECK_THROWS_AS(run_figure("fig9", ScenarioConfig{}), DomainError);
  const auto g = log_grid(0, 2, 2);
  REQUIRE(g.size() == 5);
  CHECK(g[1] == doctest::Approx(std::sqrt(10.0)));
  CHECK(g[4] == doctest::Approx(100.0));
  CHECK(log_log_slope({1, 10, 100}, {3, 300, 30000}) == doctest::Approx(2.0));
}

TEST_CASE("CSV output") {
  ResultTable t({"a", "b", "c"});
  t.add_row({1LL, 0.1, std::string("plain")});
  t.add_row({Cell{}, std::numeric_limits<double>::quiet_NaN(), std::string("x,\"y\"")});
  CHECK_THROWS_AS(t.add_row({1LL}), DomainError);
  CHECK(to_csv(t) == "a,b,c\r\n1,0.1,plain\r\n,nan,\"x,\"\"y\"\"\"\r\n");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(sidecar_path("out/run.csv") == std::filesystem::path("out/run.json"));
  CHECK(sidecar_path("out/run.json") == std::filesystem::path("out/run.meta.json"));
  CHECK_THROWS_AS(t.column("d"), DomainError);
}
