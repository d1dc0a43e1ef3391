#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "photonstat/errors.hpp"
#include "photonstat/scenario.hpp"

using namespace photonstat;
using nlohmann::json;

namespace {

std::string error_path(const json& j) {
  try {
    parse_config(j);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("defaults") {
  const auto c = parse_config(json::object());
  CHECK(c.state.kind == StateSpec::Kind::Pulse);
  CHECK(c.state.value == doctest::Approx(std::numbers::pi));
  CHECK(c.order == CorrelationOrder(2, 2));
  CHECK(c.directions.kind == DirectionSpec::Kind::Forward);
  CHECK(c.ensemble.n == 1);
  CHECK_FALSE(c.realizations.has_value());
  CHECK(c.samples == 0);
  CHECK(c.validate_tolerance == 1e-10);
}

TEST_CASE("full configuration") {
  const auto c = parse_config(json::parse(R"({
    "state": {"kind": "moments", "population": 0.5, "coherence": [0.1, -0.2]},
    "ensemble": {"n": 40, "seed": 9, "distribution": {"kind": "gaussian", "sigma": 7}},
    "order": [3, 1],
    "directions": {"preset": "off_axis", "magnitude": 0.5, "rotation_seed": 4},
    "sweep": {"N": [10, 20], "R": [0.1, 0.01, 0.001]},
    "realizations": 12,
    "samples": 5000,
    "classical": {"ratio": 0.04, "incoherent": 2},
    "figure": {"N": 300, "inverse_R": [1, 10], "k": [0, 1, 0]},
    "validate_tolerance": 1e-8
  })"));
  CHECK(c.state.kind == StateSpec::Kind::Moments);
  CHECK(c.state.coherence == std::complex<double>(0.1, -0.2));
  CHECK(make_state(c.state).population() == 0.5);
  CHECK(c.ensemble.seed == 9);
  CHECK(std::get<GaussianCloud>(c.ensemble.distribution).sigma == 7.0);
  CHECK(c.order == CorrelationOrder(3, 1));
  CHECK(c.directions.kind == DirectionSpec::Kind::OffAxis);
  CHECK(c.directions.magnitude == 0.5);
  CHECK(*c.directions.rotation_seed == 4u);
  CHECK(*c.realizations == 12u);
  CHECK(c.samples == 5000u);
  CHECK(c.classical.coherent.real() == doctest::Approx(0.4));
  CHECK(*c.figure.n == 300);
  CHECK(c.figure.inverse_ratio_grid.size() == 2);
  CHECK((*c.figure.wave_vector)[1] == 1.0);
  CHECK(c.validate_tolerance == 1e-8);
  CHECK(c.source["realizations"] == 12);

  const auto pts = sweep_points(c);
  REQUIRE(pts.size() == 6);
  CHECK(pts[0].n == 10);
  CHECK(pts[2].state.value == 0.001);
  CHECK(pts[3].n == 20);
  CHECK(pts[4].state.kind == StateSpec::Kind::PulseRatio);
}

TEST_CASE("order and direction forms") {
  CHECK(parse_config(json::parse(R"({"order": 3})")).order == CorrelationOrder(3, 3));
  CHECK(parse_config(json::parse(R"({"order": {"m": 2, "n": 0}})")).order == CorrelationOrder(2, 0));
  CHECK(parse_config(json::parse(R"({"order": {"m": 2}})")).order == CorrelationOrder(2, 2));
  CHECK(parse_config(json::parse(R"({"directions": "off_axis"})")).directions.kind == DirectionSpec::Kind::OffAxis);
  const auto one = parse_config(json::parse(R"({"directions": [[0.1, 0, 0]]})"));
  CHECK(resolve_directions(one.directions, one.order, 0).size() == 4);
  const auto ex = parse_config(json::parse(R"({"order": [1, 1], "directions": {"vectors": [[1,0,0],[0,1,0]]}})"));
  const auto d = resolve_directions(ex.directions, ex.order, 0);
  CHECK(d[1] == Vec3(0, 1, 0));
}

TEST_CASE("direction presets") {
  DirectionSpec off{DirectionSpec::Kind::OffAxis, 1.0, std::nullopt, {}};
  const auto d = resolve_directions(off, {2, 2}, 3);
  REQUIRE(d.size() == 4);
  for (const auto& k : d) CHECK(k == Vec3(1, 0, 0));
  off.rotation_seed = 5;
  const auto a = resolve_directions(off, {2, 2}, 0), b = resolve_directions(off, {2, 2}, 1);
  CHECK(a[0].norm() == doctest::Approx(1.0));
  CHECK(a[0][2] == 0.0);
  CHECK(a[0] != b[0]);
  CHECK(a == resolve_directions(off, {2, 2}, 0));
  CHECK(resolve_directions(DirectionSpec{}, {2, 1}, 0) == forward_directions({2, 1}));
  CHECK(describe(off) == "off_axis(rotated)");
}

TEST_CASE("explicit positions") {
  const auto c = parse_config(json::parse(R"({"ensemble": {"positions": [[0,0,0],[1,0,0],[0,0.5,0]]}})"));
  CHECK(c.ensemble.n == 3);
  const auto e = make_ensemble(c.ensemble, c.ensemble.n, 7);
  CHECK(e.provenance().explicit_positions);
  CHECK(e.positions()(1, 2) == 0.5);
  const auto generated = make_ensemble(parse_config(json::parse(R"({"ensemble": {"n": 5}})")).ensemble, 8, 2);
  CHECK(generated.size() == 8);
  CHECK(generated.provenance().stream == 2);
}

TEST_CASE("state kinds") {
  CHECK(make_state(parse_config(json::parse(R"({"state": {"kind": "pulse", "ratio": 0.25}})")).state).ratio() ==
        doctest::Approx(0.25));
  CHECK(make_state(parse_config(json::parse(R"({"state": {"kind": "driven", "s": 4}})")).state).ratio() ==
        doctest::Approx(0.25));
  CHECK(describe(parse_config(json::parse(R"({"state": {"kind": "pulse", "theta": 1}})")).state) == "pulse(theta=1)");
}

TEST_CASE("configuration errors name the field") {
  CHECK(error_path(json::parse(R"({"bogus": 1})")) == "bogus");
  CHECK(error_path(json::parse(R"({"state": {"kind": "pulse", "theta": 4}})")) == "state.theta");
  CHECK(error_path(json::parse(R"({"state": {"kind": "pulse"}})")) == "state.theta");
  CHECK(error_path(json::parse(R"({"state": {"kind": "laser"}})")) == "state.kind");
  CHECK(error_path(json::parse(R"({"state": {"kind": "moments", "population": 0.5, "coherence": 0.6}})")) == "state");
  CHECK(error_path(json::parse(R"({"state": {"kind": "driven", "s": 0}})")) == "state.s");
  CHECK(error_path(json::parse(R"({"ensemble": {"n": 0}})")) == "ensemble.n");
  CHECK(error_path(json::parse(R"({"ensemble": {"n": 2.5}})")) == "ensemble.n");
  CHECK(error_path(json::parse(R"({"ensemble": {"seed": -1}})")) == "ensemble.seed");
  CHECK(error_path(json::parse(R"({"ensemble": {"distribution": {"kind": "uniform_cube", "side": -2}}})")) ==
        "ensemble.distribution.side");
  CHECK(error_path(json::parse(R"({"ensemble": {"distribution": "sphere"}})")) == "ensemble.distribution");
  CHECK(error_path(json::parse(R"({"ensemble": {"positions": [[0,0]]}})")) == "ensemble.positions[0]");
  CHECK(error_path(json::parse(R"({"order": [0, 0]})")) == "order");
  CHECK(error_path(json::parse(R"({"order": [2, -1]})")) == "order[1]");
  CHECK(error_path(json::parse(R"({"directions": "sideways"})")) == "directions");
  CHECK(error_path(json::parse(R"({"directions": [[1,0,0],[0,1,0]]})")) == "directions");
  CHECK(error_path(json::parse(R"({"directions": {"preset": "off_axis", "magnitude": 0}})")) ==
        "directions.magnitude");
  CHECK(error_path(json::parse(R"({"sweep": {}})")) == "sweep");
  CHECK(error_path(json::parse(R"({"sweep": {"N": []}})")) == "sweep.N");
  CHECK(error_path(json::parse(R"({"sweep": {"theta": [1], "R": [1]}})")) == "sweep");
  CHECK(error_path(json::parse(R"({"sweep": {"R": [0.1, -1]}})")) == "sweep.R[1]");
  CHECK(error_path(json::parse(R"({"realizations": 0})")) == "realizations");
  CHECK(error_path(json::parse(R"({"samples": 1})")) == "samples");
  CHECK(error_path(json::parse(R"({"seed": 1, "ensemble": {"seed": 2}})")) == "seed");
  CHECK(error_path(json::parse(R"({"figure": {"inverse_R": [1, 0]}})")) == "figure.inverse_R[1]");
  CHECK(error_path(json::parse(R"({"classical": {"ratio": 1, "coherent": 1}})")) == "classical.ratio");
  CHECK(error_path(json::parse(R"({"validate_tolerance": 0})")) == "validate_tolerance");
  CHECK(error_path(json::parse(R"({"ensemble": {"positions": [[0,0,0]]}, "sweep": {"N": [2]}})")) == "sweep.N");
  CHECK(error_path(json::parse(R"([1, 2])")) == "<root>");
}

TEST_CASE("loading from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "photonstat_scenario_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "ok.json") << R"({"ensemble": {"n": 4}})";
    std::ofstream(dir / "bad.json") << R"({"ensemble": )";
  }
  CHECK(load_config(dir / "ok.json").ensemble.n == 4);
  CHECK_THROWS_AS(load_config(dir / "bad.json"), ConfigError);
  CHECK_THROWS_AS(load_config(dir / "missing.json"), ConfigError);
  std::filesystem::remove_all(dir);
}
