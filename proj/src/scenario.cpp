#include "photonstat/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "photonstat/errors.hpp"
#include "photonstat/rng.hpp"

namespace photonstat {

using nlohmann::json;

SingleAtomState make_state(const StateSpec& spec) {
  switch (spec.kind) {
    case StateSpec::Kind::Pulse: return pulse_state(spec.value);
    case StateSpec::Kind::PulseRatio: return pulse_state_for_ratio(spec.value);
    case StateSpec::Kind::Driven: return driven_steady_state(spec.value);
    case StateSpec::Kind::Moments: return state_from_moments(spec.population, spec.coherence);
  }
  throw DomainError("unknown state kind");
}

std::string describe(const StateSpec& spec) {
  std::ostringstream os;
  os.precision(17);
  switch (spec.kind) {
    case StateSpec::Kind::Pulse: os << "pulse(theta=" << spec.value << ")"; break;
    case StateSpec::Kind::PulseRatio: os << "pulse(R=" << spec.value << ")"; break;
    case StateSpec::Kind::Driven: os << "driven(s=" << spec.value << ")"; break;
    case StateSpec::Kind::Moments:
      os << "moments(p=" << spec.population << ",c=" << spec.coherence.real() << (spec.coherence.imag() < 0 ? "" : "+")
         << spec.coherence.imag() << "i)";
      break;
  }
  return os.str();
}

Ensemble make_ensemble(const EnsembleSpec& spec, long long n, std::uint64_t realization) {
  if (spec.positions) return Ensemble(*spec.positions, Provenance{true, spec.seed, 0, spec.distribution});
  return random_cloud(n, spec.seed, spec.distribution, realization);
}

DirectionSet resolve_directions(const DirectionSpec& spec, const CorrelationOrder& order, std::uint64_t realization) {
  switch (spec.kind) {
    case DirectionSpec::Kind::Forward: return forward_directions(order);
    case DirectionSpec::Kind::OffAxis: {
      Vec3 k(spec.magnitude, 0.0, 0.0);
      if (spec.rotation_seed) {
        auto rng = stream_engine(*spec.rotation_seed, realization);
        const double phi = kTwoPi * unit_uniform(rng);
        k = Vec3(spec.magnitude * std::cos(phi), spec.magnitude * std::sin(phi), 0.0);
      }
      return repeated_direction(order, k);
    }
    case DirectionSpec::Kind::Explicit: {
      DirectionSet d = spec.vectors;
      if (d.size() == 1) d.assign(order.total(), spec.vectors.front());
      check_directions(order, d);
      return d;
    }
  }
  throw DomainError("unknown direction kind");
}

std::string describe(const DirectionSpec& spec) {
  switch (spec.kind) {
    case DirectionSpec::Kind::Forward: return "forward";
    case DirectionSpec::Kind::OffAxis: return spec.rotation_seed ? "off_axis(rotated)" : "off_axis";
    case DirectionSpec::Kind::Explicit: return "explicit";
  }
  return "unknown";
}

namespace {

struct Reader {
  const json& j;
  std::string path;

  std::string at(const std::string& key) const { return path.empty() ? key : path + "." + key; }
  std::string at(std::size_t i) const { return path + "[" + std::to_string(i) + "]"; }

  void require_object() const {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  }
  void allow_keys(std::initializer_list<const char*> keys) const {
    require_object();
    std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [k, v] : j.items())
      if (!ok.count(k)) throw ConfigError(at(k), "unknown field");
  }
  bool has(const char* key) const { return j.contains(key); }
  Reader child(const char* key) const { return {j.at(key), at(key)}; }
};

double read_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

long long read_integer(const json& v, const std::string& path, long long min) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const long long x = v.get<long long>();
  if (x < min) throw ConfigError(path, "must be >= " + std::to_string(min));
  return x;
}

std::uint64_t read_seed(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
    throw ConfigError(path, "expected a non-negative integer seed");
  return v.get<std::uint64_t>();
}

std::complex<double> read_complex(const json& v, const std::string& path) {
  if (v.is_number()) return read_number(v, path);
  if (v.is_array() && v.size() == 2)
    return {read_number(v[0], path + "[0]"), read_number(v[1], path + "[1]")};
  throw ConfigError(path, "expected a number or [re, im]");
}

Vec3 read_vec3(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected [x, y, z]");
  return {read_number(v[0], path + "[0]"), read_number(v[1], path + "[1]"), read_number(v[2], path + "[2]")};
}

template <typename T, typename Fn>
std::vector<T> read_list(const json& v, const std::string& path, Fn&& item) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(item(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

StateSpec parse_state(const Reader& r) {
  r.require_object();
  if (!r.has("kind")) throw ConfigError(r.at("kind"), "missing");
  const json& kind = r.j.at("kind");
  if (!kind.is_string()) throw ConfigError(r.at("kind"), "expected a string");
  const std::string k = kind.get<std::string>();
  StateSpec s;
  if (k == "pulse") {
    r.allow_keys({"kind", "theta", "ratio"});
    if (r.has("theta") == r.has("ratio")) throw ConfigError(r.at("theta"), "give exactly one of theta or ratio");
    if (r.has("theta")) {
      s.kind = StateSpec::Kind::Pulse;
      s.value = read_number(r.j.at("theta"), r.at("theta"));
      if (s.value < 0 || s.value > std::numbers::pi) throw ConfigError(r.at("theta"), "must lie in [0, pi]");
    } else {
      s.kind = StateSpec::Kind::PulseRatio;
      s.value = read_number(r.j.at("ratio"), r.at("ratio"));
      if (s.value < 0) throw ConfigError(r.at("ratio"), "must be >= 0");
    }
  } else if (k == "driven") {
    r.allow_keys({"kind", "s"});
    if (!r.has("s")) throw ConfigError(r.at("s"), "missing");
    s.kind = StateSpec::Kind::Driven;
    s.value = read_number(r.j.at("s"), r.at("s"));
    if (!(s.value > 0)) throw ConfigError(r.at("s"), "must be > 0");
  } else if (k == "moments") {
    r.allow_keys({"kind", "population", "coherence"});
    if (!r.has("population")) throw ConfigError(r.at("population"), "missing");
    s.kind = StateSpec::Kind::Moments;
    s.population = read_number(r.j.at("population"), r.at("population"));
    if (r.has("coherence")) s.coherence = read_complex(r.j.at("coherence"), r.at("coherence"));
    try {
      (void)state_from_moments(s.population, s.coherence);
    } catch (const ValidationError& e) {
      throw ConfigError(r.path, e.what());
    }
  } else {
    throw ConfigError(r.at("kind"), "unknown state kind '" + k + "' (pulse, driven, moments)");
  }
  return s;
}

CloudDistribution parse_distribution(const Reader& r) {
  if (r.j.is_string()) {
    const std::string k = r.j.get<std::string>();
    if (k == "uniform_cube") return UniformCube{};
    if (k == "gaussian") return GaussianCloud{};
    throw ConfigError(r.path, "unknown distribution '" + k + "' (uniform_cube, gaussian)");
  }
  r.require_object();
  if (!r.has("kind") || !r.j.at("kind").is_string()) throw ConfigError(r.at("kind"), "expected a string");
  const std::string k = r.j.at("kind").get<std::string>();
  if (k == "uniform_cube") {
    r.allow_keys({"kind", "side"});
    UniformCube c;
    if (r.has("side")) c.side = read_number(r.j.at("side"), r.at("side"));
    if (!(c.side > 0)) throw ConfigError(r.at("side"), "must be > 0");
    return c;
  }
  if (k == "gaussian") {
    r.allow_keys({"kind", "sigma"});
    GaussianCloud g;
    if (r.has("sigma")) g.sigma = read_number(r.j.at("sigma"), r.at("sigma"));
    if (!(g.sigma > 0)) throw ConfigError(r.at("sigma"), "must be > 0");
    return g;
  }
  throw ConfigError(r.at("kind"), "unknown distribution '" + k + "' (uniform_cube, gaussian)");
}

EnsembleSpec parse_ensemble(const Reader& r) {
  r.allow_keys({"n", "seed", "distribution", "positions"});
  EnsembleSpec e;
  if (r.has("positions")) {
    if (r.has("n")) throw ConfigError(r.at("n"), "n is implied by explicit positions");
    const auto pts = read_list<Vec3>(r.j.at("positions"), r.at("positions"), read_vec3);
    Positions pos(3, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i) pos.col(static_cast<Eigen::Index>(i)) = pts[i];
    e.positions = std::move(pos);
    e.n = static_cast<long long>(pts.size());
  } else if (r.has("n")) {
    e.n = read_integer(r.j.at("n"), r.at("n"), 1);
  }
  if (r.has("seed")) e.seed = read_seed(r.j.at("seed"), r.at("seed"));
  if (r.has("distribution")) e.distribution = parse_distribution(r.child("distribution"));
  return e;
}

CorrelationOrder parse_order(const json& v, const std::string& path) {
  long long m, n;
  if (v.is_array() && v.size() == 2) {
    m = read_integer(v[0], path + "[0]", 0);
    n = read_integer(v[1], path + "[1]", 0);
  } else if (v.is_object()) {
    Reader r{v, path};
    r.allow_keys({"m", "n"});
    if (!r.has("m")) throw ConfigError(r.at("m"), "missing");
    m = read_integer(v.at("m"), r.at("m"), 0);
    n = r.has("n") ? read_integer(v.at("n"), r.at("n"), 0) : m;
  } else if (v.is_number_integer()) {
    m = n = read_integer(v, path, 1);
  } else {
    throw ConfigError(path, "expected m, [m, n] or {\"m\":.., \"n\":..}");
  }
  if (m + n < 1) throw ConfigError(path, "m + n must be >= 1");
  if (m > 64 || n > 64) throw ConfigError(path, "order too large");
  return {static_cast<int>(m), static_cast<int>(n)};
}

DirectionSpec parse_directions(const Reader& r) {
  DirectionSpec d;
  if (r.j.is_string()) {
    const std::string k = r.j.get<std::string>();
    if (k == "forward") return d;
    if (k == "off_axis") {
      d.kind = DirectionSpec::Kind::OffAxis;
      return d;
    }
    throw ConfigError(r.path, "unknown direction preset '" + k + "' (forward, off_axis)");
  }
  if (r.j.is_array()) {
    d.kind = DirectionSpec::Kind::Explicit;
    d.vectors = read_list<Vec3>(r.j, r.path, read_vec3);
    return d;
  }
  r.allow_keys({"preset", "magnitude", "rotation_seed", "vectors"});
  if (r.has("vectors")) {
    if (r.has("preset")) throw ConfigError(r.at("preset"), "give either preset or vectors");
    d.kind = DirectionSpec::Kind::Explicit;
    d.vectors = read_list<Vec3>(r.j.at("vectors"), r.at("vectors"), read_vec3);
    return d;
  }
  if (!r.has("preset") || !r.j.at("preset").is_string()) throw ConfigError(r.at("preset"), "expected a string");
  const std::string k = r.j.at("preset").get<std::string>();
  if (k == "forward") {
    if (r.has("magnitude") || r.has("rotation_seed"))
      throw ConfigError(r.path, "the forward preset takes no parameters");
    return d;
  }
  if (k != "off_axis") throw ConfigError(r.at("preset"), "unknown direction preset '" + k + "' (forward, off_axis)");
  d.kind = DirectionSpec::Kind::OffAxis;
  if (r.has("magnitude")) d.magnitude = read_number(r.j.at("magnitude"), r.at("magnitude"));
  if (!(d.magnitude > 0)) throw ConfigError(r.at("magnitude"), "must be > 0");
  if (r.has("rotation_seed")) d.rotation_seed = read_seed(r.j.at("rotation_seed"), r.at("rotation_seed"));
  return d;
}

SweepSpec parse_sweep(const Reader& r) {
  r.allow_keys({"N", "theta", "R", "s"});
  SweepSpec s;
  if (r.has("N"))
    s.n_values = read_list<long long>(r.j.at("N"), r.at("N"),
                                      [](const json& v, const std::string& p) { return read_integer(v, p, 1); });
  int axes = 0;
  auto axis = [&](const char* key, SweepSpec::StateAxis a) {
    if (!r.has(key)) return;
    ++axes;
    s.state_axis = a;
    s.state_values = read_list<double>(r.j.at(key), r.at(key), read_number);
  };
  axis("theta", SweepSpec::StateAxis::Theta);
  axis("R", SweepSpec::StateAxis::Ratio);
  axis("s", SweepSpec::StateAxis::Saturation);
  if (axes > 1) throw ConfigError(r.path, "sweep at most one of theta, R, s");
  if (!r.has("N") && axes == 0) throw ConfigError(r.path, "sweep axes must be non-empty");
  for (std::size_t i = 0; i < s.state_values.size(); ++i) {
    const double v = s.state_values[i];
    const std::string p = r.at(s.state_axis == SweepSpec::StateAxis::Theta   ? "theta"
                                : s.state_axis == SweepSpec::StateAxis::Ratio ? "R"
                                                                              : "s") +
                          "[" + std::to_string(i) + "]";
    if (s.state_axis == SweepSpec::StateAxis::Theta && (v < 0 || v > std::numbers::pi))
      throw ConfigError(p, "must lie in [0, pi]");
    if (s.state_axis == SweepSpec::StateAxis::Ratio && v < 0) throw ConfigError(p, "must be >= 0");
    if (s.state_axis == SweepSpec::StateAxis::Saturation && !(v > 0)) throw ConfigError(p, "must be > 0");
  }
  return s;
}

ClassicalSpec parse_classical(const Reader& r) {
  r.allow_keys({"coherent", "incoherent", "ratio"});
  ClassicalSpec c;
  if (r.has("incoherent")) c.incoherent = read_number(r.j.at("incoherent"), r.at("incoherent"));
  if (c.incoherent < 0) throw ConfigError(r.at("incoherent"), "must be >= 0");
  if (r.has("ratio") && r.has("coherent")) throw ConfigError(r.at("ratio"), "give either ratio or coherent");
  if (r.has("coherent")) c.coherent = read_complex(r.j.at("coherent"), r.at("coherent"));
  if (r.has("ratio")) {
    const double R = read_number(r.j.at("ratio"), r.at("ratio"));
    if (R < 0) throw ConfigError(r.at("ratio"), "must be >= 0");
    c.coherent = std::sqrt(R) * c.incoherent;
  }
  return c;
}

FigureSpec parse_figure(const Reader& r) {
  r.allow_keys({"N", "N_grid", "inverse_R", "k"});
  FigureSpec f;
  if (r.has("N")) f.n = read_integer(r.j.at("N"), r.at("N"), 1);
  if (r.has("N_grid"))
    f.n_grid = read_list<long long>(r.j.at("N_grid"), r.at("N_grid"),
                                    [](const json& v, const std::string& p) { return read_integer(v, p, 1); });
  if (r.has("inverse_R")) {
    f.inverse_ratio_grid = read_list<double>(r.j.at("inverse_R"), r.at("inverse_R"), read_number);
    for (std::size_t i = 0; i < f.inverse_ratio_grid.size(); ++i)
      if (!(f.inverse_ratio_grid[i] > 0)) throw ConfigError(r.at("inverse_R") + "[" + std::to_string(i) + "]", "must be > 0");
  }
  if (r.has("k")) f.wave_vector = read_vec3(r.j.at("k"), r.at("k"));
  return f;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  Reader r{j, ""};
  r.allow_keys({"state", "ensemble", "order", "directions", "sweep", "realizations", "samples", "classical",
                "figure", "validate_tolerance", "seed"});
  ScenarioConfig c;
  c.source = j;
  if (r.has("state")) c.state = parse_state(r.child("state"));
  if (r.has("ensemble")) c.ensemble = parse_ensemble(r.child("ensemble"));
  if (r.has("seed")) {
    if (r.has("ensemble") && j.at("ensemble").contains("seed"))
      throw ConfigError("seed", "also given as ensemble.seed");
    c.ensemble.seed = read_seed(j.at("seed"), "seed");
  }
  if (r.has("order")) c.order = parse_order(j.at("order"), "order");
  if (r.has("directions")) c.directions = parse_directions(r.child("directions"));
  if (c.directions.kind == DirectionSpec::Kind::Explicit && c.directions.vectors.size() != 1 &&
      static_cast<int>(c.directions.vectors.size()) != c.order.total())
    throw ConfigError("directions", "expected 1 or m+n = " + std::to_string(c.order.total()) + " vectors");
  if (r.has("sweep")) c.sweep = parse_sweep(r.child("sweep"));
  if (c.ensemble.positions && !c.sweep.n_values.empty())
    throw ConfigError("sweep.N", "cannot sweep N with explicit positions");
  if (r.has("realizations"))
    c.realizations = static_cast<std::size_t>(read_integer(j.at("realizations"), "realizations", 1));
  if (r.has("samples")) c.samples = static_cast<std::size_t>(read_integer(j.at("samples"), "samples", 2));
  if (r.has("classical")) c.classical = parse_classical(r.child("classical"));
  if (r.has("figure")) c.figure = parse_figure(r.child("figure"));
  if (r.has("validate_tolerance")) {
    c.validate_tolerance = read_number(j.at("validate_tolerance"), "validate_tolerance");
    if (!(c.validate_tolerance > 0)) throw ConfigError("validate_tolerance", "must be > 0");
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot open " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

std::vector<SweepPoint> sweep_points(const ScenarioConfig& config) {
  std::vector<long long> ns = config.sweep.n_values;
  if (ns.empty()) ns.push_back(config.ensemble.n);
  std::vector<StateSpec> states;
  if (config.sweep.state_axis == SweepSpec::StateAxis::None) {
    states.push_back(config.state);
  } else {
    for (double v : config.sweep.state_values) {
      StateSpec s;
      s.value = v;
      s.kind = config.sweep.state_axis == SweepSpec::StateAxis::Theta   ? StateSpec::Kind::Pulse
               : config.sweep.state_axis == SweepSpec::StateAxis::Ratio ? StateSpec::Kind::PulseRatio
                                                                        : StateSpec::Kind::Driven;
      states.push_back(s);
    }
  }
  std::vector<SweepPoint> out;
  for (long long n : ns)
    for (const auto& s : states) out.push_back({n, s});
  return out;
}

}  // namespace photonstat
