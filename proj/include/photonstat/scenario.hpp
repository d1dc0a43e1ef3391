#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "photonstat/ensemble.hpp"
#include "photonstat/order.hpp"
#include "photonstat/states.hpp"

namespace photonstat {

struct StateSpec {
  enum class Kind { Pulse, PulseRatio, Driven, Moments };
  Kind kind = Kind::Pulse;
  double value = 3.14159265358979323846;  // theta, R or s depending on kind
  double population = 0.0;                 // Moments only
  std::complex<double> coherence{};        // Moments only
};

SingleAtomState make_state(const StateSpec& spec);
std::string describe(const StateSpec& spec);

struct EnsembleSpec {
  long long n = 1;
  std::uint64_t seed = 1;
  CloudDistribution distribution = UniformCube{};
  std::optional<Positions> positions;  // explicit geometry; fixes n
};

/// Realization r of the spec with `n` emitters; explicit positions ignore r.
Ensemble make_ensemble(const EnsembleSpec& spec, long long n, std::uint64_t realization);

struct DirectionSpec {
  enum class Kind { Forward, OffAxis, Explicit };
  Kind kind = Kind::Forward;
  double magnitude = 1.0;                    // |k| in units of 2pi/lambda
  std::optional<std::uint64_t> rotation_seed;  // random azimuth about z per realization
  std::vector<Vec3> vectors;                   // Explicit only
};

/// Slot directions for realization r. Off-axis uses magnitude * x-hat, or a
/// seeded azimuthal rotation of it in the plane orthogonal to z.
DirectionSet resolve_directions(const DirectionSpec& spec, const CorrelationOrder& order, std::uint64_t realization);
std::string describe(const DirectionSpec& spec);

struct SweepSpec {
  std::vector<long long> n_values;  // empty: ensemble n
  enum class StateAxis { None, Theta, Ratio, Saturation };
  StateAxis state_axis = StateAxis::None;
  std::vector<double> state_values;
};

struct ClassicalSpec {
  std::complex<double> coherent{};
  double incoherent = 1.0;
};

/// Knobs read by `figure`; unset fields fall back to per-figure defaults.
struct FigureSpec {
  std::optional<long long> n;
  std::vector<long long> n_grid;
  std::vector<double> inverse_ratio_grid;
  std::optional<Vec3> wave_vector;
};

struct ScenarioConfig {
  StateSpec state;
  EnsembleSpec ensemble;
  CorrelationOrder order{2, 2};
  DirectionSpec directions;
  SweepSpec sweep;
  std::optional<std::size_t> realizations;  // runners default to 1, fig3 to 1000
  std::size_t samples = 0;  // classical Monte Carlo draws per row; 0 disables
  ClassicalSpec classical;
  FigureSpec figure;
  double validate_tolerance = 1e-10;
  nlohmann::json source = nlohmann::json::object();  // parsed input, echoed in sidecars
};

/// Throws ConfigError naming the offending field path.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::filesystem::path& path);

/// One grid point of the sweep.
struct SweepPoint {
  long long n = 1;
  StateSpec state;
};
std::vector<SweepPoint> sweep_points(const ScenarioConfig& config);

}  // namespace photonstat
