#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <variant>

#include "photonstat/rng.hpp"
#include "photonstat/types.hpp"

namespace photonstat {

struct UniformCube {
  double side = 100.0;  // in wavelengths, centered at the origin
};
struct GaussianCloud {
  double sigma = 50.0;  // per-axis standard deviation, in wavelengths
};
using CloudDistribution = std::variant<UniformCube, GaussianCloud>;

std::string describe(const CloudDistribution& d);

/// Where an ensemble's positions came from.
struct Provenance {
  bool explicit_positions = true;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;  // realization index
  CloudDistribution distribution = UniformCube{};
};

/// Emitter positions R_mu (columns, in wavelengths). Immutable once built.
class Ensemble {
 public:
  /// Throws DomainError when empty or when a coordinate is not finite.
  explicit Ensemble(Positions positions, Provenance provenance = {});

  Eigen::Index size() const noexcept { return positions_.cols(); }
  const Positions& positions() const noexcept { return positions_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  /// Same geometry rigidly shifted by d.
  Ensemble translated(const Vec3& d) const;

 private:
  Positions positions_;
  Provenance provenance_;
};

/// S(k) = sum_mu exp(i 2pi k.R_mu), k in units of 2pi/lambda.
/// Accumulated with Neumaier compensation in each component.
template <typename Scalar = double>
Complex<Scalar> structure_factor(const Ensemble& ensemble, const Vec3& k) {
  Scalar re = 0, im = 0, cre = 0, cim = 0;
  auto add = [](Scalar& sum, Scalar& comp, Scalar v) {
    const Scalar t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  };
  const Eigen::Matrix<double, 1, Eigen::Dynamic> phase = kTwoPi * (k.transpose() * ensemble.positions());
  for (Eigen::Index mu = 0; mu < phase.size(); ++mu) {
    const Scalar ph = static_cast<Scalar>(phase[mu]);
    add(re, cre, std::cos(ph));
    add(im, cim, std::sin(ph));
  }
  return {re + cre, im + cim};
}

/// Seeded cloud generator. Realization r is a pure function of (seed, r):
/// each stream draws from its own mt19937_64 keyed by splitmix64(seed, r).
struct CloudGenerator {
  Eigen::Index n = 1;
  std::uint64_t seed = 0;
  CloudDistribution distribution = UniformCube{};

  /// Throws DomainError for n < 1 or non-positive size parameters.
  Ensemble operator()(std::uint64_t realization = 0) const;
};

/// Warn-level check: true when the cloud is many wavelengths across.
bool speckle_regime(const CloudDistribution& d);

Ensemble random_cloud(Eigen::Index n, std::uint64_t seed, const CloudDistribution& distribution = UniformCube{},
                      std::uint64_t realization = 0);

struct SampleStat {
  double mean = 0.0;
  double std_error = 0.0;
};
struct ComplexSampleStat {
  std::complex<double> mean{};
  double std_error = 0.0;  // sqrt(var Re + var Im) / sqrt(count)
};

struct SpeckleMoments {
  SampleStat s2;            // <|S(k)|^2>
  SampleStat s4;            // <|S(k)|^4>
  SampleStat s2k2;          // <|S(2k)|^2>
  ComplexSampleStat cross;  // <S(2k) S(-k)^2>
  std::size_t realizations = 0;
};

/// Disorder averages over realizations 0..count-1 of `generator`.
SpeckleMoments speckle_moments(const CloudGenerator& generator, const Vec3& k, std::size_t realizations,
                               unsigned threads = 1);

}  // namespace photonstat
