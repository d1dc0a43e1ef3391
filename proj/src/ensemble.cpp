#include "photonstat/ensemble.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "photonstat/errors.hpp"
#include "photonstat/parallel.hpp"
#include "photonstat/rng.hpp"

namespace photonstat {

std::string describe(const CloudDistribution& d) {
  std::ostringstream os;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformCube>)
          os << "uniform_cube(side=" << v.side << ")";
        else
          os << "gaussian(sigma=" << v.sigma << ")";
      },
      d);
  return os.str();
}

Ensemble::Ensemble(Positions positions, Provenance provenance)
    : positions_(std::move(positions)), provenance_(std::move(provenance)) {
  if (positions_.cols() < 1) throw DomainError("ensemble needs at least one emitter");
  if (!positions_.allFinite()) throw DomainError("ensemble positions must be finite");
}

Ensemble Ensemble::translated(const Vec3& d) const {
  Positions shifted = positions_.colwise() + d;
  return Ensemble(std::move(shifted), provenance_);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  auto splitmix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return splitmix(splitmix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x632be59bd9b4e019ULL));
}


bool speckle_regime(const CloudDistribution& d) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformCube>)
          return v.side >= 10.0;
        else
          return v.sigma >= 5.0;
      },
      d);
}

Ensemble CloudGenerator::operator()(std::uint64_t realization) const {
  if (n < 1) throw DomainError("cloud needs at least one emitter");
  auto rng = stream_engine(seed, realization);
  Positions pos(3, n);
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformCube>) {
          if (!(v.side > 0.0) || !std::isfinite(v.side)) throw DomainError("cube side must be positive");
          for (Eigen::Index mu = 0; mu < n; ++mu)
            for (int a = 0; a < 3; ++a) pos(a, mu) = (unit_uniform(rng) - 0.5) * v.side;
        } else {
          if (!(v.sigma > 0.0) || !std::isfinite(v.sigma)) throw DomainError("gaussian sigma must be positive");
          StandardNormal normal;
          for (Eigen::Index mu = 0; mu < n; ++mu)
            for (int a = 0; a < 3; ++a) pos(a, mu) = v.sigma * normal(rng);
        }
      },
      distribution);
  return Ensemble(std::move(pos), Provenance{false, seed, realization, distribution});
}

Ensemble random_cloud(Eigen::Index n, std::uint64_t seed, const CloudDistribution& distribution,
                      std::uint64_t realization) {
  return CloudGenerator{n, seed, distribution}(realization);
}

namespace {

struct RealStats {
  double sum = 0.0, sum_sq = 0.0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
  }
  SampleStat finish(std::size_t count) const {
    const double mean = sum / count;
    double var = count > 1 ? (sum_sq - count * mean * mean) / (count - 1) : 0.0;
    return {mean, std::sqrt(std::max(var, 0.0) / count)};
  }
};

}  // namespace

SpeckleMoments speckle_moments(const CloudGenerator& generator, const Vec3& k, std::size_t realizations,
                               unsigned threads) {
  if (realizations < 1) throw DomainError("speckle_moments needs at least one realization");
  struct Sample {
    double s2, s4, s2k2;
    std::complex<double> cross;
  };
  const auto samples = parallel_map(realizations, threads, [&](std::size_t r) {
    const Ensemble e = generator(r);
    const auto s = structure_factor(e, k);
    const auto s2k = structure_factor(e, Vec3(2.0 * k));
    const double a = std::norm(s);
    return Sample{a, a * a, std::norm(s2k), s2k * std::conj(s) * std::conj(s)};
  });
  RealStats s2, s4, s2k2, cre, cim;
  for (const auto& s : samples) {
    s2.add(s.s2);
    s4.add(s.s4);
    s2k2.add(s.s2k2);
    cre.add(s.cross.real());
    cim.add(s.cross.imag());
  }
  SpeckleMoments out;
  out.realizations = realizations;
  out.s2 = s2.finish(realizations);
  out.s4 = s4.finish(realizations);
  out.s2k2 = s2k2.finish(realizations);
  const auto re = cre.finish(realizations), im = cim.finish(realizations);
  out.cross.mean = {re.mean, im.mean};
  out.cross.std_error = std::hypot(re.std_error, im.std_error);
  return out;
}

}  // namespace photonstat
