#include "photonstat/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "photonstat/errors.hpp"

namespace photonstat {

double SingleAtomState::ratio() const noexcept {
  if (f_ > 0.0) return std::norm(c_) / f_;
  return std::norm(c_) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

SingleAtomState SingleAtomState::without_coherence() const noexcept { return {f_, 0.0, f_}; }

SingleAtomState pulse_state(double theta) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw DomainError("pulse area must lie in [0, pi]");
  const double s = std::sin(theta / 2), co = std::cos(theta / 2);
  return {s * s, {0.0, -s * co}, s * s * s * s};
}

SingleAtomState pulse_state_for_ratio(double ratio) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw DomainError("ratio must be finite and >= 0");
  // sin^2 = 1/(1+R), cos^2 = R/(1+R)
  const double sin2 = 1.0 / (1.0 + ratio);
  const double cos2 = ratio / (1.0 + ratio);
  return {sin2, {0.0, -std::sqrt(sin2 * cos2)}, sin2 * sin2};
}

SingleAtomState driven_steady_state(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("saturation parameter must be > 0");
  const double p = s / (2 * (1 + s));
  const double c = -std::sqrt(s) / (std::sqrt(2.0) * (1 + s));
  return {p, {c, 0.0}, s * s / (2 * (1 + s) * (1 + s))};
}

SingleAtomState state_from_moments(double p, std::complex<double> c) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("population must satisfy 0 <= p <= 1");
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw ValidationError("coherence must be finite");
  const double c2 = std::norm(c);
  const double bound = p * (1 - p);
  if (c2 > bound * (1 + 4 * std::numeric_limits<double>::epsilon())) {
    std::ostringstream os;
    os << "density-matrix positivity violated: |c|^2 = " << c2 << " > p(1-p) = " << bound;
    throw ValidationError(os.str());
  }
  return {p, c, std::max(0.0, p - c2)};
}

ClassicalEmitterModel::ClassicalEmitterModel(std::complex<double> coh, double incoh) : e_coh(coh), e_incoh(incoh) {
  if (!(incoh >= 0.0) || !std::isfinite(incoh)) throw ValidationError("incoherent amplitude must be finite and >= 0");
  if (!std::isfinite(coh.real()) || !std::isfinite(coh.imag())) throw ValidationError("coherent amplitude must be finite");
}

ClassicalEmitterModel ClassicalEmitterModel::from_ratio(double ratio, double incoh) {
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) throw DomainError("ratio must be finite and >= 0");
  return {std::sqrt(ratio) * incoh, incoh};
}

double ClassicalEmitterModel::ratio() const noexcept {
  const double i2 = e_incoh * e_incoh;
  if (i2 > 0.0) return std::norm(e_coh) / i2;
  return std::norm(e_coh) > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

}  // namespace photonstat
