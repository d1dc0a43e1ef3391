#pragma once

#include <complex>
#include <limits>

namespace photonstat {

/// Normally-ordered single-emitter moments of a two-level system.
///
/// population p = <s+ s->, coherence c = <s->, fluctuation f = p - |c|^2,
/// and the coherent-to-incoherent ratio R = |c|^2 / f. The state is stored
/// once and shared by every emitter of the ensemble.
class SingleAtomState {
 public:
  double population() const noexcept { return p_; }
  std::complex<double> sigma_minus() const noexcept { return c_; }
  std::complex<double> sigma_plus() const noexcept { return std::conj(c_); }
  double coherence_sq() const noexcept { return std::norm(c_); }
  double fluctuation() const noexcept { return f_; }
  /// +inf when f = 0 with a nonzero coherence, 0 for the dark state.
  double ratio() const noexcept;
  bool is_dark() const noexcept { return p_ == 0.0; }

  /// Same fluctuation, coherence removed (the "finite-N only" companion).
  SingleAtomState without_coherence() const noexcept;

  friend SingleAtomState pulse_state(double theta);
  friend SingleAtomState pulse_state_for_ratio(double ratio);
  friend SingleAtomState driven_steady_state(double s);
  friend SingleAtomState state_from_moments(double p, std::complex<double> c);

 private:
  SingleAtomState(double p, std::complex<double> c, double f) : p_(p), c_(c), f_(f) {}
  double p_ = 0.0;
  std::complex<double> c_{};
  double f_ = 0.0;
};

/// cos(theta/2)|g> - i sin(theta/2)|e>, theta in [0, pi].
SingleAtomState pulse_state(double theta);
/// Pulse state with R = cot^2(theta/2) = ratio, built without forming theta.
SingleAtomState pulse_state_for_ratio(double ratio);
/// cw steady state at saturation s > 0; R = 1/s.
SingleAtomState driven_steady_state(double s);
/// Throws ValidationError unless 0 <= p <= 1 and |c|^2 <= p(1-p).
SingleAtomState state_from_moments(double p, std::complex<double> c);

/// Classical emitter field e^{ik.R}(E_coh + E_incoh e^{i phi}) with phi
/// uniform on [0, 2pi) and independent across emitters.
struct ClassicalEmitterModel {
  std::complex<double> e_coh{};
  double e_incoh = 1.0;

  /// Throws ValidationError for negative or non-finite amplitudes.
  ClassicalEmitterModel(std::complex<double> coh, double incoh);
  /// Real positive coherent amplitude sqrt(R) * e_incoh.
  static ClassicalEmitterModel from_ratio(double ratio, double incoh = 1.0);

  double ratio() const noexcept;
};

}  // namespace photonstat
