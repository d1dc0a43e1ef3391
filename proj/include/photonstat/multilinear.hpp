#pragma once

// Coefficient extraction from a product of per-emitter factors.
//
// Every operator slot carries a formal marker; emitter mu contributes a
// polynomial in the markers and G is the coefficient of the product of all
// markers in prod_mu factor_mu. Slots observing the same wave vector on the
// same side are merged into one group variable x_g with exponent bound
// mult_g, so the monomial basis is mixed-radix with radix mult_g + 1. With
// all directions distinct this is the plain bitmask basis; with all of them
// equal it collapses to (m+1)(n+1) coefficients. Group exponents are tracked
// with exponential weights (1/e!), hence the final factor prod_g mult_g!.

#include <cmath>
#include <span>
#include <vector>

#include "photonstat/ensemble.hpp"
#include "photonstat/errors.hpp"
#include "photonstat/order.hpp"
#include "photonstat/types.hpp"

namespace photonstat {

inline constexpr int kDefaultSlotCap = 8;

/// Identical directions merged per side, minus groups first.
struct SlotGroups {
  std::vector<Vec3> wave_vectors;  // one per group
  std::vector<int> mult;           // slots in the group
  std::vector<int> stride;         // mixed-radix place values
  int minus_groups = 0;
  int states = 1;
  int full = 0;                    // index of the all-slots monomial
  double assignment_factor = 1.0;  // prod mult!

  int groups() const noexcept { return static_cast<int>(mult.size()); }
  bool is_minus(int g) const noexcept { return g < minus_groups; }
  int digit(int state, int g) const noexcept { return (state / stride[g]) % (mult[g] + 1); }
};

inline SlotGroups group_slots(const CorrelationOrder& order, std::span<const Vec3> k, int cap = kDefaultSlotCap) {
  check_directions(order, k);
  if (order.total() > cap)
    throw CapacityError("m+n = " + std::to_string(order.total()) + " exceeds the slot cap " + std::to_string(cap));
  SlotGroups out;
  auto add_side = [&](std::span<const Vec3> side) {
    const std::size_t first = out.wave_vectors.size();
    for (const auto& v : side) {
      bool merged = false;
      for (std::size_t g = first; g < out.wave_vectors.size(); ++g) {
        if (out.wave_vectors[g] == v) {
          ++out.mult[g];
          merged = true;
          break;
        }
      }
      if (!merged) {
        out.wave_vectors.push_back(v);
        out.mult.push_back(1);
      }
    }
  };
  add_side(k.subspan(0, order.m));
  out.minus_groups = static_cast<int>(out.mult.size());
  add_side(k.subspan(order.m));
  for (int g = 0; g < out.groups(); ++g) {
    out.stride.push_back(out.states);
    out.full += out.mult[g] * out.states;
    out.states *= out.mult[g] + 1;
    out.assignment_factor *= std::tgamma(out.mult[g] + 1.0);
  }
  return out;
}

/// Per-emitter phase factors: exp(+i 2pi k_g.R) for minus groups and
/// exp(-i 2pi k_g.R) for plus groups; row = emitter, column = group.
template <typename Scalar>
using PhaseTable = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
PhaseTable<Scalar> slot_phases(const SlotGroups& groups, const Ensemble& ensemble) {
  const Eigen::Index n = ensemble.size();
  PhaseTable<Scalar> out(n, groups.groups());
  const Scalar two_pi = static_cast<Scalar>(3.14159265358979323846264338327950288L) * 2;
  for (int g = 0; g < groups.groups(); ++g) {
    const Vec3& k = groups.wave_vectors[g];
    const Scalar sign = groups.is_minus(g) ? Scalar(1) : Scalar(-1);
    for (Eigen::Index mu = 0; mu < n; ++mu) {
      const auto& r = ensemble.positions().col(mu);
      const Scalar dot = static_cast<Scalar>(k[0]) * r[0] + static_cast<Scalar>(k[1]) * r[1] +
                         static_cast<Scalar>(k[2]) * r[2];
      const Scalar ph = sign * two_pi * dot;
      out(mu, g) = Complex<Scalar>(std::cos(ph), std::sin(ph));
    }
  }
  return out;
}

/// One monomial a factor can contribute: the exponent increments it applies
/// and the (src, dst) state pairs where the result stays within bounds.
struct FactorTerm {
  std::vector<int> increments;  // per group
  int offset = 0;
  int minus_count = 0;
  int plus_count = 0;
  std::vector<int> sources;
};

namespace detail {

inline void fill_sources(const SlotGroups& groups, FactorTerm& term) {
  term.offset = 0;
  term.minus_count = term.plus_count = 0;
  for (int g = 0; g < groups.groups(); ++g) {
    term.offset += term.increments[g] * groups.stride[g];
    (groups.is_minus(g) ? term.minus_count : term.plus_count) += term.increments[g];
  }
  for (int s = 0; s < groups.states; ++s) {
    bool ok = true;
    for (int g = 0; g < groups.groups() && ok; ++g) ok = groups.digit(s, g) + term.increments[g] <= groups.mult[g];
    if (ok) term.sources.push_back(s);
  }
}

}  // namespace detail

/// Two-level emitters: at most one raising (minus slot) and one lowering
/// (plus slot) operator per emitter, since (sigma^pm)^2 = 0.
inline std::vector<FactorTerm> nilpotent_terms(const SlotGroups& groups) {
  std::vector<FactorTerm> terms;
  const int G = groups.groups();
  auto make = [&](int a, int b) {
    FactorTerm t;
    t.increments.assign(G, 0);
    if (a >= 0) t.increments[a] = 1;
    if (b >= 0) t.increments[b] = 1;
    detail::fill_sources(groups, t);
    terms.push_back(std::move(t));
  };
  for (int a = 0; a < groups.minus_groups; ++a) make(a, -1);
  for (int b = groups.minus_groups; b < G; ++b) make(-1, b);
  for (int a = 0; a < groups.minus_groups; ++a)
    for (int b = groups.minus_groups; b < G; ++b) make(a, b);
  return terms;
}

/// Every non-empty exponent vector within the group bounds.
inline std::vector<FactorTerm> unrestricted_terms(const SlotGroups& groups) {
  std::vector<FactorTerm> terms;
  for (int s = 1; s < groups.states; ++s) {
    FactorTerm t;
    for (int g = 0; g < groups.groups(); ++g) t.increments.push_back(groups.digit(s, g));
    detail::fill_sources(groups, t);
    terms.push_back(std::move(t));
  }
  return terms;
}

/// Runs prod_mu (1 + sum_t value(mu, t) X^t) and returns the coefficient of
/// the full monomial times prod mult!. `value(mu, t)` yields the weight of
/// term t for emitter mu.
template <typename Scalar, typename ValueFn>
Complex<Scalar> square_free_product(const SlotGroups& groups, const std::vector<FactorTerm>& terms, Eigen::Index emitters,
                                    ValueFn&& value) {
  using C = Complex<Scalar>;
  std::vector<C> cur(groups.states, C(0)), next(groups.states);
  cur[0] = C(1);
  std::vector<C> weights(terms.size());
  for (Eigen::Index mu = 0; mu < emitters; ++mu) {
    for (std::size_t t = 0; t < terms.size(); ++t) weights[t] = value(mu, t);
    next = cur;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const C w = weights[t];
      if (w == C(0)) continue;
      const int off = terms[t].offset;
      for (int s : terms[t].sources) next[s + off] += cur[s] * w;
    }
    cur.swap(next);
  }
  return cur[groups.full] * static_cast<Scalar>(groups.assignment_factor);
}

}  // namespace photonstat
