#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "photonstat/errors.hpp"
#include "photonstat/types.hpp"

namespace photonstat {

/// (m, n): m negative-frequency and n positive-frequency field factors.
struct CorrelationOrder {
  int m = 1;
  int n = 1;

  CorrelationOrder() = default;
  /// Throws DomainError unless m, n >= 0 and m + n >= 1.
  CorrelationOrder(int m_, int n_) : m(m_), n(n_) {
    if (m < 0 || n < 0 || m + n < 1) throw DomainError("correlation order needs m, n >= 0 and m + n >= 1");
  }
  int alpha() const noexcept { return std::min(m, n); }
  int x() const noexcept { return std::max(m, n); }
  int total() const noexcept { return m + n; }
  bool equal_order() const noexcept { return m == n; }
  std::string label() const { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }
  bool operator==(const CorrelationOrder&) const = default;
};

/// Observation wave vectors, in units of 2 pi / lambda: the first m entries
/// are minus-frequency slots, the last n plus-frequency slots.
using DirectionSet = std::vector<Vec3>;

inline void check_directions(const CorrelationOrder& order, std::span<const Vec3> k) {
  if (static_cast<int>(k.size()) != order.total())
    throw DomainError("direction list has " + std::to_string(k.size()) + " entries, order " + order.label() +
                      " needs " + std::to_string(order.total()));
}

/// Every slot observes along the same wave vector.
inline DirectionSet repeated_direction(const CorrelationOrder& order, const Vec3& k) {
  return DirectionSet(order.total(), k);
}

inline DirectionSet forward_directions(const CorrelationOrder& order) {
  return repeated_direction(order, Vec3::Zero());
}

}  // namespace photonstat
