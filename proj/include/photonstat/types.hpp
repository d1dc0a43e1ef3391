#pragma once

#include <complex>

#include <Eigen/Core>

namespace photonstat {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;

/// Columns are 3-vectors.
template <typename Scalar>
using Points3 = Eigen::Matrix<Scalar, 3, Eigen::Dynamic>;

using Vec3 = Vector3<double>;
using Positions = Points3<double>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace photonstat

namespace photonstat {

/// x^e by repeated squaring; x^0 = 1 for every x including 0.
template <typename T>
constexpr T ipow(T x, int e) {
  T out(1);
  while (e > 0) {
    if (e & 1) out *= x;
    x *= x;
    e >>= 1;
  }
  return out;
}

}  // namespace photonstat
