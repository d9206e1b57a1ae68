#pragma once

#include <Eigen/Core>

namespace hpstat::detail {

// Fixed-order accumulation over contiguous storage: every call site sees the
// same rounding for the same pair of rows, whatever the memory alignment or
// thread. Elements are widened to double before any arithmetic.

template <typename Scalar>
double squared_distance(const Scalar* a, const Scalar* b, Eigen::Index dim) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  Eigen::Index k = 0;
  for (; k + 4 <= dim; k += 4) {
    const double t0 = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    const double t1 = static_cast<double>(a[k + 1]) - static_cast<double>(b[k + 1]);
    const double t2 = static_cast<double>(a[k + 2]) - static_cast<double>(b[k + 2]);
    const double t3 = static_cast<double>(a[k + 3]) - static_cast<double>(b[k + 3]);
    s0 += t0 * t0;
    s1 += t1 * t1;
    s2 += t2 * t2;
    s3 += t3 * t3;
  }
  for (; k < dim; ++k) {
    const double t = static_cast<double>(a[k]) - static_cast<double>(b[k]);
    s0 += t * t;
  }
  return (s0 + s1) + (s2 + s3);
}

template <typename Scalar>
double dot(const Scalar* a, const Scalar* b, Eigen::Index dim) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  Eigen::Index k = 0;
  for (; k + 4 <= dim; k += 4) {
    s0 += static_cast<double>(a[k]) * static_cast<double>(b[k]);
    s1 += static_cast<double>(a[k + 1]) * static_cast<double>(b[k + 1]);
    s2 += static_cast<double>(a[k + 2]) * static_cast<double>(b[k + 2]);
    s3 += static_cast<double>(a[k + 3]) * static_cast<double>(b[k + 3]);
  }
  for (; k < dim; ++k) s0 += static_cast<double>(a[k]) * static_cast<double>(b[k]);
  return (s0 + s1) + (s2 + s3);
}

}  // namespace hpstat::detail
