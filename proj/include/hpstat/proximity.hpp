#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>

#include "hpstat/error.hpp"
#include "hpstat/kernels.hpp"

namespace hpstat {

enum class MetricKind { Euclidean, Cosine };

/// Proximity measure used to weight the complete graph.
///
/// `zero_norm_epsilon` only affects the cosine distance. At 0 (the default) a
/// zero-norm vector is an error; a positive value replaces every norm below it
/// by the epsilon itself, which sends a zero vector to distance 1 from
/// everything.
struct Metric {
  MetricKind kind = MetricKind::Euclidean;
  double zero_norm_epsilon = 0.0;

  static Metric euclidean() { return {}; }
  static Metric cosine(double zero_norm_epsilon = 0.0) {
    return {MetricKind::Cosine, zero_norm_epsilon};
  }

  bool operator==(const Metric&) const = default;
};

std::string_view to_string(MetricKind kind);
/// Accepts "euclidean" or "cosine".
MetricKind parse_metric_kind(std::string_view name);

namespace detail {

inline void check_pair_dims(Eigen::Index x, Eigen::Index y) {
  if (x != y) {
    throw DimensionMismatch("vector dimensions differ: " + std::to_string(x) + " vs " +
                            std::to_string(y));
  }
  if (x < 1) throw DimensionMismatch("vectors must have dimension >= 1");
}

/// 1 - dot / sqrt(|x|^2 |y|^2), clamped to [0, 2]. Taking one square root of
/// the product keeps cosine(x, x) exactly 0.
inline double cosine_from_parts(double dot, double sq_norm_x, double sq_norm_y) {
  const double similarity = std::clamp(dot / std::sqrt(sq_norm_x * sq_norm_y), -1.0, 1.0);
  return 1.0 - similarity;
}

inline double effective_sq_norm(double sq_norm, double epsilon, std::int64_t row) {
  if (sq_norm > 0.0 && (epsilon <= 0.0 || sq_norm >= epsilon * epsilon)) return sq_norm;
  if (epsilon <= 0.0) throw ZeroNormError(row);
  return epsilon * epsilon;
}

}  // namespace detail

/// L2 norm of x - y, accumulated in double precision.
template <typename DerivedX, typename DerivedY>
double euclidean_distance(const Eigen::MatrixBase<DerivedX>& x,
                          const Eigen::MatrixBase<DerivedY>& y) {
  detail::check_pair_dims(x.size(), y.size());
  const Eigen::VectorXd xd = x.template cast<double>().reshaped();
  const Eigen::VectorXd yd = y.template cast<double>().reshaped();
  return std::sqrt(detail::squared_distance(xd.data(), yd.data(), xd.size()));
}

/// 1 - x.y / (|x| |y|), in [0, 2].
template <typename DerivedX, typename DerivedY>
double cosine_distance(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y,
                       double zero_norm_epsilon = 0.0) {
  detail::check_pair_dims(x.size(), y.size());
  const Eigen::VectorXd xd = x.template cast<double>().reshaped();
  const Eigen::VectorXd yd = y.template cast<double>().reshaped();
  const auto dim = xd.size();
  const double sx =
      detail::effective_sq_norm(detail::dot(xd.data(), xd.data(), dim), zero_norm_epsilon, -1);
  const double sy =
      detail::effective_sq_norm(detail::dot(yd.data(), yd.data(), dim), zero_norm_epsilon, -1);
  return detail::cosine_from_parts(detail::dot(xd.data(), yd.data(), dim), sx, sy);
}

template <typename DerivedX, typename DerivedY>
double distance(const Metric& metric, const Eigen::MatrixBase<DerivedX>& x,
                const Eigen::MatrixBase<DerivedY>& y) {
  switch (metric.kind) {
    case MetricKind::Cosine:
      return cosine_distance(x, y, metric.zero_norm_epsilon);
    case MetricKind::Euclidean:
      break;
  }
  return euclidean_distance(x, y);
}

}  // namespace hpstat
