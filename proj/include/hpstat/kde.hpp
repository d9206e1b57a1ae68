#pragma once

#include <optional>
#include <span>
#include <vector>

namespace hpstat {

/// 0.9 * min(sd, IQR / 1.34) * n^(-1/5); falls back to sd when the IQR is 0.
/// Throws DegenerateInput when the result is 0 (all values equal).
double silverman_bandwidth(std::span<const double> values);

/// Gaussian kernel density estimate of `values` evaluated at each grid point.
std::vector<double> kde_1d(std::span<const double> values, std::span<const double> grid,
                           std::optional<double> bandwidth = std::nullopt);

/// `count` evenly spaced points from `lo` to `hi` inclusive.
std::vector<double> linear_grid(double lo, double hi, std::size_t count);

}  // namespace hpstat
