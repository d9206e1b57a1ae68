#include "hpstat/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hpstat/error.hpp"

namespace hpstat {

namespace {

// Linear interpolation between order statistics.
double quantile(const std::vector<double>& sorted, double q) {
  const double position = q * static_cast<double>(sorted.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const auto upper = std::min(lower + 1, sorted.size() - 1);
  const double fraction = position - static_cast<double>(lower);
  return sorted[lower] + fraction * (sorted[upper] - sorted[lower]);
}

}  // namespace

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw InvalidArgument("bandwidth needs at least two values");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (*lo == *hi) {
    throw DegenerateInput("Silverman bandwidth is 0 for a constant sample; pass an explicit bandwidth");
  }
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
  const double spread = iqr > 0.0 ? std::min(sd, iqr / 1.34) : sd;
  const double bandwidth = 0.9 * spread * std::pow(n, -0.2);
  if (!(bandwidth > 0.0)) {
    throw DegenerateInput("Silverman bandwidth is 0 for a constant sample; pass an explicit bandwidth");
  }
  return bandwidth;
}

std::vector<double> kde_1d(std::span<const double> values, std::span<const double> grid,
                           std::optional<double> bandwidth) {
  if (values.size() < 2) throw InvalidArgument("kernel density estimate needs at least two values");
  const double h = bandwidth ? *bandwidth : silverman_bandwidth(values);
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("bandwidth must be positive");

  const double norm = 1.0 / (static_cast<double>(values.size()) * h *
                             std::sqrt(2.0 * std::numbers::pi));
  std::vector<double> density(grid.size(), 0.0);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double sum = 0.0;
    for (double v : values) {
      const double z = (grid[g] - v) / h;
      sum += std::exp(-0.5 * z * z);
    }
    density[g] = norm * sum;
  }
  return density;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw InvalidArgument("grid needs count >= 2 and hi > lo");
  std::vector<double> grid(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + step * static_cast<double>(k);
  grid.back() = hi;
  return grid;
}

}  // namespace hpstat
