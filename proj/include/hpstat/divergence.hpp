#pragma once

#include <Eigen/Core>

#include <optional>

#include "hpstat/mst.hpp"
#include "hpstat/proximity.hpp"
#include "hpstat/types.hpp"

namespace hpstat {

/// Runs-test and divergence statistics of one two-sample comparison.
///
/// `variance_runs` uses the ordered-sample formula for one-dimensional data and
/// the tree-topology conditional formula otherwise. It (and `w_score`) is empty
/// when the formula is undefined for the sizes at hand.
struct DivergenceResult {
  Index n = 0;
  Index m = 0;
  Index cross_edges = 0;
  Index runs = 0;
  Index shared_node_pairs = 0;
  bool univariate = false;
  double expected_runs = 0.0;
  std::optional<double> variance_runs;
  std::optional<double> w_score;
  double delta_hat = 0.0;
  double hp = 0.0;
  /// m / (n + m).
  double p_hat = 0.0;
};

/// E(R) = 2mn / (m + n) + 1.
double expected_runs(Index n, Index m);

/// Permutation variance of the runs count for ordered (univariate) data.
double runs_variance_univariate(Index n, Index m);

/// Permutation variance of R conditioned on the tree topology through C.
/// Throws DegenerateInput for n + m < 4.
double runs_variance_conditional(Index n, Index m, Index shared_node_pairs);

/// W = (R - E(R)) / sqrt(var). Throws DegenerateInput when var <= 0.
double w_score(double runs, double expected_runs, double variance_runs);

/// H = 1 - S (n + m) / (2 n m). Negative values are legitimate.
double hp_divergence(Index cross_edges, Index n, Index m);

/// delta-hat = 1 - S / (n + m).
double delta_estimate(Index cross_edges, Index n, Index m);

/// Builds the full result from a tree over n + m points of dimension `dim`.
DivergenceResult summarize_divergence(const MstResult& tree, Index n, Index m, Index dim);

/// Pools x (label 0) and y (label 1), builds the MST and derives every statistic.
template <typename DerivedX, typename DerivedY>
DivergenceResult two_sample_divergence(const Eigen::MatrixBase<DerivedX>& x,
                                       const Eigen::MatrixBase<DerivedY>& y,
                                       const Metric& metric) {
  using Scalar = typename DerivedX::Scalar;
  const auto sample = PooledSample<Scalar>::pool(x, y);
  return summarize_divergence(build_mst(sample, metric), sample.n, sample.m, sample.dim());
}

}  // namespace hpstat
