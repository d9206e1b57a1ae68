#include "hpstat/divergence.hpp"

#include <cmath>

namespace hpstat {

namespace {

void require_sizes(Index n, Index m) {
  if (n < 1 || m < 1) throw InvalidArgument("class sizes must be >= 1");
}

}  // namespace

double expected_runs(Index n, Index m) {
  require_sizes(n, m);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return 2.0 * md * nd / (md + nd) + 1.0;
}

double runs_variance_univariate(Index n, Index m) {
  require_sizes(n, m);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double total = nd + md;
  const double two_mn = 2.0 * md * nd;
  return two_mn * (two_mn - md - nd) / (total * total * (total - 1.0));
}

double runs_variance_conditional(Index n, Index m, Index shared_node_pairs) {
  require_sizes(n, m);
  if (n + m < 4) {
    throw DegenerateInput("conditional runs variance needs n + m >= 4: the (N-2)(N-3) term is zero");
  }
  if (shared_node_pairs < 0) throw InvalidArgument("shared node pair count must be >= 0");
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double big_n = nd + md;
  const double c = static_cast<double>(shared_node_pairs);
  const double two_mn = 2.0 * md * nd;
  const double topology = (c - big_n + 2.0) / ((big_n - 2.0) * (big_n - 3.0)) *
                          (big_n * (big_n - 1.0) - 4.0 * md * nd + 2.0);
  return two_mn / (big_n * (big_n - 1.0)) * ((two_mn - big_n) / big_n + topology);
}

double w_score(double runs, double expected, double variance) {
  if (!(variance > 0.0)) throw DegenerateInput("W score undefined: runs variance is not positive");
  return (runs - expected) / std::sqrt(variance);
}

double hp_divergence(Index cross_edges, Index n, Index m) {
  require_sizes(n, m);
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return 1.0 - static_cast<double>(cross_edges) * (nd + md) / (2.0 * nd * md);
}

double delta_estimate(Index cross_edges, Index n, Index m) {
  require_sizes(n, m);
  return 1.0 - static_cast<double>(cross_edges) / static_cast<double>(n + m);
}

DivergenceResult summarize_divergence(const MstResult& tree, Index n, Index m, Index dim) {
  require_sizes(n, m);
  if (tree.vertex_count() != n + m) {
    throw ConsistencyError("tree vertex count does not match n + m");
  }
  // A connected tree over two nonempty classes always crosses at least once.
  if (tree.cross_edges < 1) {
    throw ConsistencyError("two-class spanning tree has no cross-class edge");
  }

  DivergenceResult result;
  result.n = n;
  result.m = m;
  result.cross_edges = tree.cross_edges;
  result.runs = tree.runs;
  result.shared_node_pairs = tree.shared_node_pairs;
  result.univariate = dim == 1;
  result.expected_runs = expected_runs(n, m);
  if (result.univariate) {
    result.variance_runs = runs_variance_univariate(n, m);
  } else if (n + m >= 4) {
    result.variance_runs = runs_variance_conditional(n, m, tree.shared_node_pairs);
  }
  if (result.variance_runs && *result.variance_runs > 0.0) {
    result.w_score =
        w_score(static_cast<double>(result.runs), result.expected_runs, *result.variance_runs);
  }
  result.delta_hat = delta_estimate(tree.cross_edges, n, m);
  result.hp = hp_divergence(tree.cross_edges, n, m);
  result.p_hat = static_cast<double>(m) / static_cast<double>(n + m);
  return result;
}

}  // namespace hpstat
