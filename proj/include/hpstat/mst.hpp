#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <exception>
#include <limits>
#include <numeric>
#include <span>
#include <tuple>
#include <vector>

#include "hpstat/error.hpp"
#include "hpstat/kernels.hpp"
#include "hpstat/proximity.hpp"
#include "hpstat/types.hpp"

namespace hpstat {

/// Tree edge with i < j.
struct Edge {
  Index i = 0;
  Index j = 0;
  double weight = 0.0;

  bool operator==(const Edge&) const = default;
};

/// Minimal spanning tree over a labeled point set plus the counts the
/// runs statistics need.
struct MstResult {
  std::vector<Edge> edges;
  /// S: edges whose endpoints carry different labels.
  Index cross_edges = 0;
  /// R = S + 1.
  Index runs = 1;
  /// C: pairs of edges sharing a vertex.
  Index shared_node_pairs = 0;
  std::vector<Index> degree;

  Index vertex_count() const { return static_cast<Index>(degree.size()); }
  /// Sum of edge weights, added in ascending order.
  double total_weight() const;
};

/// Two samples stacked row-wise: the first `n` rows carry label 0, the next
/// `m` rows label 1.
template <typename Scalar>
struct PooledSample {
  RowMatrix<Scalar> points;
  std::vector<Label> labels;
  Index n = 0;
  Index m = 0;

  template <typename DerivedX, typename DerivedY>
  static PooledSample pool(const Eigen::MatrixBase<DerivedX>& x,
                           const Eigen::MatrixBase<DerivedY>& y) {
    if (x.rows() < 1 || y.rows() < 1) throw InvalidArgument("both samples must be nonempty");
    if (x.cols() != y.cols()) {
      throw DimensionMismatch("samples have different dimension: " + std::to_string(x.cols()) +
                              " vs " + std::to_string(y.cols()));
    }
    PooledSample sample;
    sample.n = x.rows();
    sample.m = y.rows();
    sample.points.resize(sample.n + sample.m, x.cols());
    sample.points.topRows(sample.n) = x.template cast<Scalar>();
    sample.points.bottomRows(sample.m) = y.template cast<Scalar>();
    sample.labels.assign(static_cast<std::size_t>(sample.n), Label{0});
    sample.labels.resize(static_cast<std::size_t>(sample.n + sample.m), Label{1});
    return sample;
  }

  Index size() const { return n + m; }
  Index dim() const { return points.cols(); }

  void validate() const {
    if (n < 1 || m < 1) throw InvalidArgument("pooled sample needs n >= 1 and m >= 1");
    if (points.rows() != n + m || static_cast<Index>(labels.size()) != n + m) {
      throw LabelCountMismatch("pooled sample row/label counts disagree with n + m");
    }
    const auto zeros = std::count(labels.begin(), labels.end(), Label{0});
    const auto ones = std::count(labels.begin(), labels.end(), Label{1});
    if (zeros != n || ones != m) {
      throw InvalidArgument("pooled sample labels must hold n zeros and m ones");
    }
  }
};

Index count_cross_edges(std::span<const Edge> edges, std::span<const Label> labels);

/// C = sum over vertices of deg * (deg - 1) / 2.
Index shared_node_pair_count(std::span<const Index> degrees);

std::vector<Index> tree_degrees(std::span<const Edge> edges, Index vertex_count);

/// Fills S, R, C and the degree list for a spanning tree over labeled vertices.
MstResult summarize_tree(std::vector<Edge> edges, std::span<const Label> labels);

/// Edges are ordered by (weight, i, j); this strict total order makes the
/// MST unique even when distances tie.
inline bool edge_precedes(double wa, Index ia, Index ja, double wb, Index ib, Index jb) {
  return std::tie(wa, ia, ja) < std::tie(wb, ib, jb);
}

/// Dense Prim on the complete graph over `count` vertices. `distance(a, b)`
/// is evaluated on demand and must be safe to call concurrently; every pair
/// is evaluated at most once. No distance matrix is stored.
template <typename DistanceFn>
std::vector<Edge> prim_spanning_tree(Index count, const DistanceFn& distance,
                                     bool parallel = false) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  constexpr Index kNone = std::numeric_limits<Index>::max();

  std::vector<Edge> edges;
  if (count < 2) return edges;
  edges.reserve(static_cast<std::size_t>(count - 1));

  std::vector<double> key(static_cast<std::size_t>(count), kInf);
  std::vector<Index> parent(static_cast<std::size_t>(count), -1);
  std::vector<Index> outside(static_cast<std::size_t>(count - 1));
  std::iota(outside.begin(), outside.end(), Index{1});

  struct Best {
    double weight;
    Index lo;
    Index hi;
    Index slot;
  };

  Index current = 0;
  while (!outside.empty()) {
    Best best{kInf, kNone, kNone, -1};
    const auto remaining = static_cast<Index>(outside.size());

#pragma omp parallel if (parallel)
    {
      Best local{kInf, kNone, kNone, -1};
#pragma omp for schedule(static) nowait
      for (Index s = 0; s < remaining; ++s) {
        const Index v = outside[static_cast<std::size_t>(s)];
        const double d = distance(current, v);
        const Index lo = std::min(current, v);
        const Index hi = std::max(current, v);
        const Index p = parent[static_cast<std::size_t>(v)];
        if (p < 0 || edge_precedes(d, lo, hi, key[static_cast<std::size_t>(v)], std::min(p, v),
                                   std::max(p, v))) {
          key[static_cast<std::size_t>(v)] = d;
          parent[static_cast<std::size_t>(v)] = current;
        }
        const Index q = parent[static_cast<std::size_t>(v)];
        const double w = key[static_cast<std::size_t>(v)];
        if (edge_precedes(w, std::min(q, v), std::max(q, v), local.weight, local.lo, local.hi)) {
          local = {w, std::min(q, v), std::max(q, v), s};
        }
      }
#pragma omp critical(hpstat_prim_reduce)
      if (local.slot >= 0 &&
          (best.slot < 0 ||
           edge_precedes(local.weight, local.lo, local.hi, best.weight, best.lo, best.hi))) {
        best = local;
      }
    }

    if (best.slot < 0) throw ConsistencyError("minimal spanning tree: no finite edge to extend");
    const Index chosen = outside[static_cast<std::size_t>(best.slot)];
    edges.push_back({best.lo, best.hi, best.weight});
    outside[static_cast<std::size_t>(best.slot)] = outside.back();
    outside.pop_back();
    current = chosen;
  }
  return edges;
}

namespace detail {

/// Distance between two selected rows of a row-major matrix.
template <typename Scalar>
class RowDistance {
 public:
  RowDistance(const RowMatrix<Scalar>& data, std::span<const Index> rows, const Metric& metric)
      : data_(data), rows_(rows), metric_(metric) {
    if (metric_.kind == MetricKind::Cosine) {
      sq_norms_.resize(rows_.size());
      for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Scalar* r = row(static_cast<Index>(k));
        sq_norms_[k] = effective_sq_norm(dot(r, r, data_.cols()), metric_.zero_norm_epsilon,
                                         static_cast<std::int64_t>(rows_[k]));
      }
    }
  }

  double operator()(Index a, Index b) const {
    const Scalar* ra = row(a);
    const Scalar* rb = row(b);
    if (metric_.kind == MetricKind::Cosine) {
      return cosine_from_parts(dot(ra, rb, data_.cols()), sq_norms_[static_cast<std::size_t>(a)],
                               sq_norms_[static_cast<std::size_t>(b)]);
    }
    return std::sqrt(squared_distance(ra, rb, data_.cols()));
  }

 private:
  const Scalar* row(Index k) const {
    return data_.data() + rows_[static_cast<std::size_t>(k)] * data_.cols();
  }

  const RowMatrix<Scalar>& data_;
  std::span<const Index> rows_;
  Metric metric_;
  std::vector<double> sq_norms_;
};

/// Below this much work per Prim sweep threads cost more than they save.
inline constexpr Index kParallelPrimWork = Index{1} << 15;

template <typename Scalar>
void require_finite_rows(const RowMatrix<Scalar>& data, std::span<const Index> rows) {
  for (Index r : rows) {
    if (r < 0 || r >= data.rows()) {
      throw InvalidArgument("row index " + std::to_string(r) + " out of range");
    }
    if (!data.row(r).allFinite()) {
      throw InvalidArgument("row " + std::to_string(r) + " contains a non-finite value");
    }
  }
}

}  // namespace detail

/// Exact MST of the complete graph over `rows` of `data` (vertex k is row
/// rows[k]), with labels[k] the class of vertex k.
template <typename Scalar>
MstResult build_mst(const RowMatrix<Scalar>& data, std::span<const Index> rows,
                    std::span<const Label> labels, const Metric& metric) {
  if (rows.size() != labels.size()) {
    throw LabelCountMismatch("build_mst: " + std::to_string(rows.size()) + " rows but " +
                             std::to_string(labels.size()) + " labels");
  }
  if (rows.size() < 2) throw InvalidArgument("build_mst needs at least two points");
  if (data.cols() < 1) throw DimensionMismatch("points must have dimension >= 1");
  detail::require_finite_rows(data, rows);

  const detail::RowDistance<Scalar> distance(data, rows, metric);
  const auto count = static_cast<Index>(rows.size());
  const bool parallel = count * data.cols() >= detail::kParallelPrimWork;
  return summarize_tree(prim_spanning_tree(count, distance, parallel), labels);
}

template <typename Scalar>
MstResult build_mst(const RowMatrix<Scalar>& points, std::span<const Label> labels,
                    const Metric& metric) {
  std::vector<Index> rows(static_cast<std::size_t>(points.rows()));
  std::iota(rows.begin(), rows.end(), Index{0});
  return build_mst(points, std::span<const Index>(rows), labels, metric);
}

template <typename Derived>
MstResult build_mst(const Eigen::MatrixBase<Derived>& points, std::span<const Label> labels,
                    const Metric& metric) {
  const RowMatrix<typename Derived::Scalar> copy = points;
  return build_mst(copy, labels, metric);
}

template <typename Scalar>
MstResult build_mst(const PooledSample<Scalar>& sample, const Metric& metric) {
  sample.validate();
  return build_mst(sample.points, std::span<const Label>(sample.labels), metric);
}

}  // namespace hpstat
