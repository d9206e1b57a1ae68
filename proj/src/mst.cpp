#include "hpstat/mst.hpp"

namespace hpstat {

double MstResult::total_weight() const {
  // Ascending order so the sum does not depend on the order edges were found.
  std::vector<double> weights;
  weights.reserve(edges.size());
  for (const Edge& e : edges) weights.push_back(e.weight);
  std::sort(weights.begin(), weights.end());
  double total = 0.0;
  for (double w : weights) total += w;
  return total;
}

Index count_cross_edges(std::span<const Edge> edges, std::span<const Label> labels) {
  Index crossing = 0;
  const auto vertices = static_cast<Index>(labels.size());
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= vertices || e.j >= vertices) {
      throw InvalidArgument("edge references a vertex without a label");
    }
    if (labels[static_cast<std::size_t>(e.i)] != labels[static_cast<std::size_t>(e.j)]) ++crossing;
  }
  return crossing;
}

Index shared_node_pair_count(std::span<const Index> degrees) {
  Index pairs = 0;
  for (Index d : degrees) pairs += d * (d - 1) / 2;
  return pairs;
}

std::vector<Index> tree_degrees(std::span<const Edge> edges, Index vertex_count) {
  std::vector<Index> degree(static_cast<std::size_t>(vertex_count), 0);
  for (const Edge& e : edges) {
    if (e.i < 0 || e.j < 0 || e.i >= vertex_count || e.j >= vertex_count) {
      throw InvalidArgument("edge endpoint out of range");
    }
    ++degree[static_cast<std::size_t>(e.i)];
    ++degree[static_cast<std::size_t>(e.j)];
  }
  return degree;
}

MstResult summarize_tree(std::vector<Edge> edges, std::span<const Label> labels) {
  const auto vertices = static_cast<Index>(labels.size());
  if (static_cast<Index>(edges.size()) != vertices - 1) {
    throw ConsistencyError("spanning tree over " + std::to_string(vertices) + " vertices has " +
                           std::to_string(edges.size()) + " edges");
  }
  MstResult result;
  result.degree = tree_degrees(edges, vertices);
  result.cross_edges = count_cross_edges(edges, labels);
  result.runs = result.cross_edges + 1;
  result.shared_node_pairs = shared_node_pair_count(result.degree);
  result.edges = std::move(edges);
  return result;
}

}  // namespace hpstat
