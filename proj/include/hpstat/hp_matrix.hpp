#pragma once

#include <span>
#include <vector>

#include "hpstat/proximity.hpp"
#include "hpstat/types.hpp"

namespace hpstat {

/// H for one unordered class pair (first < second in class order).
struct ClassPairEntry {
  Label first = 0;
  Label second = 0;
  Index n = 0;
  Index m = 0;
  Index cross_edges = 0;
  double hp = 0.0;

  bool operator==(const ClassPairEntry&) const = default;
};

/// The set of class-pairwise H values of one representation space, tagged with
/// the layer, model state and data split it came from. Entries are ordered
/// (0,1), (0,2), ..., (1,2), ... over positions in `class_ids`.
struct HpMatrix {
  std::vector<Label> class_ids;
  std::vector<ClassPairEntry> entries;
  Provenance provenance;
  Metric metric;

  Index size() const { return static_cast<Index>(entries.size()); }
  std::vector<double> values() const;
  /// H for the pair {a, b}; throws when the pair is absent.
  double at(Label a, Label b) const;
  /// Checks the entry count, pair ordering and the per-pair upper bound on H.
  void validate() const;
};

/// Sample mean of the pairwise values, 2 / (N (N - 1)) times their sum for a
/// complete N-class matrix.
double mean_hp(const HpMatrix& matrix);

/// Summed in ascending order, so equal multisets give bit-identical means.
double mean_of(std::span<const double> values);

}  // namespace hpstat
