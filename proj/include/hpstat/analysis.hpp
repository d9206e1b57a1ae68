#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "hpstat/dataio.hpp"
#include "hpstat/hp_matrix.hpp"
#include "hpstat/permtest.hpp"
#include "hpstat/proximity.hpp"

namespace hpstat {

/// H for every unordered class pair of `labels`. Vertex order inside each
/// pooled pair is: rows of the lower class, then rows of the higher class,
/// each in original row order. Pairs run in parallel; the result does not
/// depend on the thread count.
HpMatrix pairwise_hp_matrix(const RowMatrix<float>& data, std::span<const Label> labels,
                            const Metric& metric, const Provenance& provenance = {});

HpMatrix pairwise_hp_matrix(const RepresentationSet& rep, const Metric& metric);

enum class TestKind {
  InitAdjacent,        // two-sided, consecutive layers, initialized model
  TrainedVsInit,       // one-sided, same layer, trained vs initialized
  TrainedAdjacent,     // one-sided, consecutive layers, trained model, train split
  TrainedAdjacentVal,  // as above on the validation split
  TrainVsVal,          // two-sided, per-layer change on train vs validation
  MultiLayerSpan,      // one-sided, non-adjacent layers, trained model, train split
  MultiLayerSpanVal,   // as above on the validation split
};

std::string_view to_string(TestKind kind);
/// Accepts the enumerator spelling or its snake_case form.
TestKind parse_test_kind(std::string_view text);

/// One row of a layer-comparison table.
struct TestReport {
  TestKind test_kind = TestKind::InitAdjacent;
  std::string input_layer;
  std::string output_layer;
  double delta = 0.0;
  double p_value = 1.0;
  bool reject = false;

  bool operator==(const TestReport&) const = default;
};

/// Ordered layers plus the pairwise matrices computed for them.
class LayerAnalysis {
 public:
  explicit LayerAnalysis(std::vector<std::string> layers);

  const std::vector<std::string>& layers() const { return layers_; }
  Index layer_index(std::string_view name) const;

  /// Stores a matrix under its provenance; the layer must be known.
  void add(HpMatrix matrix);
  bool contains(std::string_view layer, ModelState state, DataSplit split) const;
  /// Throws MissingMatrix naming the (layer, state, split) gap.
  const HpMatrix& at(std::string_view layer, ModelState state, DataSplit split) const;

 private:
  using Key = std::tuple<std::string, ModelState, DataSplit>;
  std::vector<std::string> layers_;
  std::map<Key, HpMatrix> matrices_;
};

/// Runs each requested family over every layer transition k-1 -> k (and, for
/// TrainedVsInit, every non-input layer k). Sidedness comes from the family;
/// the remaining spec fields apply to every test. Rows come out family by
/// family, in layer order.
std::vector<TestReport> run_layer_battery(const LayerAnalysis& analysis,
                                          std::span<const TestKind> kinds, const TestSpec& spec);

/// One-sided trained-model tests between layer indices first < second.
std::vector<TestReport> multi_layer_span_tests(const LayerAnalysis& analysis,
                                               std::span<const std::pair<Index, Index>> spans,
                                               DataSplit split, const TestSpec& spec);

}  // namespace hpstat
