#include "hpstat/analysis.hpp"

#include <algorithm>
#include <exception>

#include <omp.h>

#include "hpstat/divergence.hpp"
#include "hpstat/error.hpp"
#include "hpstat/mst.hpp"

namespace hpstat {

HpMatrix pairwise_hp_matrix(const RowMatrix<float>& data, std::span<const Label> labels,
                            const Metric& metric, const Provenance& provenance) {
  if (static_cast<Index>(labels.size()) != data.rows()) {
    throw LabelCountMismatch(std::to_string(labels.size()) + " labels for " +
                             std::to_string(data.rows()) + " rows");
  }
  const Label classes = class_count(labels);
  std::vector<std::vector<Index>> members(classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    members[labels[r]].push_back(static_cast<Index>(r));
  }

  HpMatrix matrix;
  matrix.provenance = provenance;
  matrix.metric = metric;
  for (Label c = 0; c < classes; ++c) {
    if (members[c].empty()) continue;
    if (members[c].size() < 2) throw UndersizedClass(c, static_cast<Index>(members[c].size()), 2);
    matrix.class_ids.push_back(c);
  }
  if (matrix.class_ids.size() < 2) {
    throw InvalidArgument("pairwise matrix needs at least two classes");
  }

  const std::size_t count = matrix.class_ids.size();
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      ClassPairEntry entry;
      entry.first = matrix.class_ids[i];
      entry.second = matrix.class_ids[j];
      entry.n = static_cast<Index>(members[entry.first].size());
      entry.m = static_cast<Index>(members[entry.second].size());
      matrix.entries.push_back(entry);
    }
  }

  const auto pairs = static_cast<std::int64_t>(matrix.entries.size());
  std::vector<std::exception_ptr> failures(matrix.entries.size());
  // Few pairs: leave the threads to the per-tree Prim sweep instead.
  const bool across_pairs = pairs >= omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) if (across_pairs)
  for (std::int64_t k = 0; k < pairs; ++k) {
    auto& entry = matrix.entries[static_cast<std::size_t>(k)];
    try {
      const auto& x = members[entry.first];
      const auto& y = members[entry.second];
      std::vector<Index> rows(x);
      rows.insert(rows.end(), y.begin(), y.end());
      std::vector<Label> pooled(x.size(), 0);
      pooled.resize(rows.size(), 1);
      const auto tree = build_mst(data, std::span<const Index>(rows),
                                  std::span<const Label>(pooled), metric);
      if (tree.cross_edges < 1) {
        throw ConsistencyError("two-class spanning tree has no cross-class edge");
      }
      entry.cross_edges = tree.cross_edges;
      entry.hp = hp_divergence(tree.cross_edges, entry.n, entry.m);
    } catch (...) {
      failures[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return matrix;
}

HpMatrix pairwise_hp_matrix(const RepresentationSet& rep, const Metric& metric) {
  return pairwise_hp_matrix(rep.matrix, rep.labels, metric, rep.provenance);
}

namespace {

struct KindName {
  TestKind kind;
  std::string_view name;
  std::string_view snake;
};

constexpr KindName kKindNames[] = {
    {TestKind::InitAdjacent, "InitAdjacent", "init_adjacent"},
    {TestKind::TrainedVsInit, "TrainedVsInit", "trained_vs_init"},
    {TestKind::TrainedAdjacent, "TrainedAdjacent", "trained_adjacent"},
    {TestKind::TrainedAdjacentVal, "TrainedAdjacentVal", "trained_adjacent_val"},
    {TestKind::TrainVsVal, "TrainVsVal", "train_vs_val"},
    {TestKind::MultiLayerSpan, "MultiLayerSpan", "multi_layer_span"},
    {TestKind::MultiLayerSpanVal, "MultiLayerSpanVal", "multi_layer_span_val"},
};

}  // namespace

std::string_view to_string(TestKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

TestKind parse_test_kind(std::string_view text) {
  for (const auto& entry : kKindNames) {
    if (entry.name == text || entry.snake == text) return entry.kind;
  }
  throw InvalidArgument("unknown test kind '" + std::string(text) + "'");
}

LayerAnalysis::LayerAnalysis(std::vector<std::string> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw InvalidArgument("layer analysis needs at least one layer");
  auto sorted = layers_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("layer names must be unique");
  }
}

Index LayerAnalysis::layer_index(std::string_view name) const {
  const auto it = std::find(layers_.begin(), layers_.end(), name);
  if (it == layers_.end()) throw InvalidArgument("unknown layer '" + std::string(name) + "'");
  return static_cast<Index>(it - layers_.begin());
}

void LayerAnalysis::add(HpMatrix matrix) {
  layer_index(matrix.provenance.layer);
  Key key{matrix.provenance.layer, matrix.provenance.state, matrix.provenance.split};
  matrices_.insert_or_assign(std::move(key), std::move(matrix));
}

bool LayerAnalysis::contains(std::string_view layer, ModelState state, DataSplit split) const {
  return matrices_.count(Key{std::string(layer), state, split}) > 0;
}

const HpMatrix& LayerAnalysis::at(std::string_view layer, ModelState state,
                                  DataSplit split) const {
  const auto it = matrices_.find(Key{std::string(layer), state, split});
  if (it == matrices_.end()) {
    throw MissingMatrix("no pairwise matrix for layer '" + std::string(layer) + "', state " +
                        std::string(to_string(state)) + ", split " + std::string(to_string(split)));
  }
  return it->second;
}

namespace {

TestReport make_report(TestKind kind, const std::string& input, const std::string& output,
                       const TestResult& result) {
  return {kind, input, output, result.observed_delta, result.p_value, result.reject};
}

TestReport compare_means(TestKind kind, const HpMatrix& output, const HpMatrix& input,
                         Sidedness sidedness, TestSpec spec) {
  spec.sidedness = sidedness;
  const auto a = output.values();
  const auto b = input.values();
  return make_report(kind, input.provenance.layer, output.provenance.layer,
                     perm_test_mean_diff(a, b, spec));
}

}  // namespace

std::vector<TestReport> run_layer_battery(const LayerAnalysis& analysis,
                                          std::span<const TestKind> kinds, const TestSpec& spec) {
  spec.validate();
  const auto& layers = analysis.layers();
  std::vector<TestReport> rows;
  constexpr auto kInit = ModelState::Initialized;
  constexpr auto kTrained = ModelState::Trained;
  constexpr auto kTrain = DataSplit::Train;
  constexpr auto kVal = DataSplit::Validation;

  for (TestKind kind : kinds) {
    for (std::size_t k = 1; k < layers.size(); ++k) {
      const auto& in = layers[k - 1];
      const auto& out = layers[k];
      switch (kind) {
        case TestKind::InitAdjacent:
          rows.push_back(compare_means(kind, analysis.at(out, kInit, kTrain),
                                       analysis.at(in, kInit, kTrain), Sidedness::TwoSided, spec));
          break;
        case TestKind::TrainedVsInit: {
          // Same layer across model states; the "input" column names the layer.
          auto report = compare_means(kind, analysis.at(out, kTrained, kTrain),
                                      analysis.at(out, kInit, kTrain), Sidedness::OneSidedGreater,
                                      spec);
          report.input_layer = out;
          rows.push_back(std::move(report));
          break;
        }
        case TestKind::TrainedAdjacent:
          rows.push_back(compare_means(kind, analysis.at(out, kTrained, kTrain),
                                       analysis.at(in, kTrained, kTrain),
                                       Sidedness::OneSidedGreater, spec));
          break;
        case TestKind::TrainedAdjacentVal:
          rows.push_back(compare_means(kind, analysis.at(out, kTrained, kVal),
                                       analysis.at(in, kTrained, kVal), Sidedness::OneSidedGreater,
                                       spec));
          break;
        case TestKind::TrainVsVal: {
          const auto delta_t = paired_difference_set(analysis.at(out, kTrained, kTrain),
                                                     analysis.at(in, kTrained, kTrain));
          const auto delta_v = paired_difference_set(analysis.at(out, kTrained, kVal),
                                                     analysis.at(in, kTrained, kVal));
          rows.push_back(make_report(kind, in, out, perm_test_train_vs_val(delta_t, delta_v, spec)));
          break;
        }
        case TestKind::MultiLayerSpan:
        case TestKind::MultiLayerSpanVal:
          throw InvalidArgument("span tests run through multi_layer_span_tests");
      }
    }
  }
  return rows;
}

std::vector<TestReport> multi_layer_span_tests(const LayerAnalysis& analysis,
                                               std::span<const std::pair<Index, Index>> spans,
                                               DataSplit split, const TestSpec& spec) {
  spec.validate();
  const auto& layers = analysis.layers();
  const auto kind = split == DataSplit::Train ? TestKind::MultiLayerSpan : TestKind::MultiLayerSpanVal;
  std::vector<TestReport> rows;
  for (const auto& [first, second] : spans) {
    if (first >= second) {
      throw InvalidArgument("span needs first layer before second (" + std::to_string(first) +
                            " >= " + std::to_string(second) + ")");
    }
    if (first < 0 || second >= static_cast<Index>(layers.size())) {
      throw InvalidArgument("span layer index out of range");
    }
    const auto& in = layers[static_cast<std::size_t>(first)];
    const auto& out = layers[static_cast<std::size_t>(second)];
    rows.push_back(compare_means(kind, analysis.at(out, ModelState::Trained, split),
                                 analysis.at(in, ModelState::Trained, split),
                                 Sidedness::OneSidedGreater, spec));
  }
  return rows;
}

}  // namespace hpstat
