// Shared synthetic layer pipelines for the analysis, CLI and acceptance tests.
#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "hpstat/analysis.hpp"
#include "hpstat/dataio.hpp"

namespace fixture {

using hpstat::DataSplit;
using hpstat::HpMatrix;
using hpstat::Index;
using hpstat::Label;
using hpstat::ModelState;
using hpstat::RepresentationSet;

inline const std::vector<std::string> kFiveLayers{"0.Input", "1.Conv", "2.ReLU", "3.MaxPool",
                                                  "4.Dense"};

/// Complete class-pair matrix with the given values in pair order.
inline HpMatrix matrix_from(Index classes, const std::vector<double>& values,
                            const std::string& layer, ModelState state, DataSplit split) {
  HpMatrix h;
  for (Index c = 0; c < classes; ++c) h.class_ids.push_back(static_cast<Label>(c));
  std::size_t k = 0;
  for (Index i = 0; i < classes; ++i) {
    for (Index j = i + 1; j < classes; ++j) {
      h.entries.push_back({static_cast<Label>(i), static_cast<Label>(j), 1000, 1000, 0,
                           values.at(k++)});
    }
  }
  h.provenance = {layer, state, split};
  return h;
}

inline std::vector<double> normal_values(std::size_t count, double mean, double sd,
                                         std::mt19937_64& rng) {
  std::normal_distribution<double> normal(mean, sd);
  std::vector<double> out(count);
  for (auto& v : out) v = normal(rng);
  return out;
}

/// Normal draws shifted so that their sample mean is `mean`.
inline std::vector<double> centered_values(std::size_t count, double mean, double sd,
                                           std::mt19937_64& rng) {
  auto out = normal_values(count, 0.0, sd, rng);
  double sum = 0.0;
  for (double v : out) sum += v;
  for (auto& v : out) v += mean - sum / static_cast<double>(count);
  return out;
}

/// Power-of-two scaling and zero padding leave every distance comparison
/// unchanged, so the pairwise matrices of such layers are bit-identical.
inline RepresentationSet exact_transform(const RepresentationSet& base, int step) {
  RepresentationSet out = base;
  out.matrix *= static_cast<float>(1 << step);
  if (step % 2 == 1) {
    hpstat::RowMatrix<float> padded = hpstat::RowMatrix<float>::Zero(base.rows(), base.cols() + 4);
    padded.leftCols(base.cols()) = out.matrix;
    out.matrix = std::move(padded);
  }
  return out;
}

using Key = std::tuple<std::string, ModelState, DataSplit>;

/// Five layers over `classes` classes. Every layer before the last is an exact
/// transform of one class-mixed draw per split, in both model states; the last
/// layer is mixed when initialized and splits into far clusters once trained.
inline std::map<Key, RepresentationSet> separating_pipeline(Index classes, Index per_class,
                                                            Index dim, std::uint64_t seed) {
  std::map<Key, RepresentationSet> reps;
  for (DataSplit split : {DataSplit::Train, DataSplit::Validation}) {
    const std::uint64_t split_seed = seed * 2 + (split == DataSplit::Validation);
    const auto mixed = hpstat::synth_gaussian_mixture(classes, per_class, dim, 0.0, split_seed);
    const auto separated =
        hpstat::synth_gaussian_mixture(classes, per_class, dim, 100.0, split_seed + 1000);
    for (std::size_t k = 0; k < kFiveLayers.size(); ++k) {
      for (ModelState state : {ModelState::Initialized, ModelState::Trained}) {
        const bool last = k + 1 == kFiveLayers.size();
        RepresentationSet rep = last && state == ModelState::Trained
                                    ? separated
                                    : exact_transform(mixed, static_cast<int>(k));
        rep.provenance = {kFiveLayers[k], state, split};
        reps.emplace(Key{kFiveLayers[k], state, split}, std::move(rep));
      }
    }
  }
  return reps;
}

inline hpstat::LayerAnalysis analyze_pipeline(const std::map<Key, RepresentationSet>& reps,
                                              const hpstat::Metric& metric) {
  hpstat::LayerAnalysis analysis(kFiveLayers);
  for (const auto& [key, rep] : reps) analysis.add(hpstat::pairwise_hp_matrix(rep, metric));
  return analysis;
}

/// Writes the pipeline as HPRM files plus an `analyze` config; returns the
/// config path.
inline std::filesystem::path write_pipeline(const std::map<Key, RepresentationSet>& reps,
                                            const std::filesystem::path& dir,
                                            const std::string& analysis_section) {
  std::filesystem::create_directories(dir);
  std::string config = "[analysis]\n" + analysis_section;
  for (const auto& layer : kFiveLayers) {
    config += "\n[layer " + layer + "]\n";
    for (ModelState state : {ModelState::Initialized, ModelState::Trained}) {
      for (DataSplit split : {DataSplit::Train, DataSplit::Validation}) {
        const std::string key =
            std::string(hpstat::to_string(state)) + "." + std::string(hpstat::to_string(split));
        const std::string file = layer + "_" + key + ".hprm";
        hpstat::write_hprm(reps.at(Key{layer, state, split}), dir / file);
        config += key + " = " + file + "\n";
      }
    }
  }
  const auto path = dir / "analysis.cfg";
  std::ofstream(path) << config;
  return path;
}

}  // namespace fixture
