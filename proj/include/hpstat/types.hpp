#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <string_view>

namespace hpstat {

using Index = Eigen::Index;
using Label = std::uint32_t;

/// Dense row-major storage: one sample per row.
template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class ModelState { Initialized, Trained };
enum class DataSplit { Train, Validation };

std::string_view to_string(ModelState state);
std::string_view to_string(DataSplit split);
/// "init"/"0"/"initialized" and "trained"/"T".
ModelState parse_model_state(std::string_view text);
/// "train"/"t" and "validation"/"val"/"v".
DataSplit parse_data_split(std::string_view text);

/// Where a representation came from: layer name, model state, data split.
struct Provenance {
  std::string layer;
  ModelState state = ModelState::Initialized;
  DataSplit split = DataSplit::Train;

  bool operator==(const Provenance&) const = default;
};

}  // namespace hpstat
