#include "hpstat/types.hpp"

#include "hpstat/error.hpp"

namespace hpstat {

std::string_view to_string(ModelState state) {
  return state == ModelState::Trained ? "trained" : "init";
}

std::string_view to_string(DataSplit split) {
  return split == DataSplit::Validation ? "validation" : "train";
}

ModelState parse_model_state(std::string_view text) {
  if (text == "init" || text == "initialized" || text == "0") return ModelState::Initialized;
  if (text == "trained" || text == "T") return ModelState::Trained;
  throw InvalidArgument("unknown model state '" + std::string(text) + "' (expected init|trained)");
}

DataSplit parse_data_split(std::string_view text) {
  if (text == "train" || text == "t") return DataSplit::Train;
  if (text == "validation" || text == "val" || text == "v") return DataSplit::Validation;
  throw InvalidArgument("unknown data split '" + std::string(text) +
                        "' (expected train|validation)");
}

}  // namespace hpstat
