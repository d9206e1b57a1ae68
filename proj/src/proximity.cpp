#include "hpstat/proximity.hpp"

namespace hpstat {

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::Cosine ? "cosine" : "euclidean";
}

MetricKind parse_metric_kind(std::string_view name) {
  if (name == "euclidean") return MetricKind::Euclidean;
  if (name == "cosine") return MetricKind::Cosine;
  throw InvalidArgument("unknown metric '" + std::string(name) + "' (expected euclidean|cosine)");
}

}  // namespace hpstat
