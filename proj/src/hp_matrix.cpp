#include "hpstat/hp_matrix.hpp"

#include <algorithm>

#include "hpstat/divergence.hpp"
#include "hpstat/error.hpp"

namespace hpstat {

std::vector<double> HpMatrix::values() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.hp);
  return out;
}

double HpMatrix::at(Label a, Label b) const {
  for (const auto& e : entries) {
    if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return e.hp;
  }
  throw InvalidArgument("class pair (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") not in matrix");
}

void HpMatrix::validate() const {
  const std::size_t classes = class_ids.size();
  if (entries.size() != classes * (classes - 1) / 2) {
    throw ConsistencyError("matrix for " + std::to_string(classes) + " classes has " +
                           std::to_string(entries.size()) + " entries");
  }
  std::size_t k = 0;
  for (std::size_t i = 0; i < classes; ++i) {
    for (std::size_t j = i + 1; j < classes; ++j, ++k) {
      const auto& e = entries[k];
      if (e.first != class_ids[i] || e.second != class_ids[j]) {
        throw ConsistencyError("matrix entries are not in canonical class-pair order");
      }
      if (e.hp > hp_divergence(1, e.n, e.m)) {
        throw ConsistencyError("H above its attainable maximum for pair (" +
                               std::to_string(e.first) + ", " + std::to_string(e.second) + ")");
      }
    }
  }
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("mean of an empty set");
  // Ascending summation order makes the mean a function of the multiset.
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  return sum / static_cast<double>(sorted.size());
}

double mean_hp(const HpMatrix& matrix) {
  const auto values = matrix.values();
  return mean_of(values);
}

}  // namespace hpstat
