#include "hpstat/permtest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "hpstat/error.hpp"
#include "hpstat/rng.hpp"

namespace hpstat {

std::string_view to_string(Sidedness sidedness) {
  return sidedness == Sidedness::OneSidedGreater ? "greater" : "two";
}

Sidedness parse_sidedness(std::string_view text) {
  if (text == "two" || text == "two-sided") return Sidedness::TwoSided;
  if (text == "greater" || text == "one-sided") return Sidedness::OneSidedGreater;
  throw InvalidArgument("unknown sidedness '" + std::string(text) + "' (expected two|greater)");
}

void TestSpec::validate() const {
  if (trials < 1) throw InvalidArgument("permutation test needs at least one trial");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

namespace {

void require_sample(std::span<const double> values, const char* name) {
  if (values.size() < 2) {
    throw InvalidArgument(std::string("permutation test sample '") + name +
                          "' needs at least two values");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument(std::string("permutation test sample '") + name +
                            "' contains a non-finite value");
    }
  }
}

double sum_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

}  // namespace

TestResult perm_test_mean_diff(std::span<const double> a, std::span<const double> b,
                               const TestSpec& spec) {
  spec.validate();
  require_sample(a, "a");
  require_sample(b, "b");

  std::vector<double> pool(a.begin(), a.end());
  pool.insert(pool.end(), b.begin(), b.end());
  std::sort(pool.begin(), pool.end());

  const std::size_t total_count = pool.size();
  const bool subset_is_a = a.size() <= b.size();
  const std::size_t subset_count = subset_is_a ? a.size() : b.size();
  const std::size_t rest_count = total_count - subset_count;
  const double total = sum_of(pool);

  const double observed = mean_of(a) - mean_of(b);

  // Rounding slack so that a relabeling equal to the observed split counts as
  // at least as extreme.
  const double scale = std::max(std::abs(pool.front()), std::abs(pool.back()));
  const double slack = 1e-12 * std::max(scale, 1e-300);
  const bool two_sided = spec.sidedness == Sidedness::TwoSided;
  const double threshold = (two_sided ? std::abs(observed) : observed) - slack;

  const auto trials = static_cast<std::int64_t>(spec.trials);
  std::int64_t extreme = 0;

#pragma omp parallel reduction(+ : extreme)
  {
    std::vector<std::uint32_t> order(total_count);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < trials; ++t) {
      std::iota(order.begin(), order.end(), 0u);
      CounterRng rng(spec.seed, static_cast<std::uint64_t>(t));
      partial_shuffle(std::span<std::uint32_t>(order), subset_count, rng);
      double subset_sum = 0.0;
      for (std::size_t k = 0; k < subset_count; ++k) subset_sum += pool[order[k]];
      const double diff = subset_sum / static_cast<double>(subset_count) -
                          (total - subset_sum) / static_cast<double>(rest_count);
      const double delta = subset_is_a ? diff : -diff;
      if ((two_sided ? std::abs(delta) : delta) >= threshold) ++extreme;
    }
  }

  TestResult result;
  result.observed_delta = observed;
  result.p_value = static_cast<double>(extreme + 1) / static_cast<double>(spec.trials + 1);
  result.reject = result.p_value < spec.alpha;
  result.trials_used = spec.trials;
  result.seed = spec.seed;
  return result;
}

std::vector<double> paired_difference_set(const HpMatrix& first, const HpMatrix& second) {
  if (first.entries.size() != second.entries.size()) {
    throw InvalidArgument("paired differences need matrices over the same class pairs (" +
                          std::to_string(first.entries.size()) + " vs " +
                          std::to_string(second.entries.size()) + " entries)");
  }
  std::vector<double> diff;
  diff.reserve(first.entries.size());
  for (std::size_t k = 0; k < first.entries.size(); ++k) {
    const auto& x = first.entries[k];
    const auto& y = second.entries[k];
    if (x.first != y.first || x.second != y.second) {
      throw InvalidArgument("class pair index mismatch at entry " + std::to_string(k) + ": (" +
                            std::to_string(x.first) + ", " + std::to_string(x.second) +
                            ") vs (" + std::to_string(y.first) + ", " +
                            std::to_string(y.second) + ")");
    }
    diff.push_back(x.hp - y.hp);
  }
  return diff;
}

TestResult perm_test_train_vs_val(std::span<const double> delta_train,
                                  std::span<const double> delta_validation, TestSpec spec) {
  spec.sidedness = Sidedness::TwoSided;
  return perm_test_mean_diff(delta_train, delta_validation, spec);
}

}  // namespace hpstat
