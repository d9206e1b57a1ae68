#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hpstat/hp_matrix.hpp"

namespace hpstat {

enum class Sidedness { TwoSided, OneSidedGreater };

std::string_view to_string(Sidedness sidedness);
/// "two" or "greater".
Sidedness parse_sidedness(std::string_view text);

/// Monte-Carlo permutation test settings.
struct TestSpec {
  Sidedness sidedness = Sidedness::TwoSided;
  std::uint64_t trials = 50000;
  double alpha = 0.025;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TestResult {
  /// mean(a) - mean(b).
  double observed_delta = 0.0;
  /// (1 + #extreme) / (trials + 1).
  double p_value = 1.0;
  bool reject = false;
  std::uint64_t trials_used = 0;
  std::uint64_t seed = 0;
};

/// Two-sample permutation test on the difference of means.
///
/// The pooled values are put in sorted order, and trial t draws the smaller
/// group from stream (seed, t) by partial Fisher-Yates. The result therefore
/// depends only on the two multisets and the spec: thread count and the order
/// of values within a sample are irrelevant, and swapping a and b only flips
/// the sign of the observed delta.
TestResult perm_test_mean_diff(std::span<const double> a, std::span<const double> b,
                               const TestSpec& spec);

/// Elementwise first - second over matching class pairs.
std::vector<double> paired_difference_set(const HpMatrix& first, const HpMatrix& second);

/// Two-sided comparison of a training-split and a validation-split
/// difference set. `spec.sidedness` is ignored.
TestResult perm_test_train_vs_val(std::span<const double> delta_train,
                                  std::span<const double> delta_validation, TestSpec spec);

}  // namespace hpstat
