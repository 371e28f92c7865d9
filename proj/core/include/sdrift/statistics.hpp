#pragma once

#include <cstddef>
#include <span>

namespace sdrift {

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
  // Set when n == 1: the standard error is undefined and reported as 0.
  bool degenerate = false;
};

/// Mean and standard error of the mean (unbiased variance). Uses pairwise
/// summation so the result depends only on the order of `values`.
SampleStats sample_statistics(std::span<const double> values);

double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace sdrift
