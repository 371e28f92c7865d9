#include "sdrift/statistics.hpp"

#include <cmath>
#include <vector>

#include "sdrift/errors.hpp"

namespace sdrift {

double pairwise_sum(std::span<const double> v) noexcept {
  constexpr std::size_t kLeaf = 64;
  if (v.size() <= kLeaf) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

SampleStats sample_statistics(std::span<const double> values) {
  if (values.empty()) throw ArgumentError("sample_statistics: empty input");
  SampleStats st;
  st.n = values.size();
  st.mean = pairwise_sum(values) / static_cast<double>(st.n);
  if (st.n == 1) {
    st.degenerate = true;
    return st;
  }
  std::vector<double> sq(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double d = values[i] - st.mean;
    sq[i] = d * d;
  }
  const double var = pairwise_sum(sq) / static_cast<double>(st.n - 1);
  st.std_error = std::sqrt(var / static_cast<double>(st.n));
  return st;
}

}  // namespace sdrift
