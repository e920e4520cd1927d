// Per-column summary statistics. Marginal summaries canonicalize the
// sample order by sorting before any accumulation, so every field is
// bitwise invariant under permutation of the input.

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace nonstat {

struct MarginalStats {
  std::size_t n = 0;
  double mean = 0;
  std::optional<double> variance;  // absent when n < 2
  double median = 0;
  std::optional<double> mode;  // absent when no value repeats
  double min = 0;
  double max = 0;
};

// Plain left-to-right mean; the order of `values` is significant in the
// last ulp.
inline double batch_mean(std::span<const double> values) {
  double sum = 0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

// Corrected two-pass sample variance with denominator n-1, summed left to
// right. The (sum of deviations)^2/n term is zero in exact arithmetic and
// cancels the bias a rounded mean leaks into the squared sum; without it,
// data offset by 1e9 loses the 1e-10 agreement with the streaming path.
inline double batch_variance(std::span<const double> values, double mean) {
  double sum_sq = 0;
  double sum = 0;
  for (double v : values) {
    double d = mean - v;
    sum_sq += d * d;
    sum += d;
  }
  double n = static_cast<double>(values.size());
  return (sum_sq - sum * sum / n) / (n - 1.0);
}

namespace detail {

// Sort ascending; ties ordered by bit pattern so runs of bitwise-equal
// values (e.g. -0.0 vs 0.0) stay contiguous and deterministic.
inline std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> s(values.begin(), values.end());
  std::sort(s.begin(), s.end(), [](double a, double b) {
    if (a != b) return a < b;
    return std::bit_cast<std::uint64_t>(a) < std::bit_cast<std::uint64_t>(b);
  });
  return s;
}

}  // namespace detail

inline double median_of_sorted(std::span<const double> sorted) {
  std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

// Most frequent value, counting exact bitwise-equal duplicates only;
// the smallest value wins a tie, and a sample with no repeats has no mode.
inline std::optional<double> mode_of_sorted(std::span<const double> sorted) {
  std::optional<double> best;
  std::size_t best_count = 1;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(sorted[i]);
    std::size_t j = i + 1;
    while (j < sorted.size() &&
           std::bit_cast<std::uint64_t>(sorted[j]) == bits)
      ++j;
    if (j - i > best_count) {
      best_count = j - i;
      best = sorted[i];
    }
    i = j;
  }
  return best;
}

// Requires at least one finite sample.
inline MarginalStats summarize(std::span<const double> values) {
  std::vector<double> sorted = detail::sorted_copy(values);
  MarginalStats s;
  s.n = sorted.size();
  s.mean = batch_mean(sorted);
  if (s.n >= 2) s.variance = batch_variance(sorted, s.mean);
  s.median = median_of_sorted(sorted);
  s.mode = mode_of_sorted(sorted);
  s.min = sorted.front();
  s.max = sorted.back();
  return s;
}

}  // namespace nonstat
