// Classical statistics of composed samples: evaluate an expression
// pointwise over aligned rows, then summarize the resulting sample.
// Also a one-pass mergeable accumulator for mean and variance.

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonstat/dataset.hpp"
#include "nonstat/expr.hpp"
#include "nonstat/stats.hpp"

namespace nonstat {

// Element j is the expression evaluated on row j. A NaN or infinity at
// any row aborts with NonFiniteResult(row) instead of poisoning the
// downstream sums.
inline std::vector<double> composite_samples(const Expr& e, const Dataset& d) {
  std::vector<std::pair<std::string, std::span<const double>>> cols;
  for (const auto& name : variables(e)) {
    if (!d.has_column(name)) throw UnboundVariable(name);
    cols.emplace_back(name, d.column(name));
  }

  std::size_t n = d.n_rows();
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t row = 0; row < n; ++row) {
    double v = evaluate_with(e, [&](std::string_view name) {
      for (const auto& [col_name, col] : cols)
        if (col_name == name) return col[row];
      throw UnboundVariable(std::string(name));  // unreachable
    });
    if (!std::isfinite(v)) throw NonFiniteResult(row);
    out.push_back(v);
  }
  return out;
}

// Row-order mean of the composed sample.
inline double composite_mean(const Expr& e, const Dataset& d) {
  return batch_mean(composite_samples(e, d));
}

// Row-order sample variance (denominator n-1) of the composed sample.
inline double composite_variance(const Expr& e, const Dataset& d) {
  if (d.n_rows() < 2)
    throw InsufficientSamples("variance", 2, d.n_rows());
  std::vector<double> samples = composite_samples(e, d);
  return batch_variance(samples, batch_mean(samples));
}

// Sample covariance with denominator n-1.
inline double covariance(const Dataset& d, std::string_view a,
                         std::string_view b) {
  auto xs = d.column(a);
  auto ys = d.column(b);
  std::size_t n = xs.size();
  if (n < 2) throw InsufficientSamples("covariance", 2, n);
  double mx = batch_mean(xs);
  double my = batch_mean(ys);
  double sum = 0;
  for (std::size_t j = 0; j < n; ++j) sum += (xs[j] - mx) * (ys[j] - my);
  return sum / static_cast<double>(n - 1);
}

// One-pass mean/variance state (Welford's update, Chan et al. merge).
// Naive sum-of-squares accumulation cancels catastrophically when the
// data sits on a large offset, and even a plain Welford mean quantizes to
// ulp(offset); anchoring on the first value and accumulating residuals
// keeps the result within 1e-10 relative of the two-pass formulas for
// data offset by 1e9. Accumulators are independent values, so a workload
// can be partitioned, accumulated in parallel, and merged in any tree
// order.
class StreamingAccumulator {
 public:
  struct Summary {
    std::size_t n = 0;
    std::optional<double> mean;      // absent when n == 0
    std::optional<double> variance;  // absent when n < 2
  };

  // `value` must be finite.
  void update(double value) {
    if (count_ == 0) shift_ = value;
    ++count_;
    double x = value - shift_;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
  }

  void merge(const StreamingAccumulator& other) {
    if (other.count_ == 0) return;
    if (count_ == 0) {
      *this = other;
      return;
    }
    // Re-express the other running mean relative to this anchor.
    double other_mean = (other.shift_ - shift_) + other.mean_;
    std::size_t n = count_ + other.count_;
    double delta = other_mean - mean_;
    mean_ += delta * static_cast<double>(other.count_) / static_cast<double>(n);
    m2_ += other.m2_ + delta * delta *
                           (static_cast<double>(count_) *
                            static_cast<double>(other.count_) /
                            static_cast<double>(n));
    count_ = n;
  }

  static StreamingAccumulator merged(StreamingAccumulator a,
                                     const StreamingAccumulator& b) {
    a.merge(b);
    return a;
  }

  Summary finalize() const {
    Summary s;
    s.n = count_;
    if (count_ >= 1) s.mean = shift_ + mean_;
    if (count_ >= 2) s.variance = m2_ / static_cast<double>(count_ - 1);
    return s;
  }

  std::size_t count() const { return count_; }

 private:
  std::size_t count_ = 0;
  double shift_ = 0;  // anchor: the first value seen
  double mean_ = 0;   // running mean of (value - shift_)
  double m2_ = 0;     // sum of squared deviations from the running mean
};

}  // namespace nonstat
