// Substitution statistics: replace every variable occurrence with the
// chosen marginal statistic of its column, leave constants untouched,
// and evaluate the expression once. The result depends on the data only
// through per-column marginals, so it is blind to cross-column
// dependence; the gap against the classical composite statistic is what
// module compare measures.
//
// Consequences of the substitution rule, deliberate and tested:
//   chen_variance(3*x)  = 3*Var(x), not 9*Var(x);
//   chen_mean(x*x)      = mean(x)^2, not the mean of x^2;
//   chen_variance may be negative (e.g. sin of a variance in (pi, 2*pi))
//   and is reported as-is, never clamped.

#pragma once

#include <cmath>
#include <map>
#include <string>
#include <string_view>

#include "nonstat/dataset.hpp"
#include "nonstat/expr.hpp"
#include "nonstat/stats.hpp"

namespace nonstat {

enum class StatKind { Mean, Variance, Median, Mode };

inline std::string_view to_string(StatKind kind) {
  switch (kind) {
    case StatKind::Mean:
      return "mean";
    case StatKind::Variance:
      return "variance";
    case StatKind::Median:
      return "median";
    case StatKind::Mode:
      return "mode";
  }
  return "";  // unreachable
}

inline double chen_statistic(const Expr& e, const Dataset& d, StatKind kind) {
  if (kind == StatKind::Variance && d.n_rows() < 2)
    throw InsufficientSamples("variance", 2, d.n_rows());

  Bindings bindings;
  for (const auto& name : variables(e)) {
    if (!d.has_column(name)) throw UnboundVariable(name);
    MarginalStats stats = column_stats(d, name);
    double value = 0;
    switch (kind) {
      case StatKind::Mean:
        value = stats.mean;
        break;
      case StatKind::Variance:
        value = *stats.variance;
        break;
      case StatKind::Median:
        value = stats.median;
        break;
      case StatKind::Mode:
        if (!stats.mode) throw UndefinedMode(name);
        value = *stats.mode;
        break;
    }
    bindings.emplace(name, value);
  }

  double result = evaluate(e, bindings);
  if (!std::isfinite(result)) throw NonFiniteResult();
  return result;
}

inline double chen_mean(const Expr& e, const Dataset& d) {
  return chen_statistic(e, d, StatKind::Mean);
}

inline double chen_variance(const Expr& e, const Dataset& d) {
  return chen_statistic(e, d, StatKind::Variance);
}

inline double chen_median(const Expr& e, const Dataset& d) {
  return chen_statistic(e, d, StatKind::Median);
}

inline double chen_mode(const Expr& e, const Dataset& d) {
  return chen_statistic(e, d, StatKind::Mode);
}

}  // namespace nonstat
