// Measures how the classical composite statistics and the substitution
// statistics diverge on the same data: per-kind gaps, the exact
// product-gap identity
//
//   mean(a*b) - mean(a)*mean(b) = ((N-1)/N) * cov(a, b),
//
// and a seeded Monte Carlo harness that probes the gap for sampled
// variables. The harness measures; it does not adjudicate which
// definition is preferable.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nonstat/classical.hpp"
#include "nonstat/dataset.hpp"
#include "nonstat/expr.hpp"
#include "nonstat/parse.hpp"
#include "nonstat/rng.hpp"
#include "nonstat/substitution.hpp"

namespace nonstat {

struct StatComparison {
  std::optional<double> classical;
  std::optional<double> chen;
  std::optional<double> abs_gap;  // |classical - chen|, when both present
  std::optional<double> rel_gap;  // abs_gap / max(1, |classical|)
};

struct ProductDecomposition {
  double covariance_term;    // ((N-1)/N) * cov(a, b)
  double identity_residual;  // |(classical mean - chen mean) - covariance_term|
};

struct ComparisonReport {
  std::string expression;  // pretty-printed
  std::size_t n_rows = 0;
  StatComparison mean;
  StatComparison variance;
  StatComparison median;
  StatComparison mode;
  // Present only when the expression is syntactically a product of two
  // distinct variables.
  std::optional<ProductDecomposition> product_decomposition;
  std::vector<std::string> warnings;

  StatComparison& stat(StatKind kind) {
    switch (kind) {
      case StatKind::Mean:
        return mean;
      case StatKind::Variance:
        return variance;
      case StatKind::Median:
        return median;
      case StatKind::Mode:
        return mode;
    }
    return mean;  // unreachable
  }
  const StatComparison& stat(StatKind kind) const {
    return const_cast<ComparisonReport*>(this)->stat(kind);
  }
};

// Matches the AST shape Binary(mul, Variable a, Variable b) with a != b.
inline std::optional<std::pair<std::string, std::string>>
as_two_variable_product(const Expr& e) {
  const auto* bin = std::get_if<ExprNode::Binary>(&e.node().v);
  if (!bin || bin->op != BinaryOp::Mul) return std::nullopt;
  const auto* lhs = std::get_if<ExprNode::Variable>(&bin->lhs.node().v);
  const auto* rhs = std::get_if<ExprNode::Variable>(&bin->rhs.node().v);
  if (!lhs || !rhs || lhs->name == rhs->name) return std::nullopt;
  return std::make_pair(lhs->name, rhs->name);
}

struct GapIdentity {
  double lhs;       // composite_mean(a*b) - chen_mean(a*b)
  double rhs;       // ((N-1)/N) * covariance(a, b)
  double residual;  // |lhs - rhs|
};

inline GapIdentity product_gap_identity(const Dataset& d, std::string_view a,
                                        std::string_view b) {
  (void)d.column(a);  // UnknownColumn for a missing name
  (void)d.column(b);
  Expr product = binary(BinaryOp::Mul, variable(std::string(a)),
                        variable(std::string(b)));
  double n = static_cast<double>(d.n_rows());
  GapIdentity g;
  g.lhs = composite_mean(product, d) - chen_mean(product, d);
  // At N = 1 both sides vanish and the covariance factor is moot.
  g.rhs = d.n_rows() < 2 ? 0.0 : (n - 1.0) / n * covariance(d, a, b);
  g.residual = std::abs(g.lhs - g.rhs);
  return g;
}

// Fills every statistic kind computable on the data; a kind whose input
// is undefined (mode absent, n < 2, non-finite evaluation) is omitted
// with a warning rather than an error. Only an expression variable with
// no matching column is an error.
inline ComparisonReport compare(const Expr& e, const Dataset& d) {
  for (const auto& name : variables(e))
    if (!d.has_column(name)) throw UnboundVariable(name);

  ComparisonReport report;
  report.expression = pretty_print(e);
  report.n_rows = d.n_rows();

  bool have_samples = false;
  std::vector<double> samples;
  try {
    samples = composite_samples(e, d);
    have_samples = true;
  } catch (const NonFiniteResult& err) {
    report.warnings.emplace_back(
        std::string("classical statistics unavailable: ") + err.what());
  }

  if (have_samples) {
    report.mean.classical = batch_mean(samples);
    if (samples.size() >= 2)
      report.variance.classical =
          batch_variance(samples, *report.mean.classical);
    std::vector<double> sorted = detail::sorted_copy(samples);
    report.median.classical = median_of_sorted(sorted);
    if (auto m = mode_of_sorted(sorted))
      report.mode.classical = *m;
    else
      report.warnings.emplace_back(
          "classical mode undefined: no value repeats in the composed sample");
  }
  if (d.n_rows() < 2)
    report.warnings.emplace_back("variance undefined: requires at least 2 samples");

  for (StatKind kind : {StatKind::Mean, StatKind::Variance, StatKind::Median,
                        StatKind::Mode}) {
    try {
      double value = chen_statistic(e, d, kind);
      switch (kind) {
        case StatKind::Mean:
          report.mean.chen = value;
          break;
        case StatKind::Variance:
          report.variance.chen = value;
          if (value < 0)
            report.warnings.emplace_back(
                "chen variance is negative; reported as-is");
          break;
        case StatKind::Median:
          report.median.chen = value;
          break;
        case StatKind::Mode:
          report.mode.chen = value;
          break;
      }
    } catch (const InsufficientSamples&) {
      // n < 2; already warned above
    } catch (const UndefinedMode& err) {
      report.warnings.emplace_back(std::string("chen mode undefined: ") +
                                   err.what());
    } catch (const NonFiniteResult&) {
      report.warnings.emplace_back(std::string("chen ") +
                                   std::string(to_string(kind)) +
                                   " is non-finite; omitted");
    }
  }

  for (StatKind kind : {StatKind::Mean, StatKind::Variance, StatKind::Median,
                        StatKind::Mode}) {
    StatComparison& s = report.stat(kind);
    if (s.classical && s.chen) {
      s.abs_gap = std::abs(*s.classical - *s.chen);
      s.rel_gap = *s.abs_gap / std::max(1.0, std::abs(*s.classical));
    }
  }

  if (auto vars = as_two_variable_product(e);
      vars && report.mean.classical && report.mean.chen) {
    double n = static_cast<double>(d.n_rows());
    ProductDecomposition pd;
    pd.covariance_term =
        d.n_rows() < 2 ? 0.0
                       : (n - 1.0) / n * covariance(d, vars->first, vars->second);
    pd.identity_residual = std::abs(
        (*report.mean.classical - *report.mean.chen) - pd.covariance_term);
    report.product_decomposition = pd;
  }

  return report;
}

// --- Monte Carlo harness ---

struct Distribution {
  enum class Kind { Uniform, Normal };
  Kind kind = Kind::Uniform;
  double param1 = 0;  // uniform: lower bound; normal: mu
  double param2 = 1;  // uniform: upper bound; normal: sigma
};

struct MCSpec {
  std::uint64_t seed = 0;
  std::size_t n_samples = 0;
  std::size_t n_replications = 0;
  std::string expression;
  std::vector<std::pair<std::string, Distribution>> distributions;

  const Distribution* find_distribution(std::string_view name) const {
    for (const auto& [var, dist] : distributions)
      if (var == name) return &dist;
    return nullptr;
  }
};

struct MCReplication {
  std::size_t index;
  double classical_mean;
  double chen_mean;
  double gap;  // classical_mean - chen_mean
};

struct MCReport {
  MCSpec spec;
  std::vector<MCReplication> replications;
  double mean_gap = 0;
  std::optional<double> gap_stddev;  // absent for a single replication
  double min_gap = 0;
  double max_gap = 0;
};

inline void validate(const MCSpec& spec) {
  if (spec.n_samples < 2)
    throw InvalidSpec("n", "needs at least 2 samples per replication, got " +
                               std::to_string(spec.n_samples));
  if (spec.n_replications < 1)
    throw InvalidSpec("r", "needs at least 1 replication, got " +
                               std::to_string(spec.n_replications));
  if (spec.expression.empty()) throw InvalidSpec("expr", "missing expression");

  std::vector<std::string> vars;
  try {
    vars = variables(parse(spec.expression));
  } catch (const Error& err) {
    throw InvalidSpec("expr", err.what());
  }
  for (const auto& name : vars) {
    const Distribution* dist = spec.find_distribution(name);
    if (!dist)
      throw InvalidSpec("dist." + name, "no distribution for variable '" +
                                            name + "'");
    if (dist->kind == Distribution::Kind::Uniform && !(dist->param2 > dist->param1))
      throw InvalidSpec("dist." + name, "uniform(a,b) requires b > a");
    if (dist->kind == Distribution::Kind::Normal && !(dist->param2 > 0))
      throw InvalidSpec("dist." + name, "normal(mu,sigma) requires sigma > 0");
  }
}

namespace detail {

inline std::vector<double> sample_column(const Distribution& dist,
                                         std::size_t n,
                                         Xoshiro256PlusPlus& rng) {
  std::vector<double> out;
  out.reserve(n);
  if (dist.kind == Distribution::Kind::Uniform) {
    double lo = dist.param1, hi = dist.param2;
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(lo + (hi - lo) * rng.next_unit());
  } else {
    NormalSampler normal;  // fresh spare per column keeps streams aligned
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(dist.param1 + dist.param2 * normal.next(rng));
  }
  return out;
}

}  // namespace detail

// Deterministic given the spec: replication r draws from a generator
// seeded with child_seed(seed, r), and columns are generated in
// lexicographic variable order, so results are independent of execution
// order and of distributions declared for unused variables.
inline MCReport monte_carlo_compare(const MCSpec& spec) {
  validate(spec);
  Expr e = parse(spec.expression);
  std::vector<std::string> vars = variables(e);
  std::sort(vars.begin(), vars.end());

  MCReport report;
  report.spec = spec;
  report.replications.reserve(spec.n_replications);

  for (std::size_t r = 0; r < spec.n_replications; ++r) {
    Xoshiro256PlusPlus rng(child_seed(spec.seed, r));
    std::vector<std::pair<std::string, std::vector<double>>> columns;
    columns.reserve(vars.size());
    for (const auto& name : vars)
      columns.emplace_back(name, detail::sample_column(
                                     *spec.find_distribution(name),
                                     spec.n_samples, rng));
    Dataset d = Dataset::from_columns(std::move(columns));

    MCReplication rep;
    rep.index = r;
    rep.classical_mean = composite_mean(e, d);
    rep.chen_mean = chen_mean(e, d);
    rep.gap = rep.classical_mean - rep.chen_mean;
    report.replications.push_back(rep);
  }

  std::vector<double> gaps;
  gaps.reserve(report.replications.size());
  for (const auto& rep : report.replications) gaps.push_back(rep.gap);
  report.mean_gap = batch_mean(gaps);
  if (gaps.size() >= 2)
    report.gap_stddev = std::sqrt(batch_variance(gaps, report.mean_gap));
  report.min_gap = *std::min_element(gaps.begin(), gaps.end());
  report.max_gap = *std::max_element(gaps.begin(), gaps.end());
  return report;
}

// --- MCSpec config parsing ---

namespace detail {

inline std::string_view trim_ws(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

inline double parse_real_field(std::string_view field, std::string_view text) {
  double value = 0;
  auto t = trim_ws(text);
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw InvalidSpec(std::string(field), "expected a number, got \"" +
                                              std::string(text) + "\"");
  return value;
}

// "uniform(a,b)" or "normal(mu,sigma)"
inline Distribution parse_distribution(std::string_view field,
                                       std::string_view text) {
  auto t = trim_ws(text);
  auto open = t.find('(');
  auto close = t.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos ||
      close != t.size() - 1 || close < open)
    throw InvalidSpec(std::string(field),
                      "expected uniform(a,b) or normal(mu,sigma), got \"" +
                          std::string(text) + "\"");
  auto name = trim_ws(t.substr(0, open));
  auto args = t.substr(open + 1, close - open - 1);
  auto comma = args.find(',');
  if (comma == std::string_view::npos)
    throw InvalidSpec(std::string(field), "expected two parameters");

  Distribution dist;
  if (name == "uniform")
    dist.kind = Distribution::Kind::Uniform;
  else if (name == "normal")
    dist.kind = Distribution::Kind::Normal;
  else
    throw InvalidSpec(std::string(field), "unknown distribution \"" +
                                              std::string(name) + "\"");
  dist.param1 = parse_real_field(field, args.substr(0, comma));
  dist.param2 = parse_real_field(field, args.substr(comma + 1));
  return dist;
}

inline std::uint64_t parse_seed_field(std::string_view text) {
  std::uint64_t value = 0;
  auto t = trim_ws(text);
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw InvalidSpec("seed", "expected a nonnegative integer, got \"" +
                                  std::string(text) + "\"");
  return value;
}

inline std::size_t parse_count_field(std::string_view field,
                                     std::string_view text) {
  std::size_t value = 0;
  auto t = trim_ws(text);
  auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size())
    throw InvalidSpec(std::string(field), "expected a nonnegative integer, got \"" +
                                              std::string(text) + "\"");
  return value;
}

}  // namespace detail

// Accepts the config keys seed, n, r, expr, and dist.<variable>.
inline void set_spec_field(MCSpec& spec, std::string_view key,
                           std::string_view value) {
  using detail::parse_count_field;
  using detail::parse_distribution;
  using detail::parse_seed_field;
  using detail::trim_ws;
  if (key == "seed") {
    spec.seed = parse_seed_field(value);
  } else if (key == "n") {
    spec.n_samples = parse_count_field(key, value);
  } else if (key == "r") {
    spec.n_replications = parse_count_field(key, value);
  } else if (key == "expr") {
    spec.expression = std::string(trim_ws(value));
  } else if (key.starts_with("dist.")) {
    std::string var(key.substr(5));
    if (!is_identifier(var))
      throw InvalidSpec(std::string(key), "not a valid variable name");
    for (auto& [existing, dist] : spec.distributions)
      if (existing == var) {
        dist = parse_distribution(key, value);
        return;
      }
    spec.distributions.emplace_back(var, parse_distribution(key, value));
  } else {
    throw InvalidSpec(std::string(key), "unrecognized key");
  }
}

// Accepts either `key = value` lines ('#' comments allowed) or a flat
// JSON object; keys are seed, n, r, expr, dist.<variable>. Parsed fields
// overwrite those of `base`, which lets a caller layer file contents on
// top of environment defaults.
inline MCSpec parse_mc_spec(std::string_view text, MCSpec base = {}) {
  MCSpec spec = std::move(base);
  auto body = detail::trim_ws(text);
  if (!body.empty() && body.front() == '{') {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(body);
    } catch (const nlohmann::json::parse_error& err) {
      throw InvalidSpec("json", err.what());
    }
    if (!doc.is_object()) throw InvalidSpec("json", "expected a flat object");
    for (const auto& [key, value] : doc.items()) {
      if (key == "seed") {
        if (value.is_number_unsigned())
          spec.seed = value.get<std::uint64_t>();
        else
          throw InvalidSpec("seed", "expected a nonnegative integer");
      } else if (key == "n" || key == "r") {
        if (!value.is_number_unsigned())
          throw InvalidSpec(key, "expected a nonnegative integer");
        (key == "n" ? spec.n_samples : spec.n_replications) =
            value.get<std::size_t>();
      } else if (key == "expr") {
        if (!value.is_string()) throw InvalidSpec("expr", "expected a string");
        spec.expression = value.get<std::string>();
      } else if (key.starts_with("dist.")) {
        if (!value.is_string())
          throw InvalidSpec(key, "expected a distribution string");
        set_spec_field(spec, key, value.get<std::string>());
      } else {
        throw InvalidSpec(key, "unrecognized key");
      }
    }
    return spec;
  }

  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t end = body.find('\n', start);
    std::string_view line = body.substr(
        start, end == std::string_view::npos ? body.size() - start : end - start);
    start = end == std::string_view::npos ? body.size() + 1 : end + 1;

    line = detail::trim_ws(line);
    if (line.empty() || line.front() == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidSpec(std::string(line), "expected key = value");
    auto key = detail::trim_ws(line.substr(0, eq));
    auto value = detail::trim_ws(line.substr(eq + 1));
    set_spec_field(spec, key, value);
  }
  return spec;
}

}  // namespace nonstat
