// JSON views of the report types. nlohmann::json keeps object keys in
// sorted order and prints doubles in shortest round-trip form, so equal
// reports serialize to identical bytes.

#pragma once

#include <json.hpp>

#include "nonstat/compare.hpp"
#include "nonstat/expr.hpp"

namespace nonstat {

inline nlohmann::json to_json(const StatComparison& s) {
  nlohmann::json j;
  j["classical"] = s.classical ? nlohmann::json(*s.classical) : nullptr;
  j["chen"] = s.chen ? nlohmann::json(*s.chen) : nullptr;
  j["abs_gap"] = s.abs_gap ? nlohmann::json(*s.abs_gap) : nullptr;
  j["rel_gap"] = s.rel_gap ? nlohmann::json(*s.rel_gap) : nullptr;
  return j;
}

inline nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json j;
  j["expression"] = report.expression;
  j["n_rows"] = report.n_rows;
  j["statistics"]["mean"] = to_json(report.mean);
  j["statistics"]["variance"] = to_json(report.variance);
  j["statistics"]["median"] = to_json(report.median);
  j["statistics"]["mode"] = to_json(report.mode);
  if (report.product_decomposition) {
    j["product_decomposition"] = {
        {"covariance_term", report.product_decomposition->covariance_term},
        {"identity_residual", report.product_decomposition->identity_residual}};
  } else {
    j["product_decomposition"] = nullptr;
  }
  j["warnings"] = report.warnings;
  return j;
}

inline std::string to_string(const Distribution& dist) {
  std::string name =
      dist.kind == Distribution::Kind::Uniform ? "uniform" : "normal";
  return name + "(" + detail::format_double(dist.param1) + "," +
         detail::format_double(dist.param2) + ")";
}

inline nlohmann::json to_json(const MCSpec& spec) {
  nlohmann::json dists = nlohmann::json::object();
  for (const auto& [var, dist] : spec.distributions)
    dists[var] = to_string(dist);
  return {{"seed", spec.seed},
          {"n", spec.n_samples},
          {"r", spec.n_replications},
          {"expr", spec.expression},
          {"distributions", dists}};
}

inline nlohmann::json to_json(const MCReport& report) {
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& rep : report.replications)
    reps.push_back({{"index", rep.index},
                    {"classical_mean", rep.classical_mean},
                    {"chen_mean", rep.chen_mean},
                    {"gap", rep.gap}});
  nlohmann::json aggregate = {
      {"mean_gap", report.mean_gap},
      {"gap_stddev",
       report.gap_stddev ? nlohmann::json(*report.gap_stddev) : nullptr},
      {"min_gap", report.min_gap},
      {"max_gap", report.max_gap}};
  return {{"spec", to_json(report.spec)},
          {"replications", reps},
          {"aggregate", aggregate}};
}

}  // namespace nonstat
