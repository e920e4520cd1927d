#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "helpers.hpp"
#include "nonstat/compare.hpp"
#include "nonstat/json_io.hpp"

using namespace nonstat;
using Catch::Approx;

namespace {

Dataset d1() {
  return Dataset::from_columns({{"x", {1, 2, 3}}, {"y", {4, 5, 6}}});
}

}  // namespace

TEST_CASE("compare on the product fixture") {
  ComparisonReport report = compare(parse("x*y"), d1());
  CHECK(report.expression == "x * y");
  CHECK(report.n_rows == 3);

  CHECK(*report.mean.classical == 32.0 / 3.0);
  CHECK(*report.mean.chen == 10.0);
  CHECK(*report.mean.abs_gap == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(*report.mean.rel_gap ==
        Approx((2.0 / 3.0) / (32.0 / 3.0)).epsilon(1e-12));

  CHECK(*report.variance.classical == Approx(444.0 / 9.0).epsilon(1e-14));
  CHECK(*report.variance.chen == 1.0);

  CHECK(*report.median.classical == 10.0);
  CHECK(*report.median.chen == 10.0);
  CHECK(*report.median.abs_gap == 0.0);

  // No duplicate products and no duplicate column values: mode omitted
  // on both sides, with warnings instead of errors.
  CHECK_FALSE(report.mode.classical.has_value());
  CHECK_FALSE(report.mode.chen.has_value());
  CHECK(report.warnings.size() == 2);

  REQUIRE(report.product_decomposition.has_value());
  CHECK(report.product_decomposition->covariance_term ==
        Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(report.product_decomposition->identity_residual <= 1e-12);
}

TEST_CASE("compare on the identity expression has zero gaps") {
  ComparisonReport report = compare(parse("x"), d1());
  CHECK(*report.mean.abs_gap == 0.0);
  CHECK(*report.variance.abs_gap == 0.0);
  CHECK(*report.median.abs_gap == 0.0);
  CHECK_FALSE(report.product_decomposition.has_value());
}

TEST_CASE("compare through sin") {
  Dataset angles = Dataset::from_columns(
      {{"x", {0.0, std::numbers::pi / 2, std::numbers::pi}}});
  ComparisonReport report = compare(parse("sin(x)"), angles);
  CHECK(*report.mean.classical == Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(*report.mean.chen == Approx(1.0).margin(1e-15));
  CHECK(*report.mean.abs_gap == Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("compare flags a negative substitution variance") {
  Dataset d = Dataset::from_columns({{"x", {0.0, 2.0, 4.0}}});
  ComparisonReport report = compare(parse("sin(x)"), d);
  CHECK(*report.variance.chen < 0.0);
  bool flagged = false;
  for (const auto& w : report.warnings)
    flagged |= w.find("negative") != std::string::npos;
  CHECK(flagged);
}

TEST_CASE("compare survives non-finite pointwise evaluation") {
  Dataset d = Dataset::from_columns({{"x", {1, 2, 3}}, {"y", {4, 0, 6}}});
  ComparisonReport report = compare(parse("x/y"), d);
  CHECK_FALSE(report.mean.classical.has_value());
  CHECK_FALSE(report.variance.classical.has_value());
  // Substitution side still evaluates: mean(y) != 0.
  CHECK(report.mean.chen.has_value());
  CHECK(!report.warnings.empty());
}

TEST_CASE("compare rejects only unbound variables") {
  CHECK_THROWS_AS(compare(parse("x*q"), d1()), UnboundVariable);
}

TEST_CASE("the decomposition is restricted to two-variable products") {
  CHECK(as_two_variable_product(parse("x*y")).has_value());
  CHECK(as_two_variable_product(parse("y*x")).has_value());
  CHECK_FALSE(as_two_variable_product(parse("x*x")).has_value());
  CHECK_FALSE(as_two_variable_product(parse("x*y + 0")).has_value());
  CHECK(as_two_variable_product(parse("x*(y)")).has_value());
  CHECK_FALSE(as_two_variable_product(parse("2*y")).has_value());
  CHECK_FALSE(compare(parse("x*x"), d1()).product_decomposition.has_value());
}

TEST_CASE("product gap identity on fixtures") {
  GapIdentity g = product_gap_identity(d1(), "x", "y");
  CHECK(g.lhs == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(g.rhs == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(g.residual <= 1e-12);

  // Zero sample covariance: the gap vanishes.
  Dataset uncorr =
      Dataset::from_columns({{"a", {1, 2, 3}}, {"b", {1, -2, 1}}});
  GapIdentity zero = product_gap_identity(uncorr, "a", "b");
  CHECK(zero.rhs == 0.0);
  CHECK(std::abs(zero.lhs) <= 1e-12);

  // A constant factor kills every deviation term.
  Dataset constant =
      Dataset::from_columns({{"a", {4, 4, 4}}, {"b", {1, 2, 3}}});
  GapIdentity flat = product_gap_identity(constant, "a", "b");
  CHECK(flat.rhs == 0.0);
  CHECK(flat.lhs == 0.0);

  // Single row: both sides are trivially zero.
  Dataset single = Dataset::from_columns({{"a", {7.0}}, {"b", {9.0}}});
  GapIdentity one = product_gap_identity(single, "a", "b");
  CHECK(one.lhs == 0.0);
  CHECK(one.rhs == 0.0);

  CHECK_THROWS_AS(product_gap_identity(d1(), "x", "zz"), UnknownColumn);
}

TEST_CASE("product gap identity holds on randomized data") {
  Xoshiro256PlusPlus rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 2 + testutil::index_below(rng, 2000);
    Dataset d = Dataset::from_columns(
        {{"a", testutil::random_column(rng, n, -1e6, 1e6)},
         {"b", testutil::random_column(rng, n, -1e6, 1e6)}});
    GapIdentity g = product_gap_identity(d, "a", "b");
    CHECK(g.residual <= 1e-10 * std::max(1.0, std::abs(g.lhs)));
  }
}

TEST_CASE("Jensen direction for exp") {
  Xoshiro256PlusPlus rng(99);
  Expr e = parse("exp(x)");
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 3 + testutil::index_below(rng, 100);
    auto values = testutil::random_column(rng, n, -3, 3);
    values.push_back(-1.0);  // guarantee spread
    values.push_back(1.0);
    Dataset d = Dataset::from_columns({{"x", values}});
    CHECK(composite_mean(e, d) > chen_mean(e, d));
  }
  Dataset flat = Dataset::from_columns({{"x", {0.5, 0.5, 0.5, 0.5}}});
  CHECK(composite_mean(e, flat) == chen_mean(e, flat));
}

TEST_CASE("monte carlo runs are deterministic given the spec") {
  MCSpec spec;
  spec.seed = 42;
  spec.n_samples = 1000;
  spec.n_replications = 3;
  spec.expression = "x*y";
  spec.distributions = {{"x", {Distribution::Kind::Uniform, 0, 1}},
                        {"y", {Distribution::Kind::Uniform, 0, 1}}};

  MCReport first = monte_carlo_compare(spec);
  MCReport second = monte_carlo_compare(spec);
  CHECK(to_json(first).dump() == to_json(second).dump());

  // Extending the replication count must not disturb earlier replications.
  spec.n_replications = 4;
  MCReport extended = monte_carlo_compare(spec);
  for (std::size_t r = 0; r < 3; ++r) {
    CHECK(extended.replications[r].classical_mean ==
          first.replications[r].classical_mean);
    CHECK(extended.replications[r].chen_mean == first.replications[r].chen_mean);
  }
  CHECK(extended.gap_stddev.has_value());
}

TEST_CASE("monte carlo gap concentrates near zero for independent inputs") {
  MCSpec spec;
  spec.seed = 42;
  spec.n_samples = 100000;
  spec.n_replications = 1;
  spec.expression = "x*y";
  spec.distributions = {{"x", {Distribution::Kind::Uniform, 0, 1}},
                        {"y", {Distribution::Kind::Uniform, 0, 1}}};
  MCReport report = monte_carlo_compare(spec);
  CHECK(std::abs(report.mean_gap) <= 0.01);
  CHECK_FALSE(report.gap_stddev.has_value());
}

TEST_CASE("monte carlo gap matches the variance for a dependent square") {
  // x*x is the fully dependent product: the gap is ((N-1)/N) * Var(x),
  // which for uniform(0,1) concentrates near 1/12.
  MCSpec spec;
  spec.seed = 42;
  spec.n_samples = 100000;
  spec.n_replications = 1;
  spec.expression = "x*x";
  spec.distributions = {{"x", {Distribution::Kind::Uniform, 0, 1}}};
  MCReport report = monte_carlo_compare(spec);
  CHECK(report.mean_gap == Approx(1.0 / 12.0).epsilon(0.10));
}

TEST_CASE("invalid specs are rejected with the offending field") {
  MCSpec good;
  good.seed = 1;
  good.n_samples = 100;
  good.n_replications = 2;
  good.expression = "x*y";
  good.distributions = {{"x", {Distribution::Kind::Uniform, 0, 1}},
                        {"y", {Distribution::Kind::Normal, 0, 1}}};
  CHECK_NOTHROW(validate(good));

  auto field_of = [](MCSpec bad) {
    try {
      validate(bad);
    } catch (const InvalidSpec& err) {
      return err.field;
    }
    return std::string("(none)");
  };

  MCSpec bad = good;
  bad.n_replications = 0;
  CHECK(field_of(bad) == "r");

  bad = good;
  bad.n_samples = 1;
  CHECK(field_of(bad) == "n");

  bad = good;
  bad.distributions.pop_back();
  CHECK(field_of(bad) == "dist.y");

  bad = good;
  bad.distributions[0].second = {Distribution::Kind::Uniform, 1, 1};
  CHECK(field_of(bad) == "dist.x");

  bad = good;
  bad.distributions[1].second = {Distribution::Kind::Normal, 0, 0};
  CHECK(field_of(bad) == "dist.y");

  bad = good;
  bad.expression = "x*";
  CHECK(field_of(bad) == "expr");
}

TEST_CASE("spec files parse in both formats") {
  MCSpec from_lines = parse_mc_spec(
      "# comment\n"
      "seed = 42\n"
      "n = 1000\n"
      "r = 2\n"
      "expr = x*y\n"
      "dist.x = uniform(0, 1)\n"
      "dist.y = normal(0, 2.5)\n");
  CHECK(from_lines.seed == 42);
  CHECK(from_lines.n_samples == 1000);
  CHECK(from_lines.n_replications == 2);
  CHECK(from_lines.expression == "x*y");
  REQUIRE(from_lines.find_distribution("y") != nullptr);
  CHECK(from_lines.find_distribution("y")->kind == Distribution::Kind::Normal);
  CHECK(from_lines.find_distribution("y")->param2 == 2.5);

  MCSpec from_json = parse_mc_spec(
      R"json({"seed": 42, "n": 1000, "r": 2, "expr": "x*y",
              "dist.x": "uniform(0,1)", "dist.y": "normal(0,2.5)"})json");
  CHECK(to_json(from_json).dump() == to_json(from_lines).dump());

  // Later fields overwrite the base spec; absent fields keep it.
  MCSpec base;
  base.seed = 7;
  base.n_samples = 50;
  MCSpec layered = parse_mc_spec("n = 99\n", base);
  CHECK(layered.seed == 7);
  CHECK(layered.n_samples == 99);

  CHECK_THROWS_AS(parse_mc_spec("bogus = 1\n"), InvalidSpec);
  CHECK_THROWS_AS(parse_mc_spec("dist.x = exponential(1)\n"), InvalidSpec);
  CHECK_THROWS_AS(parse_mc_spec("dist.x = uniform(1)\n"), InvalidSpec);
  CHECK_THROWS_AS(parse_mc_spec(R"({"seed": -3})"), InvalidSpec);
  CHECK_THROWS_AS(parse_mc_spec("seed 42\n"), InvalidSpec);
}
