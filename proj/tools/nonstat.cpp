// nonstat — classical vs. substitution statistics of expressions over
// CSV columns.
//
// Exit codes: 0 success; 2 usage, expression, or spec errors; 3 data
// errors; 4 a requested statistic is undefined (table/csv output only —
// JSON reports it as null with a warning and exits 0).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonstat/json_io.hpp"
#include "nonstat/nonstat.hpp"

namespace {

using nlohmann::json;

enum class OutputFormat { Table, Json, Csv };

const std::map<std::string, OutputFormat> kFormatNames{
    {"table", OutputFormat::Table},
    {"json", OutputFormat::Json},
    {"csv", OutputFormat::Csv}};

// Table mode renders 6 significant digits; json/csv carry full precision.
std::string table_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string scalar_to_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// One "key,value" (csv) or "key: value" (table) line per scalar leaf,
// in the document's (sorted) key order.
void print_flat(const json& doc, const std::string& prefix, OutputFormat fmt,
                std::ostream& out) {
  const char* sep = fmt == OutputFormat::Csv ? "," : ": ";
  if (doc.is_object()) {
    for (const auto& [key, value] : doc.items())
      print_flat(value, prefix.empty() ? key : prefix + "." + key, fmt, out);
  } else if (doc.is_array()) {
    for (std::size_t i = 0; i < doc.size(); ++i)
      print_flat(doc[i], prefix + "." + std::to_string(i), fmt, out);
  } else if (doc.is_number_float() && fmt == OutputFormat::Table) {
    out << prefix << sep << table_number(doc.get<double>()) << "\n";
  } else if (doc.is_null()) {
    out << prefix << sep << "n/a" << "\n";
  } else {
    out << prefix << sep << scalar_to_text(doc) << "\n";
  }
}

void emit(const json& doc, OutputFormat fmt, std::ostream& out) {
  if (fmt == OutputFormat::Json)
    out << doc.dump(2) << "\n";
  else
    print_flat(doc, "", fmt, out);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nonstat::Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int exit_code_for(const std::exception& err) {
  using namespace nonstat;
  if (dynamic_cast<const SyntaxError*>(&err) ||
      dynamic_cast<const UnknownFunction*>(&err) ||
      dynamic_cast<const UnboundVariable*>(&err) ||
      dynamic_cast<const UnknownColumn*>(&err) ||
      dynamic_cast<const InvalidSpec*>(&err))
    return 2;
  if (dynamic_cast<const InsufficientSamples*>(&err) ||
      dynamic_cast<const UndefinedMode*>(&err) ||
      dynamic_cast<const NonFiniteResult*>(&err))
    return 4;
  if (dynamic_cast<const nonstat::Error*>(&err)) return 3;
  return 1;
}

// --- parse subcommand ---

struct ParseArgs {
  std::string expression;
  OutputFormat format = OutputFormat::Table;
};

int run_parse(const ParseArgs& args) {
  nonstat::Expr e = nonstat::parse(args.expression);
  auto vars = nonstat::variables(e);
  if (args.format == OutputFormat::Table) {
    std::cout << nonstat::pretty_print(e) << "\n";
    std::cout << "variables: ";
    for (std::size_t i = 0; i < vars.size(); ++i)
      std::cout << (i ? ", " : "") << vars[i];
    std::cout << "\n";
    return 0;
  }
  json doc;
  doc["expression"] = nonstat::pretty_print(e);
  doc["variables"] = vars;
  if (args.format == OutputFormat::Csv) {
    std::cout << "expression," << doc["expression"].get<std::string>() << "\n";
    std::cout << "variables,";
    for (std::size_t i = 0; i < vars.size(); ++i)
      std::cout << (i ? " " : "") << vars[i];
    std::cout << "\n";
  } else {
    emit(doc, args.format, std::cout);
  }
  return 0;
}

// --- stats subcommand ---

struct StatsArgs {
  std::string input;
  std::string expression;
  std::string mode = "both";
  std::string stat = "all";
  char delimiter = ',';
  bool no_header = false;
  OutputFormat format = OutputFormat::Table;
};

int run_stats(const StatsArgs& args) {
  nonstat::Expr e = nonstat::parse(args.expression);

  std::ifstream in(args.input, std::ios::binary);
  if (!in) throw nonstat::Error("cannot open file: " + args.input);
  nonstat::Dataset d =
      nonstat::load_csv(in, {args.delimiter, !args.no_header});

  nonstat::ComparisonReport report = nonstat::compare(e, d);

  bool want_classical = args.mode == "classical" || args.mode == "both";
  bool want_chen = args.mode == "chen" || args.mode == "both";
  bool want_gaps = args.mode == "both";
  auto want_kind = [&](nonstat::StatKind kind) {
    return args.stat == "all" ||
           args.stat == nonstat::to_string(kind);
  };

  json stats = json::object();
  bool missing_requested = false;
  for (auto kind :
       {nonstat::StatKind::Mean, nonstat::StatKind::Variance,
        nonstat::StatKind::Median, nonstat::StatKind::Mode}) {
    if (!want_kind(kind)) continue;
    const auto& s = report.stat(kind);
    json cell = json::object();
    if (want_classical) {
      cell["classical"] = s.classical ? json(*s.classical) : json(nullptr);
      missing_requested |= !s.classical;
    }
    if (want_chen) {
      cell["chen"] = s.chen ? json(*s.chen) : json(nullptr);
      missing_requested |= !s.chen;
    }
    if (want_gaps) {
      cell["abs_gap"] = s.abs_gap ? json(*s.abs_gap) : json(nullptr);
      cell["rel_gap"] = s.rel_gap ? json(*s.rel_gap) : json(nullptr);
    }
    stats[std::string(nonstat::to_string(kind))] = cell;
  }

  // Keep only the warnings that concern a requested statistic.
  auto relevant = [&](const std::string& w) {
    if (w.find("mode") != std::string::npos)
      return want_kind(nonstat::StatKind::Mode);
    if (w.find("variance") != std::string::npos)
      return want_kind(nonstat::StatKind::Variance);
    if (w.find("median") != std::string::npos)
      return want_kind(nonstat::StatKind::Median);
    if (w.find("classical statistics unavailable") != std::string::npos)
      return want_classical;
    return true;
  };
  std::vector<std::string> warnings;
  for (const auto& w : report.warnings)
    if (relevant(w)) warnings.push_back(w);

  json doc;
  doc["expression"] = report.expression;
  doc["n_rows"] = report.n_rows;
  doc["statistics"] = stats;
  if (want_gaps && want_kind(nonstat::StatKind::Mean)) {
    doc["product_decomposition"] =
        report.product_decomposition
            ? json{{"covariance_term",
                    report.product_decomposition->covariance_term},
                   {"identity_residual",
                    report.product_decomposition->identity_residual}}
            : json(nullptr);
  }
  doc["warnings"] = warnings;

  if (args.format == OutputFormat::Json) {
    emit(doc, args.format, std::cout);
    return 0;
  }
  // Diagnostics go to stderr; the data document stays on stdout.
  doc.erase("warnings");
  emit(doc, args.format, std::cout);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  return missing_requested ? 4 : 0;
}

// --- mc subcommand ---

struct MCArgs {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n;
  std::optional<std::size_t> r;
  std::string expression;
  std::vector<std::string> dists;
  OutputFormat format = OutputFormat::Table;
};

int run_mc(const MCArgs& args) {
  nonstat::MCSpec spec;
  // Seed precedence: --seed flag, then spec file, then NONSTAT_SEED, then 0.
  if (const char* env = std::getenv("NONSTAT_SEED"))
    spec.seed = nonstat::detail::parse_seed_field(env);
  if (!args.spec_path.empty())
    spec = nonstat::parse_mc_spec(read_file(args.spec_path), std::move(spec));
  if (args.seed) spec.seed = *args.seed;
  if (args.n) spec.n_samples = *args.n;
  if (args.r) spec.n_replications = *args.r;
  if (!args.expression.empty()) spec.expression = args.expression;
  for (const auto& d : args.dists) {
    auto eq = d.find('=');
    if (eq == std::string::npos)
      throw nonstat::InvalidSpec("dist", "expected VAR=DIST, got \"" + d + "\"");
    nonstat::set_spec_field(spec, "dist." + d.substr(0, eq), d.substr(eq + 1));
  }

  nonstat::MCReport report = nonstat::monte_carlo_compare(spec);
  emit(nonstat::to_json(report), args.format, std::cout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"classical vs. substitution statistics of expressions over CSV columns"};
  app.require_subcommand(1);

  ParseArgs parse_args;
  auto* cmd_parse = app.add_subcommand("parse", "parse an expression and list its variables");
  cmd_parse->add_option("expr", parse_args.expression, "expression source text")->required();
  cmd_parse->add_option("--format", parse_args.format, "output format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  StatsArgs stats_args;
  auto* cmd_stats = app.add_subcommand("stats", "statistics of an expression over CSV columns");
  cmd_stats->add_option("--input,-i", stats_args.input, "CSV file path")->required();
  cmd_stats->add_option("--expr,-e", stats_args.expression, "expression over column names")->required();
  cmd_stats->add_option("--mode", stats_args.mode, "classical, chen, or both")
      ->check(CLI::IsMember({"classical", "chen", "both"}))
      ->capture_default_str();
  cmd_stats->add_option("--stat", stats_args.stat, "mean, variance, median, mode, or all")
      ->check(CLI::IsMember({"mean", "variance", "median", "mode", "all"}))
      ->capture_default_str();
  cmd_stats->add_option("--delimiter", stats_args.delimiter, "CSV delimiter")
      ->capture_default_str();
  cmd_stats->add_flag("--no-header", stats_args.no_header, "name columns c1..ck instead of reading a header row");
  cmd_stats->add_option("--format", stats_args.format, "output format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  MCArgs mc_args;
  auto* cmd_mc = app.add_subcommand("mc", "seeded Monte Carlo comparison of the two mean definitions");
  cmd_mc->add_option("--spec", mc_args.spec_path, "spec file (key = value lines or flat JSON)");
  cmd_mc->add_option("--seed", mc_args.seed, "base seed (wins over spec file and NONSTAT_SEED)");
  cmd_mc->add_option("--n", mc_args.n, "samples per replication");
  cmd_mc->add_option("--r", mc_args.r, "number of replications");
  cmd_mc->add_option("--expr", mc_args.expression, "expression over sampled variables");
  cmd_mc->add_option("--dist", mc_args.dists,
                     "VAR=uniform(a,b) or VAR=normal(mu,sigma); repeatable");
  cmd_mc->add_option("--format", mc_args.format, "output format")
      ->transform(CLI::CheckedTransformer(kFormatNames, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cmd_parse) return run_parse(parse_args);
    if (*cmd_stats) return run_stats(stats_args);
    if (*cmd_mc) return run_mc(mc_args);
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return exit_code_for(err);
  }
  return 0;
}
