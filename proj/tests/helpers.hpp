// Shared generators and process helpers for the test suites. Everything
// random is driven by the library's own seeded generator so failures
// replay exactly.

#pragma once

#include <sys/wait.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "nonstat/expr.hpp"
#include "nonstat/rng.hpp"

namespace testutil {

using nonstat::Xoshiro256PlusPlus;

inline double uniform_in(Xoshiro256PlusPlus& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.next_unit();
}

inline std::size_t index_below(Xoshiro256PlusPlus& rng, std::size_t n) {
  return static_cast<std::size_t>(rng.next() % n);
}

inline std::string random_variable_name(Xoshiro256PlusPlus& rng) {
  static const char* kNames[] = {"x", "y", "z", "u", "v", "w",
                                 "alpha", "beta", "t_1", "_tmp"};
  return kNames[index_below(rng, std::size(kNames))];
}

// Nonnegative finite constants only: that is the set the parser itself
// can produce, so printed trees re-parse to identical structure.
inline double random_constant(Xoshiro256PlusPlus& rng) {
  switch (index_below(rng, 4)) {
    case 0:
      return static_cast<double>(rng.next() % 1000);
    case 1:
      return rng.next_unit();
    case 2:
      return rng.next_unit() * 1e6;
    default:
      return rng.next_unit() * 1e-3;
  }
}

inline nonstat::Expr random_expr(Xoshiro256PlusPlus& rng, int max_depth) {
  using namespace nonstat;
  std::size_t pick = max_depth <= 0 ? index_below(rng, 2)
                                    : index_below(rng, 10);
  switch (pick) {
    case 0:
      return constant(random_constant(rng));
    case 1:
      return variable(random_variable_name(rng));
    case 2:
    case 3:
    case 4: {
      static const UnaryOp kOps[] = {UnaryOp::Neg,  UnaryOp::Sin,
                                     UnaryOp::Cos,  UnaryOp::Exp,
                                     UnaryOp::Log,  UnaryOp::Sqrt,
                                     UnaryOp::Abs};
      return unary(kOps[index_below(rng, std::size(kOps))],
                   random_expr(rng, max_depth - 1));
    }
    default: {
      static const BinaryOp kOps[] = {BinaryOp::Add, BinaryOp::Sub,
                                      BinaryOp::Mul, BinaryOp::Div,
                                      BinaryOp::Pow};
      return binary(kOps[index_below(rng, std::size(kOps))],
                    random_expr(rng, max_depth - 1),
                    random_expr(rng, max_depth - 1));
    }
  }
}

inline std::vector<double> random_column(Xoshiro256PlusPlus& rng,
                                         std::size_t n, double lo, double hi) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(uniform_in(rng, lo, hi));
  return out;
}

// Fisher-Yates with the test generator.
inline void shuffle(std::vector<double>& values, Xoshiro256PlusPlus& rng) {
  for (std::size_t i = values.size(); i > 1; --i)
    std::swap(values[i - 1], values[index_below(rng, i)]);
}

// --- process helpers for CLI tests ---

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "nonstat_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path write_temp_file(const std::string& name,
                                             const std::string& contents) {
  auto path = temp_dir() / name;
  std::ofstream out(path, std::ios::binary);
  out << contents;
  return path;
}

// Runs `command` through the shell with stdout/stderr captured separately.
inline RunResult run_command(const std::string& command) {
  static int counter = 0;
  auto out_path = temp_dir() / ("out" + std::to_string(counter) + ".txt");
  auto err_path = temp_dir() / ("err" + std::to_string(counter) + ".txt");
  ++counter;

  std::string full = command + " >" + out_path.string() + " 2>" + err_path.string();
  int status = std::system(full.c_str());
  int code = -1;
  if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);

  RunResult result{code, slurp(out_path), slurp(err_path)};
  std::filesystem::remove(out_path);
  std::filesystem::remove(err_path);
  return result;
}

}  // namespace testutil
