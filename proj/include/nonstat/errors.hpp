// Error types thrown across the library. Each carries the structured
// fields a caller needs to produce a diagnostic (offsets, line numbers,
// offending names) in addition to a preformatted what() message.

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace nonstat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// --- expression parsing ---

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected)
      : Error("syntax error at offset " + std::to_string(offset) +
              ": expected " + expected),
        offset(offset),
        expected(std::move(expected)) {}

  std::size_t offset;
  std::string expected;
};

class UnknownFunction : public Error {
 public:
  UnknownFunction(std::string name, std::size_t offset)
      : Error("unknown function '" + name + "' at offset " +
              std::to_string(offset)),
        name(std::move(name)),
        offset(offset) {}

  std::string name;
  std::size_t offset;
};

// --- evaluation ---

class UnboundVariable : public Error {
 public:
  explicit UnboundVariable(std::string name)
      : Error("unbound variable '" + name + "'"), name(std::move(name)) {}

  std::string name;
};

// Raised when a statistic would be poisoned by a NaN/infinity produced
// while evaluating an expression. `row` is the 0-based dataset row for
// pointwise evaluation; absent for substitution evaluation.
class NonFiniteResult : public Error {
 public:
  explicit NonFiniteResult(std::optional<std::size_t> row = std::nullopt)
      : Error(row ? "non-finite result at row " + std::to_string(*row)
                  : "non-finite result"),
        row(row) {}

  std::optional<std::size_t> row;
};

// --- dataset ingestion ---

class EmptyInput : public Error {
 public:
  EmptyInput() : Error("empty input: no data rows") {}
};

class RaggedRows : public Error {
 public:
  explicit RaggedRows(std::size_t line)
      : Error("ragged row at line " + std::to_string(line)), line(line) {}

  std::size_t line;  // 1-based line in the input stream
};

class NonNumericCell : public Error {
 public:
  NonNumericCell(std::size_t line, std::string column, std::string token)
      : Error("non-numeric cell at line " + std::to_string(line) +
              ", column '" + column + "': \"" + token + "\""),
        line(line),
        column(std::move(column)),
        token(std::move(token)) {}

  std::size_t line;
  std::string column;
  std::string token;
};

class NonFiniteValue : public Error {
 public:
  NonFiniteValue(std::size_t line, std::string column)
      : Error("non-finite value at line " + std::to_string(line) +
              ", column '" + column + "'"),
        line(line),
        column(std::move(column)) {}

  std::size_t line;
  std::string column;
};

class DuplicateColumn : public Error {
 public:
  explicit DuplicateColumn(std::string name)
      : Error("duplicate column '" + name + "'"), name(std::move(name)) {}

  std::string name;
};

class InvalidColumnName : public Error {
 public:
  explicit InvalidColumnName(std::string name)
      : Error("invalid column name '" + name + "'"), name(std::move(name)) {}

  std::string name;
};

class UnknownColumn : public Error {
 public:
  explicit UnknownColumn(std::string name)
      : Error("unknown column '" + name + "'"), name(std::move(name)) {}

  std::string name;
};

// --- statistics ---

class InsufficientSamples : public Error {
 public:
  InsufficientSamples(std::string what_for, std::size_t n_required,
                      std::size_t n_given)
      : Error(what_for + " requires at least " + std::to_string(n_required) +
              " samples, got " + std::to_string(n_given)),
        n_required(n_required),
        n_given(n_given) {}

  std::size_t n_required;
  std::size_t n_given;
};

class UndefinedMode : public Error {
 public:
  explicit UndefinedMode(std::string column)
      : Error("mode undefined for column '" + column +
              "': no value occurs more than once"),
        column(std::move(column)) {}

  std::string column;
};

// --- Monte Carlo specs ---

class InvalidSpec : public Error {
 public:
  InvalidSpec(std::string field, const std::string& reason)
      : Error("invalid spec: field '" + field + "': " + reason),
        field(std::move(field)) {}

  std::string field;
};

}  // namespace nonstat
