#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace polsig {

enum class ErrorKind {
  // ideology
  InsufficientData,
  DegenerateRegressor,
  DegenerateRange,
  // spatial
  ZeroWeight,
  EmptyCoalition,
  InvalidShare,
  // netsci
  EmptyGraph,
  // econometrics
  RankDeficient,
  NoVariation,
  ZeroVariance,
  // ingest
  SchemaError,
  UnknownPolitician,
  DuplicateDyad,
  EmptyGroup,
  // shared
  InvalidArgument,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

// Process exit status for an error kind: 2 schema, 3 estimation, 4 config, 5 internal.
int exit_code(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// RankDeficient carries the first column that is linearly dependent on the preceding ones.
class RankDeficientError : public Error {
 public:
  RankDeficientError(std::size_t column, std::string term)
      : Error(ErrorKind::RankDeficient,
              "design column " + std::to_string(column) + " ('" + term + "') is collinear"),
        column_(column),
        term_(std::move(term)) {}

  std::size_t column() const noexcept { return column_; }
  const std::string& term() const noexcept { return term_; }

 private:
  std::size_t column_;
  std::string term_;
};

}  // namespace polsig
