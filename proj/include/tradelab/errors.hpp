#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tradelab {

// Base for all library errors so callers can catch one type at the CLI edge.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidParameter : Error {
  std::string name;
  double value;
  std::string constraint;
  InvalidParameter(std::string name_, double value_, std::string constraint_)
      : Error("invalid parameter " + name_ + " = " + std::to_string(value_) +
              " (requires " + constraint_ + ")"),
        name(std::move(name_)), value(value_), constraint(std::move(constraint_)) {}
};

struct DomainError : Error {
  using Error::Error;
};

struct NonMonotoneGain : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  int iterations;
  double last_change;
  NoConvergence(std::string msg, int iterations_, double last_change_)
      : Error(std::move(msg)), iterations(iterations_), last_change(last_change_) {}
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct SpecError : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  std::vector<int> columns;
  RankDeficient(std::string msg, std::vector<int> cols)
      : Error(std::move(msg)), columns(std::move(cols)) {}
};

struct DegenerateClusters : Error {
  using Error::Error;
};

struct MissingLookup : Error {
  using Error::Error;
};

struct NoBaseYear : Error {
  using Error::Error;
};

}  // namespace tradelab
