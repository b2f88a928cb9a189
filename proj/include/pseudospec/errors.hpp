#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pseudospec {

// Exception families map onto CLI exit codes: ParseError/ConfigError -> 2,
// ConstructionError -> 3, SolverError -> 4.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// position is the 1-based byte column of the offending token (one past the
// last byte for unexpected end of input).
class SyntaxError : public ParseError {
 public:
  SyntaxError(std::size_t position, const std::string& expected)
      : ParseError("syntax error at offset " + std::to_string(position) +
                   ": expected " + expected),
        position_(position),
        expected_(expected) {}

  std::size_t position() const noexcept { return position_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

class UnknownFunction : public ParseError {
 public:
  UnknownFunction(std::size_t position, const std::string& name)
      : ParseError("unknown function '" + name + "' at offset " +
                   std::to_string(position)),
        name_(name) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConstructionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class OverflowError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class SingularSuperpotential : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class PotentialSingular : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class NonSimpleZero : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class QuadratureError : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class InvalidSpec : public ConstructionError {
 public:
  using ConstructionError::ConstructionError;
};

class SolverError : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public SolverError {
 public:
  NoConvergence(std::size_t lo, std::size_t hi, const std::string& what)
      : SolverError(what), lo_(lo), hi_(hi) {}

  // Unconverged active block [lo, hi] (inclusive).
  std::size_t block_lo() const noexcept { return lo_; }
  std::size_t block_hi() const noexcept { return hi_; }

 private:
  std::size_t lo_, hi_;
};

class NonFinite : public SolverError {
 public:
  using SolverError::SolverError;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

}  // namespace pseudospec
