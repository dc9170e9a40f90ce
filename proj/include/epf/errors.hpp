#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace epf {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A row of an input file could not be parsed. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::string msg, std::size_t line)
      : Error(std::move(msg) + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Daily series has a missing date. Carries the first missing ISO date.
class GapError : public Error {
 public:
  explicit GapError(std::string missing_iso_date)
      : Error("gap in daily series, missing " + missing_iso_date),
        missing_date_(std::move(missing_iso_date)) {}
  const std::string& missing_date() const { return missing_date_; }

 private:
  std::string missing_date_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
  EmptyInput() : Error("empty input") {}
};

class InsufficientData : public Error {
 public:
  using Error::Error;
};

class DegenerateInput : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
  InvalidWindow() : Error("window must be >= 1") {}
};

class InvalidHurst : public Error {
 public:
  explicit InvalidHurst(double h)
      : Error("Hurst parameter must lie in (0,1), got " + std::to_string(h)) {}
};

class InvalidTime : public Error {
 public:
  using Error::Error;
};

class InvalidProbability : public Error {
 public:
  using Error::Error;
};

class InvalidInterval : public Error {
 public:
  using Error::Error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// Circulant embedding produced a negative eigenvalue beyond tolerance.
class EmbeddingError : public Error {
 public:
  using Error::Error;
};

/// Explicit Euler step size too large for the requested mean reversion.
class UnstableStep : public Error {
 public:
  using Error::Error;
};

/// Hawkes excitation violates the stationarity condition gamma < beta.
class NonStationary : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Optimizer failed to converge. Carries the best iterate seen, if any.
class FitError : public Error {
 public:
  explicit FitError(std::string msg, std::vector<double> best_iterate = {})
      : Error(std::move(msg)), best_iterate_(std::move(best_iterate)) {}
  const std::vector<double>& best_iterate() const { return best_iterate_; }

 private:
  std::vector<double> best_iterate_;
};

}  // namespace epf
