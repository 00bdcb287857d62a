#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asymcurve {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidStepError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

class DegenerateSubarcError : public Error {
 public:
  using Error::Error;
};

class EmptyScanError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row)
      : Error(what + " (row " + std::to_string(row) + ")"), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// The normal offset folds the embedded curve: 1 - kappa * f <= 0.
class OffsetDegeneracyError : public Error {
 public:
  OffsetDegeneracyError(double s, std::size_t piece)
      : Error("normal offset folds the curve at s = " + std::to_string(s) +
              " (piece " + std::to_string(piece) + ")"),
        s_(s),
        piece_(piece) {}
  double s() const { return s_; }
  std::size_t piece() const { return piece_; }

 private:
  double s_;
  std::size_t piece_;
};

/// A build would exceed the configured sample budget.
class ResourceError : public Error {
 public:
  ResourceError(std::size_t projected, std::size_t budget)
      : Error("projected sample count " + std::to_string(projected) +
              " exceeds budget " + std::to_string(budget)),
        projected_(projected),
        budget_(budget) {}
  std::size_t projected() const { return projected_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t projected_;
  std::size_t budget_;
};

}  // namespace asymcurve
