#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hpstat {

/// Base class of every error the library throws on bad input or data.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated an API precondition (sizes, ranges, option values).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A zero vector was given to the cosine distance. `row` is the offending
/// row of the data matrix when known, otherwise -1.
class ZeroNormError : public Error {
 public:
  explicit ZeroNormError(std::int64_t row)
      : Error(row < 0 ? std::string("zero-norm vector under cosine distance")
                      : "zero-norm row " + std::to_string(row) +
                            " under cosine distance (use --zero-norm-epsilon or filter the row)"),
        row_(row) {}

  std::int64_t row() const noexcept { return row_; }

 private:
  std::int64_t row_;
};

/// A statistic is undefined for the given sizes (zero variance, N < 4, ...).
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// Internal consistency check failed (e.g. a two-class tree without a cross edge).
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

class MagicMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

class TruncatedPayload : public FormatError {
 public:
  using FormatError::FormatError;
};

class LabelCountMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

class UndersizedClass : public Error {
 public:
  UndersizedClass(std::uint32_t label, std::int64_t have, std::int64_t need)
      : Error("class " + std::to_string(label) + " has " + std::to_string(have) +
              " rows, need at least " + std::to_string(need)),
        label_(label) {}

  std::uint32_t label() const noexcept { return label_; }

 private:
  std::uint32_t label_;
};

/// A (layer, state, split) matrix required by a test is absent.
class MissingMatrix : public Error {
 public:
  using Error::Error;
};

}  // namespace hpstat
