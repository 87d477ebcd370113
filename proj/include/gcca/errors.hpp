#pragma once

#include <stdexcept>
#include <string>

namespace gcca {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Dimension mismatch between operands.
class ShapeError : public Error {
 public:
  explicit ShapeError(const std::string& msg) : Error(msg) {}
};

// Invalid argument value (bad flag, out-of-range parameter, ...).
class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& msg) : Error(msg) {}
};

// Malformed input file; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Dense work requested above the configured size cap.
class OversizeError : public Error {
 public:
  explicit OversizeError(const std::string& msg) : Error(msg) {}
};

// Numerically singular system where an inverse is required.
class ConditioningError : public Error {
 public:
  explicit ConditioningError(const std::string& msg) : Error(msg) {}
};

// Procrustes target is (near-)rank-deficient; solution not unique.
class RankDeficiencyError : public Error {
 public:
  explicit RankDeficiencyError(const std::string& msg) : Error(msg) {}
};

// A runtime certificate failed: monotone descent, step-size soundness,
// orthonormality, or the Procrustes optimality check.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& msg) : Error(msg) {}
};

// Not enough data to produce a meaningful result.
class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

// Mathematically undefined result (zero-vector cosine, constant-vector
// rank correlation).
class UndefinedValueError : public Error {
 public:
  explicit UndefinedValueError(const std::string& msg) : Error(msg) {}
};

}  // namespace gcca
