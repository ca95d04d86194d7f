#ifndef COVERAGE_LAB_ERRORS_HPP
#define COVERAGE_LAB_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coverage_lab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) + ", got " + std::to_string(got)) {}
};

class EmptyPolytope : public Error {
 public:
  EmptyPolytope() : Error("polytope is empty") {}
};

class ExactUnsupported : public Error {
 public:
  explicit ExactUnsupported(const std::string& what) : Error("exact method unsupported for " + what) {}
};

class UnsupportedRegion : public Error {
 public:
  explicit UnsupportedRegion(const std::string& what) : Error("unsupported region: " + what) {}
};

// Region DSL errors.

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error("syntax error at byte " + std::to_string(offset) + ": " + msg), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(const std::string& name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset)), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class ArityError : public Error {
 public:
  ArityError(const std::string& fn, std::size_t got)
      : Error("function '" + fn + "' takes 1 argument, got " + std::to_string(got)) {}
};

class DimensionError : public Error {
 public:
  DimensionError(const std::string& var, std::size_t dim)
      : Error("variable '" + var + "' exceeds dimension " + std::to_string(dim)) {}
};

class TypeError : public Error {
 public:
  using Error::Error;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

// Classifier and spec-file errors.

class AmbiguousLabel : public Error {
 public:
  using Error::Error;
};

class NoLabel : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& field, const std::string& detail = {})
      : Error("schema error in field '" + field + "'" + (detail.empty() ? "" : ": " + detail)), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Coverage query errors.

class QueryError : public Error {
 public:
  using Error::Error;
};

class PointNotInRegion : public QueryError {
 public:
  PointNotInRegion() : QueryError("query point is not in the region") {}
};

class EmptyRegion : public QueryError {
 public:
  EmptyRegion() : QueryError("region is empty") {}
};

class RefinementPoint : public QueryError {
 public:
  RefinementPoint() : QueryError("query point lies in the refinement set; coverage is undefined there") {}
};

class PointNotInAnyLabel : public QueryError {
 public:
  PointNotInAnyLabel() : QueryError("query point is not claimed by any label") {}
};

class DegenerateSequence : public Error {
 public:
  using Error::Error;
};

}  // namespace coverage_lab

#endif  // COVERAGE_LAB_ERRORS_HPP
