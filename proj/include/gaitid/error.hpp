#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gaitid {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line-specific.
class ParseError : public Error {
public:
  ParseError(const std::string& detail, std::size_t line)
      : Error(line == 0 ? detail : "line " + std::to_string(line) + ": " + detail), line_(line), detail_(detail) {}
  std::size_t line() const noexcept { return line_; }
  const std::string& detail() const noexcept { return detail_; }

private:
  std::size_t line_;
  std::string detail_;
};

/// Input parsed but violates a domain invariant (non-finite value, bad range).
class ValidationError : public Error {
public:
  using Error::Error;
};

class EmptyRecordingError : public Error {
public:
  using Error::Error;
};

/// A class has fewer rows than the requested fold count.
class StratificationError : public Error {
public:
  StratificationError(const std::string& what, std::size_t class_label)
      : Error(what), class_label_(class_label) {}
  std::size_t class_label() const noexcept { return class_label_; }

private:
  std::size_t class_label_;
};

/// Feature CSV or model document does not have the expected columns/fields.
class SchemaError : public Error {
public:
  using Error::Error;
};

}  // namespace gaitid
