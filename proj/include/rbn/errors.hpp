#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rbn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t offset = 0;
};

class ParseError : public Error {
 public:
  ParseError(SourceSpan span, const std::string& message)
      : Error(std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
        span_(span) {}

  const SourceSpan& span() const noexcept { return span_; }

 private:
  SourceSpan span_;
};

// Unbound variables, missing interpretations, bad element names.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

// A recursive definition reads an atom that is not (yet) determined, or the
// ground self-dependency relation of a recursive relation has a cycle.
class WellFoundednessError : public Error {
 public:
  WellFoundednessError(const std::string& message, std::vector<std::string> cycle = {})
      : Error(message), cycle_(std::move(cycle)) {}

  const std::vector<std::string>& cycle() const noexcept { return cycle_; }

 private:
  std::vector<std::string> cycle_;
};

class InconsistentEvidenceError : public Error {
 public:
  using Error::Error;
};

class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

class NotNormalizableError : public Error {
 public:
  using Error::Error;
};

}  // namespace rbn
