#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace catbound {

// Argument outside the mathematical domain of an operation (negative moment
// parameter, out-of-range vertex, pmf mass off the relation, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Malformed edge-list / pattern / manifest input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// The homomorphism oracle ran past its extension-step budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace catbound
