#pragma once

#include <stdexcept>
#include <string>

namespace pbc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Subsystem layouts or matrix shapes that do not fit together.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Requested computation exceeds the dense dimension budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// Input violates a documented precondition (non-Hermitian, non-PSD, bad range...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input. `where` names the offending location.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string where)
      : Error(what + " at " + where), where_(std::move(where)) {}
  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

}  // namespace pbc
