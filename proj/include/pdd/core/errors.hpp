#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace pdd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input names a taxon or vertex that does not exist.
class DomainError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A solver declined to run because its work estimate exceeds the budget.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using Weight = std::uint64_t;

inline Weight checked_add(Weight a, Weight b) {
  Weight r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("weight addition overflows 64 bits");
  return r;
}

inline Weight checked_mul(Weight a, Weight b) {
  Weight r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("weight multiplication overflows 64 bits");
  return r;
}

inline std::int64_t to_signed(Weight w) {
  if (w > static_cast<Weight>(std::numeric_limits<std::int64_t>::max()))
    throw OverflowError("weight does not fit a signed 64-bit value");
  return static_cast<std::int64_t>(w);
}

}  // namespace pdd
