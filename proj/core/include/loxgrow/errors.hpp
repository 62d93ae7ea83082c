#pragma once

#include <stdexcept>
#include <string>

namespace loxgrow {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BackendMismatch : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

// Matrix input that does not lie in PSL(2, Z) (or PSL(2, R) for det checks).
class NotInGroup : public Error {
 public:
  using Error::Error;
};

class NotLoxodromic : public Error {
 public:
  using Error::Error;
};

class EmptyAfterReduction : public Error {
 public:
  using Error::Error;
};

class ExactWordProblemUnavailable : public Error {
 public:
  using Error::Error;
};

class InvalidCertificate : public Error {
 public:
  using Error::Error;
};

class NoLoxodromicFound : public Error {
 public:
  using Error::Error;
};

// Raised by chain_lower_bound; index is 1-based like the chain x_1..x_k.
class HypothesisFailed : public Error {
 public:
  explicit HypothesisFailed(int index)
      : Error("chain hypothesis fails at index " + std::to_string(index)),
        index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

// Resource budgets: element caps, search grids, integer overflow.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflow : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

class SearchExhausted : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

// The generated subgroup looks (or provably is) elementary.
class ElementaryDetected : public Error {
 public:
  using Error::Error;
};

class LikelyElementary : public ElementaryDetected {
 public:
  using ElementaryDetected::ElementaryDetected;
};

class AllElementary : public ElementaryDetected {
 public:
  using ElementaryDetected::ElementaryDetected;
};

}  // namespace loxgrow
