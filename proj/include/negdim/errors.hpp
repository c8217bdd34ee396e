#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace negdim {

/// Input outside an operation's mathematical domain (bad index, non-physical
/// parameters, violated preconditions).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// An iterative solver stopped without meeting its tolerance. Carries the last
/// bracket and residual so callers can report them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double lo, double hi, double residual)
      : std::runtime_error(what), lo_(lo), hi_(hi), residual_(residual) {}

  double bracket_lo() const noexcept { return lo_; }
  double bracket_hi() const noexcept { return hi_; }
  double residual() const noexcept { return residual_; }

 private:
  double lo_;
  double hi_;
  double residual_;
};

/// Exact counting table would exceed its memory/size budget.
class BudgetError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Malformed UTF-8 input.
class EncodingError : public std::runtime_error {
 public:
  EncodingError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

}  // namespace negdim
