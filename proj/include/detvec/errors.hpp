#ifndef DETVEC_ERRORS_HPP
#define DETVEC_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace detvec {

/// Shape or dimension mismatch between inputs (non-square matrix, wrong
/// chart, wrong vector count, mismatched group).
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input that violates a documented precondition.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation outside the declared domain of an expression, field or map.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: step underflow, quadrature failure, exhausted sampler.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace detvec

#endif  // DETVEC_ERRORS_HPP
