#pragma once

#include <stdexcept>
#include <string>

namespace barrier_occ {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

// A probability or quantile request falls outside the attainable range.
class OutOfRange : public Error {
 public:
  using Error::Error;
};

// A rejection sampler hit its attempt cap.
class RejectionBudgetExceeded : public Error {
 public:
  using Error::Error;
};

class EmptyBatch : public Error {
 public:
  using Error::Error;
};

}  // namespace barrier_occ
