#pragma once

#include <stdexcept>
#include <string>

namespace nls {

// Every failure raised by the library derives from Error so callers can
// catch the whole family at once.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: wrong dimensions, non-finite numbers, invalid
// probability vectors or stochastic matrices.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A theorem's hypothesis does not hold for the supplied arguments.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// A random variable produced a non-finite value on a positive-probability
// outcome.
class EvaluationError : public Error {
 public:
  EvaluationError(const std::string& what, long m, long n)
      : Error(what), m_(m), n_(n) {}
  long final_index() const { return m_; }
  long initial_index() const { return n_; }

 private:
  long m_;
  long n_;
};

// Argument outside the mathematical domain of a special function or model.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A transition matrix failed Gibbs-matrix certification.
class CertificationError : public Error {
 public:
  using Error::Error;
};

// The stationary distribution is not unique.
class MultiplicityError : public Error {
 public:
  using Error::Error;
};

// Eigenvalues inside an invariant block are not separated.
class NumericalDegeneracy : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  using Error::Error;
};

// Unreadable or schema-violating instance files.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace nls
