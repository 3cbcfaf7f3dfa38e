#pragma once

#include <stdexcept>
#include <string>

namespace stateconv {

/// Malformed or out-of-contract input: shape mismatch, non-finite entries,
/// parameters out of range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A matrix required to be positive semidefinite has a significantly
/// negative eigenvalue.
class NotPsdError : public InputError {
 public:
  using InputError::InputError;
};

/// A supplied certificate violates one of the constraints it must satisfy.
class CertificateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A property that must hold by construction was observed to fail. Carries
/// the offending margin in the message.
class VerificationFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The SDP solver did not reach an optimal solution.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace stateconv
