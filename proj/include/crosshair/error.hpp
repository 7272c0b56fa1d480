#pragma once

#include <stdexcept>
#include <string>

namespace crosshair {

// Base for every failure the library reports. Each subclass maps to one
// contract violation, so callers can catch narrowly or broadly.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// A zoo whose frontier entries are closer than one granularity step, or
// whose latencies exceed l_up.
class GranularityViolation : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyFrontier : public Error {
 public:
  using Error::Error;
};

class EmptyLog : public Error {
 public:
  using Error::Error;
};

class NoFeasibleVictim : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class InfeasibleSpec : public Error {
 public:
  using Error::Error;
};

class MalformedMessage : public Error {
 public:
  using Error::Error;
};

class OutOfRange : public Error {
 public:
  using Error::Error;
};

class RegistrationAfterStart : public Error {
 public:
  using Error::Error;
};

// Socket-level failure or an unexpected reply from the peer.
class TransportError : public Error {
 public:
  using Error::Error;
};

}  // namespace crosshair
