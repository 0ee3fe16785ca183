#pragma once

#include <stdexcept>
#include <string>

namespace jlab {

// Requested more recurrence steps than the stored Jacobi parameters support.
class ParameterExhausted : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Im m <= 0 was produced where the Herglotz property forbids it.
class HerglotzViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Direct-sum kernel and the Christoffel-Darboux closed form disagree.
class CdFormulaMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegenerateCenter : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class InsufficientZeros : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class WindowTooLarge : public std::length_error {
 public:
  using std::length_error::length_error;
};

class UnsupportedModel : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class InvalidPerturbation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace jlab
