#pragma once
//
// Error taxonomy shared by all library components.
//
// Every throw site uses the "function: message" convention so that CLI users
// can tell which operation rejected their input.  The distinction between the
// categories matters for exit codes: contract/domain violations are caller
// bugs, numeric/precision failures mean the requested accuracy could not be
// certified with the given resources.

#include <stdexcept>
#include <string>

namespace qpc {

// Caller violated a documented precondition (bad interval, wrong mode, ...).
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

// Input is structurally legal but degenerate for the requested operation
// (identically-zero function handed to a root finder, constant potential
// handed to a scan, ...).
class DegenerateInputError : public std::invalid_argument {
 public:
  explicit DegenerateInputError(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation requested outside the analyticity strip.
class StripDomainError : public std::domain_error {
 public:
  explicit StripDomainError(const std::string& what) : std::domain_error(what) {}
};

// A computation ran but its result could not be trusted (residual too large,
// winding residue out of tolerance, eigen-solver failure, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// The estimator's own uncertainty is too large for the quantity requested
// (e.g. finite-difference acceleration with a noisy Lyapunov estimate).
class PrecisionError : public std::runtime_error {
 public:
  explicit PrecisionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qpc
