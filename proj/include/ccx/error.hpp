#pragma once

#include <stdexcept>
#include <string>

namespace ccx {

// Raised when a factorization or iteration cannot produce a result.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a structural audit cannot run (mesh too large, unsupported input).
class AuditError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ccx
