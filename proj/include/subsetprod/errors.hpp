#pragma once

#include <stdexcept>
#include <string>

namespace subsetprod {

// Caller passed something malformed (bad descriptor, mismatched mask, ...).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Well-formed request that this build cannot serve at the requested scale.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input data is inconsistent (bad hex, unnormalized distribution, corrupt file).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A postcondition the library itself is responsible for did not hold.
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace subsetprod
