#pragma once

#include <cstdint>
#include <optional>

#include "subsetprod/bits.hpp"

namespace subsetprod {

enum class SolveStatus { Found, NotFound, BudgetExhausted };

inline const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Found: return "found";
    case SolveStatus::NotFound: return "not-found";
    case SolveStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

struct OpCounter {
  std::uint64_t group_ops = 0;
  std::uint64_t phi_evals = 0;

  OpCounter& operator+=(const OpCounter& o) {
    group_ops += o.group_ops;
    phi_evals += o.phi_evals;
    return *this;
  }
};

// x over A and y over B with pi(x) pi(y) = z, plus the assembled k-bit form.
struct Answer {
  Mask x;
  Mask y;
  SubsetBits subset;
};

}  // namespace subsetprod
