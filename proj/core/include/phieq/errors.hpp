#pragma once

#include <stdexcept>

namespace phieq {

// A problem promise does not hold on the given instance (for example an empty
// safe-deviation set, or an infeasible correspondence). Surfaced to callers,
// never patched silently.
class PromiseViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical routine failed to produce a certified answer. Distinct from
// infeasibility, which is a legitimate outcome.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace phieq
