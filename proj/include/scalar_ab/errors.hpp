#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace scalar_ab {

// Raised when a value violates a documented invariant or precondition. The
// message always names the violated invariant.
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a numerical procedure cannot deliver its contract (step-size
// underflow, NaN, non-convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_invariant(const std::string& what) {
  throw InvariantError(what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) fail_invariant(what);
}

// Doubles in messages; std::to_string would print 1e-9 as 0.000000.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

}  // namespace detail
}  // namespace scalar_ab
