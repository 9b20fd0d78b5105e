#pragma once

#include <stdexcept>
#include <string>

namespace kakeya_hash {

/// Raised when an exhaustive sweep would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a rule's side conditions are not met by the supplied parameters.
/// The message lists every failed clause, one per line.
class SideConditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

[[noreturn]] inline void fail(const std::string& what) { throw std::invalid_argument(what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(what);
}

}  // namespace detail
}  // namespace kakeya_hash
