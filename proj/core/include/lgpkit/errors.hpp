#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lgpkit {

/// Raised for malformed user input: bad config values, unknown names,
/// unparsable files, out-of-range queries.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exhaustive enumeration would exceed its size guard.
class GuardViolation : public InputError {
public:
  GuardViolation(const std::string& what, double estimate)
      : InputError(what), estimate_(estimate) {}

  double estimate() const noexcept { return estimate_; }

private:
  double estimate_;
};

} // namespace lgpkit
