#pragma once

#include <stdexcept>
#include <string>

namespace vemser {

/// Bad input: malformed geometry, parameter constraints, unsupported requests.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A computed invariant did not hold (rank deficiency, failed reproduction).
class InvariantError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace vemser
