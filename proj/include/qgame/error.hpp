#pragma once

#include <stdexcept>
#include <string>

namespace qgame {

// Caller supplied something the contract does not admit: bad shapes,
// malformed distributions, non-unitary payloads, bad config fields.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Two evaluation routes that must agree did not. Always an implementation
// fault, never a user error.
class NumericalFault : public std::runtime_error {
 public:
  explicit NumericalFault(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qgame
