#pragma once

#include <stdexcept>
#include <string>

namespace pickchoose {

// Malformed or out-of-range input: bad tokens, wrong cardinalities,
// elements outside the ground set, illegal moves.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The instance is well formed but exceeds a configured cap
// (ground-set size, exhaustive enumeration range).
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// A request that is valid in general but not in the current state,
// e.g. a strategy for the losing side or a move out of turn.
class StateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pickchoose
