#pragma once

#include <stdexcept>
#include <string>

namespace ndchan {

// Malformed or out-of-contract input supplied by the caller.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured guard (search space, node budget, iteration cap) was exceeded.
// Distinct from a proof of infeasibility.
class ResourceLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An internal invariant failed. Always indicates a bug.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace ndchan
