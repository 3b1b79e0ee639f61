#pragma once

#include <stdexcept>
#include <string>

namespace mptd {

// Bad user input: unknown identifiers, malformed configs, missing artifacts.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Inconsistent shapes or probability tables.
class StructuralError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A numerical precondition failed (singular system, reducible chain, ...).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mptd
