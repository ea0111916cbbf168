#pragma once

#include <stdexcept>
#include <string>

namespace jsr {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Input document rejected (syntax, negative entries, shape mismatch, ...).
struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Frontier enumeration hit the configured size cap.
struct BudgetError : Error {
  int length_reached;
  BudgetError(const std::string& msg, int reached)
      : Error(msg), length_reached(reached) {}
};

// Operation requires a strongly connected dependency graph.
struct NotConnectedError : Error {
  explicit NotConnectedError(const std::string& msg) : Error(msg) {}
};

// Certified intervals failed to intersect. Every emitted interval provably
// contains the target value, so this always indicates an arithmetic bug.
struct InconsistencyError : Error {
  explicit InconsistencyError(const std::string& msg) : Error(msg) {}
};

// Growth verification refused: the rate enclosure is too wide to be meaningful.
struct EnclosureTooWideError : Error {
  explicit EnclosureTooWideError(const std::string& msg) : Error(msg) {}
};

}  // namespace jsr
