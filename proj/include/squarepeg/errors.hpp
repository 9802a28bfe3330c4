#pragma once

#include <stdexcept>
#include <string>

namespace peg {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad JSON, non-finite values, wrong class).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NonPrimitiveClass : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// Smoothing produced a self-intersecting curve; retry with a smaller width.
class EmbeddingLost : public Error {
 public:
  using Error::Error;
};

/// Two curves that must stay disjoint came into contact.
class DisjointnessLost : public Error {
 public:
  using Error::Error;
};

/// The solver found no root at all. On disjoint valid input this is always a
/// resolution failure, never an acceptable answer.
class NoSolutions : public Error {
 public:
  using Error::Error;
};

/// (f(a2), g(b2)) did not match tau(f(a1), g(b1)).
class BijectionViolated : public Error {
 public:
  using Error::Error;
};

/// A corner's nearest planar lift is farther than 1/4 from the anchor corner.
class LiftInconsistent : public Error {
 public:
  using Error::Error;
};

}  // namespace peg
