#pragma once

#include <stdexcept>
#include <string>

namespace tapesieve {

struct TapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moving the head left while it sits at position 0.
struct MoveBeforeOrigin : TapeError {
  MoveBeforeOrigin() : TapeError("head move left of tape origin") {}
};

// Chain values must be appended in strictly increasing order.
struct NonMonotonicAppend : TapeError {
  explicit NonMonotonicAppend(const std::string& what) : TapeError(what) {}
};

// Chain value larger than the table limit the chain was opened with.
struct RangeExceeded : TapeError {
  explicit RangeExceeded(const std::string& what) : TapeError(what) {}
};

// Chain bitstream violates the section/element grammar.
struct MalformedStream : TapeError {
  explicit MalformedStream(const std::string& what) : TapeError(what) {}
};

// Two merge inputs produced the same value; inputs must be disjoint.
struct DuplicateValue : TapeError {
  explicit DuplicateValue(const std::string& what) : TapeError(what) {}
};

// Merge inputs with different section geometry.
struct GeometryMismatch : TapeError {
  GeometryMismatch() : TapeError("chains have different section geometry") {}
};

// A decoded list entry points past the end of the indicator table.
struct ValueOutOfRange : TapeError {
  explicit ValueOutOfRange(const std::string& what) : TapeError(what) {}
};

}  // namespace tapesieve
