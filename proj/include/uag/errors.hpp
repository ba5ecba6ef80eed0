#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace uag {

// Bad documents, malformed text, or violated operation preconditions.
class InvalidInput : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Parse failure with a byte offset into the offending text.
class ParseError : public InvalidInput {
public:
  ParseError(const std::string& msg, std::size_t pos)
      : InvalidInput(msg + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

// A configured resource bound (universe size, term count) was exceeded.
class BoundExceeded : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Operations that require a non-empty algebraic set.
class EmptyAlgebraicSet : public InvalidInput {
public:
  using InvalidInput::InvalidInput;
};

// Internal consistency assertion failed; always a defect, never user error.
class InternalDefect : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

inline void internal_check(bool cond, const char* msg) {
  if (!cond) throw InternalDefect(msg);
}

}  // namespace uag
