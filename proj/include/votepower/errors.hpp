#pragma once

#include <stdexcept>
#include <string>

namespace votepower {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An input violates a model invariant (duplicate id, quota out of range, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

// The requested backend cannot handle a game of this size.
class LimitError : public Error {
 public:
  using Error::Error;
};

// Malformed scenario text. The message carries line/column.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace votepower
