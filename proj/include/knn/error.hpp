#pragma once

#include <stdexcept>
#include <string>

namespace knn {

// Malformed input text (CLI exit code 2).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Well-formed input outside an operation's domain (CLI exit code 3).
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace knn
