#pragma once

#include <stdexcept>
#include <string>

namespace policygame {

// Bad input: out-of-range parameters, malformed files, violated preconditions.
// The CLI maps this to exit status 1; every other exception maps to 2.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace policygame
