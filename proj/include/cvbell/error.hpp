#pragma once

#include <stdexcept>
#include <string>

namespace cvbell {

/// Raised when an operation's precondition or numerical contract is violated.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw Error(message);
}

}  // namespace cvbell
