#pragma once

#include <stdexcept>
#include <string>

namespace cmklr {

/// Raised on any precondition violation, malformed input or numerical failure.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cmklr
