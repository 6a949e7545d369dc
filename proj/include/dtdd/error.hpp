#pragma once

#include <stdexcept>
#include <string>

namespace dtdd {

// All recoverable failures in the library surface as this type; the message
// carries the stable error text that callers and tests match on.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace dtdd
