#pragma once

#include <stdexcept>
#include <string>

namespace flatcount {

// Input/domain problems: bad signatures, malformed polygons, invalid configs.
struct InputError : std::invalid_argument {
  explicit InputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A cross-check that must hold by theorem failed. Never expected at runtime.
struct VerificationError : std::logic_error {
  explicit VerificationError(const std::string& msg) : std::logic_error(msg) {}
};

// Search/enumeration exceeded its configured cap; results would be incomplete.
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace flatcount
