#pragma once

#include <stdexcept>
#include <string>

namespace vfr {

/// Validation or file-format failure in user-supplied data. The CLI maps
/// this to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vfr
