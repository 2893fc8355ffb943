#pragma once

#include <stdexcept>
#include <string>

namespace crisis {

// Problems with inputs or configuration that the caller can fix.
// The CLI maps these to exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Failures while executing an otherwise valid request (I/O, divergence,
// adapter failures). The CLI maps these to exit code 2.
struct RuntimeError : std::runtime_error {
  explicit RuntimeError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace crisis
