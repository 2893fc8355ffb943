#include "crisis/hash.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "crisis/error.hpp"

namespace crisis {

std::string hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(value));
  return std::string(buf);
}

std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw RuntimeError("cannot open file for hashing: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return fnv1a64(buffer.str());
}

}  // namespace crisis
