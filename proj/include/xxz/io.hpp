#pragma once

#include <cstdint>
#include <string>

#include "xxz/common.hpp"

namespace xxz {

std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 1469598103934665603ULL);
std::string hex64(std::uint64_t v);
std::string hash_string(const std::string& s);

// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

// Atomic text write: temp file then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace xxz
