#pragma once

#include <string>
#include <string_view>

namespace pgsnf {

/// Hex digest of the SHA-256 hash of the given bytes.
std::string sha256_hex(std::string_view data);

}  // namespace pgsnf
