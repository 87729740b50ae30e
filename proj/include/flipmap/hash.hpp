#pragma once

#include <string>
#include <string_view>

namespace flipmap::hash {

// SHA-256 of `data` as a lowercase hex string.
std::string sha256_hex(std::string_view data);

}  // namespace flipmap::hash
