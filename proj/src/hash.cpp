#include "flipmap/hash.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>

namespace flipmap::hash {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr);
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    char buf[3];
    std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
    out.append(buf, 2);
  }
  return out;
}

}  // namespace flipmap::hash
