#include "spns/hash.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "spns/errors.hpp"

namespace spns {

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  require(EVP_Digest(bytes.data(), bytes.size(), digest.data(), &length, EVP_sha256(), nullptr) == 1,
          ErrorKind::io, "SHA-256 digest failed");
  std::string out;
  out.reserve(2 * length);
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

}  // namespace spns
