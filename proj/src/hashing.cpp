#include "scatspec/hashing.hpp"

#include "scatspec/error.hpp"

#include <bit>
#include <cstring>
#include <openssl/evp.h>

namespace scatspec {

namespace {
EVP_MD_CTX* ctx_of(void* p) { return static_cast<EVP_MD_CTX*>(p); }

template <class T> void put_le(Sha256& h, T v) {
  unsigned char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i) std::swap(buf[i], buf[sizeof(T) - 1 - i]);
  }
  h.bytes(buf, sizeof(T));
}
} // namespace

Sha256::Sha256() : ctx_(EVP_MD_CTX_new()) {
  if (!ctx_ || EVP_DigestInit_ex(ctx_of(ctx_), EVP_sha256(), nullptr) != 1)
    fail(ErrorCode::io_error, "sha256: digest initialisation failed");
}

Sha256::~Sha256() { EVP_MD_CTX_free(ctx_of(ctx_)); }

Sha256& Sha256::bytes(const void* data, std::size_t size) {
  EVP_DigestUpdate(ctx_of(ctx_), data, size);
  return *this;
}

Sha256& Sha256::text(std::string_view s) {
  u64(s.size());
  return bytes(s.data(), s.size());
}

Sha256& Sha256::f64(double v) {
  put_le(*this, std::bit_cast<std::uint64_t>(v));
  return *this;
}

Sha256& Sha256::f64s(const std::vector<double>& v) {
  u64(v.size());
  for (double x : v) f64(x);
  return *this;
}

Sha256& Sha256::u64(std::uint64_t v) {
  put_le(*this, v);
  return *this;
}

std::string Sha256::hex() {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx_of(ctx_), md, &len);
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(digits[md[i] >> 4]);
    out.push_back(digits[md[i] & 15]);
  }
  return out;
}

} // namespace scatspec
