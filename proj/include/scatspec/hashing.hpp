#pragma once
//! SHA-256 content hashing for cache keys and potential identity.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scatspec {

class Sha256 {
public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& bytes(const void* data, std::size_t size);
  Sha256& text(std::string_view s);
  Sha256& f64(double v);
  Sha256& f64s(const std::vector<double>& v);
  Sha256& u64(std::uint64_t v);
  std::string hex();

private:
  void* ctx_;
};

} // namespace scatspec
