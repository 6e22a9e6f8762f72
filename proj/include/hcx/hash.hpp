#ifndef HCX_HASH_HPP
#define HCX_HASH_HPP

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace hcx {

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ v.size();
    for (int x : v) h = mix64(h ^ static_cast<std::uint32_t>(x));
    return static_cast<std::size_t>(h);
  }
};

/// Stable hash of one cell given its dimension and its vertex names in
/// lexicographic order. Summed over cells this gives an order-independent
/// complex fingerprint.
inline std::uint64_t cell_hash(int dim, const std::vector<std::string_view>& sorted_names) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (int i = 0; i < 4; ++i) feed(static_cast<unsigned char>((dim >> (8 * i)) & 0xff));
  for (auto name : sorted_names) {
    for (char c : name) feed(static_cast<unsigned char>(c));
    feed(0);
  }
  return mix64(h);
}

}  // namespace hcx

#endif  // HCX_HASH_HPP
