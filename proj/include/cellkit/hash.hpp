#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace cellkit {

// 64-bit FNV-1a. Stable across platforms, used for cache keys, checksums
// and per-instance seed derivation.
inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

constexpr std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) noexcept {
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= kFnvPrime;
  }
  return h;
}

constexpr std::uint64_t fnv1a_word(std::uint64_t word, std::uint64_t h = kFnvOffset) noexcept {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
  return h;
}

inline std::uint64_t fnv1a_words(std::span<const std::uint64_t> words,
                                 std::uint64_t h = kFnvOffset) noexcept {
  for (auto w : words) h = fnv1a_word(w, h);
  return h;
}

}  // namespace cellkit
