#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace splforge {

inline constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ULL;
inline constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

/// FNV-1a 64 over the raw bytes. Repository ids depend on this staying bit-exact.
constexpr std::uint64_t content_hash(std::string_view bytes) noexcept {
    std::uint64_t h = kFnvOffsetBasis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

/// Lower-case, zero-padded 16 digit hex.
std::string to_hex16(std::uint64_t value);

} // namespace splforge
