#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>

namespace stochnewton {

// FNV-1a, 64-bit: content fingerprints for manifests and grid metadata.
inline std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64_append(std::uint64_t h, const void* data,
                                    std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path);

}  // namespace stochnewton
