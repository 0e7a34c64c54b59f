#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace stochnewton::png {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

// 8-bit indexed-color PNG, one palette entry per pixel value, row-major
// pixels starting at the top row.  Uses stored deflate blocks so the
// encoder has no external dependencies and output is byte-stable.
void write_indexed(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& pixels,
                   const std::vector<Rgb>& palette);

std::uint32_t crc32(const std::uint8_t* data, std::size_t len,
                    std::uint32_t seed = 0);

}  // namespace stochnewton::png
