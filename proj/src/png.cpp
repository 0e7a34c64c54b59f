#include "stochnewton/png.hpp"

#include <fstream>

#include "stochnewton/errors.hpp"

namespace stochnewton::png {

namespace {

std::uint32_t crc_table_entry(std::uint32_t n) {
    std::uint32_t c = n;
    for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
    return c;
}

const std::uint32_t* crc_table() {
    static std::uint32_t table[256];
    static bool ready = false;
    if (!ready) {
        for (std::uint32_t n = 0; n < 256; ++n) table[n] = crc_table_entry(n);
        ready = true;
    }
    return table;
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::vector<std::uint8_t>& data) {
    put_be32(out, static_cast<std::uint32_t>(data.size()));
    std::size_t crc_start = out.size();
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(type[i]));
    out.insert(out.end(), data.begin(), data.end());
    std::uint32_t crc = crc32(out.data() + crc_start, out.size() - crc_start);
    put_be32(out, crc);
}

std::uint32_t adler32(const std::vector<std::uint8_t>& data) {
    std::uint32_t a = 1, b = 0;
    for (std::uint8_t byte : data) {
        a = (a + byte) % 65521u;
        b = (b + a) % 65521u;
    }
    return (b << 16) | a;
}

}  // namespace

std::uint32_t crc32(const std::uint8_t* data, std::size_t len, std::uint32_t seed) {
    const std::uint32_t* table = crc_table();
    std::uint32_t c = seed ^ 0xffffffffu;
    for (std::size_t i = 0; i < len; ++i)
        c = table[(c ^ data[i]) & 0xff] ^ (c >> 8);
    return c ^ 0xffffffffu;
}

void write_indexed(const std::string& path, int width, int height,
                   const std::vector<std::uint8_t>& pixels,
                   const std::vector<Rgb>& palette) {
    if (width <= 0 || height <= 0)
        throw BadConfig("png dimensions must be positive");
    if (pixels.size() != static_cast<std::size_t>(width) * height)
        throw BadConfig("png pixel buffer size mismatch");
    if (palette.empty() || palette.size() > 256)
        throw BadConfig("png palette must have 1..256 entries");

    std::vector<std::uint8_t> out{0x89, 'P', 'N', 'G', 0x0d, 0x0a, 0x1a, 0x0a};

    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(width));
    put_be32(ihdr, static_cast<std::uint32_t>(height));
    ihdr.push_back(8);  // bit depth
    ihdr.push_back(3);  // indexed color
    ihdr.push_back(0);  // deflate
    ihdr.push_back(0);  // adaptive filtering
    ihdr.push_back(0);  // no interlace
    append_chunk(out, "IHDR", ihdr);

    std::vector<std::uint8_t> plte;
    for (const Rgb& c : palette) {
        plte.push_back(c.r);
        plte.push_back(c.g);
        plte.push_back(c.b);
    }
    append_chunk(out, "PLTE", plte);

    // Raw scanlines: filter byte 0 + indexed pixels per row.
    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(height) * (width + 1));
    for (int y = 0; y < height; ++y) {
        raw.push_back(0);
        const std::uint8_t* row = pixels.data() + static_cast<std::size_t>(y) * width;
        raw.insert(raw.end(), row, row + width);
    }

    // zlib wrapper with stored deflate blocks.
    std::vector<std::uint8_t> idat{0x78, 0x01};
    std::size_t off = 0;
    while (off < raw.size()) {
        std::size_t n = std::min<std::size_t>(65535, raw.size() - off);
        bool final = off + n == raw.size();
        idat.push_back(final ? 1 : 0);
        idat.push_back(static_cast<std::uint8_t>(n & 0xff));
        idat.push_back(static_cast<std::uint8_t>(n >> 8));
        idat.push_back(static_cast<std::uint8_t>(~n & 0xff));
        idat.push_back(static_cast<std::uint8_t>((~n >> 8) & 0xff));
        idat.insert(idat.end(), raw.begin() + off, raw.begin() + off + n);
        off += n;
    }
    put_be32(idat, adler32(raw));
    append_chunk(out, "IDAT", idat);

    append_chunk(out, "IEND", {});

    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Error("cannot open " + path + " for writing");
    file.write(reinterpret_cast<const char*>(out.data()),
               static_cast<std::streamsize>(out.size()));
    if (!file) throw Error("short write to " + path);
}

}  // namespace stochnewton::png
