#include <voxpose/png.hpp>

#include <zlib.h>

#include <cstdint>
#include <fstream>
#include <vector>

#include <voxpose/errors.hpp>

namespace voxpose {

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t x) {
  out.push_back(static_cast<std::uint8_t>(x >> 24));
  out.push_back(static_cast<std::uint8_t>(x >> 16));
  out.push_back(static_cast<std::uint8_t>(x >> 8));
  out.push_back(static_cast<std::uint8_t>(x));
}

void append_chunk(std::vector<std::uint8_t>& out, const char type[4],
                  const std::uint8_t* data, std::size_t len) {
  put_u32_be(out, static_cast<std::uint32_t>(len));
  const std::size_t type_pos = out.size();
  out.insert(out.end(), type, type + 4);
  if (len > 0) out.insert(out.end(), data, data + len);
  std::uint32_t crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, out.data() + type_pos, static_cast<uInt>(4 + len));
  put_u32_be(out, crc);
}

std::uint8_t quantize(float v) {
  const float c = v < 0.0f ? 0.0f : (v > 1.0f ? 1.0f : v);
  return static_cast<std::uint8_t>(c * 255.0f + 0.5f);
}

}  // namespace

void write_png(const std::filesystem::path& path, const Image& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw IoError("write_png: empty image");
  }

  // Scanlines with filter byte 0 (none) in front of each row.
  const std::size_t stride = 1 + 3ull * img.width;
  std::vector<std::uint8_t> raw(stride * img.height);
  for (int y = 0; y < img.height; ++y) {
    std::uint8_t* row = raw.data() + stride * y;
    row[0] = 0;
    for (int x = 0; x < img.width; ++x) {
      const Color c = img.at(x, y);
      row[1 + 3 * x] = quantize(c[0]);
      row[2 + 3 * x] = quantize(c[1]);
      row[3 + 3 * x] = quantize(c[2]);
    }
  }

  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> comp(comp_len);
  if (compress2(comp.data(), &comp_len, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK) {
    throw IoError("write_png: deflate failed");
  }
  comp.resize(comp_len);

  std::vector<std::uint8_t> out;
  const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.insert(out.end(), sig, sig + 8);

  std::vector<std::uint8_t> ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(img.width));
  put_u32_be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type: truecolor
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter
  ihdr.push_back(0);   // interlace
  append_chunk(out, "IHDR", ihdr.data(), ihdr.size());
  append_chunk(out, "IDAT", comp.data(), comp.size());
  append_chunk(out, "IEND", nullptr, 0);

  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("write_png: cannot open " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write_png: write failed for " + path.string());
}

}  // namespace voxpose
