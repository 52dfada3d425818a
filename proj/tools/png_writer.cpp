#include "png_writer.hpp"
#include "report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <vector>

namespace cavmode::cli {

namespace {

std::uint32_t crc32(const std::uint8_t* data, std::size_t len,
                    std::uint32_t crc = 0xFFFFFFFFu) {
  static std::uint32_t table[256];
  static bool init = false;
  if (!init) {
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      table[i] = c;
    }
    init = true;
  }
  for (std::size_t i = 0; i < len; ++i)
    crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  return crc;
}

void push_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
  v.push_back(x >> 24);
  v.push_back((x >> 16) & 0xFF);
  v.push_back((x >> 8) & 0xFF);
  v.push_back(x & 0xFF);
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& payload) {
  push_u32(out, static_cast<std::uint32_t>(payload.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), payload.begin(), payload.end());
  out.insert(out.end(), body.begin(), body.end());
  push_u32(out, crc32(body.data(), body.size()) ^ 0xFFFFFFFFu);
}

// zlib stream with stored deflate blocks (no compression, no dependencies)
std::vector<std::uint8_t> zlib_store(const std::vector<std::uint8_t>& raw) {
  std::vector<std::uint8_t> z;
  z.push_back(0x78);
  z.push_back(0x01);
  std::size_t pos = 0;
  while (pos < raw.size() || raw.empty()) {
    const std::size_t n = std::min<std::size_t>(65535, raw.size() - pos);
    const bool final = pos + n == raw.size();
    z.push_back(final ? 1 : 0);
    z.push_back(n & 0xFF);
    z.push_back((n >> 8) & 0xFF);
    z.push_back(~n & 0xFF);
    z.push_back((~n >> 8) & 0xFF);
    z.insert(z.end(), raw.begin() + pos, raw.begin() + pos + n);
    pos += n;
    if (raw.empty()) break;
  }
  std::uint32_t a = 1, b = 0;
  for (auto byte : raw) {
    a = (a + byte) % 65521;
    b = (b + a) % 65521;
  }
  push_u32(z, (b << 16) | a);
  return z;
}

// compact perceptual-ish dark-to-bright ramp
std::array<std::uint8_t, 3> colormap(double x) {
  static const double stops[6][3] = {{0, 0, 4},       {45, 17, 90},
                                     {114, 31, 129},  {188, 55, 84},
                                     {244, 120, 25},  {252, 255, 164}};
  x = std::clamp(x, 0.0, 1.0) * 5;
  const int i = std::min(4, static_cast<int>(x));
  const double f = x - i;
  std::array<std::uint8_t, 3> c;
  for (int k = 0; k < 3; ++k)
    c[k] = static_cast<std::uint8_t>(
        std::lround(stops[i][k] + f * (stops[i + 1][k] - stops[i][k])));
  return c;
}

} // namespace

void write_heatmap_png(const std::filesystem::path& path,
                       const Eigen::MatrixXd& magnitudes, int scale) {
  const int rows = static_cast<int>(magnitudes.rows());
  const int cols = static_cast<int>(magnitudes.cols());
  scale = std::max(1, std::min(scale, 2048 / std::max(rows, cols) + 1));
  const int width = cols * scale, height = rows * scale;
  const double peak = std::max(magnitudes.maxCoeff(), 1e-300);

  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (1 + 3 * width));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0); // filter: none
    const int r = rows - 1 - y / scale; // first matrix row at the bottom
    for (int x = 0; x < width; ++x) {
      const auto c = colormap(magnitudes(r, x / scale) / peak);
      raw.insert(raw.end(), c.begin(), c.end());
    }
  }

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
  std::vector<std::uint8_t> ihdr;
  push_u32(ihdr, width);
  push_u32(ihdr, height);
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  push_chunk(png, "IHDR", ihdr);
  push_chunk(png, "IDAT", zlib_store(raw));
  push_chunk(png, "IEND", {});

  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  std::fwrite(png.data(), 1, png.size(), f);
  std::fclose(f);
}

} // namespace cavmode::cli
