#include "holo/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <png.h>

namespace holo {

namespace {

std::uint16_t quantize16(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<std::uint16_t>(std::lround(clamped * 65535.0));
}

// --- PGM ------------------------------------------------------------------

// Reads one whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
  std::string token;
  int ch = in.get();
  while (in) {
    if (std::isspace(ch)) {
      ch = in.get();
    } else if (ch == '#') {
      while (in && ch != '\n') ch = in.get();
    } else {
      break;
    }
  }
  while (in && !std::isspace(ch)) {
    token.push_back(static_cast<char>(ch));
    ch = in.get();
  }
  return token;
}

long parse_header_number(const std::string& token, const char* what) {
  if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos)
    throw std::runtime_error(std::string("invalid PGM header: bad ") + what);
  return std::stol(token);
}

Image read_pgm(std::istream& in, const std::string& name) {
  const std::string magic = pgm_token(in);
  if (magic != "P5") throw std::runtime_error("unsupported PGM variant in " + name);
  const long width = parse_header_number(pgm_token(in), "width");
  const long height = parse_header_number(pgm_token(in), "height");
  const long maxval = parse_header_number(pgm_token(in), "maxval");
  if (width <= 0 || height <= 0) throw std::runtime_error("zero-size image: " + name);
  if (maxval <= 0 || maxval > 65535)
    throw std::runtime_error("unsupported PGM maxval in " + name);
  // pgm_token consumed exactly one whitespace byte after the maxval.

  Image image(static_cast<int>(width), static_cast<int>(height));
  const std::size_t n = image.pixel_count();
  const int bytes_per_sample = maxval < 256 ? 1 : 2;
  std::vector<unsigned char> raw(n * bytes_per_sample);
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (static_cast<std::size_t>(in.gcount()) != raw.size())
    throw std::runtime_error("truncated PGM data in " + name);

  const double scale = 1.0 / static_cast<double>(maxval);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned sample = bytes_per_sample == 1
                                ? raw[i]
                                : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
    image.data[i] = static_cast<double>(sample) * scale;
  }
  return image;
}

// --- PNG ------------------------------------------------------------------

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image read_png(const std::filesystem::path& path) {
  FilePtr file(std::fopen(path.string().c_str(), "rb"));
  if (!file) throw std::runtime_error("cannot open image file: " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw std::runtime_error("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("failed to decode PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);

  if (width == 0 || height == 0) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("zero-size image: " + path.string());
  }

  // Normalize everything to single-channel gray, 8 or 16 bit.
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color_type == PNG_COLOR_TYPE_RGB || color_type == PNG_COLOR_TYPE_RGB_ALPHA ||
      color_type == PNG_COLOR_TYPE_PALETTE)
    png_set_rgb_to_gray_fixed(png, 1 /* silently */, -1, -1);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  bit_depth = png_get_bit_depth(png, info);
  if (png_get_channels(png, info) != 1 || (bit_depth != 8 && bit_depth != 16)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("unsupported PNG layout in " + path.string());
  }

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  std::vector<unsigned char> raw(rowbytes * height);
  std::vector<png_bytep> rows(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = raw.data() + y * rowbytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image image(static_cast<int>(width), static_cast<int>(height));
  const double scale = bit_depth == 8 ? 1.0 / 255.0 : 1.0 / 65535.0;
  for (png_uint_32 y = 0; y < height; ++y) {
    const unsigned char* row = raw.data() + y * rowbytes;
    for (png_uint_32 x = 0; x < width; ++x) {
      const unsigned sample = bit_depth == 8
                                  ? row[x]
                                  : (static_cast<unsigned>(row[2 * x]) << 8) | row[2 * x + 1];
      image.at(static_cast<int>(x), static_cast<int>(y)) =
          static_cast<double>(sample) * scale;
    }
  }
  return image;
}

}  // namespace

Image read_image(const std::filesystem::path& path) {
  std::ifstream probe(path, std::ios::binary);
  if (!probe) throw std::runtime_error("cannot open image file: " + path.string());
  unsigned char signature[8] = {};
  probe.read(reinterpret_cast<char*>(signature), 8);
  const std::streamsize got = probe.gcount();
  probe.close();

  if (got >= 2 && signature[0] == 'P' && signature[1] == '5') {
    std::ifstream in(path, std::ios::binary);
    return read_pgm(in, path.string());
  }
  static const unsigned char png_magic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (got >= 8 && std::equal(png_magic, png_magic + 8, signature)) return read_png(path);
  throw std::runtime_error("unsupported image format: " + path.string());
}

void write_pgm16(const Image& image, const std::filesystem::path& path) {
  image.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open image file for writing: " + path.string());

  out << "P5\n" << image.width << " " << image.height << "\n65535\n";
  std::vector<unsigned char> raw(image.pixel_count() * 2);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    const std::uint16_t sample = quantize16(image.data[i]);
    raw[2 * i] = static_cast<unsigned char>(sample >> 8);  // big-endian
    raw[2 * i + 1] = static_cast<unsigned char>(sample & 0xff);
  }
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("failed writing image file: " + path.string());
}

void write_png16(const Image& image, const std::filesystem::path& path) {
  image.validate();
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw std::runtime_error("cannot open image file for writing: " + path.string());

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) throw std::runtime_error("libpng initialization failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("libpng initialization failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed to encode PNG: " + path.string());
  }

  png_init_io(png, file.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width),
               static_cast<png_uint_32>(image.height), 16, PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);

  std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 2);
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      const std::uint16_t sample = quantize16(image.at(x, y));
      row[2 * static_cast<std::size_t>(x)] = static_cast<unsigned char>(sample >> 8);
      row[2 * static_cast<std::size_t>(x) + 1] = static_cast<unsigned char>(sample & 0xff);
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

void write_image(const Image& image, const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".pgm") {
    write_pgm16(image, path);
  } else if (ext == ".png") {
    write_png16(image, path);
  } else {
    throw std::runtime_error("unsupported output extension: " + path.string());
  }
}

}  // namespace holo
