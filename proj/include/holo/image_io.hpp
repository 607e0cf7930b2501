#pragma once

#include <filesystem>

#include "holo/image.hpp"

namespace holo {

/// Reads an 8- or 16-bit grayscale image, either binary PGM ("P5") or PNG.
/// Samples map linearly to [0, 1]. The format is detected from the file
/// contents, not the extension.
Image read_image(const std::filesystem::path& path);

/// Binary PGM, 16-bit big-endian samples, maxval 65535. Values are clamped
/// to [0, 1] and mapped linearly.
void write_pgm16(const Image& image, const std::filesystem::path& path);

/// 16-bit grayscale PNG with the same sample mapping as write_pgm16.
void write_png16(const Image& image, const std::filesystem::path& path);

/// Dispatches on the extension: ".pgm" or ".png".
void write_image(const Image& image, const std::filesystem::path& path);

}  // namespace holo
