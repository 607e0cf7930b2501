#pragma once

#include <cstdint>
#include <filesystem>

#include "holo/image.hpp"

namespace holo {

/// Layout of a random binary page-data image: a grid of uniformly colored
/// square blocks, each 0 or 1 by a fair coin.
struct PageDataSpec {
  int blocks_x = 100;
  int blocks_y = 100;
  int block_px = 10;
  std::uint64_t seed = 0;
};

Image generate_page_data(const PageDataSpec& spec);

/// Loads a grayscale image file (PGM "P5" or PNG, 8 or 16 bit) and thresholds
/// it to a binary image: 1 where the normalized gray is >= threshold, else 0.
Image load_binary_image(const std::filesystem::path& path, double threshold);

/// Fraction of block_px-sized blocks whose candidate block mean, thresholded
/// at 0.5, disagrees with the block-constant binary reference.
double bit_error_rate(const Image& reference, const Image& candidate, int block_px);

}  // namespace holo
