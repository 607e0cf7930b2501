#pragma once

#include <vector>

#include "holo/image.hpp"

namespace holo {

/// Vectorized N x N subpatterns of an image. Tiles are enumerated in
/// row-major tile order; pixels inside each tile are vectorized row-major.
struct SubpatternBatch {
  int tile_px = 0;
  int tiles_x = 0;
  int tiles_y = 0;
  std::vector<std::vector<double>> vectors;

  void validate() const;
};

/// One training sample: a degraded subpattern and its clean target.
struct SubpatternPair {
  std::vector<double> x;
  std::vector<double> x_target;
};

/// Splits an image into tile_px x tile_px subpatterns. The image dimensions
/// must be divisible by tile_px.
SubpatternBatch tile(const Image& image, int tile_px);

/// Reassembles a batch into the image it was tiled from; exact inverse of
/// tile for every conforming input.
Image untile(const SubpatternBatch& batch);

}  // namespace holo
