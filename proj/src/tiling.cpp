#include "holo/tiling.hpp"

#include <stdexcept>

namespace holo {

void SubpatternBatch::validate() const {
  if (tile_px <= 0 || tiles_x <= 0 || tiles_y <= 0)
    throw std::invalid_argument("SubpatternBatch dimensions must be positive");
  if (vectors.size() != static_cast<std::size_t>(tiles_x) * tiles_y)
    throw std::invalid_argument("SubpatternBatch vector count does not match tile grid");
  const std::size_t n = static_cast<std::size_t>(tile_px) * tile_px;
  for (const auto& v : vectors) {
    if (v.size() != n)
      throw std::invalid_argument("SubpatternBatch vector has wrong length");
  }
}

SubpatternBatch tile(const Image& image, int tile_px) {
  if (tile_px <= 0) throw std::invalid_argument("tile size must be positive");
  if (image.width <= 0 || image.height <= 0)
    throw std::invalid_argument("cannot tile an empty image");
  if (image.width % tile_px != 0 || image.height % tile_px != 0)
    throw std::invalid_argument("image dimensions must be divisible by the tile size");

  SubpatternBatch batch;
  batch.tile_px = tile_px;
  batch.tiles_x = image.width / tile_px;
  batch.tiles_y = image.height / tile_px;
  batch.vectors.reserve(static_cast<std::size_t>(batch.tiles_x) * batch.tiles_y);

  for (int ty = 0; ty < batch.tiles_y; ++ty) {
    for (int tx = 0; tx < batch.tiles_x; ++tx) {
      std::vector<double> v(static_cast<std::size_t>(tile_px) * tile_px);
      for (int py = 0; py < tile_px; ++py) {
        for (int px = 0; px < tile_px; ++px) {
          v[static_cast<std::size_t>(py) * tile_px + px] =
              image.at(tx * tile_px + px, ty * tile_px + py);
        }
      }
      batch.vectors.push_back(std::move(v));
    }
  }
  return batch;
}

Image untile(const SubpatternBatch& batch) {
  batch.validate();

  Image image(batch.tiles_x * batch.tile_px, batch.tiles_y * batch.tile_px);
  for (int ty = 0; ty < batch.tiles_y; ++ty) {
    for (int tx = 0; tx < batch.tiles_x; ++tx) {
      const auto& v = batch.vectors[static_cast<std::size_t>(ty) * batch.tiles_x + tx];
      for (int py = 0; py < batch.tile_px; ++py) {
        for (int px = 0; px < batch.tile_px; ++px) {
          image.at(tx * batch.tile_px + px, ty * batch.tile_px + py) =
              v[static_cast<std::size_t>(py) * batch.tile_px + px];
        }
      }
    }
  }
  return image;
}

}  // namespace holo
