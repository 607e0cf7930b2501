#include "holo/patterns.hpp"

#include <stdexcept>

#include "holo/image_io.hpp"
#include "holo/rng.hpp"

namespace holo {

Image generate_page_data(const PageDataSpec& spec) {
  if (spec.blocks_x <= 0 || spec.blocks_y <= 0)
    throw std::invalid_argument("page data needs at least one block per axis");
  if (spec.block_px < 1) throw std::invalid_argument("block_px must be >= 1");

  Image image(spec.blocks_x * spec.block_px, spec.blocks_y * spec.block_px);
  Rng rng(spec.seed);
  for (int by = 0; by < spec.blocks_y; ++by) {
    for (int bx = 0; bx < spec.blocks_x; ++bx) {
      const double value = rng.coin_flip() ? 1.0 : 0.0;
      for (int py = 0; py < spec.block_px; ++py) {
        for (int px = 0; px < spec.block_px; ++px) {
          image.at(bx * spec.block_px + px, by * spec.block_px + py) = value;
        }
      }
    }
  }
  return image;
}

Image load_binary_image(const std::filesystem::path& path, double threshold) {
  if (!(threshold > 0.0) || !(threshold < 1.0))
    throw std::invalid_argument("threshold must lie in (0, 1)");
  Image gray = read_image(path);
  for (double& v : gray.data) v = (v >= threshold) ? 1.0 : 0.0;
  return gray;
}

double bit_error_rate(const Image& reference, const Image& candidate, int block_px) {
  reference.validate();
  candidate.validate();
  if (block_px < 1) throw std::invalid_argument("block_px must be >= 1");
  if (reference.width != candidate.width || reference.height != candidate.height)
    throw std::invalid_argument("bit_error_rate: image dimensions differ");
  if (reference.width % block_px != 0 || reference.height % block_px != 0)
    throw std::invalid_argument("bit_error_rate: dimensions not divisible by block_px");

  const int blocks_x = reference.width / block_px;
  const int blocks_y = reference.height / block_px;
  const double block_area = static_cast<double>(block_px) * block_px;

  long long errors = 0;
  for (int by = 0; by < blocks_y; ++by) {
    for (int bx = 0; bx < blocks_x; ++bx) {
      const double ref_value = reference.at(bx * block_px, by * block_px);
      if (ref_value != 0.0 && ref_value != 1.0)
        throw std::invalid_argument("bit_error_rate: reference is not binary");

      double sum = 0.0;
      for (int py = 0; py < block_px; ++py) {
        for (int px = 0; px < block_px; ++px) {
          if (reference.at(bx * block_px + px, by * block_px + py) != ref_value)
            throw std::invalid_argument("bit_error_rate: reference is not block-constant");
          sum += candidate.at(bx * block_px + px, by * block_px + py);
        }
      }
      const double bit = (sum / block_area >= 0.5) ? 1.0 : 0.0;
      if (bit != ref_value) ++errors;
    }
  }
  return static_cast<double>(errors) / (static_cast<double>(blocks_x) * blocks_y);
}

}  // namespace holo
