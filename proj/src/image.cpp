#include "holo/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace holo {

Image::Image(int w, int h, double fill)
    : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {
  if (w <= 0 || h <= 0) throw std::invalid_argument("Image dimensions must be positive");
}

double Image::max_value() const {
  if (data.empty()) return 0.0;
  return *std::max_element(data.begin(), data.end());
}

void Image::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("Image dimensions must be positive");
  if (data.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("Image payload size does not match dimensions");
  for (double v : data) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("Image samples must be finite and non-negative");
  }
}

ComplexField::ComplexField(int w, int h, double pitch_, double wavelength_)
    : width(w), height(h), pitch(pitch_), wavelength(wavelength_),
      data(static_cast<std::size_t>(w) * h) {
  validate();
}

double ComplexField::total_energy() const {
  double sum = 0.0;
  for (const auto& v : data) sum += std::norm(v);
  return sum;
}

void ComplexField::validate() const {
  if (width <= 0 || height <= 0)
    throw std::invalid_argument("ComplexField dimensions must be positive");
  if (!(pitch > 0.0) || !(wavelength > 0.0))
    throw std::invalid_argument("ComplexField pitch and wavelength must be positive");
  if (data.size() != static_cast<std::size_t>(width) * height)
    throw std::invalid_argument("ComplexField payload size does not match dimensions");
}

}  // namespace holo
