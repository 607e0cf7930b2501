#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace holo {

/// Row-major 2-D grid of real, non-negative samples. Holds page data,
/// hologram intensities and reconstructed intensities.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  Image() = default;
  Image(int w, int h, double fill = 0.0);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  std::size_t pixel_count() const { return data.size(); }
  double max_value() const;

  /// Throws std::invalid_argument if the payload size does not match the
  /// dimensions or any sample is negative or non-finite.
  void validate() const;
};

/// Sampled complex optical amplitude plus the physical grid metadata the
/// diffraction kernel needs.
struct ComplexField {
  int width = 0;
  int height = 0;
  double pitch = 0.0;       // meters per sample
  double wavelength = 0.0;  // meters

  std::vector<std::complex<double>> data;

  ComplexField() = default;
  ComplexField(int w, int h, double pitch, double wavelength);

  std::complex<double>& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const std::complex<double>& at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  std::size_t pixel_count() const { return data.size(); }

  /// Sum of |v|^2 over the grid.
  double total_energy() const;

  void validate() const;
};

}  // namespace holo
