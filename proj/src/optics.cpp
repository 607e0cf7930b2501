#include "holo/optics.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "holo/rng.hpp"

namespace holo {

namespace {

// FFTW plan creation/destruction is not thread safe; execution is.
std::mutex fftw_plan_mutex;

void fft2_inplace(std::vector<std::complex<double>>& buffer, int width, int height, int sign) {
  auto* raw = reinterpret_cast<fftw_complex*>(buffer.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_2d(height, width, raw, raw, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("FFTW failed to create a plan");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
}

// DFT frequency of a periodic grid: index k of n samples at the given pitch.
double dft_frequency(int index, int n, double pitch) {
  const int k = (index <= (n - 1) / 2) ? index : index - n;
  return static_cast<double>(k) / (static_cast<double>(n) * pitch);
}

ComplexField propagate_periodic(const ComplexField& field, double z) {
  ComplexField out = field;
  fft2_inplace(out.data, out.width, out.height, FFTW_FORWARD);

  const double inv_lambda_sq = 1.0 / (field.wavelength * field.wavelength);
  const double two_pi = 2.0 * std::numbers::pi;

  for (int ky = 0; ky < out.height; ++ky) {
    const double fy = dft_frequency(ky, out.height, out.pitch);
    for (int kx = 0; kx < out.width; ++kx) {
      const double fx = dft_frequency(kx, out.width, out.pitch);
      const double argument = inv_lambda_sq - fx * fx - fy * fy;
      if (argument < 0.0) {
        out.at(kx, ky) = 0.0;  // evanescent; does not propagate
      } else {
        out.at(kx, ky) *= std::polar(1.0, two_pi * z * std::sqrt(argument));
      }
    }
  }

  fft2_inplace(out.data, out.width, out.height, FFTW_BACKWARD);
  const double scale = 1.0 / (static_cast<double>(out.width) * out.height);
  for (auto& v : out.data) v *= scale;
  return out;
}

}  // namespace

void OpticalConfig::validate() const {
  if (pixels_x <= 0 || pixels_y <= 0)
    throw std::invalid_argument("optical grid dimensions must be positive");
  if (!(pitch > 0.0) || !(wavelength > 0.0) || !(distance_z > 0.0))
    throw std::invalid_argument("optical physical quantities must be positive");
}

ComplexField random_phase_object(const Image& image, const OpticalConfig& config,
                                 std::uint64_t seed) {
  image.validate();
  config.validate();
  if (image.width != config.pixels_x || image.height != config.pixels_y)
    throw std::invalid_argument("image dimensions do not match the optical grid");

  ComplexField field(image.width, image.height, config.pitch, config.wavelength);
  Rng rng(seed);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const double v = image.data[i];
    if (v > 1.0)
      throw std::invalid_argument("random_phase_object expects values in [0, 1]");
    field.data[i] = v * std::polar(1.0, two_pi * rng.uniform01());
  }
  return field;
}

ComplexField propagate(const ComplexField& field, double z, bool pad) {
  field.validate();
  if (!pad) return propagate_periodic(field, z);

  // Embed centered in a doubled grid, propagate, crop back.
  ComplexField padded(2 * field.width, 2 * field.height, field.pitch, field.wavelength);
  const int off_x = field.width / 2;
  const int off_y = field.height / 2;
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x)
      padded.at(x + off_x, y + off_y) = field.at(x, y);

  ComplexField propagated = propagate_periodic(padded, z);

  ComplexField out(field.width, field.height, field.pitch, field.wavelength);
  for (int y = 0; y < field.height; ++y)
    for (int x = 0; x < field.width; ++x)
      out.at(x, y) = propagated.at(x + off_x, y + off_y);
  return out;
}

Image record_hologram(const ComplexField& object) {
  object.validate();
  Image hologram(object.width, object.height);
  for (std::size_t i = 0; i < object.data.size(); ++i)
    hologram.data[i] = std::norm(object.data[i] + 1.0);
  return hologram;
}

Image reconstruct(const Image& hologram, const OpticalConfig& config) {
  hologram.validate();
  config.validate();
  if (hologram.width != config.pixels_x || hologram.height != config.pixels_y)
    throw std::invalid_argument("hologram dimensions do not match the optical grid");

  ComplexField field(hologram.width, hologram.height, config.pitch, config.wavelength);
  for (std::size_t i = 0; i < hologram.data.size(); ++i)
    field.data[i] = hologram.data[i];

  const ComplexField back = propagate(field, -config.distance_z, config.pad);

  Image out(hologram.width, hologram.height);
  for (std::size_t i = 0; i < back.data.size(); ++i) out.data[i] = std::norm(back.data[i]);
  return out;
}

}  // namespace holo
