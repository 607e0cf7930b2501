#pragma once

#include <cstdint>

#include "holo/image.hpp"

namespace holo {

/// Physical simulation grid. Defaults match the reference recording setup:
/// 1000 x 1000 samples, 4 um pitch, 633 nm wavelength, 5 cm propagation.
struct OpticalConfig {
  int pixels_x = 1000;
  int pixels_y = 1000;
  double pitch = 4e-6;         // meters per sample
  double wavelength = 633e-9;  // meters
  double distance_z = 0.05;    // meters
  bool pad = false;            // zero-pad transforms to twice the grid

  void validate() const;
};

/// Modulates a normalized image with an independent per-pixel random phase,
/// uniform on [0, 1) turns. Rejects images with values outside [0, 1].
ComplexField random_phase_object(const Image& image, const OpticalConfig& config,
                                 std::uint64_t seed);

/// Angular-spectrum propagation over a signed distance z. Exactly inverted by
/// propagating the result over -z; evanescent components are zeroed. With
/// pad = true the field is embedded centered in a doubled grid first.
ComplexField propagate(const ComplexField& field, double z, bool pad = false);

/// Amplitude hologram |O + R|^2 with an on-axis unit-amplitude plane
/// reference wave (R = 1 everywhere).
Image record_hologram(const ComplexField& object);

/// Intensity of the hologram back-propagated over the recording distance.
/// Direct light, conjugate light and speckle are left in; nothing is
/// suppressed or rescaled.
Image reconstruct(const Image& hologram, const OpticalConfig& config);

}  // namespace holo
