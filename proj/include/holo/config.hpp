#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "holo/autoencoder.hpp"
#include "holo/optics.hpp"
#include "holo/patterns.hpp"

namespace holo {

enum class Normalization {
  kPerImageMax,     // divide each reconstruction by its own maximum
  kGlobalConstant,  // divide by a fixed constant, then clamp to [0, 1]
};

/// Full experiment description. Each field maps one to one onto a key of the
/// line-oriented `key = value` config file; see parse_config_text.
struct ExperimentConfig {
  OpticalConfig optical;
  PageDataSpec page;  // page.seed is unused here; per-image seeds derive from `seed`
  int tile_px = 20;
  TrainConfig train;  // train.seed derives from `seed`
  int n_train_images = 19;
  int n_eval_images = 1;
  Normalization normalization = Normalization::kPerImageMax;
  double normalization_constant = 1.0;
  std::uint64_t seed = 1;

  long long subpatterns_per_image() const;
  long long total_subpatterns(int n_images) const;

  /// Checks the cross-field invariants: the block grid must cover the optical
  /// grid exactly and the optical grid must be divisible by tile_px.
  void validate() const;
};

/// Parses a config file. Lines are `key = value`; `#` starts a comment;
/// unknown or duplicate keys are errors.
ExperimentConfig parse_config_file(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text);

/// Serializes a config so that parse_config_text(config_to_text(c)) == c.
std::string config_to_text(const ExperimentConfig& config);

}  // namespace holo
