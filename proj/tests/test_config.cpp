#include <doctest.h>

#include <string>

#include "holo/config.hpp"

using holo::ExperimentConfig;
using holo::Normalization;

namespace {

// A consistent small experiment; every key present.
const char* kDeskText = R"(
# desk-scale experiment
pixels_x = 200
pixels_y = 200
pitch = 4e-6
wavelength = 633e-9
distance_z = 0.05
pad = false
blocks_x = 20
blocks_y = 20
block_px = 10
tile_px = 20
batch_size = 100
dropout_rate = 0.8
epochs = 40
hidden_units = 50
adam_alpha = 0.001
adam_beta1 = 0.9
adam_beta2 = 0.999
adam_epsilon = 1e-8
n_train_images = 19
n_eval_images = 1
normalization = per-image-max
normalization_constant = 1
seed = 1
)";

}  // namespace

TEST_CASE("config: parses a full desk-scale file") {
  const ExperimentConfig cfg = holo::parse_config_text(kDeskText);
  CHECK(cfg.optical.pixels_x == 200);
  CHECK(cfg.optical.pitch == 4e-6);
  CHECK(cfg.optical.wavelength == 633e-9);
  CHECK(cfg.optical.pad == false);
  CHECK(cfg.page.blocks_x == 20);
  CHECK(cfg.page.block_px == 10);
  CHECK(cfg.tile_px == 20);
  CHECK(cfg.train.batch_size == 100);
  CHECK(cfg.train.dropout_rate == 0.8);
  CHECK(cfg.train.epochs == 40);
  CHECK(cfg.train.hidden_units == 50);
  CHECK(cfg.train.adam.alpha == 0.001);
  CHECK(cfg.n_train_images == 19);
  CHECK(cfg.normalization == Normalization::kPerImageMax);
  CHECK(cfg.seed == 1);
  CHECK(cfg.subpatterns_per_image() == 100);
  CHECK(cfg.total_subpatterns(19) == 1900);
}

TEST_CASE("config: defaults reproduce the full-scale subpattern arithmetic") {
  ExperimentConfig cfg;  // 1000x1000, tile 20
  cfg.validate();
  CHECK(cfg.subpatterns_per_image() == 2500);
  CHECK(cfg.total_subpatterns(19) == 47500);
  CHECK(cfg.total_subpatterns(99) == 247500);
}

TEST_CASE("config: unknown and duplicate keys are errors") {
  CHECK_THROWS_WITH_AS(holo::parse_config_text("tile_pxx = 20\n"),
                       doctest::Contains("unknown config key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(holo::parse_config_text("seed = 1\nseed = 2\n"),
                       doctest::Contains("duplicate key"), std::runtime_error);
  CHECK_THROWS_AS(holo::parse_config_text("tile_px 20\n"), std::runtime_error);
  CHECK_THROWS_AS(holo::parse_config_text("tile_px = twenty\n"), std::runtime_error);
}

TEST_CASE("config: cross-field invariants are enforced") {
  std::string text(kDeskText);
  // Block grid no longer covers the optical grid.
  auto broken = text;
  broken.replace(broken.find("blocks_x = 20"), 13, "blocks_x = 21");
  CHECK_THROWS_AS(holo::parse_config_text(broken), std::invalid_argument);

  auto bad_tile = text;
  bad_tile.replace(bad_tile.find("tile_px = 20"), 12, "tile_px = 30");
  CHECK_THROWS_AS(holo::parse_config_text(bad_tile), std::invalid_argument);

  auto bad_rate = text;
  bad_rate.replace(bad_rate.find("dropout_rate = 0.8"), 18, "dropout_rate = 1.0");
  CHECK_THROWS_AS(holo::parse_config_text(bad_rate), std::invalid_argument);
}

TEST_CASE("config: round trips through config_to_text") {
  const ExperimentConfig cfg = holo::parse_config_text(kDeskText);
  const ExperimentConfig again = holo::parse_config_text(holo::config_to_text(cfg));
  CHECK(again.optical.pixels_x == cfg.optical.pixels_x);
  CHECK(again.optical.pitch == cfg.optical.pitch);
  CHECK(again.optical.wavelength == cfg.optical.wavelength);
  CHECK(again.train.dropout_rate == cfg.train.dropout_rate);
  CHECK(again.train.adam.epsilon == cfg.train.adam.epsilon);
  CHECK(again.normalization == cfg.normalization);
  CHECK(again.seed == cfg.seed);
}
