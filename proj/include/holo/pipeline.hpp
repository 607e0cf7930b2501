#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "holo/config.hpp"
#include "holo/image.hpp"

namespace holo {

struct ManifestEntry {
  std::string original;        // paths relative to the manifest directory
  std::string reconstruction;
  std::uint64_t page_seed = 0;
  std::uint64_t phase_seed = 0;
};

struct Manifest {
  int n_images = 0;
  int tile_px = 0;
  long long subpatterns = 0;
  std::vector<ManifestEntry> entries;
};

// Seed streams derived from the experiment seed. Training image i (1-based)
// uses page seed `seed + i`; held-out image j uses `seed + n_train_images + j`.
std::uint64_t page_seed_for(const ExperimentConfig& config, int index);
std::uint64_t eval_page_seed_for(const ExperimentConfig& config, int index);
std::uint64_t phase_seed_for(std::uint64_t page_seed);
std::uint64_t train_seed_for(const ExperimentConfig& config);

/// One simulated training pair: clean page data and the normalized
/// reconstruction of its hologram.
struct ImagePair {
  Image original;
  Image reconstruction;
};

ImagePair simulate_pair(const ExperimentConfig& config, std::uint64_t page_seed,
                        std::uint64_t phase_seed);

/// Applies the configured normalization in place.
void normalize_reconstruction(Image& reconstruction, const ExperimentConfig& config);

/// Generates n_train_images pairs, writes them as 16-bit PGM files plus a
/// manifest into out_dir, and returns the manifest.
Manifest gen_dataset(const ExperimentConfig& config, const std::filesystem::path& out_dir);

void write_manifest(const Manifest& manifest, const std::filesystem::path& path);
Manifest read_manifest(const std::filesystem::path& path);

struct TrainArtifacts {
  std::filesystem::path model_file;
  std::filesystem::path loss_csv;
  std::vector<double> loss_history;
};

/// Loads the dataset under dataset_dir (manifest.txt plus images), tiles it,
/// trains the autoencoder and writes model.bin and loss.csv into out_dir.
TrainArtifacts train_cmd(const ExperimentConfig& config,
                         const std::filesystem::path& dataset_dir,
                         const std::filesystem::path& out_dir);

/// Restores one image file through a saved model. With a reference image an
/// absolute-difference image is written as well (to diff_output, or next to
/// output_image with a "_diff" suffix).
void restore_cmd(const ExperimentConfig& config, const std::filesystem::path& model_file,
                 const std::filesystem::path& input_image,
                 const std::filesystem::path& output_image,
                 const std::optional<std::filesystem::path>& reference = std::nullopt,
                 const std::optional<std::filesystem::path>& diff_output = std::nullopt);

struct EvalReport {
  double mse_raw = 0.0;       // mean per-subpattern squared error, original vs raw
  double mse_restored = 0.0;  // same, original vs restored
  double ber_raw = 0.0;
  double ber_restored = 0.0;
};

/// Mean over tile_px-sized subpatterns of the squared error against `a`.
double mean_subpattern_sse(const Image& a, const Image& b, int tile_px);

EvalReport evaluate_images(const Image& original, const Image& raw, const Image& restored,
                           int block_px, int tile_px);

std::string eval_report_text(const EvalReport& report);
extern const char* const kEvalCsvHeader;
std::string eval_report_csv_line(const EvalReport& report);

struct LabeledReport {
  std::string set;  // "train" or "held-out"
  int index = 0;
  EvalReport report;
};

struct RunAllResult {
  Manifest manifest;
  TrainArtifacts training;
  std::vector<LabeledReport> reports;
  std::filesystem::path report_csv;
  std::filesystem::path report_txt;
};

/// Full experiment: dataset generation, training, restoration of one
/// training image and of n_eval_images held-out images, and evaluation.
/// Every artifact is a deterministic function of (config, seed).
RunAllResult run_all(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace holo
