#include "holo/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "holo/autoencoder.hpp"
#include "holo/image_io.hpp"
#include "holo/optics.hpp"
#include "holo/patterns.hpp"
#include "holo/rng.hpp"
#include "holo/tiling.hpp"

namespace holo {

namespace {

namespace fs = std::filesystem;

std::string numbered_name(const char* stem, int index, const char* ext = ".pgm") {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%04d%s", stem, index, ext);
  return buf;
}

std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

std::uint64_t page_seed_for(const ExperimentConfig& config, int index) {
  return config.seed + static_cast<std::uint64_t>(index);
}

std::uint64_t eval_page_seed_for(const ExperimentConfig& config, int index) {
  return config.seed + static_cast<std::uint64_t>(config.n_train_images) +
         static_cast<std::uint64_t>(index);
}

std::uint64_t phase_seed_for(std::uint64_t page_seed) { return mix_seed(page_seed); }

std::uint64_t train_seed_for(const ExperimentConfig& config) { return mix_seed(config.seed); }

void normalize_reconstruction(Image& reconstruction, const ExperimentConfig& config) {
  if (config.normalization == Normalization::kPerImageMax) {
    const double max = reconstruction.max_value();
    if (max > 0.0)
      for (double& v : reconstruction.data) v /= max;
  } else {
    for (double& v : reconstruction.data)
      v = std::clamp(v / config.normalization_constant, 0.0, 1.0);
  }
}

ImagePair simulate_pair(const ExperimentConfig& config, std::uint64_t page_seed,
                        std::uint64_t phase_seed) {
  PageDataSpec spec = config.page;
  spec.seed = page_seed;
  ImagePair pair;
  pair.original = generate_page_data(spec);

  const ComplexField object = random_phase_object(pair.original, config.optical, phase_seed);
  const ComplexField at_hologram =
      propagate(object, config.optical.distance_z, config.optical.pad);
  const Image hologram = record_hologram(at_hologram);
  pair.reconstruction = reconstruct(hologram, config.optical);
  normalize_reconstruction(pair.reconstruction, config);
  return pair;
}

Manifest gen_dataset(const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  fs::create_directories(out_dir);

  Manifest manifest;
  manifest.n_images = config.n_train_images;
  manifest.tile_px = config.tile_px;
  manifest.subpatterns = config.total_subpatterns(config.n_train_images);

  for (int i = 1; i <= config.n_train_images; ++i) {
    ManifestEntry entry;
    entry.page_seed = page_seed_for(config, i);
    entry.phase_seed = phase_seed_for(entry.page_seed);
    entry.original = numbered_name("orig", i);
    entry.reconstruction = numbered_name("recon", i);

    const ImagePair pair = simulate_pair(config, entry.page_seed, entry.phase_seed);
    write_pgm16(pair.original, out_dir / entry.original);
    write_pgm16(pair.reconstruction, out_dir / entry.reconstruction);
    manifest.entries.push_back(std::move(entry));
  }

  write_manifest(manifest, out_dir / "manifest.txt");
  return manifest;
}

void write_manifest(const Manifest& manifest, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << "# holorestore dataset manifest\n";
  out << "version 1\n";
  out << "images " << manifest.n_images << "\n";
  out << "tile_px " << manifest.tile_px << "\n";
  out << "subpatterns " << manifest.subpatterns << "\n";
  for (const auto& e : manifest.entries)
    out << "pair " << e.original << " " << e.reconstruction << " " << e.page_seed << " "
        << e.phase_seed << "\n";
  if (!out) throw std::runtime_error("failed writing manifest: " + path.string());
}

Manifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest: " + path.string());

  Manifest manifest;
  bool saw_version = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tag;
    fields >> tag;
    const auto expect = [&](bool ok) {
      if (!ok)
        throw std::runtime_error("corrupt manifest (line " + std::to_string(line_no) +
                                 "): " + path.string());
    };
    if (tag == "version") {
      int version = 0;
      expect(static_cast<bool>(fields >> version) && version == 1);
      saw_version = true;
    } else if (tag == "images") {
      expect(static_cast<bool>(fields >> manifest.n_images));
    } else if (tag == "tile_px") {
      expect(static_cast<bool>(fields >> manifest.tile_px));
    } else if (tag == "subpatterns") {
      expect(static_cast<bool>(fields >> manifest.subpatterns));
    } else if (tag == "pair") {
      ManifestEntry e;
      expect(static_cast<bool>(fields >> e.original >> e.reconstruction >> e.page_seed >>
                               e.phase_seed));
      manifest.entries.push_back(std::move(e));
    } else {
      expect(false);
    }
  }
  if (!saw_version || manifest.n_images != static_cast<int>(manifest.entries.size()))
    throw std::runtime_error("corrupt manifest: " + path.string());
  return manifest;
}

TrainArtifacts train_cmd(const ExperimentConfig& config, const fs::path& dataset_dir,
                         const fs::path& out_dir) {
  config.validate();
  const Manifest manifest = read_manifest(dataset_dir / "manifest.txt");
  if (manifest.tile_px != config.tile_px)
    throw std::runtime_error("dataset was generated with a different tile_px");

  std::vector<SubpatternPair> pairs;
  pairs.reserve(static_cast<std::size_t>(manifest.subpatterns));
  for (const auto& entry : manifest.entries) {
    const Image original = read_image(dataset_dir / entry.original);
    const Image reconstruction = read_image(dataset_dir / entry.reconstruction);
    SubpatternBatch clean = tile(original, config.tile_px);
    SubpatternBatch degraded = tile(reconstruction, config.tile_px);
    if (clean.vectors.size() != degraded.vectors.size())
      throw std::runtime_error("dataset pair has mismatched dimensions: " + entry.original);
    for (std::size_t k = 0; k < clean.vectors.size(); ++k) {
      SubpatternPair pair;
      pair.x = std::move(degraded.vectors[k]);
      pair.x_target = std::move(clean.vectors[k]);
      pairs.push_back(std::move(pair));
    }
  }

  TrainConfig train_config = config.train;
  train_config.seed = train_seed_for(config);
  const TrainResult result = train(pairs, train_config);

  fs::create_directories(out_dir);
  TrainArtifacts artifacts;
  artifacts.model_file = out_dir / "model.bin";
  artifacts.loss_csv = out_dir / "loss.csv";
  artifacts.loss_history = result.loss_history;

  save_model(result.params, artifacts.model_file);

  std::ofstream csv(artifacts.loss_csv);
  if (!csv) throw std::runtime_error("cannot write loss CSV: " + artifacts.loss_csv.string());
  csv << "epoch,mean_loss\n";
  for (std::size_t e = 0; e < result.loss_history.size(); ++e)
    csv << (e + 1) << "," << format_metric(result.loss_history[e]) << "\n";
  if (!csv) throw std::runtime_error("failed writing loss CSV");
  return artifacts;
}

void restore_cmd(const ExperimentConfig& config, const fs::path& model_file,
                 const fs::path& input_image, const fs::path& output_image,
                 const std::optional<fs::path>& reference,
                 const std::optional<fs::path>& diff_output) {
  const AeParams params = load_model(model_file);
  if (static_cast<long long>(config.tile_px) * config.tile_px != params.n_in)
    throw std::runtime_error("model input size does not match tile_px^2");

  const Image degraded = read_image(input_image);
  const Image restored = restore(params, degraded, config.tile_px);
  write_image(restored, output_image);

  if (reference.has_value()) {
    const Image ref = read_image(*reference);
    if (ref.width != restored.width || ref.height != restored.height)
      throw std::runtime_error("reference image dimensions do not match the input");
    Image diff(restored.width, restored.height);
    for (std::size_t i = 0; i < diff.data.size(); ++i)
      diff.data[i] = std::abs(restored.data[i] - ref.data[i]);
    fs::path diff_path;
    if (diff_output.has_value()) {
      diff_path = *diff_output;
    } else {
      diff_path = output_image;
      diff_path.replace_filename(output_image.stem().string() + "_diff" +
                                 output_image.extension().string());
    }
    write_image(diff, diff_path);
  }
}

double mean_subpattern_sse(const Image& a, const Image& b, int tile_px) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("mean_subpattern_sse: image dimensions differ");
  if (tile_px < 1 || a.width % tile_px != 0 || a.height % tile_px != 0)
    throw std::invalid_argument("mean_subpattern_sse: dimensions not divisible by tile_px");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    const double d = a.data[i] - b.data[i];
    sum += d * d;
  }
  const double n_tiles = static_cast<double>(a.width / tile_px) *
                         static_cast<double>(a.height / tile_px);
  return sum / n_tiles;
}

EvalReport evaluate_images(const Image& original, const Image& raw, const Image& restored,
                           int block_px, int tile_px) {
  EvalReport report;
  report.mse_raw = mean_subpattern_sse(original, raw, tile_px);
  report.mse_restored = mean_subpattern_sse(original, restored, tile_px);
  report.ber_raw = bit_error_rate(original, raw, block_px);
  report.ber_restored = bit_error_rate(original, restored, block_px);
  return report;
}

const char* const kEvalCsvHeader = "mse_raw,mse_restored,ber_raw,ber_restored";

std::string eval_report_text(const EvalReport& report) {
  std::ostringstream out;
  out << "mse_raw      " << format_metric(report.mse_raw) << "\n";
  out << "mse_restored " << format_metric(report.mse_restored) << "\n";
  out << "ber_raw      " << format_metric(report.ber_raw) << "\n";
  out << "ber_restored " << format_metric(report.ber_restored) << "\n";
  return out.str();
}

std::string eval_report_csv_line(const EvalReport& report) {
  std::ostringstream out;
  out << format_metric(report.mse_raw) << "," << format_metric(report.mse_restored) << ","
      << format_metric(report.ber_raw) << "," << format_metric(report.ber_restored);
  return out.str();
}

RunAllResult run_all(const ExperimentConfig& config, const fs::path& out_dir) {
  config.validate();
  fs::create_directories(out_dir);
  {
    std::ofstream echo(out_dir / "config_used.cfg");
    echo << config_to_text(config);
  }

  RunAllResult result;
  const fs::path dataset_dir = out_dir / "dataset";
  result.manifest = gen_dataset(config, dataset_dir);
  result.training = train_cmd(config, dataset_dir, out_dir);

  const AeParams params = load_model(result.training.model_file);
  const fs::path eval_dir = out_dir / "eval";
  fs::create_directories(eval_dir);

  const auto evaluate_pair = [&](const Image& original, const Image& raw,
                                 const std::string& stem) {
    const Image restored = restore(params, raw, config.tile_px);
    write_pgm16(restored, eval_dir / (stem + "_restored.pgm"));
    Image diff(restored.width, restored.height);
    for (std::size_t i = 0; i < diff.data.size(); ++i)
      diff.data[i] = std::abs(restored.data[i] - original.data[i]);
    write_pgm16(diff, eval_dir / (stem + "_diff.pgm"));
    return evaluate_images(original, raw, restored, config.page.block_px, config.tile_px);
  };

  // Train-set protocol: restore the first training image.
  {
    const Image original = read_image(dataset_dir / result.manifest.entries.front().original);
    const Image raw = read_image(dataset_dir / result.manifest.entries.front().reconstruction);
    result.reports.push_back({"train", 1, evaluate_pair(original, raw, "train_0001")});
  }

  // Held-out protocol: fresh page-data seeds never seen in training.
  for (int j = 1; j <= config.n_eval_images; ++j) {
    const std::uint64_t page_seed = eval_page_seed_for(config, j);
    const ImagePair pair = simulate_pair(config, page_seed, phase_seed_for(page_seed));
    const std::string stem = numbered_name("heldout", j, "");
    write_pgm16(pair.original, eval_dir / (stem + "_orig.pgm"));
    write_pgm16(pair.reconstruction, eval_dir / (stem + "_recon.pgm"));
    result.reports.push_back(
        {"held-out", j, evaluate_pair(pair.original, pair.reconstruction, stem)});
  }

  result.report_csv = out_dir / "report.csv";
  result.report_txt = out_dir / "report.txt";
  {
    std::ofstream csv(result.report_csv);
    csv << "set,index," << kEvalCsvHeader << "\n";
    for (const auto& row : result.reports)
      csv << row.set << "," << row.index << "," << eval_report_csv_line(row.report) << "\n";
  }
  {
    std::ofstream txt(result.report_txt);
    for (const auto& row : result.reports) {
      txt << "[" << row.set << " #" << row.index << "]\n"
          << eval_report_text(row.report) << "\n";
    }
  }
  return result;
}

}  // namespace holo
