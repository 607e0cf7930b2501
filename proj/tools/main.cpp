#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "holo/config.hpp"
#include "holo/image_io.hpp"
#include "holo/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_out = true) {
  cmd->add_option("--config", opts.config_path, "experiment config file (key = value lines)");
  cmd->add_option("--seed", opts.seed, "override the config seed");
  if (with_out) cmd->add_option("--out", opts.out_dir, "output directory");
}

holo::ExperimentConfig load_config(const CommonOptions& opts) {
  holo::ExperimentConfig config;
  if (!opts.config_path.empty()) config = holo::parse_config_file(opts.config_path);
  if (opts.seed.has_value()) config.seed = *opts.seed;
  config.validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holorestore: hologram simulation and autoencoder restoration toolkit"};
  app.require_subcommand(1);

  CommonOptions gen_opts;
  CLI::App* gen = app.add_subcommand("gen-dataset",
                                     "simulate page-data holograms and write training pairs");
  add_common(gen, gen_opts);

  CommonOptions train_opts;
  std::string train_data_dir;
  CLI::App* train = app.add_subcommand("train", "train the autoencoder on a dataset");
  add_common(train, train_opts);
  train->add_option("--data", train_data_dir,
                    "dataset directory (defaults to the --out directory)");

  CommonOptions restore_opts;
  std::string model_path, input_path, output_path, reference_path, diff_path;
  CLI::App* restore = app.add_subcommand("restore", "restore one degraded image file");
  add_common(restore, restore_opts, /*with_out=*/false);
  restore->add_option("--model", model_path, "model file")->required();
  restore->add_option("--input", input_path, "degraded image file")->required();
  restore->add_option("--output", output_path, "restored image file (.pgm or .png)")
      ->required();
  restore->add_option("--reference", reference_path,
                      "clean reference; also writes an absolute-difference image");
  restore->add_option("--diff-output", diff_path, "path for the difference image");

  CommonOptions eval_opts;
  std::string original_path, raw_path, restored_path;
  CLI::App* evaluate = app.add_subcommand("evaluate",
                                          "score raw and restored images against an original");
  add_common(evaluate, eval_opts, /*with_out=*/false);
  evaluate->add_option("--original", original_path, "clean binary image")->required();
  evaluate->add_option("--raw", raw_path, "raw reconstruction")->required();
  evaluate->add_option("--restored", restored_path, "restored image")->required();

  CommonOptions all_opts;
  CLI::App* all = app.add_subcommand("run-all",
                                     "gen-dataset + train + restore + evaluate in one go");
  add_common(all, all_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      const auto config = load_config(gen_opts);
      const auto manifest = holo::gen_dataset(config, gen_opts.out_dir);
      std::cout << "wrote " << manifest.n_images << " pairs (" << manifest.subpatterns
                << " subpatterns) to " << gen_opts.out_dir << "\n";
    } else if (train->parsed()) {
      const auto config = load_config(train_opts);
      const fs::path data_dir =
          train_data_dir.empty() ? fs::path(train_opts.out_dir) : fs::path(train_data_dir);
      const auto artifacts = holo::train_cmd(config, data_dir, train_opts.out_dir);
      std::cout << "model: " << artifacts.model_file.string() << "\n"
                << "loss csv: " << artifacts.loss_csv.string() << "\n"
                << "final mean loss: " << artifacts.loss_history.back() << "\n";
    } else if (restore->parsed()) {
      const auto config = load_config(restore_opts);
      std::optional<fs::path> reference, diff;
      if (!reference_path.empty()) reference = reference_path;
      if (!diff_path.empty()) diff = diff_path;
      holo::restore_cmd(config, model_path, input_path, output_path, reference, diff);
      std::cout << "wrote " << output_path << "\n";
    } else if (evaluate->parsed()) {
      const auto config = load_config(eval_opts);
      const holo::Image original = holo::read_image(original_path);
      const holo::Image raw = holo::read_image(raw_path);
      const holo::Image restored_img = holo::read_image(restored_path);
      const auto report = holo::evaluate_images(original, raw, restored_img,
                                                config.page.block_px, config.tile_px);
      std::cout << holo::eval_report_text(report);
      std::cout << holo::kEvalCsvHeader << "\n" << holo::eval_report_csv_line(report) << "\n";
    } else if (all->parsed()) {
      const auto config = load_config(all_opts);
      const auto result = holo::run_all(config, all_opts.out_dir);
      for (const auto& row : result.reports) {
        std::cout << "[" << row.set << " #" << row.index << "] "
                  << "ber_raw=" << row.report.ber_raw
                  << " ber_restored=" << row.report.ber_restored
                  << " mse_raw=" << row.report.mse_raw
                  << " mse_restored=" << row.report.mse_restored << "\n";
      }
      std::cout << "report: " << result.report_csv.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "holorestore: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
