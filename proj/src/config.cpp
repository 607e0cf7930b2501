#include "holo/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace holo {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(int line_no, const std::string& message) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " + message);
}

long long to_int(const std::string& value, int line_no) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    fail(line_no, "expected an integer, got '" + value + "'");
  return out;
}

std::uint64_t to_u64(const std::string& value, int line_no) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    fail(line_no, "expected an unsigned integer, got '" + value + "'");
  return out;
}

double to_double(const std::string& value, int line_no) {
  try {
    std::size_t consumed = 0;
    const double out = std::stod(value, &consumed);
    if (consumed != value.size()) throw std::invalid_argument("");
    return out;
  } catch (const std::exception&) {
    fail(line_no, "expected a number, got '" + value + "'");
  }
}

bool to_bool(const std::string& value, int line_no) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  fail(line_no, "expected true/false, got '" + value + "'");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

long long ExperimentConfig::subpatterns_per_image() const {
  return (static_cast<long long>(optical.pixels_x) / tile_px) *
         (static_cast<long long>(optical.pixels_y) / tile_px);
}

long long ExperimentConfig::total_subpatterns(int n_images) const {
  return static_cast<long long>(n_images) * subpatterns_per_image();
}

void ExperimentConfig::validate() const {
  optical.validate();
  if (page.blocks_x <= 0 || page.blocks_y <= 0 || page.block_px < 1)
    throw std::invalid_argument("page data block grid must be positive");
  if (page.blocks_x * page.block_px != optical.pixels_x ||
      page.blocks_y * page.block_px != optical.pixels_y)
    throw std::invalid_argument("block grid times block_px must equal the optical grid");
  if (tile_px < 1 || optical.pixels_x % tile_px != 0 || optical.pixels_y % tile_px != 0)
    throw std::invalid_argument("optical grid must be divisible by tile_px");
  if (train.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (!(train.dropout_rate >= 0.0) || !(train.dropout_rate < 1.0))
    throw std::invalid_argument("dropout_rate must lie in [0, 1)");
  if (train.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (train.hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (n_train_images < 1) throw std::invalid_argument("n_train_images must be >= 1");
  if (n_eval_images < 0) throw std::invalid_argument("n_eval_images must be >= 0");
  if (!(normalization_constant > 0.0))
    throw std::invalid_argument("normalization_constant must be positive");
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::set<std::string> seen;

  std::istringstream stream(text);
  std::string line;
  int line_no = 0;
  while (std::getline(stream, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (value.empty()) fail(line_no, "empty value for key '" + key + "'");
    if (!seen.insert(key).second) fail(line_no, "duplicate key '" + key + "'");

    if (key == "pixels_x") config.optical.pixels_x = static_cast<int>(to_int(value, line_no));
    else if (key == "pixels_y") config.optical.pixels_y = static_cast<int>(to_int(value, line_no));
    else if (key == "pitch") config.optical.pitch = to_double(value, line_no);
    else if (key == "wavelength") config.optical.wavelength = to_double(value, line_no);
    else if (key == "distance_z") config.optical.distance_z = to_double(value, line_no);
    else if (key == "pad") config.optical.pad = to_bool(value, line_no);
    else if (key == "blocks_x") config.page.blocks_x = static_cast<int>(to_int(value, line_no));
    else if (key == "blocks_y") config.page.blocks_y = static_cast<int>(to_int(value, line_no));
    else if (key == "block_px") config.page.block_px = static_cast<int>(to_int(value, line_no));
    else if (key == "tile_px") config.tile_px = static_cast<int>(to_int(value, line_no));
    else if (key == "batch_size") config.train.batch_size = static_cast<int>(to_int(value, line_no));
    else if (key == "dropout_rate") config.train.dropout_rate = to_double(value, line_no);
    else if (key == "epochs") config.train.epochs = static_cast<int>(to_int(value, line_no));
    else if (key == "hidden_units") config.train.hidden_units = static_cast<int>(to_int(value, line_no));
    else if (key == "adam_alpha") config.train.adam.alpha = to_double(value, line_no);
    else if (key == "adam_beta1") config.train.adam.beta1 = to_double(value, line_no);
    else if (key == "adam_beta2") config.train.adam.beta2 = to_double(value, line_no);
    else if (key == "adam_epsilon") config.train.adam.epsilon = to_double(value, line_no);
    else if (key == "n_train_images") config.n_train_images = static_cast<int>(to_int(value, line_no));
    else if (key == "n_eval_images") config.n_eval_images = static_cast<int>(to_int(value, line_no));
    else if (key == "normalization") {
      if (value == "per-image-max") config.normalization = Normalization::kPerImageMax;
      else if (value == "global-constant") config.normalization = Normalization::kGlobalConstant;
      else fail(line_no, "normalization must be 'per-image-max' or 'global-constant'");
    }
    else if (key == "normalization_constant") config.normalization_constant = to_double(value, line_no);
    else if (key == "seed") config.seed = to_u64(value, line_no);
    else fail(line_no, "unknown config key '" + key + "'");
  }

  config.validate();
  return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::string config_to_text(const ExperimentConfig& config) {
  std::ostringstream out;
  out << "pixels_x = " << config.optical.pixels_x << "\n";
  out << "pixels_y = " << config.optical.pixels_y << "\n";
  out << "pitch = " << format_double(config.optical.pitch) << "\n";
  out << "wavelength = " << format_double(config.optical.wavelength) << "\n";
  out << "distance_z = " << format_double(config.optical.distance_z) << "\n";
  out << "pad = " << (config.optical.pad ? "true" : "false") << "\n";
  out << "blocks_x = " << config.page.blocks_x << "\n";
  out << "blocks_y = " << config.page.blocks_y << "\n";
  out << "block_px = " << config.page.block_px << "\n";
  out << "tile_px = " << config.tile_px << "\n";
  out << "batch_size = " << config.train.batch_size << "\n";
  out << "dropout_rate = " << format_double(config.train.dropout_rate) << "\n";
  out << "epochs = " << config.train.epochs << "\n";
  out << "hidden_units = " << config.train.hidden_units << "\n";
  out << "adam_alpha = " << format_double(config.train.adam.alpha) << "\n";
  out << "adam_beta1 = " << format_double(config.train.adam.beta1) << "\n";
  out << "adam_beta2 = " << format_double(config.train.adam.beta2) << "\n";
  out << "adam_epsilon = " << format_double(config.train.adam.epsilon) << "\n";
  out << "n_train_images = " << config.n_train_images << "\n";
  out << "n_eval_images = " << config.n_eval_images << "\n";
  out << "normalization = "
      << (config.normalization == Normalization::kPerImageMax ? "per-image-max"
                                                              : "global-constant")
      << "\n";
  out << "normalization_constant = " << format_double(config.normalization_constant) << "\n";
  out << "seed = " << config.seed << "\n";
  return out.str();
}

}  // namespace holo
