#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <Eigen/Dense>

#include "holo/image.hpp"
#include "holo/tiling.hpp"

namespace holo {

/// Weights and biases of the single-hidden-layer autoencoder:
/// o = relu(w_dec * relu(w_enc * x + b_enc) + b_dec).
struct AeParams {
  int n_in = 400;
  int n_hidden = 50;
  Eigen::MatrixXd w_enc;  // n_hidden x n_in
  Eigen::VectorXd b_enc;  // n_hidden
  Eigen::MatrixXd w_dec;  // n_in x n_hidden
  Eigen::VectorXd b_dec;  // n_in

  void validate() const;
};

/// Loss gradients, shaped like AeParams.
struct AeGrads {
  Eigen::MatrixXd w_enc;
  Eigen::VectorXd b_enc;
  Eigen::MatrixXd w_dec;
  Eigen::VectorXd b_dec;
};

struct AdamHyper {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// First/second-moment accumulators, shaped like AeParams.
struct AdamState {
  Eigen::MatrixXd m_w_enc, v_w_enc;
  Eigen::VectorXd m_b_enc, v_b_enc;
  Eigen::MatrixXd m_w_dec, v_w_dec;
  Eigen::VectorXd m_b_dec, v_b_dec;
  long long step = 0;

  static AdamState zeros_like(const AeParams& params);
};

struct TrainConfig {
  int batch_size = 100;
  double dropout_rate = 0.8;  // fraction of hidden units disabled per sample
  int epochs = 40;
  int hidden_units = 50;
  AdamHyper adam;
  std::uint64_t seed = 1;
};

struct ForwardResult {
  Eigen::VectorXd hidden;  // post-dropout hidden activations
  Eigen::VectorXd output;
};

/// Gaussian weights with stddev sqrt(2 / fan_in) per layer, biases zero.
AeParams init_params(int n_in, int n_hidden, std::uint64_t seed);

/// Forward pass. A mask (entries 0/1, length n_hidden) applies inverted
/// dropout to the hidden layer: h = relu(w_enc x + b_enc) .* mask / (1 - rate).
/// No mask means inference mode.
ForwardResult forward(const AeParams& params, const Eigen::VectorXd& x,
                      const Eigen::VectorXd* mask = nullptr, double dropout_rate = 0.0);

/// Least-squares error |target - output|^2.
double loss(const Eigen::VectorXd& output, const Eigen::VectorXd& target);

/// Analytic gradients of the single-sample loss, with the same dropout mask
/// and scaling as forward. The ReLU subgradient at 0 is taken as 0.
AeGrads backward(const AeParams& params, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& target, const Eigen::VectorXd* mask = nullptr,
                 double dropout_rate = 0.0);

/// One bias-corrected Adam update. Throws on non-finite gradients.
void adam_step(AeParams& params, const AeGrads& grads, AdamState& state,
               const AdamHyper& hyper);

struct TrainResult {
  AeParams params;
  std::vector<double> loss_history;  // mean per-sample loss of each epoch
};

/// Minibatch training: per epoch, shuffle, split into batches of batch_size
/// (final short batch kept), draw one fresh dropout mask per sample, average
/// the per-sample gradients over the batch and take one Adam step.
/// Deterministic per (seed, data, config).
TrainResult train(const std::vector<SubpatternPair>& pairs, const TrainConfig& config);

/// Tiles the image, runs each subpattern through the network in inference
/// mode, clamps outputs to [0, 1] and reassembles.
Image restore(const AeParams& params, const Image& image, int tile_px);

/// Little-endian binary model file; save/load round-trips are bit-exact.
void save_model(const AeParams& params, const std::filesystem::path& path);
AeParams load_model(const std::filesystem::path& path);

}  // namespace holo
