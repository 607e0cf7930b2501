#include "holo/autoencoder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

#include "holo/rng.hpp"

namespace holo {

namespace {

void check_mask(const Eigen::VectorXd* mask, double dropout_rate, int n_hidden) {
  if (mask == nullptr) return;
  if (!(dropout_rate >= 0.0) || !(dropout_rate < 1.0))
    throw std::invalid_argument("dropout_rate must lie in [0, 1)");
  if (mask->size() != n_hidden)
    throw std::invalid_argument("dropout mask length does not match the hidden layer");
  for (Eigen::Index i = 0; i < mask->size(); ++i) {
    const double m = (*mask)(i);
    if (m != 0.0 && m != 1.0)
      throw std::invalid_argument("dropout mask entries must be 0 or 1");
  }
}

struct Trace {
  Eigen::VectorXd z_enc;   // pre-activation of the hidden layer
  Eigen::VectorXd hidden;  // post-ReLU, post-dropout
  Eigen::VectorXd z_dec;   // pre-activation of the output layer
  Eigen::VectorXd output;
};

Trace run_forward(const AeParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd* mask,
                  double dropout_rate) {
  p.validate();
  if (x.size() != p.n_in)
    throw std::invalid_argument("input length does not match the network");
  check_mask(mask, dropout_rate, p.n_hidden);

  Trace t;
  t.z_enc = p.w_enc * x + p.b_enc;
  t.hidden = t.z_enc.cwiseMax(0.0);
  if (mask != nullptr)
    t.hidden = t.hidden.cwiseProduct(*mask) / (1.0 - dropout_rate);
  t.z_dec = p.w_dec * t.hidden + p.b_dec;
  t.output = t.z_dec.cwiseMax(0.0);
  return t;
}

// Gradients of |target - output|^2 for one sample; also reports the loss so
// the training loop does not pay for a second forward pass.
AeGrads run_backward(const AeParams& p, const Eigen::VectorXd& x, const Eigen::VectorXd& target,
                     const Eigen::VectorXd* mask, double dropout_rate, double* loss_out) {
  if (target.size() != p.n_in)
    throw std::invalid_argument("target length does not match the network");
  const Trace t = run_forward(p, x, mask, dropout_rate);
  if (loss_out != nullptr) *loss_out = (target - t.output).squaredNorm();

  const Eigen::VectorXd d_output = 2.0 * (t.output - target);
  // ReLU subgradient at 0 is 0, hence strict comparisons.
  const Eigen::VectorXd d_z_dec =
      d_output.cwiseProduct((t.z_dec.array() > 0.0).cast<double>().matrix());

  AeGrads g;
  g.w_dec = d_z_dec * t.hidden.transpose();
  g.b_dec = d_z_dec;

  Eigen::VectorXd d_hidden = p.w_dec.transpose() * d_z_dec;
  if (mask != nullptr)
    d_hidden = d_hidden.cwiseProduct(*mask) / (1.0 - dropout_rate);
  const Eigen::VectorXd d_z_enc =
      d_hidden.cwiseProduct((t.z_enc.array() > 0.0).cast<double>().matrix());

  g.w_enc = d_z_enc * x.transpose();
  g.b_enc = d_z_enc;
  return g;
}

bool all_finite(const AeGrads& g) {
  return g.w_enc.allFinite() && g.b_enc.allFinite() && g.w_dec.allFinite() &&
         g.b_dec.allFinite();
}

AeGrads zero_grads(int n_in, int n_hidden) {
  AeGrads g;
  g.w_enc = Eigen::MatrixXd::Zero(n_hidden, n_in);
  g.b_enc = Eigen::VectorXd::Zero(n_hidden);
  g.w_dec = Eigen::MatrixXd::Zero(n_in, n_hidden);
  g.b_dec = Eigen::VectorXd::Zero(n_in);
  return g;
}

}  // namespace

void AeParams::validate() const {
  if (n_in <= 0 || n_hidden <= 0)
    throw std::invalid_argument("network dimensions must be positive");
  if (w_enc.rows() != n_hidden || w_enc.cols() != n_in || b_enc.size() != n_hidden ||
      w_dec.rows() != n_in || w_dec.cols() != n_hidden || b_dec.size() != n_in)
    throw std::invalid_argument("parameter shapes are inconsistent");
  if (!w_enc.allFinite() || !b_enc.allFinite() || !w_dec.allFinite() || !b_dec.allFinite())
    throw std::invalid_argument("parameters contain non-finite entries");
}

AdamState AdamState::zeros_like(const AeParams& params) {
  AdamState s;
  s.m_w_enc = Eigen::MatrixXd::Zero(params.n_hidden, params.n_in);
  s.v_w_enc = s.m_w_enc;
  s.m_b_enc = Eigen::VectorXd::Zero(params.n_hidden);
  s.v_b_enc = s.m_b_enc;
  s.m_w_dec = Eigen::MatrixXd::Zero(params.n_in, params.n_hidden);
  s.v_w_dec = s.m_w_dec;
  s.m_b_dec = Eigen::VectorXd::Zero(params.n_in);
  s.v_b_dec = s.m_b_dec;
  s.step = 0;
  return s;
}

AeParams init_params(int n_in, int n_hidden, std::uint64_t seed) {
  if (n_in < 1 || n_hidden < 1)
    throw std::invalid_argument("network dimensions must be >= 1");

  AeParams p;
  p.n_in = n_in;
  p.n_hidden = n_hidden;
  p.w_enc.resize(n_hidden, n_in);
  p.b_enc = Eigen::VectorXd::Zero(n_hidden);
  p.w_dec.resize(n_in, n_hidden);
  p.b_dec = Eigen::VectorXd::Zero(n_in);

  Rng rng(seed);
  const double std_enc = std::sqrt(2.0 / n_in);
  for (int r = 0; r < n_hidden; ++r)
    for (int c = 0; c < n_in; ++c) p.w_enc(r, c) = std_enc * rng.gaussian();
  const double std_dec = std::sqrt(2.0 / n_hidden);
  for (int r = 0; r < n_in; ++r)
    for (int c = 0; c < n_hidden; ++c) p.w_dec(r, c) = std_dec * rng.gaussian();
  return p;
}

ForwardResult forward(const AeParams& params, const Eigen::VectorXd& x,
                      const Eigen::VectorXd* mask, double dropout_rate) {
  Trace t = run_forward(params, x, mask, dropout_rate);
  return ForwardResult{std::move(t.hidden), std::move(t.output)};
}

double loss(const Eigen::VectorXd& output, const Eigen::VectorXd& target) {
  if (output.size() != target.size())
    throw std::invalid_argument("loss: vector lengths differ");
  return (target - output).squaredNorm();
}

AeGrads backward(const AeParams& params, const Eigen::VectorXd& x,
                 const Eigen::VectorXd& target, const Eigen::VectorXd* mask,
                 double dropout_rate) {
  return run_backward(params, x, target, mask, dropout_rate, nullptr);
}

void adam_step(AeParams& params, const AeGrads& grads, AdamState& state,
               const AdamHyper& hyper) {
  params.validate();
  if (grads.w_enc.rows() != params.w_enc.rows() || grads.w_enc.cols() != params.w_enc.cols() ||
      grads.b_enc.size() != params.b_enc.size() ||
      grads.w_dec.rows() != params.w_dec.rows() || grads.w_dec.cols() != params.w_dec.cols() ||
      grads.b_dec.size() != params.b_dec.size())
    throw std::invalid_argument("gradient shapes do not match the parameters");
  if (state.m_w_enc.rows() != params.w_enc.rows() || state.m_b_dec.size() != params.b_dec.size())
    throw std::invalid_argument("Adam state shapes do not match the parameters");
  if (!all_finite(grads))
    throw std::runtime_error("non-finite gradient: training diverged");

  state.step += 1;
  const double c1 = 1.0 - std::pow(hyper.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(hyper.beta2, static_cast<double>(state.step));

  auto update = [&](auto& theta, auto& m, auto& v, const auto& g) {
    m = hyper.beta1 * m + (1.0 - hyper.beta1) * g;
    v.array() = hyper.beta2 * v.array() + (1.0 - hyper.beta2) * g.array().square();
    theta.array() -= hyper.alpha * (m.array() / c1) / ((v.array() / c2).sqrt() + hyper.epsilon);
  };
  update(params.w_enc, state.m_w_enc, state.v_w_enc, grads.w_enc);
  update(params.b_enc, state.m_b_enc, state.v_b_enc, grads.b_enc);
  update(params.w_dec, state.m_w_dec, state.v_w_dec, grads.w_dec);
  update(params.b_dec, state.m_b_dec, state.v_b_dec, grads.b_dec);
}

TrainResult train(const std::vector<SubpatternPair>& pairs, const TrainConfig& config) {
  if (pairs.empty()) throw std::invalid_argument("train: empty dataset");
  if (config.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (config.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (config.hidden_units < 1) throw std::invalid_argument("hidden_units must be >= 1");
  if (!(config.dropout_rate >= 0.0) || !(config.dropout_rate < 1.0))
    throw std::invalid_argument("dropout_rate must lie in [0, 1)");

  const std::size_t n_in = pairs.front().x.size();
  if (n_in == 0) throw std::invalid_argument("train: zero-length samples");
  for (const auto& pair : pairs) {
    if (pair.x.size() != n_in || pair.x_target.size() != n_in)
      throw std::invalid_argument("train: inconsistent pair dimensions");
    for (double v : pair.x_target)
      if (!(v >= 0.0) || !(v <= 1.0))
        throw std::invalid_argument("train: targets must lie in [0, 1]");
  }

  AeParams params = init_params(static_cast<int>(n_in), config.hidden_units, config.seed);
  AdamState state = AdamState::zeros_like(params);
  Rng rng(mix_seed(config.seed));  // shuffle + dropout stream, distinct from init

  const std::size_t n = pairs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  result.loss_history.reserve(config.epochs);

  Eigen::VectorXd mask(config.hidden_units);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    // Fisher-Yates with the seeded stream; std::shuffle is implementation-defined.
    for (std::size_t i = n - 1; i > 0; --i) {
      const std::size_t j = rng.below(i + 1);
      std::swap(order[i], order[j]);
    }

    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      AeGrads batch = zero_grads(params.n_in, params.n_hidden);

      for (std::size_t k = start; k < end; ++k) {
        const SubpatternPair& pair = pairs[order[k]];
        for (int u = 0; u < config.hidden_units; ++u)
          mask(u) = (rng.uniform01() >= config.dropout_rate) ? 1.0 : 0.0;

        const Eigen::Map<const Eigen::VectorXd> x(pair.x.data(), pair.x.size());
        const Eigen::Map<const Eigen::VectorXd> target(pair.x_target.data(),
                                                       pair.x_target.size());
        double sample_loss = 0.0;
        const AeGrads g =
            run_backward(params, x, target, &mask, config.dropout_rate, &sample_loss);
        batch.w_enc += g.w_enc;
        batch.b_enc += g.b_enc;
        batch.w_dec += g.w_dec;
        batch.b_dec += g.b_dec;
        epoch_loss += sample_loss;
      }

      const double inv_count = 1.0 / static_cast<double>(end - start);
      batch.w_enc *= inv_count;
      batch.b_enc *= inv_count;
      batch.w_dec *= inv_count;
      batch.b_dec *= inv_count;
      adam_step(params, batch, state, config.adam);
    }

    const double mean_loss = epoch_loss / static_cast<double>(n);
    if (!std::isfinite(mean_loss))
      throw std::runtime_error("non-finite loss: training diverged");
    result.loss_history.push_back(mean_loss);
  }

  result.params = std::move(params);
  return result;
}

Image restore(const AeParams& params, const Image& image, int tile_px) {
  params.validate();
  if (tile_px < 1 || static_cast<long long>(tile_px) * tile_px != params.n_in)
    throw std::invalid_argument("tile size does not match the model input size");

  SubpatternBatch batch = tile(image, tile_px);
  for (auto& v : batch.vectors) {
    const Eigen::Map<const Eigen::VectorXd> x(v.data(), v.size());
    const ForwardResult fwd = forward(params, x);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] = std::clamp(fwd.output(static_cast<Eigen::Index>(i)), 0.0, 1.0);
  }
  return untile(batch);
}

namespace {

constexpr char kModelMagic[4] = {'H', 'R', 'A', 'E'};
constexpr std::uint32_t kModelVersion = 1;

void write_u32_le(std::ostream& out, std::uint32_t v) {
  unsigned char bytes[4];
  for (int i = 0; i < 4; ++i) bytes[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

void write_f64_le(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint32_t read_u32_le(std::istream& in) {
  unsigned char bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw std::runtime_error("model file truncated");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return v;
}

double read_f64_le(std::istream& in) {
  unsigned char bytes[8];
  in.read(reinterpret_cast<char*>(bytes), 8);
  if (!in) throw std::runtime_error("model file truncated");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_matrix_row_major(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) write_f64_le(out, m(r, c));
}

void read_matrix_row_major(std::istream& in, Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = read_f64_le(in);
}

}  // namespace

void save_model(const AeParams& params, const std::filesystem::path& path) {
  params.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open model file for writing: " + path.string());

  out.write(kModelMagic, 4);
  write_u32_le(out, kModelVersion);
  write_u32_le(out, static_cast<std::uint32_t>(params.n_in));
  write_u32_le(out, static_cast<std::uint32_t>(params.n_hidden));
  write_matrix_row_major(out, params.w_enc);
  for (Eigen::Index i = 0; i < params.b_enc.size(); ++i) write_f64_le(out, params.b_enc(i));
  write_matrix_row_major(out, params.w_dec);
  for (Eigen::Index i = 0; i < params.b_dec.size(); ++i) write_f64_le(out, params.b_dec(i));
  if (!out) throw std::runtime_error("failed writing model file: " + path.string());
}

AeParams load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());

  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kModelMagic, 4) != 0)
    throw std::runtime_error("not a model file (bad magic): " + path.string());
  const std::uint32_t version = read_u32_le(in);
  if (version != kModelVersion)
    throw std::runtime_error("unsupported model version " + std::to_string(version));

  const std::uint32_t n_in = read_u32_le(in);
  const std::uint32_t n_hidden = read_u32_le(in);
  constexpr std::uint32_t kMaxDim = 1u << 20;
  if (n_in == 0 || n_hidden == 0 || n_in > kMaxDim || n_hidden > kMaxDim)
    throw std::runtime_error("model file has implausible dimensions");

  AeParams p;
  p.n_in = static_cast<int>(n_in);
  p.n_hidden = static_cast<int>(n_hidden);
  p.w_enc.resize(p.n_hidden, p.n_in);
  p.b_enc.resize(p.n_hidden);
  p.w_dec.resize(p.n_in, p.n_hidden);
  p.b_dec.resize(p.n_in);

  read_matrix_row_major(in, p.w_enc);
  for (Eigen::Index i = 0; i < p.b_enc.size(); ++i) p.b_enc(i) = read_f64_le(in);
  read_matrix_row_major(in, p.w_dec);
  for (Eigen::Index i = 0; i < p.b_dec.size(); ++i) p.b_dec(i) = read_f64_le(in);
  p.validate();
  return p;
}

}  // namespace holo
