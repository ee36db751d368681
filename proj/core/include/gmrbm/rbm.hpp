#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gmrbm/bit_matrix.hpp"
#include "gmrbm/random.hpp"

namespace gmrbm {

/// Binary restricted Boltzmann machine with energy
///   E(v, h) = -v'Wh - b_v'v - b_h'h.
/// Immutable after construction; all entries are checked to be finite.
class RbmModel {
 public:
  RbmModel(Eigen::MatrixXd weights, Eigen::VectorXd visible_bias, Eigen::VectorXd hidden_bias);

  /// All-zero parameters.
  static RbmModel zeros(std::size_t visible, std::size_t hidden);

  std::size_t visible() const noexcept { return static_cast<std::size_t>(weights_.rows()); }
  std::size_t hidden() const noexcept { return static_cast<std::size_t>(weights_.cols()); }

  const Eigen::MatrixXd& weights() const noexcept { return weights_; }
  const Eigen::VectorXd& visible_bias() const noexcept { return visible_bias_; }
  const Eigen::VectorXd& hidden_bias() const noexcept { return hidden_bias_; }

  /// Net input to every hidden unit, W'v + b_h.
  Eigen::VectorXd hidden_input(std::span<const std::uint8_t> v) const;
  /// Net input to every visible unit, Wh + b_v.
  Eigen::VectorXd visible_input(std::span<const std::uint8_t> h) const;

  friend bool operator==(const RbmModel& a, const RbmModel& b) {
    return a.weights_ == b.weights_ && a.visible_bias_ == b.visible_bias_ &&
           a.hidden_bias_ == b.hidden_bias_;
  }

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd visible_bias_;
  Eigen::VectorXd hidden_bias_;
};

/// Model with N(0, weight_std^2) weights and N(0, bias_std^2) biases.
RbmModel random_model(std::size_t visible, std::size_t hidden, double weight_std, double bias_std,
                      std::uint64_t seed);

struct GibbsState {
  std::vector<std::uint8_t> v;
  std::vector<std::uint8_t> h;

  static GibbsState zeros(const RbmModel& model) {
    return {std::vector<std::uint8_t>(model.visible(), 0), std::vector<std::uint8_t>(model.hidden(), 0)};
  }
  friend bool operator==(const GibbsState&, const GibbsState&) = default;
};

enum class ChainInit { random_uniform, given_vector };

struct ChainSettings {
  std::uint64_t burn_in = 1000;
  std::uint64_t thin = 10;
  std::uint64_t n_samples = 1;
  ChainInit init = ChainInit::random_uniform;
  std::vector<std::uint8_t> initial_visible;  // used when init == given_vector

  void validate(std::size_t visible) const;
  friend bool operator==(const ChainSettings&, const ChainSettings&) = default;
};

const char* to_string(ChainInit init) noexcept;

/// n recorded visible vectors plus where they came from.
struct SampleBatch {
  BitMatrix samples;
  std::string sampler_id;
  std::uint64_t seed = 0;
  ChainSettings settings;

  std::size_t size() const noexcept { return samples.rows(); }
  std::size_t dimension() const noexcept { return samples.cols(); }
  friend bool operator==(const SampleBatch&, const SampleBatch&) = default;
};

double energy(const RbmModel& model, const GibbsState& state);

/// Largest r + h_dim accepted by the enumeration routines.
inline constexpr std::size_t kMaxEnumerationUnits = 24;

double log_partition_exact(const RbmModel& model);

/// p(v) for every v in {0,1}^r; index bit i is visible unit i.
std::vector<double> exact_visible_marginal(const RbmModel& model);

double sigmoid_prob(double net_input) noexcept;

/// Block Gibbs update: all hidden units given v, then all visible units given the new h.
GibbsState gibbs_step(const RbmModel& model, const GibbsState& state, Rng& rng);

/// Initial state for a chain driven by `rng` (consumes r draws for random init).
GibbsState initial_state(const RbmModel& model, const ChainSettings& settings, Rng& rng);

SampleBatch run_chain(const RbmModel& model, const ChainSettings& settings, std::uint64_t seed);

/// Runs burn_in steps of `step`, then records the visible layer after every thin-th step.
template <typename Step>
SampleBatch run_chain_with(const RbmModel& model, const ChainSettings& settings, std::uint64_t seed,
                           std::string sampler_id, Step&& step) {
  settings.validate(model.visible());
  Rng rng(seed, {0});
  GibbsState state = initial_state(model, settings, rng);
  for (std::uint64_t t = 0; t < settings.burn_in; ++t) state = step(state, rng);
  SampleBatch batch{BitMatrix(settings.n_samples, model.visible()), std::move(sampler_id), seed, settings};
  for (std::uint64_t i = 0; i < settings.n_samples; ++i) {
    for (std::uint64_t t = 0; t < settings.thin; ++t) state = step(state, rng);
    batch.samples.set_row(i, state.v);
  }
  return batch;
}

struct TrainParams {
  double learning_rate = 0.1;
  std::size_t epochs = 50;
  std::size_t batch_size = 10;
  double weight_init_std = 0.01;
};

struct TrainResult {
  RbmModel model;
  /// Mean per-bit squared reconstruction error for each epoch.
  std::vector<double> reconstruction_error;
};

/// One-step contrastive divergence. Initial parameters are
/// random_model(r, hidden, weight_init_std, 0, seed).
TrainResult cd1_train(const BitMatrix& data, std::size_t visible, std::size_t hidden,
                      const TrainParams& params, std::uint64_t seed);

}  // namespace gmrbm
