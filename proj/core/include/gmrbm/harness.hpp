#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gmrbm/crossmatch.hpp"
#include "gmrbm/neuro.hpp"
#include "gmrbm/rbm.hpp"

namespace gmrbm {

struct IdealSampler {};
struct DigitalSampler {
  DigitalSamplerConfig config;
};
struct AnalogSampler {
  AnalogConfig config;
};
/// Independent Bernoulli(p) bits; needs no model.
struct BernoulliSource {
  double p = 0.5;
  std::size_t dimension = 16;
};

using SamplerKind = std::variant<IdealSampler, DigitalSampler, AnalogSampler, BernoulliSource>;

/// One side of a comparison: how samples are produced and from which model.
struct SamplerSpec {
  SamplerKind kind;
  std::shared_ptr<const RbmModel> model;  // unused by BernoulliSource
  ChainSettings settings;
  std::string label;

  std::size_t dimension() const;
  std::string describe() const;
};

/// Draws n samples from `spec` using `seed` (settings.n_samples is replaced by n).
SampleBatch draw_batch(const SamplerSpec& spec, std::size_t n, std::uint64_t seed);

struct TrialPlan {
  SamplerSpec sampler_a;
  SamplerSpec sampler_b;
  std::size_t n_per_trial = 50;
  std::size_t num_trials = 2000;
  std::uint64_t base_seed = 0;
  MatchingChoice matching = MatchingChoice::automatic;
  unsigned threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Seeds used by trial i; side 0 = sampler A, 1 = sampler B, 2 = matching tie-breaks.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial, unsigned side) noexcept;

CrossmatchOutcome run_trial(const TrialPlan& plan, std::size_t trial);

inline constexpr std::size_t kHistogramBins = 20;

struct PValueStats {
  std::vector<double> p_values;
  double mean_p = 0.0;
  std::array<std::size_t, kHistogramBins> histogram{};  // bins [0, .05), ..., [.95, 1]
  double ks_vs_uniform = 0.0;                             // sup |F_emp(x) - x|
  double cdf_excess = 0.0;                                // sup (F_emp(x) - x), >= 0
};

PValueStats pvalue_stats(std::span<const double> p_values);

/// Runs every trial (in parallel when allowed); the result does not depend on
/// thread count or scheduling.
PValueStats run_trials(const TrialPlan& plan);

struct EnergyModel {
  double e_active = 1.0;       // per neuron per tick
  double e_core_static = 10.0; // per core per tick
  std::size_t core_size = kDefaultCoreSize;

  void validate() const;
};

double energy_estimate(const ResourceEstimate& resources, std::uint64_t ticks, const EnergyModel& em);

double epeff(double mean_p, double energy);

/// Ticks spent by one chain producing n samples: each layer update takes Tw ticks.
std::uint64_t chain_ticks(const ChainSettings& settings, std::size_t n, int window) noexcept;

struct EpeffReport {
  std::string label;
  double mean_p = 0.0;
  double energy = 0.0;
  double epeff = 0.0;
  ResourceEstimate resources;
  PValueStats stats;
  std::optional<DigitalSamplerConfig> config;
};

/// Trial settings shared by every point of a sweep.
struct SweepPlan {
  ChainSettings settings;
  std::size_t n_per_trial = 50;
  std::size_t num_trials = 2000;
  std::uint64_t base_seed = 0;
  MatchingChoice matching = MatchingChoice::automatic;
  unsigned threads = 0;
};

struct LabeledConfig {
  std::string label;
  DigitalSamplerConfig config;
};

/// The seven digital neuron parameter sets G1..G7 (Tw, Vt, TM, leak, scale).
std::vector<LabeledConfig> reference_configs();

/// Config whose spike probability tracks the logistic curve on net inputs in [-5, 5].
DigitalSamplerConfig desk_calibrated_config();

/// Ideal sampler vs each digital config. Reports sorted by EPEff, highest first.
std::vector<EpeffReport> parameter_sweep(std::shared_ptr<const RbmModel> model,
                                         std::span<const LabeledConfig> configs, const SweepPlan& plan,
                                         const EnergyModel& em);

/// digital(cfg, l_d = 1) vs digital(cfg, l_d = d) for each density, in input order.
std::vector<EpeffReport> leak_density_sweep(std::shared_ptr<const RbmModel> model, const DigitalSamplerConfig& cfg,
                                            std::span<const std::size_t> densities, const SweepPlan& plan,
                                            const EnergyModel& em);

/// Index of the EPEff maximum when it lies strictly inside the curve.
std::optional<std::size_t> interior_maximum(std::span<const EpeffReport> curve);

}  // namespace gmrbm
