#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "gmrbm/random.hpp"
#include "gmrbm/rbm.hpp"

namespace gmrbm {

enum class LeakGrouping {
  consecutive,  // blocks of leak_density adjacent units per layer
  random,       // fixed pseudo-random assignment derived from grouping_seed
};

/// Digital integrate-and-fire sampler with stochastic leak and stochastic threshold.
struct DigitalSamplerConfig {
  int window = 1;          // Tw, integration steps per sample
  int threshold = 0;       // Vt, deterministic threshold
  int threshold_bits = 8;  // TM, width of the uniform threshold offset
  int leak = 0;            // added with probability 1/2 every step
  double scale = 1.0;      // multiplies weights and biases
  int leak_density = 1;    // l_d, data neurons per shared leak neuron
  LeakGrouping grouping = LeakGrouping::consecutive;
  std::uint64_t grouping_seed = 0;

  void validate() const;
  std::string describe() const;
  friend bool operator==(const DigitalSamplerConfig&, const DigitalSamplerConfig&) = default;
};

/// Leaky integrate-and-fire neuron driven by Gaussian noise, integrated with Euler-Maruyama.
struct AnalogConfig {
  double capacitance = 1.0;
  double leak_conductance = 1.0;
  double threshold = 1.5;
  double reset = 0.0;
  double sigma = 2.0;
  double dt = 0.1;
  int window = 20;
  int noise_density = 1;  // neurons per shared noise source

  void validate() const;
  std::string describe() const;
  friend bool operator==(const AnalogConfig&, const AnalogConfig&) = default;
};

struct ResourceEstimate {
  std::size_t data_neurons = 0;
  std::size_t leak_neurons = 0;
  std::size_t total_neurons = 0;
  std::size_t cores = 0;
  double utilization = 0.0;
  friend bool operator==(const ResourceEstimate&, const ResourceEstimate&) = default;
};

/// Random-draw accounting for tests and energy bookkeeping.
struct DrawCounters {
  std::uint64_t leak_draws = 0;
  std::uint64_t noise_draws = 0;
};

/// Runs the Tw-step digital neuron loop starting from v_initial. Each step
/// draws one leak coin then one TM-bit threshold offset from `rng`.
bool digital_neuron_sample(double v_initial, const DigitalSamplerConfig& cfg, Rng& rng);

/// Same loop with caller-supplied leak coins (leak_coins[t] for step t, size Tw).
/// Stops drawing thresholds after the first spike.
bool digital_neuron_sample(double v_initial, const DigitalSamplerConfig& cfg,
                           std::span<const std::uint8_t> leak_coins, Rng& threshold_rng);

inline constexpr int kMaxExactWindow = 32;

/// P(at least one spike in Tw steps), by dynamic programming over the leak count.
double digital_spike_prob_exact(double v_initial, const DigitalSamplerConfig& cfg);

/// Probability that a single step spikes at potential V (no leak applied).
double digital_step_prob(double potential, const DigitalSamplerConfig& cfg);

GibbsState digital_gibbs_step(const RbmModel& model, const GibbsState& state, const DigitalSamplerConfig& cfg,
                              Rng& rng, DrawCounters* counters = nullptr);

SampleBatch run_digital_chain(const RbmModel& model, const ChainSettings& settings,
                              const DigitalSamplerConfig& cfg, std::uint64_t seed);

/// Integrates one neuron for cfg.window steps from u = reset, using noise[t]
/// as the standard-normal draw for step t. Returns true if it spiked at least once.
bool analog_lif_sample(double input_current, const AnalogConfig& cfg, std::span<const double> noise);

/// Same, drawing its own noise from `rng`.
bool analog_lif_sample(double input_current, const AnalogConfig& cfg, Rng& rng);

GibbsState analog_gibbs_step(const RbmModel& model, const GibbsState& state, const AnalogConfig& cfg, Rng& rng,
                             DrawCounters* counters = nullptr);

SampleBatch run_analog_chain(const RbmModel& model, const ChainSettings& settings, const AnalogConfig& cfg,
                             std::uint64_t seed);

inline constexpr std::size_t kDefaultCoreSize = 256;

/// Neuron and core counts when each unit needs one data neuron and every
/// l_d units share one leak neuron.
ResourceEstimate resource_estimate(std::size_t num_units, std::size_t leak_density,
                                   std::size_t core_size = kDefaultCoreSize);

}  // namespace gmrbm
