#include "gmrbm/neuro.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "gmrbm/format.hpp"

namespace gmrbm {

void DigitalSamplerConfig::validate() const {
  require(window >= 1, ErrorCode::invalid_argument, "digital sampler: Tw must be >= 1");
  require(threshold_bits >= 1 && threshold_bits <= 31, ErrorCode::invalid_argument,
          "digital sampler: TM must be in [1, 31]");
  require(scale > 0 && std::isfinite(scale), ErrorCode::invalid_argument, "digital sampler: scale must be > 0");
  require(leak_density >= 1, ErrorCode::invalid_argument, "digital sampler: leak density must be >= 1");
}

std::string DigitalSamplerConfig::describe() const {
  std::string s = "digital(Tw=" + std::to_string(window) + ",Vt=" + std::to_string(threshold) +
                  ",TM=" + std::to_string(threshold_bits) + ",leak=" + std::to_string(leak) +
                  ",scale=" + format_double(scale) + ",ld=" + std::to_string(leak_density);
  if (grouping == LeakGrouping::random) s += ",grouping=random:" + std::to_string(grouping_seed);
  return s + ")";
}

void AnalogConfig::validate() const {
  require(capacitance > 0 && leak_conductance > 0, ErrorCode::invalid_argument,
          "analog sampler: C and g_L must be > 0");
  require(sigma >= 0 && std::isfinite(sigma), ErrorCode::invalid_argument, "analog sampler: sigma must be >= 0");
  require(dt > 0, ErrorCode::invalid_argument, "analog sampler: dt must be > 0");
  require(threshold > reset, ErrorCode::invalid_argument, "analog sampler: theta must exceed V_reset");
  require(window >= 1, ErrorCode::invalid_argument, "analog sampler: window must be >= 1");
  require(noise_density >= 1, ErrorCode::invalid_argument, "analog sampler: noise density must be >= 1");
}

std::string AnalogConfig::describe() const {
  return "analog(C=" + format_double(capacitance) + ",gL=" + format_double(leak_conductance) +
         ",theta=" + format_double(threshold) + ",reset=" + format_double(reset) + ",sigma=" + format_double(sigma) +
         ",dt=" + format_double(dt) + ",window=" + std::to_string(window) +
         ",nd=" + std::to_string(noise_density) + ")";
}

double digital_step_prob(double potential, const DigitalSamplerConfig& cfg) {
  const double levels = std::ldexp(1.0, cfg.threshold_bits);
  const double count = std::floor(potential - cfg.threshold) + 1.0;
  return std::clamp(count, 0.0, levels) / levels;
}

bool digital_neuron_sample(double v_initial, const DigitalSamplerConfig& cfg, Rng& rng) {
  double v = v_initial;
  bool spiked = false;
  const auto bits = static_cast<unsigned>(cfg.threshold_bits);
  for (int t = 0; t < cfg.window; ++t) {
    if (rng.bit()) v += cfg.leak;
    const auto offset = static_cast<double>(rng.bits(bits));
    if (v - cfg.threshold >= offset) spiked = true;
  }
  return spiked;
}

bool digital_neuron_sample(double v_initial, const DigitalSamplerConfig& cfg,
                           std::span<const std::uint8_t> leak_coins, Rng& threshold_rng) {
  require(leak_coins.size() == static_cast<std::size_t>(cfg.window), ErrorCode::dimension_mismatch,
          "need one leak coin per window step");
  double v = v_initial;
  const auto bits = static_cast<unsigned>(cfg.threshold_bits);
  for (int t = 0; t < cfg.window; ++t) {
    if (leak_coins[static_cast<std::size_t>(t)]) v += cfg.leak;
    if (v - cfg.threshold >= static_cast<double>(threshold_rng.bits(bits))) return true;
  }
  return false;
}

double digital_spike_prob_exact(double v_initial, const DigitalSamplerConfig& cfg) {
  cfg.validate();
  require(cfg.window <= kMaxExactWindow, ErrorCode::too_large, "exact spike probability needs Tw <= 32");
  // survival[k]: probability of no spike so far with k successful leak coins.
  std::vector<double> survival(static_cast<std::size_t>(cfg.window) + 1, 0.0);
  std::vector<double> next(survival.size(), 0.0);
  survival[0] = 1.0;
  for (int t = 1; t <= cfg.window; ++t) {
    for (int k = 0; k <= t; ++k) {
      const double quiet = 1.0 - digital_step_prob(v_initial + static_cast<double>(cfg.leak) * k, cfg);
      const double stay = k < t ? survival[static_cast<std::size_t>(k)] : 0.0;
      const double moved = k > 0 ? survival[static_cast<std::size_t>(k - 1)] : 0.0;
      next[static_cast<std::size_t>(k)] = 0.5 * (stay + moved) * quiet;
    }
    std::swap(survival, next);
  }
  const double no_spike = std::accumulate(survival.begin(), survival.end(), 0.0);
  return std::clamp(1.0 - no_spike, 0.0, 1.0);
}

namespace {

// Unit order used to form groups; groups are consecutive runs of this order.
std::vector<std::size_t> group_order(std::size_t n, LeakGrouping grouping, std::uint64_t seed, std::uint64_t layer) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (grouping == LeakGrouping::random) {
    Rng rng(seed, {0x67726f7570ULL, layer});
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }
  return order;
}

void sample_digital_layer(const Eigen::VectorXd& net, const DigitalSamplerConfig& cfg, std::uint64_t layer,
                          Rng& rng, std::vector<std::uint8_t>& out, DrawCounters* counters) {
  const auto n = static_cast<std::size_t>(net.size());
  const auto group = static_cast<std::size_t>(cfg.leak_density);
  const std::vector<std::size_t> order = group_order(n, cfg.grouping, cfg.grouping_seed, layer);
  std::vector<std::uint8_t> coins(static_cast<std::size_t>(cfg.window));
  out.assign(n, 0);
  for (std::size_t start = 0; start < n; start += group) {
    for (auto& c : coins) c = rng.bit() ? 1 : 0;
    if (counters) counters->leak_draws += coins.size();
    const std::size_t stop = std::min(n, start + group);
    for (std::size_t k = start; k < stop; ++k) {
      const std::size_t unit = order[k];
      const double v0 = cfg.scale * net[static_cast<Eigen::Index>(unit)];
      out[unit] = digital_neuron_sample(v0, cfg, coins, rng) ? 1 : 0;
    }
  }
}

void sample_analog_layer(const Eigen::VectorXd& net, const AnalogConfig& cfg, Rng& rng,
                         std::vector<std::uint8_t>& out, DrawCounters* counters) {
  const auto n = static_cast<std::size_t>(net.size());
  const auto group = static_cast<std::size_t>(cfg.noise_density);
  std::vector<double> noise(static_cast<std::size_t>(cfg.window));
  out.assign(n, 0);
  for (std::size_t start = 0; start < n; start += group) {
    for (auto& x : noise) x = rng.normal();
    if (counters) counters->noise_draws += noise.size();
    const std::size_t stop = std::min(n, start + group);
    for (std::size_t unit = start; unit < stop; ++unit)
      out[unit] = analog_lif_sample(net[static_cast<Eigen::Index>(unit)], cfg, noise) ? 1 : 0;
  }
}

void check_state(const RbmModel& model, const GibbsState& state) {
  require(state.v.size() == model.visible() && state.h.size() == model.hidden(),
          ErrorCode::dimension_mismatch, "state dimensions do not match model");
}

}  // namespace

GibbsState digital_gibbs_step(const RbmModel& model, const GibbsState& state, const DigitalSamplerConfig& cfg,
                              Rng& rng, DrawCounters* counters) {
  check_state(model, state);
  GibbsState next;
  sample_digital_layer(model.hidden_input(state.v), cfg, 1, rng, next.h, counters);
  sample_digital_layer(model.visible_input(next.h), cfg, 0, rng, next.v, counters);
  return next;
}

SampleBatch run_digital_chain(const RbmModel& model, const ChainSettings& settings,
                              const DigitalSamplerConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  return run_chain_with(model, settings, seed, cfg.describe(), [&](const GibbsState& s, Rng& rng) {
    return digital_gibbs_step(model, s, cfg, rng);
  });
}

bool analog_lif_sample(double input_current, const AnalogConfig& cfg, std::span<const double> noise) {
  require(noise.size() >= static_cast<std::size_t>(cfg.window), ErrorCode::dimension_mismatch,
          "need one noise draw per window step");
  const double drift = cfg.dt / cfg.capacitance;
  const double diffusion = cfg.sigma / cfg.capacitance * std::sqrt(cfg.dt);
  double u = cfg.reset;
  for (int t = 0; t < cfg.window; ++t) {
    u += drift * (-cfg.leak_conductance * u + input_current) + diffusion * noise[static_cast<std::size_t>(t)];
    // A spike would reset u to V_reset, but only the first one matters for the sample.
    if (u >= cfg.threshold) return true;
  }
  return false;
}

bool analog_lif_sample(double input_current, const AnalogConfig& cfg, Rng& rng) {
  std::vector<double> noise(static_cast<std::size_t>(cfg.window));
  for (auto& x : noise) x = rng.normal();
  return analog_lif_sample(input_current, cfg, noise);
}

GibbsState analog_gibbs_step(const RbmModel& model, const GibbsState& state, const AnalogConfig& cfg, Rng& rng,
                             DrawCounters* counters) {
  check_state(model, state);
  GibbsState next;
  sample_analog_layer(model.hidden_input(state.v), cfg, rng, next.h, counters);
  sample_analog_layer(model.visible_input(next.h), cfg, rng, next.v, counters);
  return next;
}

SampleBatch run_analog_chain(const RbmModel& model, const ChainSettings& settings, const AnalogConfig& cfg,
                             std::uint64_t seed) {
  cfg.validate();
  return run_chain_with(model, settings, seed, cfg.describe(), [&](const GibbsState& s, Rng& rng) {
    return analog_gibbs_step(model, s, cfg, rng);
  });
}

ResourceEstimate resource_estimate(std::size_t num_units, std::size_t leak_density, std::size_t core_size) {
  require(num_units >= 1, ErrorCode::invalid_argument, "resource estimate needs at least one unit");
  require(leak_density >= 1, ErrorCode::invalid_argument, "leak density must be >= 1");
  require(core_size >= 1, ErrorCode::invalid_argument, "core size must be >= 1");
  ResourceEstimate r;
  r.data_neurons = num_units;
  r.leak_neurons = (num_units + leak_density - 1) / leak_density;
  r.total_neurons = r.data_neurons + r.leak_neurons;
  r.cores = (r.total_neurons + core_size - 1) / core_size;
  r.utilization = static_cast<double>(r.data_neurons) / static_cast<double>(r.cores * core_size);
  return r;
}

}  // namespace gmrbm
