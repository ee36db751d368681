#include "gmrbm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "gmrbm/format.hpp"

namespace gmrbm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const RbmModel& need_model(const SamplerSpec& spec) {
  require(spec.model != nullptr, ErrorCode::invalid_argument, "sampler spec needs a model");
  return *spec.model;
}

// Calls body(i) for i in [0, count) on up to `threads` workers; rethrows the first failure.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  unsigned workers = threads == 0 ? std::max(1U, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = count;
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

std::size_t model_units(const RbmModel& model) { return model.visible() + model.hidden(); }

}  // namespace

std::size_t SamplerSpec::dimension() const {
  if (const auto* b = std::get_if<BernoulliSource>(&kind)) return b->dimension;
  return need_model(*this).visible();
}

std::string SamplerSpec::describe() const {
  return std::visit(overloaded{
                        [](const IdealSampler&) { return std::string("ideal"); },
                        [](const DigitalSampler& d) { return d.config.describe(); },
                        [](const AnalogSampler& a) { return a.config.describe(); },
                        [](const BernoulliSource& b) {
                          return "bernoulli(p=" + format_double(b.p) + ",r=" + std::to_string(b.dimension) + ")";
                        },
                    },
                    kind);
}

SampleBatch draw_batch(const SamplerSpec& spec, std::size_t n, std::uint64_t seed) {
  ChainSettings settings = spec.settings;
  settings.n_samples = n;
  return std::visit(overloaded{
                        [&](const IdealSampler&) { return run_chain(need_model(spec), settings, seed); },
                        [&](const DigitalSampler& d) {
                          return run_digital_chain(need_model(spec), settings, d.config, seed);
                        },
                        [&](const AnalogSampler& a) {
                          return run_analog_chain(need_model(spec), settings, a.config, seed);
                        },
                        [&](const BernoulliSource& b) {
                          require(b.p >= 0 && b.p <= 1, ErrorCode::invalid_argument,
                                  "Bernoulli source probability must be in [0, 1]");
                          require(b.dimension >= 1, ErrorCode::invalid_argument,
                                  "Bernoulli source dimension must be >= 1");
                          Rng rng(seed, {0});
                          SampleBatch batch{BitMatrix(n, b.dimension), spec.describe(), seed, settings};
                          for (std::size_t i = 0; i < n; ++i)
                            for (std::size_t j = 0; j < b.dimension; ++j) batch.samples.set(i, j, rng.bernoulli(b.p));
                          return batch;
                        },
                    },
                    spec.kind);
}

void TrialPlan::validate() const {
  require(num_trials >= 1, ErrorCode::invalid_argument, "num_trials must be >= 1");
  require(n_per_trial >= 2, ErrorCode::invalid_argument, "n_per_trial must be >= 2");
  require(sampler_a.dimension() == sampler_b.dimension(), ErrorCode::dimension_mismatch,
          "samplers produce vectors of different dimension");
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial, unsigned side) noexcept {
  return Rng(base_seed, {0x747269616cULL, trial, side})();
}

CrossmatchOutcome run_trial(const TrialPlan& plan, std::size_t trial) {
  const SampleBatch a = draw_batch(plan.sampler_a, plan.n_per_trial, trial_seed(plan.base_seed, trial, 0));
  const SampleBatch b = draw_batch(plan.sampler_b, plan.n_per_trial, trial_seed(plan.base_seed, trial, 1));
  return crossmatch_test(a, b, plan.matching, trial_seed(plan.base_seed, trial, 2));
}

PValueStats pvalue_stats(std::span<const double> p_values) {
  require(!p_values.empty(), ErrorCode::invalid_argument, "no p-values to summarize");
  PValueStats s;
  s.p_values.assign(p_values.begin(), p_values.end());
  s.mean_p = std::accumulate(p_values.begin(), p_values.end(), 0.0) / static_cast<double>(p_values.size());
  for (double p : p_values) {
    const auto bin = static_cast<std::size_t>(std::clamp(p, 0.0, 1.0) / 0.05);
    ++s.histogram[std::min(bin, kHistogramBins - 1)];
  }
  std::vector<double> sorted(p_values.begin(), p_values.end());
  std::sort(sorted.begin(), sorted.end());
  const auto total = static_cast<double>(sorted.size());
  double above = 0.0;
  double below = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    above = std::max(above, static_cast<double>(k + 1) / total - sorted[k]);
    below = std::max(below, sorted[k] - static_cast<double>(k) / total);
  }
  s.ks_vs_uniform = std::max(above, below);
  s.cdf_excess = above;
  return s;
}

PValueStats run_trials(const TrialPlan& plan) {
  plan.validate();
  std::vector<double> p(plan.num_trials);
  parallel_for(plan.num_trials, plan.threads, [&](std::size_t i) { p[i] = run_trial(plan, i).p_value; });
  return pvalue_stats(p);
}

void EnergyModel::validate() const {
  require(e_active > 0 && e_core_static > 0, ErrorCode::invalid_argument, "energy coefficients must be positive");
  require(core_size >= 1, ErrorCode::invalid_argument, "core size must be >= 1");
}

double energy_estimate(const ResourceEstimate& resources, std::uint64_t ticks, const EnergyModel& em) {
  require(ticks >= 1, ErrorCode::invalid_argument, "energy estimate needs ticks >= 1");
  em.validate();
  const auto t = static_cast<double>(ticks);
  return static_cast<double>(resources.total_neurons) * t * em.e_active +
         static_cast<double>(resources.cores) * t * em.e_core_static;
}

double epeff(double mean_p, double energy) {
  require(energy > 0, ErrorCode::invalid_argument, "EPEff needs positive energy");
  return mean_p / energy;
}

std::uint64_t chain_ticks(const ChainSettings& settings, std::size_t n, int window) noexcept {
  return (settings.burn_in + static_cast<std::uint64_t>(n) * settings.thin) * 2U * static_cast<std::uint64_t>(window);
}

std::vector<LabeledConfig> reference_configs() {
  auto g = [](const char* label, int tw, int vt, int tm, int leak, double scale) {
    DigitalSamplerConfig c;
    c.window = tw;
    c.threshold = vt;
    c.threshold_bits = tm;
    c.leak = leak;
    c.scale = scale;
    return LabeledConfig{label, c};
  };
  return {
      g("G1", 1, -130, 8, 0, 50),  g("G2", 1, -80, 8, 102, 50),  g("G3", 2, 0, 8, 100, 50),
      g("G4", 8, 79, 9, 49, 50),   g("G5", 16, 50, 9, 15, 30),   g("G6", 16, 100, 10, 30, 50),
      g("G7", 16, 633, 8, 90, 100),
  };
}

DigitalSamplerConfig desk_calibrated_config() {
  DigitalSamplerConfig c;
  c.window = 3;
  c.threshold = 20;
  c.threshold_bits = 8;
  c.leak = 72;
  c.scale = 45;
  return c;
}

namespace {

EpeffReport make_report(std::string label, const DigitalSamplerConfig& cfg, const RbmModel& model, PValueStats stats,
                        const SweepPlan& plan, const EnergyModel& em) {
  EpeffReport r;
  r.label = std::move(label);
  r.mean_p = stats.mean_p;
  r.resources = resource_estimate(model_units(model), static_cast<std::size_t>(cfg.leak_density), em.core_size);
  r.energy = energy_estimate(r.resources, chain_ticks(plan.settings, plan.n_per_trial, cfg.window), em);
  r.epeff = epeff(r.mean_p, r.energy);
  r.stats = std::move(stats);
  r.config = cfg;
  return r;
}

TrialPlan plan_for(const SweepPlan& sweep, SamplerSpec a, SamplerSpec b) {
  TrialPlan plan{std::move(a), std::move(b)};
  plan.n_per_trial = sweep.n_per_trial;
  plan.num_trials = sweep.num_trials;
  plan.base_seed = sweep.base_seed;
  plan.matching = sweep.matching;
  plan.threads = sweep.threads;
  return plan;
}

}  // namespace

std::vector<EpeffReport> parameter_sweep(std::shared_ptr<const RbmModel> model,
                                         std::span<const LabeledConfig> configs, const SweepPlan& plan,
                                         const EnergyModel& em) {
  require(model != nullptr, ErrorCode::invalid_argument, "parameter sweep needs a model");
  require(!configs.empty(), ErrorCode::invalid_argument, "parameter sweep needs at least one config");
  em.validate();
  std::vector<EpeffReport> reports;
  reports.reserve(configs.size());
  const SamplerSpec ideal{IdealSampler{}, model, plan.settings, "ideal"};
  for (const auto& [label, cfg] : configs) {
    cfg.validate();
    const TrialPlan trials = plan_for(plan, ideal, SamplerSpec{DigitalSampler{cfg}, model, plan.settings, label});
    reports.push_back(make_report(label, cfg, *model, run_trials(trials), plan, em));
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const EpeffReport& a, const EpeffReport& b) { return a.epeff > b.epeff; });
  return reports;
}

std::vector<EpeffReport> leak_density_sweep(std::shared_ptr<const RbmModel> model, const DigitalSamplerConfig& cfg,
                                            std::span<const std::size_t> densities, const SweepPlan& plan,
                                            const EnergyModel& em) {
  require(model != nullptr, ErrorCode::invalid_argument, "leak density sweep needs a model");
  require(!densities.empty(), ErrorCode::invalid_argument, "leak density sweep needs at least one density");
  em.validate();
  DigitalSamplerConfig reference = cfg;
  reference.leak_density = 1;
  reference.validate();
  const SamplerSpec ref_spec{DigitalSampler{reference}, model, plan.settings, "ld=1"};
  std::vector<EpeffReport> reports;
  reports.reserve(densities.size());
  for (std::size_t d : densities) {
    DigitalSamplerConfig shared = cfg;
    shared.leak_density = static_cast<int>(d);
    shared.validate();
    const std::string label = "ld=" + std::to_string(d);
    const TrialPlan trials = plan_for(plan, ref_spec, SamplerSpec{DigitalSampler{shared}, model, plan.settings, label});
    reports.push_back(make_report(label, shared, *model, run_trials(trials), plan, em));
  }
  return reports;
}

std::optional<std::size_t> interior_maximum(std::span<const EpeffReport> curve) {
  if (curve.size() < 3) return std::nullopt;
  const auto best = std::max_element(curve.begin(), curve.end(),
                                     [](const EpeffReport& a, const EpeffReport& b) { return a.epeff < b.epeff; });
  const auto idx = static_cast<std::size_t>(best - curve.begin());
  if (idx == 0 || idx + 1 == curve.size()) return std::nullopt;
  return idx;
}

}  // namespace gmrbm
