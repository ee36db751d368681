#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gmrbm/harness.hpp"
#include "gmrbm/io.hpp"

namespace gmrbm {

struct DatasetSpec {
  enum class Kind { synth, idx } kind = Kind::synth;
  SynthKind synth_kind = SynthKind::bars;
  std::size_t visible = 16;
  std::size_t count = 1000;
  double noise = 0.05;
  std::filesystem::path idx_path;
  double threshold = 0.5;
  std::optional<std::size_t> limit;  // keep only the first `limit` images
};

struct ModelSource {
  enum class Kind { file, random, train } kind = Kind::random;
  std::filesystem::path path;
  // random
  std::size_t visible = 16;
  std::size_t hidden = 8;
  double weight_std = 0.5;
  double bias_std = 0.25;
  std::optional<std::uint64_t> seed;  // falls back to the run seed
  // train
  DatasetSpec dataset;
  TrainParams train;
};

struct NamedSampler {
  std::string label;
  SamplerKind kind;
};

struct LeakSweepSpec {
  std::string sampler;  // label of a digital sampler in `samplers`
  std::vector<std::size_t> densities{1, 2, 5, 10, 50, 100, 200, 255};
};

/// Everything a run needs besides the seed. Parsed from JSON; unknown keys
/// are rejected at every level.
struct RunConfig {
  ModelSource model;
  ChainSettings chain;
  std::size_t n_per_trial = 50;
  std::size_t num_trials = 2000;
  MatchingChoice matching = MatchingChoice::automatic;
  unsigned threads = 0;
  EnergyModel energy;
  std::vector<NamedSampler> samplers;
  LeakSweepSpec leak_sweep;
  std::optional<std::filesystem::path> out;

  const NamedSampler* find_sampler(std::string_view label) const;
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Defaults used when no config file is given: a 16x8 random model, the
/// seven table configs G1..G7, and a G2 leak-density sweep.
RunConfig default_run_config();

RbmModel build_model(const ModelSource& source, std::uint64_t run_seed);

SweepPlan sweep_plan(const RunConfig& cfg, std::uint64_t seed);

}  // namespace gmrbm
