// gmrbm: train RBMs, draw samples from ideal and neuromorphic samplers, and
// compare sample sets with the crossmatch test.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmrbm/crossmatch.hpp"
#include "gmrbm/error.hpp"
#include "gmrbm/harness.hpp"
#include "gmrbm/io.hpp"
#include "gmrbm/report.hpp"
#include "gmrbm/run_config.hpp"

namespace fs = std::filesystem;
using namespace gmrbm;

namespace {

struct CommonOptions {
  std::uint64_t seed = 0;
  std::string config;
  std::string out;
  std::string matching;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> n_per_trial;
  std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool trial_flags) {
  cmd->add_option("--seed", o.seed, "Seed for every random draw")->required();
  cmd->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "Output directory (default: config 'out' or .)");
  if (trial_flags) {
    cmd->add_option("--matching", o.matching, "Matching method")->check(CLI::IsMember({"optimal", "greedy", "auto"}));
    cmd->add_option("--trials", o.trials, "Number of crossmatch trials")->check(CLI::PositiveNumber);
    cmd->add_option("--n-per-trial", o.n_per_trial, "Samples per group per trial")->check(CLI::Range(2, 1 << 30));
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  }
}

RunConfig resolve_config(const CommonOptions& o) {
  RunConfig cfg = o.config.empty() ? default_run_config() : load_run_config(o.config);
  if (o.trials) cfg.num_trials = *o.trials;
  if (o.n_per_trial) cfg.n_per_trial = *o.n_per_trial;
  if (o.threads) cfg.threads = *o.threads;
  if (o.matching == "optimal") cfg.matching = MatchingChoice::optimal;
  if (o.matching == "greedy") cfg.matching = MatchingChoice::greedy;
  if (o.matching == "auto") cfg.matching = MatchingChoice::automatic;
  return cfg;
}

fs::path output_dir(const CommonOptions& o, const RunConfig& cfg) {
  fs::path dir = !o.out.empty() ? fs::path(o.out) : cfg.out.value_or(fs::path("."));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorCode::io_error, "cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void emit(const fs::path& path, const std::string& content) {
  write_file(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

std::shared_ptr<const RbmModel> model_for(const RunConfig& cfg, const std::string& model_path, std::uint64_t seed) {
  if (!model_path.empty()) return std::make_shared<const RbmModel>(load_model(model_path));
  return std::make_shared<const RbmModel>(build_model(cfg.model, seed));
}

SamplerKind sampler_by_label(const RunConfig& cfg, const std::string& label) {
  if (label == "ideal") return IdealSampler{};
  const NamedSampler* s = cfg.find_sampler(label);
  if (!s) fail(ErrorCode::invalid_argument, "no sampler labelled '" + label + "' in the configuration");
  return s->kind;
}

std::vector<LabeledConfig> digital_samplers(const RunConfig& cfg) {
  std::vector<LabeledConfig> out;
  for (const auto& s : cfg.samplers)
    if (const auto* d = std::get_if<DigitalSampler>(&s.kind)) out.push_back({s.label, d->config});
  if (out.empty()) fail(ErrorCode::invalid_argument, "the configuration has no digital samplers to sweep");
  return out;
}

int run_train(const CommonOptions& o) {
  RunConfig cfg = resolve_config(o);
  if (cfg.model.kind != ModelSource::Kind::train) {
    // Without an explicit training spec, fit a bars dataset of the default width.
    cfg.model.kind = ModelSource::Kind::train;
    cfg.model.dataset.visible = cfg.model.visible;
  }
  const RbmModel model = build_model(cfg.model, o.seed);
  emit(output_dir(o, cfg) / "model.gmrbm", format_model(model));
  return 0;
}

int run_sample(const CommonOptions& o, const std::string& model_path, const std::string& label, std::size_t n) {
  const RunConfig cfg = resolve_config(o);
  const SamplerSpec spec{sampler_by_label(cfg, label), model_for(cfg, model_path, o.seed), cfg.chain, label};
  const SampleBatch batch = draw_batch(spec, n, o.seed);
  emit(output_dir(o, cfg) / "samples.txt", format_samples(batch));
  return 0;
}

int run_test(const CommonOptions& o, const std::string& x_path, const std::string& y_path) {
  const RunConfig cfg = resolve_config(o);
  const SampleBatch x = load_samples(x_path);
  const SampleBatch y = load_samples(y_path);
  const CrossmatchOutcome out = crossmatch_test(x, y, cfg.matching, o.seed);
  const std::string json = outcome_json(out);
  emit(output_dir(o, cfg) / "crossmatch.json", json);
  std::cout << json;
  return 0;
}

int run_sweep_params(const CommonOptions& o) {
  const RunConfig cfg = resolve_config(o);
  const auto model = model_for(cfg, "", o.seed);
  const auto configs = digital_samplers(cfg);
  const auto reports = parameter_sweep(model, configs, sweep_plan(cfg, o.seed), cfg.energy);
  const fs::path dir = output_dir(o, cfg);
  emit(dir / "sweep_params.csv", parameter_sweep_csv(reports));
  std::vector<std::string> labels;
  std::vector<double> values;
  for (const auto& r : reports) {
    labels.push_back(r.label);
    values.push_back(r.epeff);
  }
  emit(dir / "sweep_params.svg", svg_bar_chart("Energy performance efficiency", labels, values, "EPEff"));
  return 0;
}

int run_sweep_leak(const CommonOptions& o) {
  const RunConfig cfg = resolve_config(o);
  const NamedSampler* s = cfg.find_sampler(cfg.leak_sweep.sampler);
  if (!s) fail(ErrorCode::invalid_argument, "leak sweep sampler '" + cfg.leak_sweep.sampler + "' is not configured");
  const auto* d = std::get_if<DigitalSampler>(&s->kind);
  if (!d) fail(ErrorCode::invalid_argument, "leak sweep sampler '" + s->label + "' is not digital");
  const auto model = model_for(cfg, "", o.seed);
  const auto reports =
      leak_density_sweep(model, d->config, cfg.leak_sweep.densities, sweep_plan(cfg, o.seed), cfg.energy);
  const fs::path dir = output_dir(o, cfg);
  emit(dir / "sweep_leak.csv", leak_sweep_csv(reports));
  std::vector<std::string> labels;
  ChartSeries mean_p{"mean p", {}}, energy{"energy", {}}, eff{"EPEff", {}};
  for (const auto& r : reports) {
    labels.push_back(std::to_string(r.config ? r.config->leak_density : 0));
    mean_p.values.push_back(r.mean_p);
    energy.values.push_back(r.energy);
    eff.values.push_back(r.epeff);
  }
  const std::vector<ChartSeries> series{mean_p, energy, eff};
  emit(dir / "sweep_leak.svg", svg_line_chart("Leak density sweep (" + s->label + ")", labels, series, "leak density"));
  return 0;
}

int run_null_check(const CommonOptions& o, const std::string& label) {
  const RunConfig cfg = resolve_config(o);
  const auto model = model_for(cfg, "", o.seed);
  const SamplerKind kind = sampler_by_label(cfg, label);
  TrialPlan plan{SamplerSpec{kind, model, cfg.chain, label}, SamplerSpec{kind, model, cfg.chain, label}};
  plan.n_per_trial = cfg.n_per_trial;
  plan.num_trials = cfg.num_trials;
  plan.base_seed = o.seed;
  plan.matching = cfg.matching;
  plan.threads = cfg.threads;
  const PValueStats stats = run_trials(plan);
  const fs::path dir = output_dir(o, cfg);
  emit(dir / "null_check.csv", histogram_csv(stats));
  emit(dir / "pvalues.csv", pvalues_csv(stats));
  const std::string json = null_check_json(stats, cfg.n_per_trial, 0.45, 0.60, 0.05);
  emit(dir / "null_check.json", json);
  std::cout << json;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling-quality experiments for restricted Boltzmann machines on simulated neuromorphic samplers"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* train = app.add_subcommand("train", "Fit a model with CD-1 and write model.gmrbm");
  add_common(train, o, false);

  std::string model_path, sampler_label = "ideal";
  std::size_t n_samples = 100;
  auto* sample = app.add_subcommand("sample", "Draw samples and write samples.txt");
  add_common(sample, o, false);
  sample->add_option("--model", model_path, "Model file (default: build from config)")->check(CLI::ExistingFile);
  sample->add_option("--sampler", sampler_label, "Sampler label from the config, or 'ideal'");
  sample->add_option("-n,--samples", n_samples, "Number of samples")->check(CLI::PositiveNumber);

  std::string x_path, y_path;
  auto* test = app.add_subcommand("test", "Crossmatch test between two sample dumps");
  add_common(test, o, true);
  test->add_option("x", x_path, "First sample dump")->required()->check(CLI::ExistingFile);
  test->add_option("y", y_path, "Second sample dump")->required()->check(CLI::ExistingFile);

  auto* sweep_params = app.add_subcommand("sweep-params", "EPEff of every digital sampler against the ideal sampler");
  add_common(sweep_params, o, true);

  auto* sweep_leak = app.add_subcommand("sweep-leak", "Mean p-value, energy and EPEff across leak densities");
  add_common(sweep_leak, o, true);

  std::string null_label = "ideal";
  auto* null_check = app.add_subcommand("null-check", "Self-vs-self calibration of the crossmatch pipeline");
  add_common(null_check, o, true);
  null_check->add_option("--sampler", null_label, "Sampler label from the config, or 'ideal'");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) return run_train(o);
    if (*sample) return run_sample(o, model_path, sampler_label, n_samples);
    if (*test) return run_test(o, x_path, y_path);
    if (*sweep_params) return run_sweep_params(o);
    if (*sweep_leak) return run_sweep_leak(o);
    if (*null_check) return run_null_check(o, null_label);
  } catch (const Error& e) {
    std::cerr << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
