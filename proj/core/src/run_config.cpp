#include "gmrbm/run_config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace gmrbm {

namespace {

using Json = nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
  fail(ErrorCode::schema_error, "config " + path + ": " + what);
}

// Object view that records which keys were read so leftovers can be rejected.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) schema_fail(path_, "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const Json& at(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string child(const char* key) const { return path_ + "." + key; }

  template <typename T>
  void get(const char* key, T& out) {
    if (!has(key)) return;
    const Json& v = at(key);
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) schema_fail(child(key), "expected a boolean");
      out = v.get<bool>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) schema_fail(child(key), "expected an integer");
      if (std::is_unsigned_v<T> && v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
        schema_fail(child(key), "expected a non-negative integer");
      out = v.get<T>();
    } else if constexpr (std::is_floating_point_v<T>) {
      if (!v.is_number()) schema_fail(child(key), "expected a number");
      out = v.get<T>();
    } else {
      if (!v.is_string()) schema_fail(child(key), "expected a string");
      out = v.get<std::string>();
    }
  }

  template <typename T>
  void get_required(const char* key, T& out) {
    if (!has(key)) schema_fail(path_, std::string("missing required key '") + key + "'");
    get(key, out);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) schema_fail(path_, "unknown key '" + key + "'");
    }
  }

  const std::string& path() const { return path_; }

 private:
  const Json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

MatchingChoice parse_matching(const std::string& s, const std::string& path) {
  if (s == "optimal") return MatchingChoice::optimal;
  if (s == "greedy") return MatchingChoice::greedy;
  if (s == "auto") return MatchingChoice::automatic;
  schema_fail(path, "matching must be optimal, greedy or auto");
}

DatasetSpec parse_dataset(const Json& j, const std::string& path) {
  Fields f(j, path);
  DatasetSpec d;
  if (f.has("synth") == f.has("idx")) schema_fail(path, "exactly one of 'synth' or 'idx' is required");
  if (f.has("synth")) {
    Fields s(f.at("synth"), f.child("synth"));
    std::string kind = "bars";
    s.get("kind", kind);
    try {
      d.synth_kind = parse_synth_kind(kind);
    } catch (const Error& e) {
      schema_fail(s.child("kind"), e.what());
    }
    s.get("visible", d.visible);
    s.get("count", d.count);
    s.get("noise", d.noise);
    s.finish();
    d.kind = DatasetSpec::Kind::synth;
  } else {
    Fields s(f.at("idx"), f.child("idx"));
    std::string p;
    s.get_required("path", p);
    d.idx_path = p;
    s.get("threshold", d.threshold);
    if (s.has("limit")) {
      std::size_t limit = 0;
      s.get("limit", limit);
      d.limit = limit;
    }
    s.finish();
    d.kind = DatasetSpec::Kind::idx;
  }
  f.finish();
  return d;
}

ModelSource parse_model_source(const Json& j, const std::string& path) {
  Fields f(j, path);
  ModelSource m;
  const int kinds = int(f.has("path")) + int(f.has("random")) + int(f.has("train"));
  if (kinds != 1) schema_fail(path, "exactly one of 'path', 'random' or 'train' is required");
  if (f.has("path")) {
    std::string p;
    f.get("path", p);
    m.kind = ModelSource::Kind::file;
    m.path = p;
  } else if (f.has("random")) {
    Fields r(f.at("random"), f.child("random"));
    r.get("visible", m.visible);
    r.get("hidden", m.hidden);
    r.get("weight_std", m.weight_std);
    r.get("bias_std", m.bias_std);
    if (r.has("seed")) {
      std::uint64_t s = 0;
      r.get("seed", s);
      m.seed = s;
    }
    r.finish();
    m.kind = ModelSource::Kind::random;
  } else {
    Fields t(f.at("train"), f.child("train"));
    if (!t.has("dataset")) schema_fail(t.path(), "missing required key 'dataset'");
    m.dataset = parse_dataset(t.at("dataset"), t.child("dataset"));
    t.get("hidden", m.hidden);
    t.get("learning_rate", m.train.learning_rate);
    t.get("epochs", m.train.epochs);
    t.get("batch_size", m.train.batch_size);
    t.get("weight_std", m.train.weight_init_std);
    if (t.has("seed")) {
      std::uint64_t s = 0;
      t.get("seed", s);
      m.seed = s;
    }
    t.finish();
    m.kind = ModelSource::Kind::train;
  }
  f.finish();
  return m;
}

NamedSampler parse_sampler(const Json& j, const std::string& path) {
  Fields f(j, path);
  NamedSampler s;
  std::string kind;
  f.get_required("label", s.label);
  f.get_required("kind", kind);
  if (kind == "ideal") {
    s.kind = IdealSampler{};
  } else if (kind == "digital") {
    DigitalSamplerConfig c;
    f.get_required("window", c.window);
    f.get_required("threshold", c.threshold);
    f.get_required("threshold_bits", c.threshold_bits);
    f.get_required("leak", c.leak);
    f.get_required("scale", c.scale);
    f.get("leak_density", c.leak_density);
    std::string grouping = "consecutive";
    f.get("grouping", grouping);
    if (grouping == "random") {
      c.grouping = LeakGrouping::random;
    } else if (grouping != "consecutive") {
      schema_fail(f.child("grouping"), "must be consecutive or random");
    }
    f.get("grouping_seed", c.grouping_seed);
    try {
      c.validate();
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
    s.kind = DigitalSampler{c};
  } else if (kind == "analog") {
    AnalogConfig c;
    f.get("capacitance", c.capacitance);
    f.get("leak_conductance", c.leak_conductance);
    f.get("threshold", c.threshold);
    f.get("reset", c.reset);
    f.get("sigma", c.sigma);
    f.get("dt", c.dt);
    f.get("window", c.window);
    f.get("noise_density", c.noise_density);
    try {
      c.validate();
    } catch (const Error& e) {
      schema_fail(path, e.what());
    }
    s.kind = AnalogSampler{c};
  } else if (kind == "bernoulli") {
    BernoulliSource b;
    f.get_required("p", b.p);
    f.get_required("dimension", b.dimension);
    if (!(b.p >= 0 && b.p <= 1)) schema_fail(f.child("p"), "must be in [0, 1]");
    s.kind = b;
  } else {
    schema_fail(f.child("kind"), "must be ideal, digital, analog or bernoulli");
  }
  f.finish();
  return s;
}

}  // namespace

const NamedSampler* RunConfig::find_sampler(std::string_view label) const {
  for (const auto& s : samplers)
    if (s.label == label) return &s;
  return nullptr;
}

RunConfig default_run_config() {
  RunConfig cfg;
  for (const auto& [label, c] : reference_configs()) cfg.samplers.push_back({label, DigitalSampler{c}});
  cfg.leak_sweep.sampler = "G2";
  cfg.leak_sweep.densities = {1, 2, 5, 10, 16};
  return cfg;
}

RunConfig parse_run_config(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ParseError(ErrorCode::parse_error, e.byte, std::string("invalid JSON: ") + e.what());
  }
  Fields f(root, "$");
  RunConfig cfg = default_run_config();
  if (f.has("model")) cfg.model = parse_model_source(f.at("model"), f.child("model"));
  if (f.has("chain")) {
    Fields c(f.at("chain"), f.child("chain"));
    c.get("burn_in", cfg.chain.burn_in);
    c.get("thin", cfg.chain.thin);
    std::string init = "random";
    c.get("init", init);
    if (init != "random") schema_fail(c.child("init"), "only 'random' initialization is configurable");
    c.finish();
    if (cfg.chain.thin < 1) schema_fail(c.child("thin"), "must be >= 1");
  }
  if (f.has("plan")) {
    Fields p(f.at("plan"), f.child("plan"));
    p.get("n_per_trial", cfg.n_per_trial);
    p.get("num_trials", cfg.num_trials);
    std::string matching = "auto";
    p.get("matching", matching);
    cfg.matching = parse_matching(matching, p.child("matching"));
    p.get("threads", cfg.threads);
    p.finish();
    if (cfg.n_per_trial < 2) schema_fail(p.child("n_per_trial"), "must be >= 2");
    if (cfg.num_trials < 1) schema_fail(p.child("num_trials"), "must be >= 1");
  }
  if (f.has("energy")) {
    Fields e(f.at("energy"), f.child("energy"));
    e.get("e_active", cfg.energy.e_active);
    e.get("e_core_static", cfg.energy.e_core_static);
    e.get("core_size", cfg.energy.core_size);
    e.finish();
    try {
      cfg.energy.validate();
    } catch (const Error& err) {
      schema_fail(f.child("energy"), err.what());
    }
  }
  if (f.has("samplers")) {
    const Json& list = f.at("samplers");
    if (!list.is_array() || list.empty()) schema_fail(f.child("samplers"), "expected a non-empty array");
    cfg.samplers.clear();
    for (std::size_t i = 0; i < list.size(); ++i) {
      cfg.samplers.push_back(parse_sampler(list[i], f.child("samplers") + "[" + std::to_string(i) + "]"));
      for (std::size_t k = 0; k + 1 < cfg.samplers.size(); ++k)
        if (cfg.samplers[k].label == cfg.samplers.back().label)
          schema_fail(f.child("samplers"), "duplicate label '" + cfg.samplers.back().label + "'");
    }
  }
  if (f.has("leak_sweep")) {
    Fields l(f.at("leak_sweep"), f.child("leak_sweep"));
    l.get("sampler", cfg.leak_sweep.sampler);
    if (l.has("densities")) {
      const Json& d = l.at("densities");
      if (!d.is_array() || d.empty()) schema_fail(l.child("densities"), "expected a non-empty array");
      cfg.leak_sweep.densities.clear();
      for (const auto& x : d) {
        if (!x.is_number_unsigned() || x.get<std::size_t>() < 1) schema_fail(l.child("densities"), "entries must be integers >= 1");
        cfg.leak_sweep.densities.push_back(x.get<std::size_t>());
      }
    }
    l.finish();
  }
  if (f.has("out")) {
    std::string out;
    f.get("out", out);
    cfg.out = out;
  }
  f.finish();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(read_file(path)); }

RbmModel build_model(const ModelSource& source, std::uint64_t run_seed) {
  const std::uint64_t seed = source.seed.value_or(run_seed);
  switch (source.kind) {
    case ModelSource::Kind::file: return load_model(source.path);
    case ModelSource::Kind::random:
      return random_model(source.visible, source.hidden, source.weight_std, source.bias_std, seed);
    case ModelSource::Kind::train: {
      const DatasetSpec& d = source.dataset;
      BitMatrix data;
      if (d.kind == DatasetSpec::Kind::synth) {
        data = synth_dataset(d.synth_kind, d.visible, d.count, d.noise, seed);
      } else {
        data = load_idx_images(d.idx_path, d.threshold);
        if (d.limit && *d.limit < data.rows()) {
          BitMatrix head(*d.limit, data.cols());
          for (std::size_t i = 0; i < *d.limit; ++i) head.set_row(i, data.row_bits(i));
          data = std::move(head);
        }
      }
      return cd1_train(data, data.cols(), source.hidden, source.train, seed).model;
    }
  }
  fail(ErrorCode::invalid_argument, "unknown model source");
}

SweepPlan sweep_plan(const RunConfig& cfg, std::uint64_t seed) {
  SweepPlan plan;
  plan.settings = cfg.chain;
  plan.n_per_trial = cfg.n_per_trial;
  plan.num_trials = cfg.num_trials;
  plan.base_seed = seed;
  plan.matching = cfg.matching;
  plan.threads = cfg.threads;
  return plan;
}

}  // namespace gmrbm
