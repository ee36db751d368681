#include <gtest/gtest.h>

#include <cmath>

#include "gmrbm/harness.hpp"
#include "gmrbm/neuro.hpp"
#include "oracles.hpp"

using namespace gmrbm;

namespace {

DigitalSamplerConfig make_cfg(int tw, int vt, int tm, int leak, double scale = 1.0) {
  DigitalSamplerConfig c;
  c.window = tw;
  c.threshold = vt;
  c.threshold_bits = tm;
  c.leak = leak;
  c.scale = scale;
  return c;
}

double mc_frequency(double v0, const DigitalSamplerConfig& cfg, int draws, std::uint64_t seed) {
  Rng rng(seed);
  int spikes = 0;
  for (int k = 0; k < draws; ++k) spikes += digital_neuron_sample(v0, cfg, rng) ? 1 : 0;
  return static_cast<double>(spikes) / draws;
}

// r = 1 visible unit held at 0, hidden biases set to the requested net inputs.
RbmModel bias_probe(const std::vector<double>& net) {
  Eigen::VectorXd bh(static_cast<Eigen::Index>(net.size()));
  for (std::size_t j = 0; j < net.size(); ++j) bh[static_cast<Eigen::Index>(j)] = net[j];
  return RbmModel(Eigen::MatrixXd::Zero(1, bh.size()), Eigen::VectorXd::Zero(1), bh);
}

}  // namespace

TEST(DigitalNeuron, AboveMaxThresholdAlwaysSpikes) {
  const auto cfg = make_cfg(1, 0, 8, 0);
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) ASSERT_TRUE(digital_neuron_sample(255.0, cfg, rng));
  EXPECT_EQ(digital_spike_prob_exact(255.0, cfg), 1.0);
}

TEST(DigitalNeuron, BelowThresholdWithoutLeakNeverSpikes) {
  for (int tw : {1, 4, 16}) {
    const auto cfg = make_cfg(tw, 10, 8, 0);
    Rng rng(2);
    for (int k = 0; k < 5000; ++k) ASSERT_FALSE(digital_neuron_sample(9.5, cfg, rng));
    EXPECT_EQ(digital_spike_prob_exact(9.5, cfg), 0.0);
  }
}

TEST(DigitalNeuron, HalfwayPotentialCountsUniformOffsets) {
  const auto cfg = make_cfg(1, 0, 8, 0);
  EXPECT_DOUBLE_EQ(digital_spike_prob_exact(127.0, cfg), 0.5);
  EXPECT_NEAR(mc_frequency(127.0, cfg, 100000, 3), 0.5, 0.01);
}

TEST(DigitalNeuron, ExactMatchesMonteCarlo) {
  const std::vector<DigitalSamplerConfig> cfgs{make_cfg(1, -80, 8, 102), make_cfg(2, 0, 8, 100),
                                              make_cfg(8, 79, 9, 49), make_cfg(16, 100, 10, 30),
                                              make_cfg(3, 20, 8, 72), make_cfg(5, -3, 4, -7)};
  std::uint64_t seed = 100;
  for (const auto& cfg : cfgs)
    for (double v0 : {-150.0, -40.5, 0.0, 33.3, 120.0}) {
      const double exact = digital_spike_prob_exact(v0, cfg);
      const double mc = mc_frequency(v0, cfg, 1000000, seed++);
      EXPECT_LT(std::abs(exact - mc), 0.005) << cfg.describe() << " v0=" << v0;
      EXPECT_LE(std::abs(exact - mc), 3 * std::sqrt(exact * (1 - exact) / 1e6) + 1e-12)
          << cfg.describe() << " v0=" << v0;
    }
}

TEST(DigitalNeuron, ExactMonotoneInPotentialAndWindow) {
  for (int leak : {0, 15, 90}) {
    for (int tw = 1; tw <= 16; tw *= 2) {
      const auto cfg = make_cfg(tw, 40, 8, leak);
      auto longer = cfg;
      longer.window = tw + 1;
      double prev = -1.0;
      for (double v = -400.0; v <= 400.0; v += 3.7) {
        const double p = digital_spike_prob_exact(v, cfg);
        EXPECT_GE(p, prev);
        EXPECT_GE(digital_spike_prob_exact(v, longer), p - 1e-15);
        prev = p;
      }
    }
  }
}

TEST(DigitalNeuron, NoLeakClosedForm) {
  for (int tw : {1, 2, 7, 16, 32}) {
    const auto cfg = make_cfg(tw, -12, 6, 0);
    const auto one = make_cfg(1, -12, 6, 0);
    for (double v = -90.0; v <= 90.0; v += 1.25) {
      const double p1 = digital_spike_prob_exact(v, one);
      EXPECT_NEAR(digital_spike_prob_exact(v, cfg), 1.0 - std::pow(1.0 - p1, tw), 1e-12);
    }
  }
}

TEST(DigitalNeuron, WindowGuard) {
  EXPECT_THROW(digital_spike_prob_exact(0.0, make_cfg(33, 0, 8, 1)), Error);
}

TEST(DigitalConfig, Validation) {
  EXPECT_THROW(make_cfg(0, 0, 8, 0).validate(), Error);
  EXPECT_THROW(make_cfg(1, 0, 0, 0).validate(), Error);
  EXPECT_THROW(make_cfg(1, 0, 32, 0).validate(), Error);
  auto c = make_cfg(1, 0, 8, 0);
  c.leak_density = 0;
  EXPECT_THROW(c.validate(), Error);
  c = make_cfg(1, 0, 8, 0, 0.0);
  EXPECT_THROW(c.validate(), Error);
}

TEST(DigitalGibbs, DeskConfigTracksSigmoid) {
  std::vector<double> grid;
  for (double x = -5.0; x <= 5.0 + 1e-9; x += 0.5) grid.push_back(x);
  const RbmModel m = bias_probe(grid);
  const DigitalSamplerConfig cfg = desk_calibrated_config();
  Rng rng(31);
  const GibbsState s0 = GibbsState::zeros(m);
  const int steps = 100000;
  std::vector<double> on(grid.size(), 0.0);
  for (int t = 0; t < steps; ++t) {
    const GibbsState s = digital_gibbs_step(m, s0, cfg, rng);
    for (std::size_t j = 0; j < grid.size(); ++j) on[j] += s.h[j];
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    EXPECT_LT(std::abs(on[j] / steps - oracle::logistic(grid[j])), 0.03) << "x=" << grid[j];
    EXPECT_LT(std::abs(digital_spike_prob_exact(cfg.scale * grid[j], cfg) - oracle::logistic(grid[j])), 0.03);
  }
}

TEST(DigitalGibbs, SharedLeakDrawCount) {
  const RbmModel m = random_model(12, 7, 0.5, 0.2, 4);
  auto cfg = make_cfg(5, 10, 8, 30, 20.0);
  Rng rng(1);
  const GibbsState s0 = GibbsState::zeros(m);

  cfg.leak_density = 12;
  DrawCounters shared;
  for (int t = 0; t < 10; ++t) digital_gibbs_step(m, s0, cfg, rng, &shared);
  EXPECT_EQ(shared.leak_draws, 10U * 2U * 5U);

  cfg.leak_density = 1;
  DrawCounters each;
  digital_gibbs_step(m, s0, cfg, rng, &each);
  EXPECT_EQ(each.leak_draws, (12U + 7U) * 5U);

  cfg.leak_density = 5;
  DrawCounters blocks;
  digital_gibbs_step(m, s0, cfg, rng, &blocks);
  EXPECT_EQ(blocks.leak_draws, (3U + 2U) * 5U);
}

TEST(DigitalGibbs, UnitDensityEqualsPerUnitLeak) {
  const RbmModel m = random_model(9, 5, 0.8, 0.3, 6);
  auto cfg = make_cfg(4, 15, 8, 40, 30.0);
  ChainSettings st;
  st.burn_in = 20;
  st.thin = 2;
  st.n_samples = 30;

  // Reference chain: every unit draws its own Tw leak coins, then its thresholds.
  auto per_unit_layer = [&](const Eigen::VectorXd& net, Rng& rng) {
    std::vector<std::uint8_t> out(static_cast<std::size_t>(net.size()));
    std::vector<std::uint8_t> coins(static_cast<std::size_t>(cfg.window));
    for (std::size_t u = 0; u < out.size(); ++u) {
      for (auto& c : coins) c = rng.bit() ? 1 : 0;
      out[u] = digital_neuron_sample(cfg.scale * net[static_cast<Eigen::Index>(u)], cfg, coins, rng);
    }
    return out;
  };
  const SampleBatch ref = run_chain_with(m, st, 55, cfg.describe(), [&](const GibbsState& s, Rng& rng) {
    GibbsState n;
    n.h = per_unit_layer(m.hidden_input(s.v), rng);
    n.v = per_unit_layer(m.visible_input(n.h), rng);
    return n;
  });
  EXPECT_EQ(run_digital_chain(m, st, cfg, 55), ref);
}

TEST(DigitalGibbs, RandomGroupingIsFixedPerSeed) {
  const RbmModel m = random_model(10, 6, 0.8, 0.3, 6);
  auto cfg = make_cfg(3, 20, 8, 72, 45.0);
  cfg.leak_density = 3;
  cfg.grouping = LeakGrouping::random;
  cfg.grouping_seed = 9;
  ChainSettings st;
  st.burn_in = 10;
  st.n_samples = 20;
  EXPECT_EQ(run_digital_chain(m, st, cfg, 4), run_digital_chain(m, st, cfg, 4));
}

TEST(DigitalChain, DeterministicAndDegenerate) {
  const RbmModel m = random_model(8, 4, 1.0, 0.5, 3);
  ChainSettings st;
  st.burn_in = 30;
  st.n_samples = 25;
  const auto cfg = desk_calibrated_config();
  EXPECT_EQ(run_digital_chain(m, st, cfg, 12), run_digital_chain(m, st, cfg, 12));

  const auto dead = make_cfg(1, 1000000, 8, 0, 1.0);
  const SampleBatch b = run_digital_chain(m, st, dead, 12);
  for (std::size_t k = 0; k < b.size(); ++k)
    for (std::size_t i = 0; i < 8; ++i) EXPECT_FALSE(b.samples.get(k, i));
}

TEST(Analog, NoNoiseNoDriveNeverSpikes) {
  AnalogConfig cfg;
  cfg.sigma = 0.0;
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_FALSE(analog_lif_sample(0.0, cfg, rng));
}

TEST(Analog, NoNoiseStrongDriveSpikes) {
  AnalogConfig cfg;
  cfg.sigma = 0.0;
  ASSERT_GT(3.0 / cfg.leak_conductance, cfg.threshold);
  Rng rng(1);
  for (int k = 0; k < 100; ++k) EXPECT_TRUE(analog_lif_sample(3.0, cfg, rng));
}

TEST(Analog, EulerMaruyamaByHand) {
  AnalogConfig cfg;
  cfg.window = 3;
  cfg.threshold = 0.95;
  const std::vector<double> noise{0.5, -0.2, 1.0};
  // u1 = 0.1*(0.4) + 2*sqrt(0.1)*0.5, etc.
  double u = 0.0;
  bool spiked = false;
  for (double z : noise) {
    u += 0.1 * (-u + 0.4) + 2.0 * std::sqrt(0.1) * z;
    spiked = spiked || u >= 0.95;
  }
  EXPECT_EQ(analog_lif_sample(0.4, cfg, noise), spiked);
  cfg.threshold = 100.0;
  EXPECT_FALSE(analog_lif_sample(0.4, cfg, noise));
}

TEST(Analog, SpikeFrequencyIncreasesWithInput) {
  AnalogConfig cfg;
  double prev = -1.0;
  for (double I = -4.0; I <= 4.0; I += 1.0) {
    Rng rng(static_cast<std::uint64_t>(I * 10 + 100));
    int spikes = 0;
    for (int k = 0; k < 20000; ++k) spikes += analog_lif_sample(I, cfg, rng) ? 1 : 0;
    const double f = spikes / 20000.0;
    EXPECT_GT(f, prev - 0.01);
    prev = f;
  }
}

TEST(Analog, SharedNoiseDrawCountAndReproducibility) {
  const RbmModel m = random_model(10, 6, 0.5, 0.2, 4);
  AnalogConfig cfg;
  cfg.noise_density = 10;
  Rng rng(1);
  DrawCounters c;
  for (int t = 0; t < 4; ++t) analog_gibbs_step(m, GibbsState::zeros(m), cfg, rng, &c);
  EXPECT_EQ(c.noise_draws, 4U * 2U * static_cast<std::uint64_t>(cfg.window));

  cfg.noise_density = 1;
  ChainSettings st;
  st.burn_in = 10;
  st.n_samples = 15;
  EXPECT_EQ(run_analog_chain(m, st, cfg, 3), run_analog_chain(m, st, cfg, 3));
}

TEST(Analog, Validation) {
  AnalogConfig cfg;
  cfg.threshold = cfg.reset;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AnalogConfig{};
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  cfg = AnalogConfig{};
  cfg.window = 0;
  EXPECT_THROW(cfg.validate(), Error);
}

TEST(Resources, Examples) {
  const auto a = resource_estimate(256, 1);
  EXPECT_EQ(a.data_neurons, 256U);
  EXPECT_EQ(a.leak_neurons, 256U);
  EXPECT_EQ(a.total_neurons, 512U);
  EXPECT_EQ(a.cores, 2U);
  EXPECT_DOUBLE_EQ(a.utilization, 0.5);

  const auto b = resource_estimate(255, 255);
  EXPECT_EQ(b.total_neurons, 256U);
  EXPECT_EQ(b.cores, 1U);

  const auto c = resource_estimate(1284, 10);
  EXPECT_EQ(c.leak_neurons, 129U);
  EXPECT_EQ(c.total_neurons, 1413U);
  EXPECT_EQ(c.cores, 6U);
}

TEST(Resources, Invariants) {
  for (std::size_t units = 1; units <= 600; units += 7)
    for (std::size_t ld = 1; ld <= 300; ld += 13) {
      const auto e = resource_estimate(units, ld);
      EXPECT_EQ(e.total_neurons, e.data_neurons + e.leak_neurons);
      EXPECT_GE(e.leak_neurons * ld, e.data_neurons);
      EXPECT_GT(e.data_neurons, (e.leak_neurons - 1) * ld);
      EXPECT_EQ(e.cores, (e.total_neurons + 255) / 256);
      EXPECT_GT(e.utilization, 0.0);
      EXPECT_LE(e.utilization, 1.0);
    }
  EXPECT_THROW(resource_estimate(10, 0), Error);
}
