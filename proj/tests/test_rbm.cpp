#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "gmrbm/io.hpp"
#include "gmrbm/rbm.hpp"
#include "oracles.hpp"

using namespace gmrbm;

namespace {

GibbsState state_from_codes(const RbmModel& m, std::uint64_t vc, std::uint64_t hc) {
  GibbsState s = GibbsState::zeros(m);
  for (std::size_t i = 0; i < m.visible(); ++i) s.v[i] = (vc >> i) & 1U;
  for (std::size_t j = 0; j < m.hidden(); ++j) s.h[j] = (hc >> j) & 1U;
  return s;
}

RbmModel scaled_weights(const RbmModel& m, double c) {
  return RbmModel(m.weights() * c, m.visible_bias(), m.hidden_bias());
}

}  // namespace

TEST(Energy, ZeroModelIsZero) {
  const RbmModel m = RbmModel::zeros(5, 3);
  for (std::uint64_t vc = 0; vc < 32; vc += 7)
    for (std::uint64_t hc = 0; hc < 8; ++hc) EXPECT_EQ(energy(m, state_from_codes(m, vc, hc)), 0.0);
}

TEST(Energy, HandEvaluatedSingleUnitPair) {
  Eigen::MatrixXd w(1, 1);
  w << 2.0;
  const RbmModel m(w, Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0));
  EXPECT_DOUBLE_EQ(energy(m, {{1}, {1}}), -2.0);
}

TEST(Energy, AllZeroStateIsZeroForAnyModel) {
  const RbmModel m = random_model(6, 4, 1.0, 1.0, 11);
  EXPECT_EQ(energy(m, GibbsState::zeros(m)), 0.0);
}

TEST(Energy, MatchesElementwiseOracle) {
  const RbmModel m = random_model(5, 4, 0.8, 0.5, 3);
  for (std::uint64_t vc = 0; vc < 32; ++vc)
    for (std::uint64_t hc = 0; hc < 16; ++hc)
      EXPECT_NEAR(energy(m, state_from_codes(m, vc, hc)), oracle::energy(m, vc, hc), 1e-12);
}

TEST(Energy, BilinearInWeights) {
  const RbmModel m = random_model(4, 3, 0.9, 0.4, 5);
  const RbmModel no_w(Eigen::MatrixXd::Zero(4, 3), m.visible_bias(), m.hidden_bias());
  for (double c : {-2.0, 0.5, 3.0}) {
    const RbmModel mc = scaled_weights(m, c);
    for (std::uint64_t vc = 0; vc < 16; ++vc)
      for (std::uint64_t hc = 0; hc < 8; ++hc) {
        const GibbsState s = state_from_codes(m, vc, hc);
        const double interaction = oracle::energy(m, vc, hc) - oracle::energy(no_w, vc, hc);
        EXPECT_NEAR(energy(mc, s) - energy(no_w, s), c * interaction, 1e-12);
      }
  }
}

TEST(Energy, RejectsMismatchedState) {
  const RbmModel m = RbmModel::zeros(3, 2);
  EXPECT_THROW(energy(m, {{1, 0}, {0, 0}}), Error);
}

TEST(Model, RejectsNonFiniteAndMismatchedShapes) {
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(2, 2);
  EXPECT_THROW(RbmModel(w, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)), Error);
  w(0, 1) = std::nan("");
  EXPECT_THROW(RbmModel(w, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)), Error);
}

TEST(LogPartition, ZeroModels) {
  EXPECT_NEAR(log_partition_exact(RbmModel::zeros(4, 3)), 7.0 * std::log(2.0), 1e-12);
  EXPECT_NEAR(log_partition_exact(RbmModel::zeros(1, 1)), std::log(4.0), 1e-12);
}

TEST(LogPartition, MatchesBruteForce) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const RbmModel small = random_model(2, 1, 0.3, 0.3, seed);
    EXPECT_NEAR(log_partition_exact(small), oracle::log_partition(small), 1e-12);
    const RbmModel bigger = random_model(5, 4, 1.5, 1.0, seed);
    EXPECT_NEAR(log_partition_exact(bigger), oracle::log_partition(bigger), 1e-10);
  }
}

TEST(LogPartition, GuardsEnumerationSize) {
  EXPECT_THROW(log_partition_exact(RbmModel::zeros(20, 5)), Error);
  EXPECT_THROW(exact_visible_marginal(RbmModel::zeros(13, 12)), Error);
}

TEST(Marginal, ZeroModelIsUniform) {
  const auto p = exact_visible_marginal(RbmModel::zeros(5, 2));
  ASSERT_EQ(p.size(), 32U);
  for (double x : p) EXPECT_NEAR(x, 1.0 / 32.0, 1e-15);
}

TEST(Marginal, MatchesJointEnumeration) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const RbmModel m = random_model(4, 3, 1.0, 0.5, seed);
    const auto p = exact_visible_marginal(m);
    const auto q = oracle::visible_marginal(m);
    ASSERT_EQ(p.size(), q.size());
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], q[i], 1e-12);
  }
}

TEST(Marginal, NormalizedAndNonNegative) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto p = exact_visible_marginal(random_model(8, 6, 2.0, 1.0, seed));
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
    for (double x : p) EXPECT_GE(x, 0.0);
  }
}

TEST(Sigmoid, Basics) {
  EXPECT_EQ(sigmoid_prob(0.0), 0.5);
  EXPECT_NEAR(sigmoid_prob(1000.0), 1.0, 1e-12);
  EXPECT_NEAR(sigmoid_prob(-1000.0), 0.0, 1e-12);
}

TEST(Sigmoid, Symmetry) {
  for (double x = -30.0; x <= 30.0; x += 0.173) EXPECT_NEAR(sigmoid_prob(x) + sigmoid_prob(-x), 1.0, 1e-15);
}

TEST(Gibbs, ZeroModelGivesFairCoins) {
  const RbmModel m = RbmModel::zeros(3, 2);
  Rng rng(17);
  GibbsState s = GibbsState::zeros(m);
  const int steps = 100000;
  std::vector<double> on(5, 0.0);
  for (int t = 0; t < steps; ++t) {
    s = gibbs_step(m, s, rng);
    for (std::size_t i = 0; i < 3; ++i) on[i] += s.v[i];
    for (std::size_t j = 0; j < 2; ++j) on[3 + j] += s.h[j];
  }
  const double sd = std::sqrt(0.25 / steps);
  for (double c : on) EXPECT_NEAR(c / steps, 0.5, 3 * sd);
}

TEST(Gibbs, Deterministic) {
  const RbmModel m = random_model(6, 4, 1.0, 0.5, 2);
  const GibbsState s0{{1, 0, 1, 1, 0, 0}, {0, 1, 0, 1}};
  Rng a(99), b(99);
  for (int t = 0; t < 20; ++t) EXPECT_EQ(gibbs_step(m, s0, a), gibbs_step(m, s0, b));
}

TEST(Gibbs, ExactBoltzmannIsStationary) {
  for (auto [r, h] : {std::pair{4, 3}, std::pair{6, 6}, std::pair{7, 5}}) {
    const RbmModel m = random_model(static_cast<std::size_t>(r), static_cast<std::size_t>(h), 1.2, 0.7,
                                    static_cast<std::uint64_t>(r * 10 + h));
    const auto p = oracle::joint(m);
    const auto q = oracle::gibbs_kernel_push(m, p);
    double worst = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) worst = std::max(worst, std::abs(p[s] - q[s]));
    EXPECT_LT(worst, 1e-10) << "r=" << r << " h=" << h;
  }
}

TEST(Gibbs, EmpiricalConditionalsMatchSigmoid) {
  const RbmModel m = random_model(3, 2, 1.0, 0.5, 8);
  const GibbsState s0{{1, 0, 1}, {0, 0}};
  const Eigen::VectorXd net = m.hidden_input(s0.v);
  Rng rng(5);
  const int steps = 100000;
  std::vector<double> on(2, 0.0);
  for (int t = 0; t < steps; ++t) {
    const GibbsState s = gibbs_step(m, s0, rng);
    for (std::size_t j = 0; j < 2; ++j) on[j] += s.h[j];
  }
  for (std::size_t j = 0; j < 2; ++j) {
    const double p = oracle::logistic(net[static_cast<Eigen::Index>(j)]);
    EXPECT_NEAR(on[j] / steps, p, 4 * std::sqrt(p * (1 - p) / steps));
  }
}

TEST(Chain, SingleStepDefinition) {
  const RbmModel m = random_model(5, 3, 1.0, 0.5, 4);
  ChainSettings st;
  st.burn_in = 0;
  st.thin = 1;
  st.n_samples = 1;
  const SampleBatch b = run_chain(m, st, 123);
  ASSERT_EQ(b.size(), 1U);
  Rng rng(123, {0});
  const GibbsState init = initial_state(m, st, rng);
  const GibbsState next = gibbs_step(m, init, rng);
  EXPECT_EQ(b.samples.row_bits(0), next.v);
}

TEST(Chain, GivenInitialVector) {
  const RbmModel m = random_model(4, 3, 1.0, 0.5, 4);
  ChainSettings st;
  st.burn_in = 0;
  st.thin = 1;
  st.init = ChainInit::given_vector;
  st.initial_visible = {1, 1, 0, 1};
  Rng rng(1, {0});
  EXPECT_EQ(initial_state(m, st, rng).v, st.initial_visible);
  st.initial_visible = {1, 1};
  EXPECT_THROW(run_chain(m, st, 1), Error);
}

TEST(Chain, ZeroModelBitMeans) {
  const RbmModel m = RbmModel::zeros(6, 3);
  ChainSettings st;
  st.burn_in = 0;
  st.thin = 1;
  st.n_samples = 100000;
  const SampleBatch b = run_chain(m, st, 8);
  for (std::size_t i = 0; i < 6; ++i) {
    double ones = 0;
    for (std::size_t k = 0; k < b.size(); ++k) ones += b.samples.get(k, i);
    EXPECT_GE(ones / b.size(), 0.49);
    EXPECT_LE(ones / b.size(), 0.51);
  }
}

TEST(Chain, TotalVariationToExactMarginal) {
  const RbmModel m = random_model(4, 3, 1.0, 0.5, 21);
  ChainSettings st;
  st.burn_in = 1000;
  st.n_samples = 100000;
  const SampleBatch b = run_chain(m, st, 77);
  std::vector<double> freq(16, 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) {
    std::size_t code = 0;
    for (std::size_t i = 0; i < 4; ++i) code |= static_cast<std::size_t>(b.samples.get(k, i)) << i;
    freq[code] += 1.0 / static_cast<double>(b.size());
  }
  const auto exact = oracle::visible_marginal(m);
  double tv = 0.0;
  for (std::size_t c = 0; c < 16; ++c) tv += 0.5 * std::abs(freq[c] - exact[c]);
  EXPECT_LT(tv, 0.02);
}

TEST(Chain, Reproducible) {
  const RbmModel m = random_model(7, 4, 1.0, 0.5, 9);
  ChainSettings st;
  st.burn_in = 50;
  st.thin = 3;
  st.n_samples = 40;
  EXPECT_EQ(run_chain(m, st, 5), run_chain(m, st, 5));
  EXPECT_NE(run_chain(m, st, 5).samples, run_chain(m, st, 6).samples);
}

TEST(Train, AllZeroDataDrivesBiasesNegative) {
  const BitMatrix data(200, 8);
  TrainParams p;
  p.epochs = 100;
  const TrainResult res = cd1_train(data, 8, 4, p, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    const double act = oracle::logistic(res.model.visible_bias()[static_cast<Eigen::Index>(i)]);
    EXPECT_LT(act, 0.1);
  }
  EXPECT_EQ(res.reconstruction_error.size(), p.epochs);
  EXPECT_LT(res.reconstruction_error.back(), 0.1);
}

TEST(Train, ZeroLearningRateKeepsInitialization) {
  const BitMatrix data = synth_dataset(SynthKind::bars, 8, 50, 0.1, 1);
  TrainParams p;
  p.epochs = 1;
  p.learning_rate = 0.0;
  const TrainResult res = cd1_train(data, 8, 4, p, 42);
  EXPECT_EQ(res.model, random_model(8, 4, p.weight_init_std, 0.0, 42));
}

TEST(Train, TwoClusterMassOnPrototypes) {
  const BitMatrix data = synth_dataset(SynthKind::two_cluster, 8, 500, 0.0, 6);
  TrainParams p;
  p.epochs = 100;
  p.learning_rate = 0.1;
  const TrainResult res = cd1_train(data, 8, 4, p, 7);
  const auto pv = oracle::visible_marginal(res.model);
  EXPECT_GE(pv[0] + pv[255], 0.5);
}

TEST(Train, RejectsWidthMismatch) {
  EXPECT_THROW(cd1_train(BitMatrix(10, 5), 6, 3, {}, 1), Error);
}
