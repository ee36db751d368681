#include "gmrbm/rbm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gmrbm {

namespace {

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

Eigen::VectorXd as_vector(std::span<const std::uint8_t> bits) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) x[static_cast<Eigen::Index>(i)] = bits[i] ? 1.0 : 0.0;
  return x;
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double log_sum_exp(std::span<const double> terms) {
  const double top = *std::max_element(terms.begin(), terms.end());
  double acc = 0.0;
  for (double t : terms) acc += std::exp(t - top);
  return top + std::log(acc);
}

void check_dims(const RbmModel& model, const GibbsState& state) {
  require(state.v.size() == model.visible() && state.h.size() == model.hidden(),
          ErrorCode::dimension_mismatch, "state dimensions do not match model");
}

void check_enumerable(const RbmModel& model) {
  require(model.visible() + model.hidden() <= kMaxEnumerationUnits, ErrorCode::too_large,
          "model too large for exact enumeration (r + h_dim > 24)");
}

// -F(v) = b_v'v + sum_j softplus(b_h_j + (W'v)_j), i.e. log sum_h exp(-E(v, h)).
std::vector<double> negative_free_energies(const RbmModel& model) {
  const std::size_t r = model.visible();
  std::vector<double> out(std::size_t{1} << r);
  std::vector<std::uint8_t> v(r);
  for (std::size_t code = 0; code < out.size(); ++code) {
    for (std::size_t i = 0; i < r; ++i) v[i] = (code >> i) & 1U;
    const Eigen::VectorXd net = model.hidden_input(v);
    double acc = model.visible_bias().dot(as_vector(v));
    for (Eigen::Index j = 0; j < net.size(); ++j) acc += softplus(net[j]);
    out[code] = acc;
  }
  return out;
}

}  // namespace

RbmModel::RbmModel(Eigen::MatrixXd weights, Eigen::VectorXd visible_bias, Eigen::VectorXd hidden_bias)
    : weights_(std::move(weights)),
      visible_bias_(std::move(visible_bias)),
      hidden_bias_(std::move(hidden_bias)) {
  require(visible_bias_.size() == weights_.rows() && hidden_bias_.size() == weights_.cols(),
          ErrorCode::dimension_mismatch, "bias lengths do not match weight matrix");
  require(all_finite(weights_) && all_finite(visible_bias_) && all_finite(hidden_bias_),
          ErrorCode::invalid_argument, "model parameters must be finite");
}

RbmModel RbmModel::zeros(std::size_t visible, std::size_t hidden) {
  const auto r = static_cast<Eigen::Index>(visible);
  const auto h = static_cast<Eigen::Index>(hidden);
  return RbmModel(Eigen::MatrixXd::Zero(r, h), Eigen::VectorXd::Zero(r), Eigen::VectorXd::Zero(h));
}

Eigen::VectorXd RbmModel::hidden_input(std::span<const std::uint8_t> v) const {
  require(v.size() == visible(), ErrorCode::dimension_mismatch, "visible vector length mismatch");
  Eigen::VectorXd net = hidden_bias_;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) net += weights_.row(static_cast<Eigen::Index>(i)).transpose();
  }
  return net;
}

Eigen::VectorXd RbmModel::visible_input(std::span<const std::uint8_t> h) const {
  require(h.size() == hidden(), ErrorCode::dimension_mismatch, "hidden vector length mismatch");
  Eigen::VectorXd net = visible_bias_;
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j]) net += weights_.col(static_cast<Eigen::Index>(j));
  }
  return net;
}

RbmModel random_model(std::size_t visible, std::size_t hidden, double weight_std, double bias_std,
                      std::uint64_t seed) {
  require(visible >= 1 && hidden >= 1, ErrorCode::invalid_argument, "model needs at least one unit per layer");
  require(weight_std >= 0 && bias_std >= 0, ErrorCode::invalid_argument, "standard deviations must be >= 0");
  Rng rng(seed, {0x6d6f64656cULL});
  RbmModel m = RbmModel::zeros(visible, hidden);
  Eigen::MatrixXd w(m.weights().rows(), m.weights().cols());
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) w(i, j) = weight_std * rng.normal();
  Eigen::VectorXd bv(w.rows()), bh(w.cols());
  for (Eigen::Index i = 0; i < bv.size(); ++i) bv[i] = bias_std * rng.normal();
  for (Eigen::Index j = 0; j < bh.size(); ++j) bh[j] = bias_std * rng.normal();
  return RbmModel(std::move(w), std::move(bv), std::move(bh));
}

void ChainSettings::validate(std::size_t visible) const {
  require(thin >= 1, ErrorCode::invalid_argument, "thin must be >= 1");
  require(n_samples >= 1, ErrorCode::invalid_argument, "n_samples must be >= 1");
  if (init == ChainInit::given_vector) {
    require(initial_visible.size() == visible, ErrorCode::dimension_mismatch,
            "initial visible vector length mismatch");
  }
}

const char* to_string(ChainInit init) noexcept {
  return init == ChainInit::random_uniform ? "random" : "given";
}

double energy(const RbmModel& model, const GibbsState& state) {
  check_dims(model, state);
  const Eigen::VectorXd v = as_vector(state.v);
  const Eigen::VectorXd h = as_vector(state.h);
  return -v.dot(model.weights() * h) - model.visible_bias().dot(v) - model.hidden_bias().dot(h);
}

double log_partition_exact(const RbmModel& model) {
  check_enumerable(model);
  const std::vector<double> terms = negative_free_energies(model);
  return log_sum_exp(terms);
}

std::vector<double> exact_visible_marginal(const RbmModel& model) {
  check_enumerable(model);
  std::vector<double> p = negative_free_energies(model);
  const double log_z = log_sum_exp(p);
  double total = 0.0;
  for (double& x : p) {
    x = std::exp(x - log_z);
    total += x;
  }
  for (double& x : p) x /= total;
  return p;
}

double sigmoid_prob(double net_input) noexcept {
  const double p = net_input >= 0 ? 1.0 / (1.0 + std::exp(-net_input))
                                  : std::exp(net_input) / (1.0 + std::exp(net_input));
  return std::clamp(p, 0.0, 1.0);
}

GibbsState gibbs_step(const RbmModel& model, const GibbsState& state, Rng& rng) {
  check_dims(model, state);
  GibbsState next;
  next.h.resize(model.hidden());
  const Eigen::VectorXd hnet = model.hidden_input(state.v);
  for (std::size_t j = 0; j < next.h.size(); ++j)
    next.h[j] = rng.bernoulli(sigmoid_prob(hnet[static_cast<Eigen::Index>(j)])) ? 1 : 0;
  next.v.resize(model.visible());
  const Eigen::VectorXd vnet = model.visible_input(next.h);
  for (std::size_t i = 0; i < next.v.size(); ++i)
    next.v[i] = rng.bernoulli(sigmoid_prob(vnet[static_cast<Eigen::Index>(i)])) ? 1 : 0;
  return next;
}

GibbsState initial_state(const RbmModel& model, const ChainSettings& settings, Rng& rng) {
  GibbsState s = GibbsState::zeros(model);
  if (settings.init == ChainInit::given_vector) {
    s.v = settings.initial_visible;
  } else {
    for (auto& bit : s.v) bit = rng.bit() ? 1 : 0;
  }
  return s;
}

SampleBatch run_chain(const RbmModel& model, const ChainSettings& settings, std::uint64_t seed) {
  return run_chain_with(model, settings, seed, "ideal",
                        [&](const GibbsState& s, Rng& rng) { return gibbs_step(model, s, rng); });
}

TrainResult cd1_train(const BitMatrix& data, std::size_t visible, std::size_t hidden,
                      const TrainParams& params, std::uint64_t seed) {
  require(!data.empty(), ErrorCode::invalid_argument, "training data is empty");
  require(data.cols() == visible, ErrorCode::dimension_mismatch, "training rows do not have length r");
  require(params.learning_rate >= 0 && std::isfinite(params.learning_rate), ErrorCode::invalid_argument,
          "learning rate must be finite and non-negative");
  require(params.epochs >= 1, ErrorCode::invalid_argument, "epochs must be >= 1");
  require(params.batch_size >= 1, ErrorCode::invalid_argument, "batch size must be >= 1");

  const RbmModel init = random_model(visible, hidden, params.weight_init_std, 0.0, seed);
  Eigen::MatrixXd w = init.weights();
  Eigen::VectorXd bv = init.visible_bias();
  Eigen::VectorXd bh = init.hidden_bias();

  const auto r = static_cast<Eigen::Index>(visible);
  const auto nh = static_cast<Eigen::Index>(hidden);
  Rng rng(seed, {0x747261696eULL});
  std::vector<std::size_t> order(data.rows());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto sigmoid = [](const Eigen::VectorXd& x) { return x.unaryExpr([](double a) { return sigmoid_prob(a); }).eval(); };

  std::vector<double> history;
  history.reserve(params.epochs);
  for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    double sq_error = 0.0;
    for (std::size_t start = 0; start < order.size(); start += params.batch_size) {
      const std::size_t stop = std::min(order.size(), start + params.batch_size);
      Eigen::MatrixXd dw = Eigen::MatrixXd::Zero(r, nh);
      Eigen::VectorXd dbv = Eigen::VectorXd::Zero(r);
      Eigen::VectorXd dbh = Eigen::VectorXd::Zero(nh);
      for (std::size_t k = start; k < stop; ++k) {
        Eigen::VectorXd v0(r);
        for (Eigen::Index i = 0; i < r; ++i) v0[i] = data.get(order[k], static_cast<std::size_t>(i)) ? 1.0 : 0.0;
        const Eigen::VectorXd ph0 = sigmoid(w.transpose() * v0 + bh);
        Eigen::VectorXd h0(nh);
        for (Eigen::Index j = 0; j < nh; ++j) h0[j] = rng.bernoulli(ph0[j]) ? 1.0 : 0.0;
        const Eigen::VectorXd pv1 = sigmoid(w * h0 + bv);
        const Eigen::VectorXd ph1 = sigmoid(w.transpose() * pv1 + bh);
        dw += v0 * ph0.transpose() - pv1 * ph1.transpose();
        dbv += v0 - pv1;
        dbh += ph0 - ph1;
        sq_error += (v0 - pv1).squaredNorm();
      }
      const double step = params.learning_rate / static_cast<double>(stop - start);
      w += step * dw;
      bv += step * dbv;
      bh += step * dbh;
    }
    history.push_back(sq_error / static_cast<double>(order.size() * visible));
  }
  return {RbmModel(std::move(w), std::move(bv), std::move(bh)), std::move(history)};
}

}  // namespace gmrbm
