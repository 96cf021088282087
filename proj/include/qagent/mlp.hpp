// One-hidden-layer action-value network: sigmoid hidden units, symmetric
// sigmoid output, no biases, delta-rule backpropagation and per-weight
// adaptive gains.
#pragma once

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qagent {

struct GainRule {
  double increment = 0.05;
  double decay = 0.95;
  double min_gain = 0.1;
  double max_gain = 2.0;
  double initial_gain = 1.0;
};

struct Activations {
  std::vector<double> hidden;  // h_out
  double output = 0.0;         // o in (-1, 1)
};

/// Update directions from the delta rule. They already carry the error
/// sign, so the update adds them.
struct Gradients {
  std::vector<double> hidden;  // n_inp x n_hidden, row-major
  std::vector<double> output;  // n_hidden
};

class QNetwork {
 public:
  QNetwork() = default;
  QNetwork(std::size_t n_inp, std::size_t n_hidden, GainRule rule = {})
      : n_inp_(n_inp),
        n_hidden_(n_hidden),
        rule_(rule),
        w_hidden_(n_inp * n_hidden, 0.0),
        w_output_(n_hidden, 0.0),
        g_hidden_(n_inp * n_hidden, rule.initial_gain),
        g_output_(n_hidden, rule.initial_gain),
        prev_hidden_(n_inp * n_hidden, 0.0),
        prev_output_(n_hidden, 0.0) {
    if (n_inp == 0 || n_hidden == 0) throw std::invalid_argument("network dimensions must be positive");
  }

  /// Weights i.i.d. uniform in [-0.5, 0.5], gains at their initial value.
  template <class Urbg>
  static QNetwork init_random(std::size_t n_inp, std::size_t n_hidden, Urbg& rng,
                              GainRule rule = {}) {
    QNetwork net(n_inp, n_hidden, rule);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (double& w : net.w_hidden_) w = u(rng);
    for (double& w : net.w_output_) w = u(rng);
    return net;
  }

  std::size_t n_inp() const { return n_inp_; }
  std::size_t n_hidden() const { return n_hidden_; }

  double& w_hidden(std::size_t i, std::size_t j) { return w_hidden_[i * n_hidden_ + j]; }
  double w_hidden(std::size_t i, std::size_t j) const { return w_hidden_[i * n_hidden_ + j]; }
  double& w_output(std::size_t j) { return w_output_[j]; }
  double w_output(std::size_t j) const { return w_output_[j]; }

  std::span<const double> hidden_weights() const { return w_hidden_; }
  std::span<const double> output_weights() const { return w_output_; }
  std::span<const double> hidden_gains() const { return g_hidden_; }
  std::span<const double> output_gains() const { return g_output_; }
  bool has_gradient_history() const { return has_history_; }
  const GainRule& gain_rule() const { return rule_; }

  Activations activate(std::span<const double> s) const {
    check_input(s);
    Activations a;
    a.hidden.resize(n_hidden_);
    for (std::size_t j = 0; j < n_hidden_; ++j) {
      double z = 0.0;
      for (std::size_t i = 0; i < n_inp_; ++i) z += s[i] * w_hidden_[i * n_hidden_ + j];
      a.hidden[j] = 1.0 / (1.0 + std::exp(-z));
    }
    double o_inp = 0.0;
    for (std::size_t j = 0; j < n_hidden_; ++j) o_inp += a.hidden[j] * w_output_[j];
    a.output = 2.0 * (1.0 / (1.0 + std::exp(-o_inp)) - 0.5);
    return a;
  }

  double forward(std::span<const double> s) const { return activate(s).output; }

  Gradients backward(std::span<const double> s, double target) const {
    const Activations a = activate(s);
    const double o = a.output;
    const double delta_o = (target - o) * (o + 1.0) * (0.5 - o / 2.0);
    Gradients g;
    g.output.resize(n_hidden_);
    g.hidden.resize(n_inp_ * n_hidden_);
    for (std::size_t j = 0; j < n_hidden_; ++j) {
      const double h = a.hidden[j];
      g.output[j] = delta_o * h;
      const double delta_h = h * (1.0 - h) * w_output_[j] * delta_o;
      for (std::size_t i = 0; i < n_inp_; ++i) g.hidden[i * n_hidden_ + j] = delta_h * s[i];
    }
    return g;
  }

  /// W <- W + alpha * g * grad after adapting each gain on the sign of
  /// grad(t) * grad(t-1). The very first update leaves gains untouched.
  void apply_update(const Gradients& grad, double alpha) {
    if (grad.hidden.size() != w_hidden_.size() || grad.output.size() != w_output_.size())
      throw std::invalid_argument("gradient shape does not match network");
    update_block(w_hidden_, g_hidden_, prev_hidden_, grad.hidden, alpha);
    update_block(w_output_, g_output_, prev_output_, grad.output, alpha);
    has_history_ = true;
  }

  bool operator==(const QNetwork& o) const {
    return n_inp_ == o.n_inp_ && n_hidden_ == o.n_hidden_ && w_hidden_ == o.w_hidden_ &&
           w_output_ == o.w_output_ && g_hidden_ == o.g_hidden_ && g_output_ == o.g_output_;
  }

  bool same_weights(const QNetwork& o) const {
    return w_hidden_ == o.w_hidden_ && w_output_ == o.w_output_;
  }

  nlohmann::json to_json() const {
    return {{"version", kFormatVersion},
            {"n_inp", n_inp_},
            {"n_hidden", n_hidden_},
            {"W_h", w_hidden_},
            {"W_o", w_output_},
            {"gains", {{"hidden", g_hidden_}, {"output", g_output_}}}};
  }

  static QNetwork from_json(const nlohmann::json& j, GainRule rule = {}) {
    if (j.at("version").get<int>() != kFormatVersion)
      throw std::runtime_error("unsupported network format version");
    QNetwork net(j.at("n_inp").get<std::size_t>(), j.at("n_hidden").get<std::size_t>(), rule);
    auto load = [](const nlohmann::json& src, std::vector<double>& dst, const char* what) {
      auto v = src.get<std::vector<double>>();
      if (v.size() != dst.size())
        throw std::runtime_error(std::string("network field ") + what + " has wrong length");
      dst = std::move(v);
    };
    load(j.at("W_h"), net.w_hidden_, "W_h");
    load(j.at("W_o"), net.w_output_, "W_o");
    load(j.at("gains").at("hidden"), net.g_hidden_, "gains.hidden");
    load(j.at("gains").at("output"), net.g_output_, "gains.output");
    return net;
  }

  static constexpr int kFormatVersion = 1;

 private:
  void check_input(std::span<const double> s) const {
    if (s.size() != n_inp_)
      throw std::invalid_argument("network expects " + std::to_string(n_inp_) + " inputs, got " +
                                  std::to_string(s.size()));
  }

  void update_block(std::vector<double>& w, std::vector<double>& gain, std::vector<double>& prev,
                    const std::vector<double>& grad, double alpha) const {
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (has_history_) {
        if (grad[k] * prev[k] > 0.0)
          gain[k] = std::min(gain[k] + rule_.increment, rule_.max_gain);
        else
          gain[k] = std::max(gain[k] * rule_.decay, rule_.min_gain);
      }
      w[k] += alpha * gain[k] * grad[k];
      prev[k] = grad[k];
    }
  }

  std::size_t n_inp_ = 0;
  std::size_t n_hidden_ = 0;
  GainRule rule_;
  std::vector<double> w_hidden_, w_output_;
  std::vector<double> g_hidden_, g_output_;
  std::vector<double> prev_hidden_, prev_output_;
  bool has_history_ = false;
};

}  // namespace qagent
