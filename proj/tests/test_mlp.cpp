#include "qagent/mlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using qagent::GainRule;
using qagent::Gradients;
using qagent::QNetwork;

namespace {

QNetwork reference_net() {
  QNetwork net(3, 2);
  const double wh[3][2] = {{0.1, -0.2}, {0.3, 0.4}, {-0.5, 0.25}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) net.w_hidden(i, j) = wh[i][j];
  net.w_output(0) = 0.7;
  net.w_output(1) = -0.3;
  return net;
}

const std::vector<double> kInput{0.5, -1.0, 0.25};

double loss(const QNetwork& net, const std::vector<double>& s, double y) {
  const double d = y - net.forward(s);
  return d * d;
}

}  // namespace

TEST(Network, ForwardReferenceValues) {
  const auto a = reference_net().activate(kInput);
  EXPECT_NEAR(a.hidden[0], 0.40733340004593, 1e-13);
  EXPECT_NEAR(a.hidden[1], 0.392336830167108, 1e-13);
  EXPECT_NEAR(a.output, 0.083521140175361, 1e-13);
}

TEST(Network, BackwardReferenceValues) {
  const Gradients g = reference_net().backward(kInput, 0.6);
  EXPECT_NEAR(g.output[0], 0.104455765797741, 1e-13);
  EXPECT_NEAR(g.output[1], 0.100610075287571, 1e-13);
  const double wh[3][2] = {{0.021667605246331, -0.009170555589956},
                           {-0.043335210492662, 0.018341111179911},
                           {0.010833802623165, -0.004585277794978}};
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 2; ++j) EXPECT_NEAR(g.hidden[i * 2 + j], wh[i][j], 1e-13);
}

TEST(Network, OutputIsBounded) {
  QNetwork net(3, 4);
  for (std::size_t j = 0; j < 4; ++j) net.w_output(j) = 50.0;
  const std::vector<double> s{1, 1, 1};
  EXPECT_LE(net.forward(s), 1.0);
  net.w_output(0) = net.w_output(1) = net.w_output(2) = net.w_output(3) = -50.0;
  EXPECT_GE(net.forward(s), -1.0);
  QNetwork zero(3, 4);
  EXPECT_EQ(zero.forward(s), 0.0);
}

TEST(Network, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double h = 1e-5;
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n_inp = inst % 2 ? 15 : 3, n_hidden = inst % 3 ? 32 : 8;
    QNetwork net = QNetwork::init_random(n_inp, n_hidden, rng);
    std::vector<double> s(n_inp);
    for (double& v : s) v = u(rng);
    const double y = u(rng);
    const Gradients g = net.backward(s, y);
    double diff2 = 0.0, norm2 = 0.0;
    auto check = [&](double& w, double analytic) {
      const double keep = w;
      w = keep + h;
      const double lp = loss(net, s, y);
      w = keep - h;
      const double lm = loss(net, s, y);
      w = keep;
      const double fd = -0.5 * (lp - lm) / (2 * h);
      diff2 += (fd - analytic) * (fd - analytic);
      norm2 += analytic * analytic;
    };
    for (std::size_t j = 0; j < n_hidden; ++j) check(net.w_output(j), g.output[j]);
    for (std::size_t i = 0; i < n_inp; ++i)
      for (std::size_t j = 0; j < n_hidden; ++j) check(net.w_hidden(i, j), g.hidden[i * n_hidden + j]);
    worst = std::max(worst, std::sqrt(diff2 / norm2));
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Network, InitialWeightsWithinRange) {
  std::mt19937_64 rng(0);
  const QNetwork net = QNetwork::init_random(15, 64, rng);
  for (double w : net.hidden_weights()) {
    EXPECT_GE(w, -0.5);
    EXPECT_LE(w, 0.5);
  }
  for (double g : net.hidden_gains()) EXPECT_EQ(g, 1.0);
}

TEST(Gains, FirstUpdateLeavesGainsUntouched) {
  QNetwork net = reference_net();
  EXPECT_FALSE(net.has_gradient_history());
  const Gradients g = net.backward(kInput, 0.6);
  const double before = net.w_output(0);
  net.apply_update(g, 0.05);
  EXPECT_TRUE(net.has_gradient_history());
  for (double v : net.output_gains()) EXPECT_EQ(v, 1.0);
  EXPECT_NEAR(net.w_output(0), before + 0.05 * g.output[0], 1e-15);
}

TEST(Gains, IncreaseOnAgreementDecayOnFlip) {
  QNetwork net = reference_net();
  net.apply_update(net.backward(kInput, 0.9), 0.05);
  net.apply_update(net.backward(kInput, 0.9), 0.05);  // same sign
  for (double v : net.output_gains()) EXPECT_NEAR(v, 1.05, 1e-15);
  net.apply_update(net.backward(kInput, -0.9), 0.05);  // sign flips
  for (double v : net.output_gains()) EXPECT_NEAR(v, 1.05 * 0.95, 1e-15);
}

TEST(Gains, StayWithinBounds) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  QNetwork net = QNetwork::init_random(3, 8, rng);
  std::vector<double> s{0.3, -0.2, 0.9};
  for (int k = 0; k < 500; ++k) {
    const double y = k < 250 ? 1.0 : (k % 2 ? 1.0 : -1.0);
    net.apply_update(net.backward(s, y), 0.05);
    for (double g : net.hidden_gains()) ASSERT_TRUE(g >= 0.1 && g <= 2.0);
    for (double g : net.output_gains()) ASSERT_TRUE(g >= 0.1 && g <= 2.0);
  }
  // long same-sign run saturates at the cap
  QNetwork sat = QNetwork::init_random(3, 2, rng);
  for (int k = 0; k < 40; ++k) sat.apply_update(sat.backward(s, 1.0), 0.01);
  for (double g : sat.output_gains()) EXPECT_NEAR(g, 2.0, 1e-12);
}

TEST(Training, SingleTargetLossDecreasesMonotonically) {
  std::mt19937_64 rng(5);
  QNetwork net = QNetwork::init_random(3, 32, rng);
  const std::vector<double> s{0.4, -0.7, 0.1};
  const double y = 0.5;
  double prev = loss(net, s, y);
  for (int k = 0; k < 200; ++k) {
    net.apply_update(net.backward(s, y), 0.05);
    const double l = loss(net, s, y);
    ASSERT_LE(l, prev + 1e-15) << "step " << k;
    prev = l;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Training, FitsSeveralPoints) {
  std::mt19937_64 rng(6);
  QNetwork net = QNetwork::init_random(3, 32, rng);
  const std::vector<std::vector<double>> xs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, 0}};
  const std::vector<double> ys{0.5, -0.4, 0.2, -0.7};
  auto total = [&] {
    double t = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) t += loss(net, xs[i], ys[i]);
    return t;
  };
  const double start = total();
  for (int e = 0; e < 40000; ++e) {
    const std::size_t i = static_cast<std::size_t>(e) % xs.size();
    net.apply_update(net.backward(xs[i], ys[i]), 0.05);
  }
  EXPECT_LT(total(), 0.01 * start);
}

TEST(Serialization, RoundTripIsExact) {
  std::mt19937_64 rng(9);
  QNetwork net = QNetwork::init_random(15, 64, rng);
  std::vector<double> s(15, 0.1);
  net.apply_update(net.backward(s, 0.3), 0.05);
  net.apply_update(net.backward(s, -0.3), 0.05);
  const QNetwork back = QNetwork::from_json(nlohmann::json::parse(net.to_json().dump()));
  EXPECT_EQ(back, net);
}

TEST(Serialization, RejectsCorruptedFields) {
  auto j = reference_net().to_json();
  j["W_o"] = std::vector<double>{1.0};
  EXPECT_THROW(QNetwork::from_json(j), std::runtime_error);
  auto v = reference_net().to_json();
  v["version"] = 99;
  EXPECT_THROW(QNetwork::from_json(v), std::runtime_error);
}

TEST(Network, DimensionChecks) {
  const QNetwork net = reference_net();
  EXPECT_THROW(net.forward(std::vector<double>{1, 2}), std::invalid_argument);
  EXPECT_THROW(QNetwork(0, 3), std::invalid_argument);
  QNetwork m = reference_net();
  EXPECT_THROW(m.apply_update(Gradients{{1.0}, {1.0}}, 0.1), std::invalid_argument);
}
