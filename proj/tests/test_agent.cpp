#include "qagent/agent.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace qagent;
using std::numbers::pi;

namespace {

MeasurementConfig exact_mode() { return {}; }

CorrelatorVector single(double x, double y, double z) { return CorrelatorVector{{x, y, z}}; }

Agent small_agent(std::uint64_t seed = 0) {
  Rng rng(seed);
  return Agent(make_action_set(1, default_action_options(1)), 8, rng);
}

TrainConfig tiny_config(int qubits) {
  TrainConfig cfg;
  if (qubits == 2) cfg.hamiltonian = Hamiltonian::dimer(1.0);
  cfg.actions = default_action_options(qubits);
  cfg.epochs = 2;
  cfg.num_circuits = 10;
  cfg.validation_episodes = 5;
  cfg.seed = 21;
  return cfg;
}

}  // namespace

TEST(Actions, DefaultSetsHaveExpectedShape) {
  const auto one = make_action_set(1, default_action_options(1));
  ASSERT_EQ(one.size(), 9u);
  EXPECT_EQ(one[0].label, "IDLE");
  EXPECT_EQ(one[1].label, "RY(+0.5)");
  EXPECT_EQ(one[2].label, "RZ(+0.5)");
  EXPECT_EQ(one[3].label, "RY(-0.5)");
  EXPECT_EQ(one[8].label, "RZ(-0.25)");

  const auto two = make_action_set(2, default_action_options(2));
  ASSERT_EQ(two.size(), 19u);
  EXPECT_EQ(two[1].label, "RY(+1)q1");
  EXPECT_EQ(two[9].label, "RY(+1)q2");
  EXPECT_EQ(two[17].label, "CX12");
  EXPECT_EQ(two[18].label, "CX21");
  EXPECT_TRUE(two[18].is_cnot());
  EXPECT_EQ(two[18].qubit, 1);
}

TEST(Actions, OptionalEntries) {
  ActionSetOptions o = default_action_options(2);
  o.include_random_u3 = true;
  o.cnot_reverse = false;
  const auto set = make_action_set(2, o);
  EXPECT_EQ(set.size(), 20u);
  EXPECT_EQ(set.actions.back().label, "CX12");
  EXPECT_THROW(make_action_set(3, o), std::invalid_argument);
  o.delta = 0.0;
  EXPECT_THROW(make_action_set(1, o), std::invalid_argument);
}

TEST(Actions, RotationsAreU3Forms) {
  const auto set = make_action_set(1, default_action_options(1));
  Rng rng(0);
  const DensityState s = apply_action(DensityState(1), set[1], NoiseModel::off(), rng);
  const DensityState ref = apply_gate(DensityState(1), u3(0.5, 0, 0), 0, NoiseModel::off());
  EXPECT_LT((s.rho() - ref.rho()).cwiseAbs().maxCoeff(), 1e-15);
  const DensityState idle = apply_action(ref, set[0], NoiseModel::off(), rng);
  EXPECT_EQ(idle.rho(), ref.rho());
}

TEST(Replay, FifoWithCapacity) {
  ReplayMemory m(32);
  Rng rng(0);
  EXPECT_THROW(m.sample(rng), std::logic_error);
  for (int k = 0; k < 40; ++k) {
    m.push({single(0, 0, 0), static_cast<std::size_t>(k % 9), single(0, 0, 0), k * 1.0, false});
    EXPECT_LE(m.size(), 32u);
  }
  EXPECT_EQ(m.size(), 32u);
  EXPECT_EQ(m[0].reward, 8.0);
  EXPECT_EQ(m[31].reward, 39.0);
  for (std::size_t i = 1; i < m.size(); ++i) EXPECT_LT(m[i - 1].reward, m[i].reward);
}

TEST(Epsilon, LinearNonIncreasingAndReachesFinal) {
  const EpsilonSchedule e{1.0, 0.05, 100};
  EXPECT_EQ(e.at(0), 1.0);
  EXPECT_NEAR(e.at(50), 0.525, 1e-15);
  EXPECT_EQ(e.at(100), 0.05);
  EXPECT_EQ(e.at(1'000'000), 0.05);
  for (int t = 1; t <= 120; ++t) EXPECT_LE(e.at(t), e.at(t - 1));
  TrainConfig cfg;
  EXPECT_EQ(cfg.anneal_steps(), 100);
}

TEST(Policy, GreedyTieBreakPicksLowestIndex) {
  Rng rng(0);
  Agent agent(make_action_set(1, default_action_options(1)), 4, rng);
  for (std::size_t a = 0; a < agent.n_actions(); ++a)
    for (std::size_t j = 0; j < 4; ++j) {
      agent.online_mut(a).w_output(j) = 0.0;
      for (std::size_t i = 0; i < 3; ++i) agent.online_mut(a).w_hidden(i, j) = 0.0;
    }
  EXPECT_EQ(agent.greedy_action(single(0.2, -0.1, 0.7)), 0u);
  agent.online_mut(4).w_output(0) = 1.0;
  agent.online_mut(6).w_output(0) = 1.0;
  EXPECT_EQ(agent.greedy_action(single(0.2, -0.1, 0.7)), 4u);
}

TEST(Policy, GreedyIsPureFunctionOfState) {
  const Agent agent = small_agent();
  Rng a(1), b(999);
  const auto s = single(0.3, 0.2, -0.9);
  EXPECT_EQ(agent.select_action(s, 0.0, a), agent.select_action(s, 0.0, b));
  EXPECT_THROW(agent.select_action(CorrelatorVector{{0.0}}, 0.0, a), std::invalid_argument);
}

TEST(Policy, FullExplorationIsUniform) {
  const Agent agent = small_agent();
  Rng rng(5);
  std::vector<int> counts(9, 0);
  const int draws = 90'000;
  for (int k = 0; k < draws; ++k) ++counts[agent.select_action(single(0, 0, 1), 1.0, rng)];
  double chi2 = 0.0;
  const double expected = draws / 9.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 26.12);  // chi-square, 8 degrees of freedom, p = 0.001
}

TEST(Learning, TerminalTargetIsReward) {
  const Agent agent = small_agent();
  const Transition t{single(0, 0, 1), 2, single(1, 0, 0), 0.3, true};
  EXPECT_EQ(agent.bootstrap_target(t), 0.3);
}

TEST(Learning, BootstrapTargetIsClipped) {
  Rng rng(0);
  Agent agent(make_action_set(1, default_action_options(1)), 4, rng, 0.05, 0.99);
  for (std::size_t j = 0; j < 4; ++j) agent.online_mut(3).w_output(j) = 40.0;
  // refresh targets by forcing target_update updates
  ReplayMemory m(1);
  m.push({single(0, 0, 1), 0, single(0, 0, 1), 0.0, true});
  for (int k = 0; k < 500; ++k) agent.learn_step(m, rng);
  const Transition t{single(0, 0, 1), 1, single(0.5, 0.5, 0.5), 0.9, false};
  EXPECT_GT(0.9 + 0.99 * agent.max_target_q(t.s_next), 1.0);
  EXPECT_EQ(agent.bootstrap_target(t), 1.0);
  const Transition neg{single(0, 0, 1), 1, single(0, 0, 1), -1.7, true};
  EXPECT_EQ(agent.bootstrap_target(neg), -1.0);
}

TEST(Learning, OnlyTheSampledNetworkChanges) {
  Agent agent = small_agent(3);
  const Agent before = agent;
  ReplayMemory m(4);
  m.push({single(0.1, 0.2, 0.3), 5, single(0.3, 0.2, 0.1), 0.4, false});
  Rng rng(0);
  const auto res = agent.learn_step(m, rng);
  EXPECT_EQ(res.action, 5u);
  for (std::size_t a = 0; a < agent.n_actions(); ++a) {
    if (a == 5) EXPECT_FALSE(agent.online(a).same_weights(before.online(a)));
    else EXPECT_TRUE(agent.online(a) == before.online(a)) << a;
    EXPECT_TRUE(agent.target(a) == before.target(a));
  }
}

TEST(Learning, TargetsSyncEveryC) {
  Agent agent = small_agent(4);
  const Agent initial = agent;
  ReplayMemory m(2);
  m.push({single(0.1, 0.2, 0.3), 1, single(0.3, 0.2, 0.1), 0.4, false});
  m.push({single(-0.1, 0.5, 0.3), 2, single(0.0, 0.2, 0.1), -0.2, false});
  Rng rng(0);
  for (int k = 0; k < 499; ++k) agent.learn_step(m, rng);
  for (std::size_t a = 0; a < agent.n_actions(); ++a) EXPECT_TRUE(agent.target(a) == initial.target(a));
  agent.learn_step(m, rng);
  EXPECT_EQ(agent.updates(), 500);
  for (std::size_t a = 0; a < agent.n_actions(); ++a) EXPECT_TRUE(agent.target(a) == agent.online(a));
}

TEST(Learning, TargetsStayInRangeDuringTraining) {
  const TrainConfig cfg = tiny_config(1);
  const Environment env = make_environment(cfg);
  Rng rng(1);
  Agent agent(env.actions(), 8, rng);
  ReplayMemory m(32);
  for (int e = 0; e < 20; ++e) {
    Circuit c = env.init_episode(rng);
    for (int t = 0; t < cfg.num_gates; ++t) {
      const auto s = c.s;
      const auto a = agent.select_action(s, 0.5, rng);
      auto r = env.step(c, a, rng);
      m.push({s, a, r.s_next, r.reward, t + 1 == cfg.num_gates});
      const auto res = agent.learn_step(m, rng);
      ASSERT_GE(res.target, -1.0);
      ASSERT_LE(res.target, 1.0);
    }
  }
}

TEST(Environment, AntiparallelDimerStartHasClassicalEnergy) {
  const Environment env(Hamiltonian::dimer(1.0), make_action_set(2, default_action_options(2)), exact_mode(), 10);
  Rng rng(2);
  for (int k = 0; k < 50; ++k) EXPECT_NEAR(env.init_episode(rng).energy, -0.25, 1e-12);
  EXPECT_NEAR(env.init_episode_with(0.3, 1.1, 0.0, rng).energy, -0.25, 1e-12);
}

TEST(Environment, RewardsTelescope) {
  const Environment env(Hamiltonian::single_spin({1, 1, 1}), make_action_set(1, default_action_options(1)),
                        MeasurementConfig{1024, {}, false}, 10);
  Rng rng(3);
  std::uniform_int_distribution<std::size_t> pick(0, 8);
  for (int e = 0; e < 20; ++e) {
    Circuit c = env.init_episode(rng);
    const double e0 = c.energy;
    double total = 0.0;
    for (int t = 0; t < 10; ++t) total += env.step(c, pick(rng), rng).reward;
    EXPECT_NEAR(total, e0 - c.energy, 1e-12);
    EXPECT_THROW(env.step(c, 0, rng), EpisodeComplete);
  }
}

TEST(Environment, RejectsMismatchedActions) {
  EXPECT_THROW(Environment(Hamiltonian::dimer(1.0), make_action_set(1, default_action_options(1)), exact_mode(), 5),
               std::invalid_argument);
}

TEST(Evaluate, ReportShape) {
  const TrainConfig cfg = tiny_config(2);
  const Environment env = make_environment(cfg);
  Rng rng(0);
  const Agent agent(env.actions(), 16, rng);
  const auto rep = evaluate(agent, env, 12, 77);
  ASSERT_EQ(rep.episodes.size(), 12u);
  double mean = 0.0;
  for (const auto& ep : rep.episodes) {
    EXPECT_LE(ep.e_min, ep.e_final);
    EXPECT_LE(ep.e_min, ep.e_initial);
    EXPECT_EQ(ep.actions.size(), 10u);
    EXPECT_EQ(ep.steps.size(), 10u);
    mean += ep.e_final / 12.0;
  }
  EXPECT_NEAR(rep.mean_final_energy, mean, 1e-12);
  const auto again = evaluate(agent, env, 12, 77);
  EXPECT_EQ(again.mean_reward, rep.mean_reward);
}

TEST(Serialization, AgentRoundTrip) {
  Agent agent = small_agent(8);
  ReplayMemory m(1);
  m.push({single(0.1, 0.2, 0.3), 1, single(0.3, 0.2, 0.1), 0.4, false});
  Rng rng(0);
  agent.learn_step(m, rng);
  const auto j = nlohmann::json::parse(agent.to_json().dump());
  const Agent back = Agent::from_json(j, default_action_options(1));
  EXPECT_EQ(back.updates(), 1);
  for (std::size_t a = 0; a < agent.n_actions(); ++a) {
    EXPECT_TRUE(back.online(a) == agent.online(a));
    EXPECT_TRUE(back.target(a) == agent.target(a));
  }
  ActionSetOptions other = default_action_options(1);
  other.include_random_u3 = true;
  EXPECT_THROW(Agent::from_json(j, other), std::runtime_error);
}

TEST(Training, MetricsCountAndDeterminism) {
  TrainConfig cfg = tiny_config(1);
  const auto a = train(cfg);
  const auto b = train(cfg);
  ASSERT_EQ(a.metrics.size(), 20u);
  ASSERT_EQ(a.epochs.size(), 2u);
  for (std::size_t k = 0; k < a.metrics.size(); ++k) {
    EXPECT_EQ(a.metrics[k].e_final, b.metrics[k].e_final);
    EXPECT_EQ(a.metrics[k].gates, b.metrics[k].gates);
    EXPECT_EQ(a.metrics[k].gates.size(), 10u);
  }
  EXPECT_GE(a.best_epoch, 0);
  cfg.seed = 22;
  const auto c = train(cfg);
  EXPECT_NE(a.metrics.back().e_final, c.metrics.back().e_final);
}

TEST(Training, BestEpochHasHighestValidationReward) {
  TrainConfig cfg = tiny_config(1);
  cfg.epochs = 5;
  const auto r = train(cfg);
  for (const auto& e : r.epochs)
    EXPECT_LE(e.validation_reward, r.epochs[static_cast<std::size_t>(r.best_epoch)].validation_reward);
  cfg.validation_episodes = 0;
  const auto plain = train(cfg);
  EXPECT_EQ(plain.best_epoch, -1);
  EXPECT_FALSE(plain.best_agent.has_value());
}

TEST(Training, InvalidConfigRejected) {
  TrainConfig cfg;
  cfg.gamma = 1.5;
  EXPECT_THROW(train(cfg), std::invalid_argument);
  cfg = TrainConfig{};
  cfg.num_gates = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Rng, EpisodeStreamsAreIndependentOfOrder) {
  Rng a = episode_rng(5, 3), b = episode_rng(5, 3), c = episode_rng(5, 4);
  EXPECT_EQ(a(), b());
  EXPECT_NE(episode_rng(5, 3)(), c());
}
