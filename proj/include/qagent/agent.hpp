// Multi-network Q-learning agent that grows a circuit one gate at a time.
//
// One QNetwork per action estimates Q(s, a) from the correlator vector s.
// Training follows the classic replay-memory / target-network loop with
// epsilon-greedy exploration, reward r = E_t - E_{t+1} and targets clipped
// to the output range of the networks.
#pragma once

#include "qagent/mlp.hpp"
#include "qagent/observables.hpp"
#include "qagent/qsim.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qagent {

struct GateAction {
  enum class Kind { Idle, Rotation, Cnot, RandomU3 };

  Kind kind = Kind::Idle;
  int qubit = 0;   // rotation target or CNOT control
  int target = 0;  // CNOT target
  double theta = 0.0;
  double phi = 0.0;
  std::string label;

  bool is_cnot() const { return kind == Kind::Cnot; }
};

struct ActionSetOptions {
  double delta = 0.5;
  bool include_random_u3 = false;
  bool cnot_forward = true;  // control qubit 1, target qubit 2
  bool cnot_reverse = true;  // control qubit 2, target qubit 1

  bool operator==(const ActionSetOptions&) const = default;
};

struct ActionSet {
  std::vector<GateAction> actions;
  double delta = 0.5;
  int n_qubits = 1;

  std::size_t size() const { return actions.size(); }
  const GateAction& operator[](std::size_t i) const { return actions[i]; }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& a : actions) out.push_back(a.label);
    return out;
  }
};

namespace detail {
inline std::string angle_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%+g", v);
  return buf;
}
}  // namespace detail

/// Per qubit, in order: Y(+d), Z(+d), Y(-d), Z(-d), Y(+d/2), Z(+d/2),
/// Y(-d/2), Z(-d/2). Y-type actions are U3(t, 0, 0), Z-type are U3(0, t, 0).
/// The list starts with IDLE; two-qubit sets end with the enabled CNOTs.
inline ActionSet make_action_set(int n_qubits, const ActionSetOptions& opt) {
  if (n_qubits != 1 && n_qubits != 2) throw std::invalid_argument("action sets cover 1 or 2 qubits");
  if (!(opt.delta > 0.0)) throw std::invalid_argument("elementary angle must be positive");
  ActionSet set;
  set.delta = opt.delta;
  set.n_qubits = n_qubits;
  set.actions.push_back({GateAction::Kind::Idle, 0, 0, 0.0, 0.0, "IDLE"});
  const double d = opt.delta;
  const std::vector<double> angles{d, d, -d, -d, d / 2, d / 2, -d / 2, -d / 2};
  for (int q = 0; q < n_qubits; ++q) {
    const std::string suffix = n_qubits == 1 ? "" : "q" + std::to_string(q + 1);
    for (std::size_t k = 0; k < angles.size(); ++k) {
      const bool y_type = k % 2 == 0;
      GateAction a{GateAction::Kind::Rotation, q, q, 0.0, 0.0, ""};
      (y_type ? a.theta : a.phi) = angles[k];
      a.label = std::string(y_type ? "RY(" : "RZ(") + detail::angle_text(angles[k]) + ")" + suffix;
      set.actions.push_back(a);
    }
  }
  if (opt.include_random_u3)
    for (int q = 0; q < n_qubits; ++q)
      set.actions.push_back({GateAction::Kind::RandomU3, q, q, 0.0, 0.0,
                             n_qubits == 1 ? "U3rand" : "U3rand" + std::string("q") + std::to_string(q + 1)});
  if (n_qubits == 2) {
    if (opt.cnot_forward) set.actions.push_back({GateAction::Kind::Cnot, 0, 1, 0.0, 0.0, "CX12"});
    if (opt.cnot_reverse) set.actions.push_back({GateAction::Kind::Cnot, 1, 0, 0.0, 0.0, "CX21"});
  }
  return set;
}

inline DensityState apply_action(DensityState state, const GateAction& a, const NoiseModel& noise,
                                 Rng& rng) {
  switch (a.kind) {
    case GateAction::Kind::Idle:
      return state;
    case GateAction::Kind::Rotation:
      return apply_gate(std::move(state), u3(a.theta, a.phi, 0.0), a.qubit, noise);
    case GateAction::Kind::RandomU3: {
      std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
      const double t = ang(rng), p = ang(rng), l = ang(rng);
      return apply_gate(std::move(state), u3(t, p, l), a.qubit, noise);
    }
    case GateAction::Kind::Cnot:
      return apply_gate(std::move(state), cnot(), a.qubit, a.target, noise);
  }
  return state;
}

struct Transition {
  CorrelatorVector s;
  std::size_t action = 0;
  CorrelatorVector s_next;
  double reward = 0.0;
  bool terminal = false;
};

/// Fixed-capacity FIFO of transitions.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay capacity must be positive");
  }

  void push(Transition t) {
    if (items_.size() == capacity_) items_.pop_front();
    items_.push_back(std::move(t));
  }

  const Transition& sample(Rng& rng) const {
    if (items_.empty()) throw std::logic_error("cannot sample from an empty replay memory");
    std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
    return items_[pick(rng)];
  }

  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const Transition& operator[](std::size_t i) const { return items_[i]; }

 private:
  std::size_t capacity_;
  std::deque<Transition> items_;
};

/// Linear interpolation from `initial` to `final` over `anneal_steps`
/// measurements, constant afterwards.
struct EpsilonSchedule {
  double initial = 1.0;
  double final = 0.05;
  std::int64_t anneal_steps = 100;

  double at(std::int64_t step) const {
    if (anneal_steps <= 0 || step >= anneal_steps) return final;
    const double frac = static_cast<double>(step) / static_cast<double>(anneal_steps);
    return initial + (final - initial) * frac;
  }
};

struct TrainConfig {
  Hamiltonian hamiltonian = Hamiltonian::single_spin({1.0, 1.0, 1.0});
  ActionSetOptions actions;
  int num_circuits = 100;
  int num_gates = 10;
  int epochs = 300;
  double gamma = 0.99;
  double alpha = 0.05;
  int target_update = 500;
  int memory_capacity = 32;
  int batch_size = 1;
  double epsilon_initial = 1.0;
  double epsilon_final = 0.05;
  std::int64_t epsilon_anneal_steps = 0;  // 0: 10 x num_gates
  int hidden = 0;                         // 0: 32 for one qubit, 64 for two
  MeasurementConfig measurement;
  std::uint64_t seed = 0;
  // Epsilon-greedy episodes run after every epoch on a fixed set of initial
  // states; the epoch with the best average reward is kept. 0 disables.
  int validation_episodes = 100;
  double validation_epsilon = 0.05;

  int n_qubits() const { return hamiltonian.n_qubits(); }
  int hidden_units() const { return hidden > 0 ? hidden : (n_qubits() == 1 ? 32 : 64); }
  std::int64_t anneal_steps() const {
    return epsilon_anneal_steps > 0 ? epsilon_anneal_steps : 10 * static_cast<std::int64_t>(num_gates);
  }
  EpsilonSchedule epsilon_schedule() const {
    return {epsilon_initial, epsilon_final, anneal_steps()};
  }

  void validate() const {
    if (num_circuits <= 0 || num_gates <= 0 || epochs < 0 || target_update <= 0 ||
        memory_capacity <= 0 || batch_size <= 0 || validation_episodes < 0)
      throw std::invalid_argument("training counts must be positive");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (!(epsilon_initial >= 0.0 && epsilon_initial <= 1.0 && epsilon_final >= 0.0 &&
          epsilon_final <= 1.0))
      throw std::invalid_argument("epsilon values must lie in [0, 1]");
    measurement.noise.validate();
  }
};

/// Default options per problem size: delta 0.5 rad for one spin, 1.0 rad for the dimer.
inline ActionSetOptions default_action_options(int n_qubits) {
  ActionSetOptions o;
  o.delta = n_qubits == 1 ? 0.5 : 1.0;
  return o;
}

struct LearnResult {
  std::size_t action = 0;
  double target = 0.0;  // clipped y
  double loss = 0.0;    // (y - Q)^2 before the update
};

class Agent {
 public:
  Agent(ActionSet actions, std::size_t n_hidden, Rng& rng, double alpha = 0.05, double gamma = 0.99,
        int target_update = 500)
      : actions_(std::move(actions)), alpha_(alpha), gamma_(gamma), target_update_(target_update) {
    const std::size_t n_inp = actions_.n_qubits == 1 ? layout::kSingle : layout::kDimer;
    for (std::size_t k = 0; k < actions_.size(); ++k)
      online_.push_back(QNetwork::init_random(n_inp, n_hidden, rng));
    target_ = online_;
  }

  const ActionSet& actions() const { return actions_; }
  std::size_t n_actions() const { return actions_.size(); }
  std::size_t n_inp() const { return online_.front().n_inp(); }
  std::int64_t updates() const { return updates_; }
  const QNetwork& online(std::size_t a) const { return online_.at(a); }
  const QNetwork& target(std::size_t a) const { return target_.at(a); }
  QNetwork& online_mut(std::size_t a) { return online_.at(a); }
  double gamma() const { return gamma_; }
  double alpha() const { return alpha_; }

  std::vector<double> q_values(const CorrelatorVector& s) const {
    std::vector<double> q;
    q.reserve(online_.size());
    for (const auto& net : online_) q.push_back(net.forward(s.span()));
    return q;
  }

  /// Lowest index wins ties.
  std::size_t greedy_action(const CorrelatorVector& s) const {
    const auto q = q_values(s);
    return static_cast<std::size_t>(std::max_element(q.begin(), q.end()) - q.begin());
  }

  std::size_t select_action(const CorrelatorVector& s, double epsilon, Rng& rng) const {
    if (s.size() != n_inp()) throw std::invalid_argument("state size does not match the networks");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, online_.size() - 1);
      return pick(rng);
    }
    return greedy_action(s);
  }

  double max_target_q(const CorrelatorVector& s) const {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& net : target_) best = std::max(best, net.forward(s.span()));
    return best;
  }

  double bootstrap_target(const Transition& t) const {
    const double y = t.terminal ? t.reward : t.reward + gamma_ * max_target_q(t.s_next);
    return std::clamp(y, -1.0, 1.0);
  }

  /// One stored transition, one update of that action's online network.
  /// Every `target_update` updates the target networks are refreshed.
  LearnResult learn_step(const ReplayMemory& memory, Rng& rng) {
    const Transition& t = memory.sample(rng);
    LearnResult res;
    res.action = t.action;
    res.target = bootstrap_target(t);
    QNetwork& net = online_.at(t.action);
    const double q = net.forward(t.s.span());
    res.loss = (res.target - q) * (res.target - q);
    net.apply_update(net.backward(t.s.span(), res.target), alpha_);
    ++updates_;
    if (updates_ % target_update_ == 0) target_ = online_;
    return res;
  }

  nlohmann::json to_json() const {
    nlohmann::json nets = nlohmann::json::array(), targets = nlohmann::json::array();
    for (const auto& n : online_) nets.push_back(n.to_json());
    for (const auto& n : target_) targets.push_back(n.to_json());
    return {{"version", kFormatVersion},
            {"n_qubits", actions_.n_qubits},
            {"delta", actions_.delta},
            {"actions", actions_.labels()},
            {"alpha", alpha_},
            {"gamma", gamma_},
            {"target_update", target_update_},
            {"updates", updates_},
            {"networks", nets},
            {"target_networks", targets}};
  }

  /// Rebuilds an agent; the action set is regenerated from `options` and
  /// must reproduce the stored labels.
  static Agent from_json(const nlohmann::json& j, const ActionSetOptions& options) {
    if (j.at("version").get<int>() != kFormatVersion)
      throw std::runtime_error("unsupported agent format version");
    ActionSetOptions opt = options;
    opt.delta = j.at("delta").get<double>();
    const int n_qubits = j.at("n_qubits").get<int>();
    ActionSet set = make_action_set(n_qubits, opt);
    if (set.labels() != j.at("actions").get<std::vector<std::string>>())
      throw std::runtime_error("stored action list does not match the configured action set");
    Agent agent(std::move(set));
    agent.alpha_ = j.at("alpha").get<double>();
    agent.gamma_ = j.at("gamma").get<double>();
    agent.target_update_ = j.at("target_update").get<int>();
    agent.updates_ = j.at("updates").get<std::int64_t>();
    for (const auto& n : j.at("networks")) agent.online_.push_back(QNetwork::from_json(n));
    for (const auto& n : j.at("target_networks")) agent.target_.push_back(QNetwork::from_json(n));
    const std::size_t n_inp = n_qubits == 1 ? layout::kSingle : layout::kDimer;
    if (agent.online_.size() != agent.actions_.size() || agent.target_.size() != agent.actions_.size())
      throw std::runtime_error("network count does not match the action count");
    for (const auto& n : agent.online_)
      if (n.n_inp() != n_inp) throw std::runtime_error("network input size does not match qubit count");
    return agent;
  }

  static constexpr int kFormatVersion = 1;

 private:
  explicit Agent(ActionSet actions) : actions_(std::move(actions)) {}

  ActionSet actions_;
  std::vector<QNetwork> online_;
  std::vector<QNetwork> target_;
  double alpha_ = 0.05;
  double gamma_ = 0.99;
  int target_update_ = 500;
  std::int64_t updates_ = 0;
};

/// A circuit under construction together with its latest measurement.
struct Circuit {
  DensityState state{1};
  std::vector<std::size_t> actions;
  CorrelatorVector s;
  double energy = 0.0;
};

struct StepResult {
  CorrelatorVector s_next;
  double reward = 0.0;
  double energy = 0.0;
};

class EpisodeComplete : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The game: random initial state, gates appended by the agent, energy
/// measured after every gate.
class Environment {
 public:
  Environment(Hamiltonian h, ActionSet actions, MeasurementConfig measurement, int num_gates)
      : h_(h), actions_(std::move(actions)), measurement_(std::move(measurement)), num_gates_(num_gates) {
    if (actions_.n_qubits != h_.n_qubits())
      throw std::invalid_argument("action set and Hamiltonian disagree on qubit count");
  }

  const Hamiltonian& hamiltonian() const { return h_; }
  const ActionSet& actions() const { return actions_; }
  const MeasurementConfig& measurement() const { return measurement_; }
  int num_gates() const { return num_gates_; }

  /// One qubit: U3 with theta in [0, pi], phi and lambda in [0, 2 pi).
  /// Two qubits: the same on qubit 1, qubit 2 antiparallel on the Bloch
  /// sphere (theta2 = pi - theta1, phi2 = phi1 + pi).
  Circuit init_episode(Rng& rng) const {
    using std::numbers::pi;
    std::uniform_real_distribution<double> polar(0.0, pi), azimuth(0.0, 2.0 * pi);
    const double theta = polar(rng), phi = azimuth(rng), lambda = azimuth(rng);
    return init_episode_with(theta, phi, lambda, rng);
  }

  Circuit init_episode_with(double theta, double phi, double lambda, Rng& rng) const {
    using std::numbers::pi;
    Circuit c;
    c.state = DensityState(h_.n_qubits());
    c.state = apply_gate(std::move(c.state), u3(theta, phi, lambda), 0, measurement_.noise);
    if (h_.n_qubits() == 2)
      c.state = apply_gate(std::move(c.state), u3(pi - theta, phi + pi, lambda), 1, measurement_.noise);
    c.s = estimate_correlators(c.state, measurement_, rng);
    c.energy = energy(h_, c.s);
    return c;
  }

  StepResult step(Circuit& c, std::size_t action, Rng& rng) const {
    if (static_cast<int>(c.actions.size()) >= num_gates_)
      throw EpisodeComplete("circuit already holds " + std::to_string(num_gates_) + " gates");
    c.state = apply_action(std::move(c.state), actions_.actions.at(action), measurement_.noise, rng);
    c.actions.push_back(action);
    StepResult r;
    r.s_next = estimate_correlators(c.state, measurement_, rng);
    r.energy = energy(h_, r.s_next);
    r.reward = c.energy - r.energy;
    c.s = r.s_next;
    c.energy = r.energy;
    return r;
  }

 private:
  Hamiltonian h_;
  ActionSet actions_;
  MeasurementConfig measurement_;
  int num_gates_;
};

struct StepRecord {
  std::size_t action = 0;
  double energy = 0.0;
  CorrelatorVector s;
};

struct EvalEpisode {
  double e_initial = 0.0;
  double e_final = 0.0;
  double e_min = 0.0;
  double total_reward = 0.0;
  std::vector<std::size_t> actions;
  CorrelatorVector s_initial;
  std::vector<StepRecord> steps;

  bool uses_cnot(const ActionSet& set) const {
    return std::any_of(actions.begin(), actions.end(),
                       [&](std::size_t a) { return set[a].is_cnot(); });
  }
};

struct EvalReport {
  std::vector<EvalEpisode> episodes;
  double mean_reward = 0.0;
  double mean_final_energy = 0.0;
  double mean_min_energy = 0.0;
  double lowest_energy = 0.0;
  double cnot_fraction = 0.0;
};

/// Seeds episode `index` of a run keyed by `seed` independently of all others.
inline Rng episode_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

/// Runs `episodes` circuits with the epsilon-greedy policy (epsilon 0.05
/// by default).
inline EvalReport evaluate(const Agent& agent, const Environment& env, int episodes,
                           std::uint64_t seed, double epsilon = 0.05) {
  if (agent.actions().labels() != env.actions().labels())
    throw std::invalid_argument("agent and environment use different action sets");
  EvalReport rep;
  for (int e = 0; e < episodes; ++e) {
    Rng rng = episode_rng(seed, static_cast<std::uint64_t>(e));
    Circuit c = env.init_episode(rng);
    EvalEpisode ep;
    ep.e_initial = c.energy;
    ep.e_min = c.energy;
    ep.s_initial = c.s;
    for (int t = 0; t < env.num_gates(); ++t) {
      const std::size_t a = agent.select_action(c.s, epsilon, rng);
      const StepResult r = env.step(c, a, rng);
      ep.total_reward += r.reward;
      ep.e_min = std::min(ep.e_min, r.energy);
      ep.actions.push_back(a);
      ep.steps.push_back({a, r.energy, r.s_next});
    }
    ep.e_final = c.energy;
    rep.episodes.push_back(std::move(ep));
  }
  if (episodes > 0) {
    rep.lowest_energy = std::numeric_limits<double>::infinity();
    int with_cnot = 0;
    for (const auto& ep : rep.episodes) {
      rep.mean_reward += ep.total_reward;
      rep.mean_final_energy += ep.e_final;
      rep.mean_min_energy += ep.e_min;
      rep.lowest_energy = std::min(rep.lowest_energy, ep.e_min);
      if (ep.uses_cnot(env.actions())) ++with_cnot;
    }
    const double n = episodes;
    rep.mean_reward /= n;
    rep.mean_final_energy /= n;
    rep.mean_min_energy /= n;
    rep.cnot_fraction = with_cnot / n;
  }
  return rep;
}

struct EpisodeMetrics {
  int epoch = 0;
  int episode = 0;
  double epsilon = 0.0;
  double e_initial = 0.0;
  double e_final = 0.0;
  double e_min = 0.0;
  double total_reward = 0.0;
  std::vector<std::string> gates;
};

struct EpochSummary {
  int epoch = 0;
  double mean_reward = 0.0;             // training episodes
  double mean_final_energy = 0.0;       // training episodes
  double validation_reward = 0.0;       // fixed validation episodes
  double validation_final_energy = 0.0;
};

struct TrainHooks {
  std::function<void(const EpisodeMetrics&)> on_episode;
  std::function<void(const EpochSummary&, const Agent&)> on_epoch_end;
};

struct TrainResult {
  Agent agent;                      // weights after the last epoch
  std::optional<Agent> best_agent;  // snapshot of the best validation epoch
  int best_epoch = -1;
  std::vector<EpisodeMetrics> metrics;
  std::vector<EpochSummary> epochs;

  const Agent& selected() const { return best_agent ? *best_agent : agent; }
};

/// Seed of the validation episode set used during training.
inline std::uint64_t validation_seed(std::uint64_t seed) { return seed ^ 0x5eed5eed5eed5eedull; }

inline Environment make_environment(const TrainConfig& cfg) {
  return Environment(cfg.hamiltonian, make_action_set(cfg.n_qubits(), cfg.actions), cfg.measurement,
                     cfg.num_gates);
}

/// epochs x num_circuits episodes of num_gates steps, one learn step per
/// environment step. Deterministic for a given seed.
inline TrainResult train(const TrainConfig& cfg, const TrainHooks& hooks = {}) {
  cfg.validate();
  Rng rng(cfg.seed);
  const Environment env = make_environment(cfg);
  Agent agent(env.actions(), static_cast<std::size_t>(cfg.hidden_units()), rng, cfg.alpha, cfg.gamma,
              cfg.target_update);
  ReplayMemory memory(static_cast<std::size_t>(cfg.memory_capacity));
  const EpsilonSchedule schedule = cfg.epsilon_schedule();
  std::int64_t measurements = 0;
  std::vector<EpisodeMetrics> metrics;
  metrics.reserve(static_cast<std::size_t>(cfg.epochs) * static_cast<std::size_t>(cfg.num_circuits));
  std::vector<EpochSummary> summaries;
  std::optional<Agent> best;
  int best_epoch = -1;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (int episode = 0; episode < cfg.num_circuits; ++episode) {
      Circuit c = env.init_episode(rng);
      EpisodeMetrics m;
      m.epoch = epoch;
      m.episode = episode;
      m.epsilon = schedule.at(measurements);
      m.e_initial = c.energy;
      m.e_min = c.energy;
      for (int t = 0; t < cfg.num_gates; ++t) {
        const double eps = schedule.at(measurements);
        const CorrelatorVector s = c.s;
        const std::size_t a = agent.select_action(s, eps, rng);
        StepResult r = env.step(c, a, rng);
        ++measurements;
        m.total_reward += r.reward;
        m.e_min = std::min(m.e_min, r.energy);
        m.gates.push_back(env.actions()[a].label);
        memory.push({s, a, std::move(r.s_next), r.reward, t + 1 == cfg.num_gates});
        for (int b = 0; b < cfg.batch_size; ++b) agent.learn_step(memory, rng);
      }
      m.e_final = c.energy;
      if (hooks.on_episode) hooks.on_episode(m);
      metrics.push_back(std::move(m));
    }
    EpochSummary sum;
    sum.epoch = epoch;
    for (auto it = metrics.end() - cfg.num_circuits; it != metrics.end(); ++it) {
      sum.mean_reward += it->total_reward / cfg.num_circuits;
      sum.mean_final_energy += it->e_final / cfg.num_circuits;
    }
    if (cfg.validation_episodes > 0) {
      const EvalReport v = evaluate(agent, env, cfg.validation_episodes, validation_seed(cfg.seed),
                                    cfg.validation_epsilon);
      sum.validation_reward = v.mean_reward;
      sum.validation_final_energy = v.mean_final_energy;
      if (best_epoch < 0 || sum.validation_reward > summaries[static_cast<std::size_t>(best_epoch)].validation_reward) {
        best = agent;
        best_epoch = epoch;
      }
    }
    if (hooks.on_epoch_end) hooks.on_epoch_end(sum, agent);
    summaries.push_back(sum);
  }
  return {std::move(agent), std::move(best), best_epoch, std::move(metrics), std::move(summaries)};
}

}  // namespace qagent
