// Command-line front end: train, eval, baseline, vqe, sumrule.
//
// Every option may also come from an INI-style file given with --config,
// with one [section] per command; the command line wins. Each command that
// writes an output directory copies its effective configuration there as
// config.ini.
#pragma once

#include "qagent/agent.hpp"
#include "qagent/io.hpp"
#include "qagent/noise_profile.hpp"
#include "qagent/observables.hpp"
#include "qagent/vqe.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace qagent::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitRuntime = 2;

/// Bad flags, bad config, or unusable input files.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;

  // problem
  int qubits = 1;
  std::vector<double> field{1.0, 1.0, 1.0};
  double exchange = 1.0;
  int gates = 10;
  double delta = 0.0;  // 0: 0.5 rad for one qubit, 1.0 rad for two
  bool random_action = false;
  bool cnot12 = true;
  bool cnot21 = true;

  // measurement
  std::int64_t shots = 1024;
  bool exact = false;
  std::string noise = "off";
  bool noisy_rotations = false;

  std::uint64_t seed = 0;
  std::string out;

  // train
  int epochs = 300;
  int circuits = 100;
  double gamma = 0.99;
  double alpha = 0.05;
  int target_update = 500;
  int memory = 32;
  int batch = 1;
  int hidden = 0;
  double eps_initial = 1.0;
  double eps_final = 0.05;
  std::int64_t eps_anneal = 0;
  int checkpoint_every = 50;
  int validation_episodes = 100;

  // eval
  std::string checkpoint;
  int episodes = 100;
  double epsilon = 0.05;
  bool correct = false;

  // baseline
  std::string which;
  int runs = 100;

  // vqe
  int iterations = 500;
  int calibrate_every = 20;
  std::vector<double> probe_steps{0.1, 0.5, 1.0, 2.0};
  double alpha_cap = 2.0;
  double fd_step = 0.1;

  // sumrule
  std::string input;

  bool operator==(const RunConfig&) const = default;

  Hamiltonian hamiltonian() const {
    if (qubits == 1) {
      if (field.size() != 3) throw UsageError("--field needs three components");
      return Hamiltonian::single_spin({field[0], field[1], field[2]});
    }
    return Hamiltonian::dimer(exchange);
  }

  MeasurementConfig measurement() const {
    MeasurementConfig m;
    if (!exact) m.shots = shots;
    try {
      m.noise = resolve_noise_profile(noise);
    } catch (const ProfileError& e) {
      throw UsageError(e.what());
    }
    m.noisy_basis_rotations = noisy_rotations;
    return m;
  }

  ActionSetOptions action_options() const {
    ActionSetOptions o = default_action_options(qubits);
    if (delta > 0.0) o.delta = delta;
    o.include_random_u3 = random_action;
    o.cnot_forward = cnot12;
    o.cnot_reverse = cnot21;
    return o;
  }

  TrainConfig train_config() const {
    TrainConfig t;
    t.hamiltonian = hamiltonian();
    t.actions = action_options();
    t.num_circuits = circuits;
    t.num_gates = gates;
    t.epochs = epochs;
    t.gamma = gamma;
    t.alpha = alpha;
    t.target_update = target_update;
    t.memory_capacity = memory;
    t.batch_size = batch;
    t.hidden = hidden;
    t.epsilon_initial = eps_initial;
    t.epsilon_final = eps_final;
    t.epsilon_anneal_steps = eps_anneal;
    t.measurement = measurement();
    t.seed = seed;
    t.validation_episodes = validation_episodes;
    t.validation_epsilon = epsilon;
    return t;
  }

  VqeConfig vqe_config() const {
    VqeConfig v;
    v.hamiltonian = Hamiltonian::dimer(exchange);
    v.measurement = measurement();
    v.iterations = iterations;
    v.calibrate_every = calibrate_every;
    v.probe_steps = probe_steps;
    v.alpha_cap = alpha_cap;
    v.fd_step = fd_step;
    v.seed = seed;
    return v;
  }
};

namespace detail {

inline void add_problem_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--qubits", c.qubits, "1 (single spin) or 2 (dimer)")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  sub.add_option("--field", c.field, "magnetic field B for the single spin")
      ->delimiter(',')
      ->expected(3)
      ->capture_default_str();
  sub.add_option("--exchange", c.exchange, "exchange J for the dimer")->capture_default_str();
  sub.add_option("--gates", c.gates, "gates per circuit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub.add_option("--delta", c.delta, "elementary rotation angle in rad (0: problem default)")
      ->capture_default_str();
  sub.add_flag("--random-action,!--no-random-action", c.random_action,
               "add the random-U3 action");
  sub.add_flag("--cnot12,!--no-cnot12", c.cnot12, "enable CNOT with control qubit 1");
  sub.add_flag("--cnot21,!--no-cnot21", c.cnot21, "enable CNOT with control qubit 2");
}

inline void add_measurement_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--shots", c.shots, "measurement shots per basis setting")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub.add_flag("--exact,!--sampled", c.exact, "use exact probabilities instead of shots");
  sub.add_option("--noise", c.noise, "off, melbourne-like, or a profile file")
      ->capture_default_str();
  sub.add_flag("--noisy-rotations,!--ideal-rotations", c.noisy_rotations,
               "apply gate noise to the measurement basis rotations");
}

inline void add_common_options(CLI::App& sub, RunConfig& c, bool needs_out) {
  sub.add_option("--seed", c.seed, "master seed")->capture_default_str();
  auto* out = sub.add_option("--out", c.out, "existing output directory");
  if (needs_out) out->required();
}

inline void add_vqe_options(CLI::App& sub, RunConfig& c) {
  sub.add_option("--iterations", c.iterations)->capture_default_str();
  sub.add_option("--calibrate-every", c.calibrate_every)->capture_default_str();
  sub.add_option("--probe-steps", c.probe_steps, "step sizes probed at calibration")
      ->delimiter(',')
      ->capture_default_str();
  sub.add_option("--alpha-cap", c.alpha_cap, "upper bound of the step size (<= 0: none)")
      ->capture_default_str();
  sub.add_option("--fd-step", c.fd_step, "finite-difference step in rad")->capture_default_str();
}

inline void require_out_dir(const RunConfig& c) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(c.out, ec)) throw UsageError("output directory '" + c.out + "' does not exist");
}

inline std::filesystem::path out_path(const RunConfig& c, const std::string& name) {
  return std::filesystem::path(c.out) / name;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f << text;
}

template <class Json>
void write_json(const std::filesystem::path& p, const Json& j) {
  write_text(p, j.dump(2) + "\n");
}

inline nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read checkpoint " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("corrupted checkpoint " + path + ": " + e.what());
  }
}

inline std::vector<std::string> correlator_columns(int n_qubits) {
  return layout::names(n_qubits);
}

inline std::vector<std::string> correlator_fields(const CorrelatorVector& c) {
  std::vector<std::string> f;
  for (double v : c.values) f.push_back(io::num(v));
  return f;
}

}  // namespace detail

/// The options of `c.command` as an INI section. Parsing the text back with
/// --config yields the same RunConfig.
inline std::string to_ini(const RunConfig& c) {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[40];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
  };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
  };
  auto quoted = [](const std::string& s) { return "\"" + s + "\""; };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  auto kv = [&](const char* key, const std::string& value) { os << key << " = " << value << '\n'; };

  const std::string& cmd = c.command;
  os << '[' << cmd << "]\n";
  if (cmd == "sumrule") {
    kv("input", quoted(c.input));
    kv("exchange", num(c.exchange));
    kv("seed", std::to_string(c.seed));
    if (!c.out.empty()) kv("out", quoted(c.out));
    return os.str();
  }
  if (cmd == "baseline") kv("which", quoted(c.which));
  kv("qubits", std::to_string(c.qubits));
  kv("field", list(c.field));
  kv("exchange", num(c.exchange));
  kv("gates", std::to_string(c.gates));
  kv("delta", num(c.delta));
  kv("random-action", flag(c.random_action));
  kv("cnot12", flag(c.cnot12));
  kv("cnot21", flag(c.cnot21));
  kv("shots", std::to_string(c.shots));
  kv("exact", flag(c.exact));
  kv("noise", quoted(c.noise));
  kv("noisy-rotations", flag(c.noisy_rotations));
  kv("seed", std::to_string(c.seed));
  kv("out", quoted(c.out));
  if (cmd == "train") {
    kv("epochs", std::to_string(c.epochs));
    kv("circuits", std::to_string(c.circuits));
    kv("gamma", num(c.gamma));
    kv("alpha", num(c.alpha));
    kv("target-update", std::to_string(c.target_update));
    kv("memory", std::to_string(c.memory));
    kv("batch", std::to_string(c.batch));
    kv("hidden", std::to_string(c.hidden));
    kv("eps-initial", num(c.eps_initial));
    kv("eps-final", num(c.eps_final));
    kv("eps-anneal", std::to_string(c.eps_anneal));
    kv("checkpoint-every", std::to_string(c.checkpoint_every));
    kv("validation-episodes", std::to_string(c.validation_episodes));
    kv("epsilon", num(c.epsilon));
  } else if (cmd == "eval") {
    kv("checkpoint", quoted(c.checkpoint));
    kv("episodes", std::to_string(c.episodes));
    kv("epsilon", num(c.epsilon));
    kv("correct", flag(c.correct));
  }
  if (cmd == "baseline") kv("runs", std::to_string(c.runs));
  if (cmd == "baseline" || cmd == "vqe") {
    kv("iterations", std::to_string(c.iterations));
    kv("calibrate-every", std::to_string(c.calibrate_every));
    kv("probe-steps", list(c.probe_steps));
    kv("alpha-cap", num(c.alpha_cap));
    kv("fd-step", num(c.fd_step));
  }
  return os.str();
}

/// Holds the parser and the bound configuration. Kept together because the
/// CLI11 options point into the per-command settings. Each command binds its
/// own RunConfig, so sections for other commands in a --config file never
/// leak into the one that runs.
class Cli {
 public:
  Cli() : app_("Q-learning circuit agent for spin Hamiltonian ground states", "qagent") {
    app_.config_formatter(std::make_shared<CLI::ConfigINI>());
    app_.set_config("--config", "", "INI file with one [section] per command");
    app_.require_subcommand(1);
    app_.fallthrough();

    auto& c = settings_["train"];
    auto* train = app_.add_subcommand("train", "train an agent");
    detail::add_problem_options(*train, c);
    detail::add_measurement_options(*train, c);
    detail::add_common_options(*train, c, true);
    train->add_option("--epochs", c.epochs)->capture_default_str();
    train->add_option("--circuits", c.circuits, "circuits per epoch")->capture_default_str();
    train->add_option("--gamma", c.gamma)->capture_default_str();
    train->add_option("--alpha", c.alpha, "global learning rate")->capture_default_str();
    train->add_option("--target-update", c.target_update, "updates between target refreshes")
        ->capture_default_str();
    train->add_option("--memory", c.memory, "replay memory capacity")->capture_default_str();
    train->add_option("--batch", c.batch, "transitions sampled per learn step")->capture_default_str();
    train->add_option("--hidden", c.hidden, "hidden units (0: 32 or 64 by problem)")
        ->capture_default_str();
    train->add_option("--eps-initial", c.eps_initial)->capture_default_str();
    train->add_option("--eps-final", c.eps_final)->capture_default_str();
    train->add_option("--eps-anneal", c.eps_anneal, "measurements to anneal over (0: 10 x gates)")
        ->capture_default_str();
    train->add_option("--checkpoint-every", c.checkpoint_every, "epochs between checkpoints")
        ->capture_default_str();
    train->add_option("--validation-episodes", c.validation_episodes,
                      "epsilon-greedy episodes scored after each epoch (0: off)")
        ->capture_default_str();
    train->add_option("--epsilon", c.epsilon, "epsilon of the validation episodes")
        ->capture_default_str();

    auto& e = settings_["eval"];
    auto* eval = app_.add_subcommand("eval", "evaluate a trained agent");
    detail::add_problem_options(*eval, e);
    detail::add_measurement_options(*eval, e);
    detail::add_common_options(*eval, e, true);
    eval->add_option("--checkpoint", e.checkpoint, "agent JSON file")->required();
    eval->add_option("--episodes", e.episodes)->capture_default_str();
    eval->add_option("--epsilon", e.epsilon)->capture_default_str();
    eval->add_flag("--correct,!--no-correct", e.correct, "add the sum-rule corrected energy");

    auto& b = settings_["baseline"];
    auto* baseline = app_.add_subcommand("baseline", "reference circuits and the variational baseline");
    detail::add_problem_options(*baseline, b);
    detail::add_measurement_options(*baseline, b);
    detail::add_common_options(*baseline, b, true);
    baseline->add_option("which", b.which, "exact-circuit or vqe")
        ->check(CLI::IsMember({"exact-circuit", "vqe"}))
        ->required();
    baseline->add_option("--runs", b.runs, "repetitions of the exact circuit")->capture_default_str();
    detail::add_vqe_options(*baseline, b);

    auto& v = settings_["vqe"];
    auto* vqe = app_.add_subcommand("vqe", "variational eigensolver for the dimer");
    detail::add_problem_options(*vqe, v);
    detail::add_measurement_options(*vqe, v);
    detail::add_common_options(*vqe, v, true);
    detail::add_vqe_options(*vqe, v);

    auto& r = settings_["sumrule"];
    auto* sumrule = app_.add_subcommand("sumrule", "apply the local spin correction to correlator rows");
    detail::add_common_options(*sumrule, r, false);
    sumrule->add_option("input", r.input, "CSV with the 15 two-qubit correlators per row")->required();
    sumrule->add_option("--exchange", r.exchange, "exchange J")->capture_default_str();
  }

  CLI::App& app() { return app_; }

  /// Parses argv-style arguments (without the program name).
  void parse(std::vector<std::string> args) {
    std::reverse(args.begin(), args.end());
    app_.parse(args);
    for (auto* sub : app_.get_subcommands()) {
      config = settings_.at(sub->get_name());
      config.command = sub->get_name();
    }
  }

  /// Effective configuration as INI text; feeding it back via --config
  /// reproduces `config`.
  std::string config_text() const { return to_ini(config); }

  /// Settings of the command that was parsed.
  RunConfig config;

 private:
  std::map<std::string, RunConfig> settings_;
  CLI::App app_;
};

inline void copy_config(const Cli& cli, const RunConfig& c) {
  const std::string name = c.command == "train" ? "config.ini" : c.command + "_config.ini";
  detail::write_text(detail::out_path(c, name), cli.config_text());
}

inline int cmd_train(const Cli& cli, std::ostream& log) {
  const RunConfig& c = cli.config;
  detail::require_out_dir(c);
  TrainConfig tc = c.train_config();
  try {
    tc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  copy_config(cli, c);

  io::CsvWriter metrics(detail::out_path(c, "metrics.csv").string());
  metrics.row({"epoch", "episode", "epsilon", "E_initial", "E_final", "E_min", "total_reward",
               "gate_sequence"});
  io::CsvWriter epochs(detail::out_path(c, "epochs.csv").string());
  epochs.row({"epoch", "mean_reward", "mean_E_final", "validation_reward", "validation_E_final"});
  std::filesystem::create_directories(detail::out_path(c, "checkpoints"));

  TrainHooks hooks;
  hooks.on_episode = [&](const EpisodeMetrics& m) {
    metrics.row({std::to_string(m.epoch), std::to_string(m.episode), io::num(m.epsilon),
                 io::num(m.e_initial), io::num(m.e_final), io::num(m.e_min), io::num(m.total_reward),
                 io::join(m.gates, ';')});
  };
  hooks.on_epoch_end = [&](const EpochSummary& s, const Agent& agent) {
    epochs.row({std::to_string(s.epoch), io::num(s.mean_reward), io::num(s.mean_final_energy),
                io::num(s.validation_reward), io::num(s.validation_final_energy)});
    if (c.checkpoint_every > 0 && (s.epoch + 1) % c.checkpoint_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "agent_epoch_%04d.json", s.epoch + 1);
      detail::write_json(detail::out_path(c, "checkpoints") / name, agent.to_json());
    }
  };
  const TrainResult res = train(tc, hooks);
  metrics.flush();
  detail::write_json(detail::out_path(c, "agent_final.json"), res.agent.to_json());
  detail::write_json(detail::out_path(c, "agent_best.json"), res.selected().to_json());

  nlohmann::ordered_json summary;
  summary["episodes"] = res.metrics.size();
  int best_train_epoch = -1;
  double best_train_reward = 0.0;
  for (const auto& e : res.epochs)
    if (best_train_epoch < 0 || e.mean_reward > best_train_reward) {
      best_train_epoch = e.epoch;
      best_train_reward = e.mean_reward;
    }
  summary["best_average_reward_epoch"] = best_train_epoch;
  summary["best_average_reward"] = best_train_reward;
  summary["best_validation_epoch"] = res.best_epoch;
  if (res.best_epoch >= 0) {
    const auto& b = res.epochs[static_cast<std::size_t>(res.best_epoch)];
    summary["best_validation_reward"] = b.validation_reward;
    summary["best_validation_E_final"] = b.validation_final_energy;
  }
  if (!res.epochs.empty()) {
    summary["final_epoch_mean_reward"] = res.epochs.back().mean_reward;
    summary["final_epoch_mean_E_final"] = res.epochs.back().mean_final_energy;
  }
  summary["selected_agent"] = "agent_best.json";
  detail::write_json(detail::out_path(c, "summary.json"), summary);
  log << "trained " << res.metrics.size() << " episodes; best validation epoch " << res.best_epoch
      << "\n";
  return kExitOk;
}

inline int cmd_eval(const Cli& cli, std::ostream& log) {
  const RunConfig& c = cli.config;
  detail::require_out_dir(c);
  const nlohmann::json j = detail::read_json(c.checkpoint);
  std::optional<Agent> agent;
  try {
    const int stored_qubits = j.at("n_qubits").get<int>();
    if (stored_qubits != c.qubits)
      throw UsageError("checkpoint " + c.checkpoint + " holds a " + std::to_string(stored_qubits) +
                       "-qubit agent but --qubits is " + std::to_string(c.qubits));
    if (c.delta > 0.0 && std::abs(j.at("delta").get<double>() - c.delta) > 1e-12)
      throw UsageError("checkpoint " + c.checkpoint + " was trained with a different --delta");
    agent.emplace(Agent::from_json(j, c.action_options()));
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("corrupted checkpoint " + c.checkpoint + ": " + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const UsageError*>(&e)) throw;
    throw UsageError("checkpoint " + c.checkpoint + ": " + e.what());
  }
  if (c.correct && c.qubits != 2) throw UsageError("--correct applies to the two-qubit problem only");

  Environment env(c.hamiltonian(), agent->actions(), c.measurement(), c.gates);
  copy_config(cli, c);
  const EvalReport rep = evaluate(*agent, env, c.episodes, c.seed, c.epsilon);

  io::CsvWriter rows(detail::out_path(c, "eval.csv").string());
  std::vector<std::string> head{"episode", "E_initial", "E_final", "E_min", "total_reward", "gates"};
  if (c.correct) {
    head.push_back("spin_dot");
    head.push_back("corrected_energy");
  }
  rows.row(head);
  io::CsvWriter steps(detail::out_path(c, "eval_steps.csv").string());
  std::vector<std::string> step_head{"episode", "step", "action", "energy"};
  for (const auto& n : detail::correlator_columns(c.qubits)) step_head.push_back(n);
  steps.row(step_head);

  int corrected = 0;
  double corrected_sum = 0.0;
  for (std::size_t e = 0; e < rep.episodes.size(); ++e) {
    const auto& ep = rep.episodes[e];
    std::vector<std::string> labels;
    for (auto a : ep.actions) labels.push_back(agent->actions()[a].label);
    std::vector<std::string> r{std::to_string(e), io::num(ep.e_initial), io::num(ep.e_final),
                               io::num(ep.e_min), io::num(ep.total_reward), io::join(labels, ';')};
    if (c.correct) {
      const CorrelatorVector& last = ep.steps.empty() ? ep.s_initial : ep.steps.back().s;
      r.push_back(io::num(spin_dot(last)));
      if (correction_admissible(last)) {
        const double ce = local_spin_correction(last, c.exchange).corrected_energy;
        r.push_back(io::num(ce));
        ++corrected;
        corrected_sum += ce;
      } else {
        r.push_back("n/a");
      }
    }
    rows.row(r);
    std::vector<std::string> s0{std::to_string(e), "0", "", io::num(ep.e_initial)};
    for (auto& f : detail::correlator_fields(ep.s_initial)) s0.push_back(f);
    steps.row(s0);
    for (std::size_t t = 0; t < ep.steps.size(); ++t) {
      std::vector<std::string> s{std::to_string(e), std::to_string(t + 1),
                                 agent->actions()[ep.steps[t].action].label, io::num(ep.steps[t].energy)};
      for (auto& f : detail::correlator_fields(ep.steps[t].s)) s.push_back(f);
      steps.row(s);
    }
  }

  nlohmann::ordered_json summary;
  summary["episodes"] = rep.episodes.size();
  summary["epsilon"] = c.epsilon;
  summary["average_reward"] = rep.mean_reward;
  summary["average_energy"] = rep.mean_final_energy;
  summary["average_min_energy"] = rep.mean_min_energy;
  summary["lowest_energy"] = rep.lowest_energy;
  summary["cnot_fraction"] = rep.cnot_fraction;
  summary["exact_ground_energy"] = c.hamiltonian().exact_ground_energy();
  if (c.correct) {
    summary["corrected_episodes"] = corrected;
    summary["average_corrected_energy"] = corrected > 0 ? corrected_sum / corrected : 0.0;
  }
  detail::write_json(detail::out_path(c, "eval_summary.json"), summary);
  log << "evaluated " << rep.episodes.size() << " episodes; average energy "
      << io::num(rep.mean_final_energy) << "\n";
  return kExitOk;
}

/// The shortest circuits preparing the exact ground states: one U3 for
/// B = (1, 1, 1) style fields, and U3 x U3 then CNOT for the dimer singlet.
inline DensityState exact_circuit_state(const RunConfig& c, const NoiseModel& noise) {
  if (c.qubits == 2) return ansatz_state(singlet_angles(), noise);
  const double b = std::hypot(c.field[0], c.field[1], c.field[2]);
  if (b == 0.0) throw UsageError("field must be non-zero");
  // Ground state points against B: theta = acos(-Bz/|B|), phi = atan2(-By, -Bx).
  const double theta = std::acos(-c.field[2] / b);
  const double phi = std::atan2(-c.field[1], -c.field[0]);
  return apply_gate(DensityState(1), u3(theta, phi, 0.0), 0, noise);
}

inline int run_vqe_command(const Cli& cli, std::ostream& log) {
  const RunConfig& c = cli.config;
  if (c.qubits != 2) throw UsageError("the variational baseline needs --qubits 2");
  const VqeConfig vc = c.vqe_config();
  copy_config(cli, c);
  const auto traj = run_vqe(vc);
  io::CsvWriter csv(detail::out_path(c, "vqe.csv").string());
  csv.row({"iteration", "alpha", "theta0", "theta1", "theta2", "theta3", "theta4", "theta5", "energy"});
  for (const auto& p : traj) {
    std::vector<std::string> r{std::to_string(p.iteration), io::num(p.alpha)};
    for (double t : p.theta) r.push_back(io::num(t));
    r.push_back(io::num(p.energy));
    csv.row(r);
  }
  const std::size_t tail = std::min<std::size_t>(100, traj.size());
  double plateau = 0.0;
  for (std::size_t k = traj.size() - tail; k < traj.size(); ++k) plateau += traj[k].energy / tail;
  nlohmann::ordered_json summary;
  summary["iterations"] = c.iterations;
  summary["final_energy"] = traj.back().energy;
  summary["plateau_energy"] = plateau;
  summary["plateau_window"] = tail;
  summary["exact_ground_energy"] = vc.hamiltonian.exact_ground_energy();
  detail::write_json(detail::out_path(c, "vqe_summary.json"), summary);
  log << "vqe final energy " << io::num(traj.back().energy) << ", plateau " << io::num(plateau) << "\n";
  return kExitOk;
}

inline int cmd_baseline(const Cli& cli, std::ostream& log) {
  const RunConfig& c = cli.config;
  detail::require_out_dir(c);
  if (c.which == "vqe") return run_vqe_command(cli, log);
  if (c.runs < 1) throw UsageError("--runs must be positive");
  const MeasurementConfig m = c.measurement();
  const Hamiltonian h = c.hamiltonian();
  copy_config(cli, c);
  const DensityState state = exact_circuit_state(c, m.noise);
  io::CsvWriter csv(detail::out_path(c, "baseline.csv").string());
  std::vector<std::string> head{"run", "energy"};
  for (const auto& n : detail::correlator_columns(c.qubits)) head.push_back(n);
  csv.row(head);
  std::vector<double> energies;
  for (int r = 0; r < c.runs; ++r) {
    Rng rng = episode_rng(c.seed, static_cast<std::uint64_t>(r));
    const CorrelatorVector cv = estimate_correlators(state, m, rng);
    const double e = energy(h, cv);
    energies.push_back(e);
    std::vector<std::string> row{std::to_string(r), io::num(e)};
    for (auto& f : detail::correlator_fields(cv)) row.push_back(f);
    csv.row(row);
  }
  double mean = 0.0, var = 0.0;
  for (double e : energies) mean += e / c.runs;
  for (double e : energies) var += (e - mean) * (e - mean) / c.runs;
  nlohmann::ordered_json summary;
  summary["circuit"] = c.qubits == 1 ? "single-spin U3" : "singlet";
  summary["runs"] = c.runs;
  summary["mean_energy"] = mean;
  summary["std_energy"] = std::sqrt(var);
  summary["exact_ground_energy"] = h.exact_ground_energy();
  detail::write_json(detail::out_path(c, "baseline_summary.json"), summary);
  log << "exact-circuit mean energy " << io::num(mean) << " over " << c.runs << " runs\n";
  return kExitOk;
}

inline int cmd_vqe(const Cli& cli, std::ostream& log) {
  detail::require_out_dir(cli.config);
  return run_vqe_command(cli, log);
}

/// Appends spin_dot, residual, multiplier, corrected energy and a status
/// column to each row of a two-qubit correlator CSV. With a header, the
/// canonical column names (X1 ... Z1Y2) are located anywhere in the row;
/// without one, each row must be exactly the 15 values in canonical order.
inline int cmd_sumrule(const Cli& cli, std::ostream& log) {
  const RunConfig& c = cli.config;
  std::ifstream in(c.input);
  if (!in) throw UsageError("cannot read " + c.input);
  if (!c.out.empty()) detail::require_out_dir(c);

  const auto& names = layout::names(2);
  std::vector<std::size_t> columns(names.size());
  for (std::size_t i = 0; i < columns.size(); ++i) columns[i] = i;

  std::vector<std::string> lines_out;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::size_t width = names.size();
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = io::split(line, ',');
    double probe = 0.0;
    if (!header_seen && lines_out.empty() && !io::parse_double(fields.front(), probe)) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        auto it = std::find(fields.begin(), fields.end(), names[i]);
        if (it == fields.end())
          throw UsageError(c.input + ":" + std::to_string(lineno) + ": header lacks column " + names[i]);
        columns[i] = static_cast<std::size_t>(it - fields.begin());
      }
      width = fields.size();
      header_seen = true;
      lines_out.push_back(line + ",spin_dot,residual,multiplier,corrected_energy,status");
      continue;
    }
    if (fields.size() != width)
      throw UsageError(c.input + ":" + std::to_string(lineno) + ": expected " + std::to_string(width) +
                       " fields, got " + std::to_string(fields.size()));
    CorrelatorVector cv;
    cv.values.resize(names.size());
    for (std::size_t i = 0; i < names.size(); ++i)
      if (!io::parse_double(fields[columns[i]], cv.values[i]))
        throw UsageError(c.input + ":" + std::to_string(lineno) + ": bad number '" + fields[columns[i]] +
                         "' in column " + names[i]);
    if (lines_out.empty())
      lines_out.push_back(io::join(names, ',') + ",spin_dot,residual,multiplier,corrected_energy,status");
    std::string out = line + "," + io::num(spin_dot(cv)) + "," + io::num(sum_rule_residual(cv));
    if (correction_admissible(cv)) {
      const auto corr = local_spin_correction(cv, c.exchange);
      out += "," + io::num(corr.multiplier) + "," + io::num(corr.corrected_energy) + ",corrected";
    } else {
      out += ",n/a,n/a,not-corrected";
    }
    lines_out.push_back(out);
  }
  std::string text;
  for (const auto& l : lines_out) text += l + "\n";
  if (c.out.empty()) {
    log << text;
  } else {
    detail::write_text(detail::out_path(c, "sumrule.csv"), text);
    log << "wrote " << (lines_out.empty() ? 0 : lines_out.size() - 1) << " rows\n";
  }
  return kExitOk;
}

/// Entry point shared by the executable and the tests.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Cli cli;
  try {
    cli.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << cli.app().help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const std::string& cmd = cli.config.command;
    if (cmd == "train") return cmd_train(cli, out);
    if (cmd == "eval") return cmd_eval(cli, out);
    if (cmd == "baseline") return cmd_baseline(cli, out);
    if (cmd == "vqe") return cmd_vqe(cli, out);
    if (cmd == "sumrule") return cmd_sumrule(cli, out);
    err << "error: unknown command\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace qagent::cli
