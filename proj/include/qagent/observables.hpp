// Pauli correlators from basis-rotated measurements, spin Hamiltonian
// energies, and the singlet sum-rule correction of pair correlators.
#pragma once

#include "qagent/qsim.hpp"

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qagent {

enum class Axis { X = 0, Y = 1, Z = 2 };

inline char axis_name(Axis a) { return "XYZ"[static_cast<int>(a)]; }

/// Rotation applied before a Z-basis measurement so that the measured
/// outcome statistics are those of the requested Pauli axis.
inline Unitary1Q basis_rotation(Axis a) {
  using std::numbers::pi;
  switch (a) {
    case Axis::X: return {u3(pi / 2, 0.0, pi).matrix, "H"};
    case Axis::Y: return {u3(pi / 2, 0.0, pi / 2).matrix, "H.Sdg"};
    case Axis::Z: break;
  }
  return identity_gate();
}

struct BasisSetting {
  std::vector<Axis> axes;  // one per qubit

  std::string name() const {
    std::string s;
    for (Axis a : axes) s.push_back(axis_name(a));
    return s;
  }
};

/// 3^n settings, qubit 0 varying slowest.
inline std::vector<BasisSetting> measurement_plan(int n_qubits) {
  if (n_qubits != 1 && n_qubits != 2)
    throw std::invalid_argument("measurement plan supports 1 or 2 qubits, got " +
                                std::to_string(n_qubits));
  const std::array<Axis, 3> axes{Axis::X, Axis::Y, Axis::Z};
  std::vector<BasisSetting> plan;
  if (n_qubits == 1) {
    for (Axis a : axes) plan.push_back({{a}});
  } else {
    for (Axis a : axes)
      for (Axis b : axes) plan.push_back({{a, b}});
  }
  return plan;
}

/// Canonical layout. One qubit: <X>, <Y>, <Z>. Two qubits: the six singles
/// <X1>,<Y1>,<Z1>,<X2>,<Y2>,<Z2> then nine pairs starting at index 6.
namespace layout {
inline constexpr std::size_t kSingle = 3;
inline constexpr std::size_t kDimer = 15;
inline constexpr std::size_t kZZ = 6, kXX = 7, kYY = 8, kXY = 9, kYX = 10, kXZ = 11, kZX = 12,
                             kYZ = 13, kZY = 14;

inline std::size_t pair_index(Axis a, Axis b) {
  static constexpr std::size_t table[3][3] = {{kXX, kXY, kXZ}, {kYX, kYY, kYZ}, {kZX, kZY, kZZ}};
  return table[static_cast<int>(a)][static_cast<int>(b)];
}

inline std::size_t single_index(int qubit, Axis a) {
  return static_cast<std::size_t>(qubit) * 3 + static_cast<std::size_t>(a);
}

inline const std::vector<std::string>& names(int n_qubits) {
  static const std::vector<std::string> one{"X", "Y", "Z"};
  static const std::vector<std::string> two{"X1",   "Y1",   "Z1",   "X2",   "Y2",
                                            "Z2",   "Z1Z2", "X1X2", "Y1Y2", "X1Y2",
                                            "Y1X2", "X1Z2", "Z1X2", "Y1Z2", "Z1Y2"};
  return n_qubits == 1 ? one : two;
}
}  // namespace layout

struct CorrelatorVector {
  std::vector<double> values;

  int n_qubits() const {
    if (values.size() == layout::kSingle) return 1;
    if (values.size() == layout::kDimer) return 2;
    throw std::invalid_argument("correlator vector has invalid length " +
                                std::to_string(values.size()));
  }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  std::span<const double> span() const { return values; }

  bool operator==(const CorrelatorVector&) const = default;
};

/// How correlators are read out. `shots == nullopt` means exact
/// probabilities (infinite-shot limit).
struct MeasurementConfig {
  std::optional<std::int64_t> shots;
  NoiseModel noise;
  bool noisy_basis_rotations = false;
};

inline CorrelatorVector estimate_correlators(const DensityState& state,
                                             const MeasurementConfig& cfg, Rng& rng) {
  if (cfg.shots && *cfg.shots < 1) throw std::invalid_argument("shots must be positive");
  const int n = state.n_qubits();
  const auto plan = measurement_plan(n);
  const NoiseModel rotation_noise = cfg.noisy_basis_rotations ? cfg.noise : NoiseModel::off();

  auto probabilities = [&](const DensityState& rotated) {
    if (!cfg.shots) return exact_probabilities(rotated, cfg.noise);
    const auto outcome = sample_counts(rotated, *cfg.shots, cfg.noise, rng);
    std::vector<double> p(static_cast<std::size_t>(rotated.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = outcome.frequency(basis_label(i, n));
    return p;
  };

  CorrelatorVector out;
  if (n == 1) {
    out.values.assign(layout::kSingle, 0.0);
    for (const auto& setting : plan) {
      DensityState s = state;
      if (setting.axes[0] != Axis::Z)
        s = apply_gate(std::move(s), basis_rotation(setting.axes[0]), 0, rotation_noise);
      const auto p = probabilities(s);
      out.values[static_cast<std::size_t>(setting.axes[0])] = std::clamp(p[0] - p[1], -1.0, 1.0);
    }
    return out;
  }

  // Each single-qubit axis appears in three settings; its marginal is averaged over them.
  out.values.assign(layout::kDimer, 0.0);
  for (const auto& setting : plan) {
    DensityState s = state;
    for (int q = 0; q < 2; ++q)
      if (setting.axes[q] != Axis::Z)
        s = apply_gate(std::move(s), basis_rotation(setting.axes[q]), q, rotation_noise);
    const auto p = probabilities(s);  // order 00, 01, 10, 11
    out.values[layout::single_index(0, setting.axes[0])] += p[0] + p[1] - p[2] - p[3];
    out.values[layout::single_index(1, setting.axes[1])] += p[0] + p[2] - p[1] - p[3];
    out.values[layout::pair_index(setting.axes[0], setting.axes[1])] = p[0] + p[3] - p[1] - p[2];
  }
  for (std::size_t i = 0; i < 6; ++i) out.values[i] /= 3.0;
  for (double& v : out.values) v = std::clamp(v, -1.0, 1.0);
  return out;
}

struct Hamiltonian {
  enum class Kind { SingleSpin, Dimer };

  Kind kind = Kind::SingleSpin;
  std::array<double, 3> field{1.0, 1.0, 1.0};
  double exchange = 1.0;

  static Hamiltonian single_spin(std::array<double, 3> b) { return {Kind::SingleSpin, b, 0.0}; }
  static Hamiltonian dimer(double j) { return {Kind::Dimer, {0.0, 0.0, 0.0}, j}; }

  int n_qubits() const { return kind == Kind::SingleSpin ? 1 : 2; }

  double exact_ground_energy() const {
    if (kind == Kind::SingleSpin)
      return -0.5 * std::sqrt(field[0] * field[0] + field[1] * field[1] + field[2] * field[2]);
    return exchange > 0 ? -0.75 * exchange : 0.25 * exchange;
  }

  /// Dense operator with spin-1/2 operators S = sigma/2.
  CMatrix matrix() const {
    if (kind == Kind::SingleSpin) {
      return 0.5 * (field[0] * pauli::X() + field[1] * pauli::Y() + field[2] * pauli::Z());
    }
    const CMatrix xx = kron(pauli::X(), pauli::X());
    const CMatrix yy = kron(pauli::Y(), pauli::Y());
    const CMatrix zz = kron(pauli::Z(), pauli::Z());
    return 0.25 * exchange * (xx + yy + zz);
  }

  bool operator==(const Hamiltonian&) const = default;
};

namespace detail {
inline void require_dimer_layout(const CorrelatorVector& c) {
  if (c.size() != layout::kDimer)
    throw std::invalid_argument("expected the 15-entry two-qubit correlator layout, got " +
                                std::to_string(c.size()) + " entries");
}
}  // namespace detail

/// <S1.S2> = (<X1X2> + <Y1Y2> + <Z1Z2>) / 4.
inline double spin_dot(const CorrelatorVector& c) {
  detail::require_dimer_layout(c);
  return 0.25 * (c[layout::kXX] + c[layout::kYY] + c[layout::kZZ]);
}

/// Single spin: (B.<sigma>)/2. Dimer: J <S1.S2>.
inline double energy(const Hamiltonian& h, const CorrelatorVector& c) {
  if (h.kind == Hamiltonian::Kind::SingleSpin) {
    if (c.size() != layout::kSingle)
      throw std::invalid_argument("single-spin energy needs 3 correlators, got " +
                                  std::to_string(c.size()));
    return 0.5 * (h.field[0] * c[0] + h.field[1] * c[1] + h.field[2] * c[2]);
  }
  return h.exchange * spin_dot(c);
}

/// Sum over all i, j of <S_i.S_j> with exact local moments S(S+1). Zero for
/// any singlet.
inline double sum_rule_residual(const CorrelatorVector& c, double spin = 0.5) {
  return 2.0 * spin * (spin + 1.0) + 2.0 * spin_dot(c);
}

class CorrectionUndefined : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct PairCorrection {
  double multiplier = 1.0;          // X = S(S+1) / mean local moment
  double mean_local_moment = 0.0;   // inferred from the sum rule
  std::vector<double> corrected;    // X <S_i.S_j>, same order as the input
};

/// Sum-rule correction for N (even) spins in a singlet-type state. Input is
/// the list of distinct pair correlators <S_i.S_j>, i < j. The mean local
/// moment follows from sum_i <S_i^2> = -sum_{i != j} <S_i.S_j>.
inline PairCorrection correct_pair_correlators(std::span<const double> pairs, int n_spins,
                                               double spin = 0.5) {
  if (n_spins < 2 || n_spins % 2 != 0)
    throw std::invalid_argument("sum-rule correction needs an even number of spins");
  const auto expected = static_cast<std::size_t>(n_spins * (n_spins - 1) / 2);
  if (pairs.size() != expected)
    throw std::invalid_argument("expected " + std::to_string(expected) + " pair correlators");
  double pair_sum = 0.0;
  for (double v : pairs) pair_sum += v;
  const double mean_local = -(2.0 * pair_sum) / n_spins;
  if (!(mean_local > 0.0))
    throw CorrectionUndefined("non-local correlators do not describe a singlet-like state");
  const double moment = spin * (spin + 1.0);
  PairCorrection out;
  out.mean_local_moment = mean_local;
  out.multiplier = moment / mean_local;
  out.corrected.reserve(pairs.size());
  for (double v : pairs) out.corrected.push_back(moment * (v / mean_local));
  return out;
}

struct SpinCorrection {
  double multiplier = 1.0;
  double corrected_spin_dot = 0.0;
  double corrected_energy = 0.0;
};

inline bool correction_admissible(const CorrelatorVector& c) { return spin_dot(c) < 0.0; }

/// Dimer form: <S1^2> = <S2^2> = -<S1.S2>, so the corrected energy is
/// -S(S+1) J for every admissible input. Throws CorrectionUndefined when
/// <S1.S2> >= 0.
inline SpinCorrection local_spin_correction(const CorrelatorVector& c, double exchange = 1.0,
                                            double spin = 0.5) {
  const double sd = spin_dot(c);
  if (!(sd < 0.0))
    throw CorrectionUndefined("<S1.S2> = " + std::to_string(sd) + " is not negative");
  const std::array<double, 1> pairs{sd};
  const auto pc = correct_pair_correlators(pairs, 2, spin);
  return {pc.multiplier, pc.corrected[0], exchange * pc.corrected[0]};
}

}  // namespace qagent
