// Density-matrix simulator for few-qubit registers.
//
// Qubit ordering: qubit 0 is the most significant bit of a basis index, so
// the bitstring "q0 q1" reads left to right. CNOT defaults to control 0,
// target 1.
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qagent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

inline constexpr int kMaxQubits = 4;

struct Unitary1Q {
  Eigen::Matrix2cd matrix;
  std::string label;
};

struct Unitary2Q {
  Eigen::Matrix4cd matrix;
  std::string label;
};

/// U3(theta, phi, lambda) in the standard convention:
///   [[cos(t/2),            -e^{i l} sin(t/2)     ],
///    [e^{i p} sin(t/2),     e^{i(p+l)} cos(t/2)  ]]
inline Unitary1Q u3(double theta, double phi, double lambda) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2cd m;
  m(0, 0) = c;
  m(0, 1) = -std::polar(1.0, lambda) * s;
  m(1, 0) = std::polar(1.0, phi) * s;
  m(1, 1) = std::polar(1.0, phi + lambda) * c;
  return {m, "U3"};
}

inline Unitary1Q identity_gate() { return {Eigen::Matrix2cd::Identity(), "I"}; }

inline Unitary1Q hadamard() {
  Eigen::Matrix2cd m;
  const double r = 1.0 / std::numbers::sqrt2;
  m << r, r, r, -r;
  return {m, "H"};
}

/// CNOT on basis |c t>, control is the high bit.
inline Unitary2Q cnot() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return {m, "CNOT"};
}

namespace pauli {
inline Eigen::Matrix2cd I() { return Eigen::Matrix2cd::Identity(); }
inline Eigen::Matrix2cd X() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return m;
}
inline Eigen::Matrix2cd Y() {
  Eigen::Matrix2cd m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline Eigen::Matrix2cd Z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return m;
}
}  // namespace pauli

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Lifts a k-qubit operator acting on `targets` (targets[0] is the high bit
/// of the operator's own index) to the full n-qubit space.
inline CMatrix embed_operator(const CMatrix& op, const std::vector<int>& targets, int n_qubits) {
  const int k = static_cast<int>(targets.size());
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows())
    throw std::invalid_argument("operator arity does not match target count");
  for (int i = 0; i < k; ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits)
      throw std::out_of_range("qubit index " + std::to_string(targets[i]) + " out of range");
    for (int j = 0; j < i; ++j)
      if (targets[i] == targets[j]) throw std::out_of_range("duplicate target qubit");
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  std::uint32_t target_mask = 0;
  for (int t : targets) target_mask |= 1u << (n_qubits - 1 - t);
  auto sub_index = [&](std::size_t full) {
    std::size_t s = 0;
    for (int i = 0; i < k; ++i) s = (s << 1) | ((full >> (n_qubits - 1 - targets[i])) & 1u);
    return s;
  };
  CMatrix out = CMatrix::Zero(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c)
      if ((r & ~target_mask) == (c & ~target_mask))
        out(r, c) = op(sub_index(r), sub_index(c));
  return out;
}

/// Static noise parameters. With `enabled == false` every channel is the
/// identity map regardless of the stored values.
struct NoiseModel {
  double gate_depolarizing_1q = 0.0;
  double gate_depolarizing_2q = 0.0;
  double amplitude_damping_1q = 0.0;
  double phase_damping_1q = 0.0;
  double readout_flip_0to1 = 0.0;
  double readout_flip_1to0 = 0.0;
  bool enabled = false;

  void validate() const {
    for (double p : {gate_depolarizing_1q, gate_depolarizing_2q, amplitude_damping_1q,
                     phase_damping_1q, readout_flip_0to1, readout_flip_1to0})
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("noise parameter outside [0, 1]");
  }

  static NoiseModel off() { return {}; }

  bool operator==(const NoiseModel&) const = default;
};

using KrausSet = std::vector<CMatrix>;

namespace channels {

/// rho -> (1 - p) rho + p I/2^k Tr(rho) over k qubits, as Pauli Kraus operators.
inline KrausSet depolarizing(double p, int k) {
  const std::vector<Eigen::Matrix2cd> paulis = {pauli::I(), pauli::X(), pauli::Y(), pauli::Z()};
  const std::size_t count = std::size_t{1} << (2 * k);
  const double d2 = static_cast<double>(count);
  KrausSet out;
  for (std::size_t idx = 0; idx < count; ++idx) {
    CMatrix op = CMatrix::Identity(1, 1);
    std::size_t rest = idx;
    for (int q = 0; q < k; ++q) {
      op = kron(op, paulis[rest % 4]);
      rest /= 4;
    }
    const double w = idx == 0 ? 1.0 - p * (d2 - 1.0) / d2 : p / d2;
    out.push_back(std::sqrt(w) * op);
  }
  return out;
}

inline KrausSet amplitude_damping(double gamma) {
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return {k0, k1};
}

inline KrausSet phase_damping(double lambda) {
  CMatrix k0 = CMatrix::Zero(2, 2), k1 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - lambda);
  k1(1, 1) = std::sqrt(lambda);
  return {k0, k1};
}

/// Sum_i K_i^dagger K_i; equals identity for a trace-preserving channel.
inline CMatrix completeness(const KrausSet& ks) {
  CMatrix acc = CMatrix::Zero(ks.front().rows(), ks.front().cols());
  for (const auto& k : ks) acc += k.adjoint() * k;
  return acc;
}

}  // namespace channels

class DensityState {
 public:
  explicit DensityState(int n_qubits) : n_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits)
      throw std::invalid_argument("unsupported qubit count " + std::to_string(n_qubits));
    rho_ = CMatrix::Zero(dim(), dim());
    rho_(0, 0) = 1.0;
  }

  static DensityState from_pure(const Eigen::VectorXcd& psi) {
    int n = 0;
    while ((Eigen::Index{1} << n) < psi.size()) ++n;
    if ((Eigen::Index{1} << n) != psi.size()) throw std::invalid_argument("state size is not 2^n");
    DensityState s(n);
    const Eigen::VectorXcd v = psi / psi.norm();
    s.rho_ = v * v.adjoint();
    return s;
  }

  static DensityState from_matrix(const CMatrix& rho) {
    int n = 0;
    while ((Eigen::Index{1} << n) < rho.rows()) ++n;
    DensityState s(n);
    if (rho.rows() != s.dim() || rho.cols() != s.dim())
      throw std::invalid_argument("density matrix has wrong shape");
    s.rho_ = rho;
    return s;
  }

  static DensityState maximally_mixed(int n_qubits) {
    DensityState s(n_qubits);
    s.rho_ = CMatrix::Identity(s.dim(), s.dim()) / static_cast<double>(s.dim());
    return s;
  }

  int n_qubits() const { return n_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_; }
  const CMatrix& rho() const { return rho_; }

  double trace() const { return rho_.trace().real(); }

  double expectation(const CMatrix& op) const { return (rho_ * op).trace().real(); }

  /// Checks the Hermitian, unit-trace and PSD invariants.
  bool is_valid(double tol = 1e-12, double psd_tol = 1e-10) const {
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(trace() - 1.0) > tol) return false;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_);
    return es.eigenvalues().minCoeff() >= -psd_tol;
  }

  void apply_unitary(const CMatrix& u_full) { rho_ = u_full * rho_ * u_full.adjoint(); }

  void apply_kraus(const KrausSet& ks, const std::vector<int>& targets) {
    CMatrix acc = CMatrix::Zero(dim(), dim());
    for (const auto& k : ks) {
      const CMatrix full = embed_operator(k, targets, n_);
      acc += full * rho_ * full.adjoint();
    }
    rho_ = acc;
  }

 private:
  int n_;
  CMatrix rho_;
};

namespace detail {

inline void apply_gate_noise(DensityState& state, const std::vector<int>& targets,
                             const NoiseModel& noise) {
  if (!noise.enabled) return;
  const int k = static_cast<int>(targets.size());
  const double p = k == 1 ? noise.gate_depolarizing_1q : noise.gate_depolarizing_2q;
  if (p > 0.0) state.apply_kraus(channels::depolarizing(p, k), targets);
  for (int t : targets) {
    if (noise.amplitude_damping_1q > 0.0)
      state.apply_kraus(channels::amplitude_damping(noise.amplitude_damping_1q), {t});
    if (noise.phase_damping_1q > 0.0)
      state.apply_kraus(channels::phase_damping(noise.phase_damping_1q), {t});
  }
}

}  // namespace detail

/// rho <- U rho U^dagger, then the gate-class noise: depolarizing over the
/// targets followed by amplitude and phase damping on each target.
inline DensityState apply_gate(DensityState state, const Unitary1Q& gate, int target,
                               const NoiseModel& noise) {
  const std::vector<int> targets{target};
  state.apply_unitary(embed_operator(gate.matrix, targets, state.n_qubits()));
  detail::apply_gate_noise(state, targets, noise);
  return state;
}

inline DensityState apply_gate(DensityState state, const Unitary2Q& gate, int first, int second,
                               const NoiseModel& noise) {
  const std::vector<int> targets{first, second};
  state.apply_unitary(embed_operator(gate.matrix, targets, state.n_qubits()));
  detail::apply_gate_noise(state, targets, noise);
  return state;
}

/// Basis-state probabilities, with the per-qubit readout confusion applied
/// when noise is enabled. Index order matches basis_label().
inline std::vector<double> exact_probabilities(const DensityState& state, const NoiseModel& noise) {
  const auto dim = static_cast<std::size_t>(state.dim());
  const int n = state.n_qubits();
  std::vector<double> p(dim);
  for (std::size_t i = 0; i < dim; ++i) p[i] = std::max(0.0, state.rho()(i, i).real());
  if (noise.enabled && (noise.readout_flip_0to1 > 0.0 || noise.readout_flip_1to0 > 0.0)) {
    for (int q = 0; q < n; ++q) {
      const std::size_t bit = std::size_t{1} << (n - 1 - q);
      std::vector<double> next(dim, 0.0);
      for (std::size_t i = 0; i < dim; ++i) {
        const bool one = (i & bit) != 0;
        const double flip = one ? noise.readout_flip_1to0 : noise.readout_flip_0to1;
        next[i] += (1.0 - flip) * p[i];
        next[i ^ bit] += flip * p[i];
      }
      p = std::move(next);
    }
  }
  double total = 0.0;
  for (double v : p) total += v;
  for (double& v : p) v /= total;
  return p;
}

inline std::string basis_label(std::size_t index, int n_qubits) {
  std::string s(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 0; q < n_qubits; ++q)
    if ((index >> (n_qubits - 1 - q)) & 1u) s[static_cast<std::size_t>(q)] = '1';
  return s;
}

struct MeasurementOutcome {
  std::map<std::string, std::int64_t> counts;
  std::int64_t shots = 0;

  double frequency(const std::string& key) const {
    auto it = counts.find(key);
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
  }
};

/// Draws `shots` independent computational-basis samples. Readout flips are
/// independent per bit, so sampling from the confusion-applied distribution
/// is equivalent to flipping each sampled bit; counts are drawn as a
/// multinomial via sequential binomials.
inline MeasurementOutcome sample_counts(const DensityState& state, std::int64_t shots,
                                        const NoiseModel& noise, Rng& rng) {
  if (shots < 1) throw std::invalid_argument("shots must be positive");
  const auto p = exact_probabilities(state, noise);
  MeasurementOutcome out;
  out.shots = shots;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] > 0.0) last = i;
  std::int64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i <= last; ++i) {
    std::int64_t k = 0;
    if (i == last) {
      k = remaining;
    } else if (remaining > 0 && p[i] > 0.0) {
      const double q = std::clamp(p[i] / mass, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> draw(remaining, q);
      k = draw(rng);
    }
    mass -= p[i];
    if (mass < 0.0) mass = 0.0;
    remaining -= k;
    if (k > 0) out.counts[basis_label(i, state.n_qubits())] = k;
  }
  return out;
}

}  // namespace qagent
