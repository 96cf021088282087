// Variational baseline for the dimer: CNOT (U3 x U3)|00>, gradient descent
// on the measured energy with a periodically recalibrated step size.
#pragma once

#include "qagent/observables.hpp"
#include "qagent/qsim.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>
#include <vector>

namespace qagent {

/// (theta, phi, lambda) of the U3 on qubit 1, then the same for qubit 2.
using AnsatzAngles = std::array<double, 6>;

/// Angles that prepare the singlet: U3(-pi/2, 0, 0) on the control qubit,
/// U3(pi, 0, 0) on the target, then CNOT.
inline AnsatzAngles singlet_angles() {
  using std::numbers::pi;
  return {-pi / 2, 0.0, 0.0, pi, 0.0, 0.0};
}

inline DensityState ansatz_state(const AnsatzAngles& t, const NoiseModel& noise) {
  DensityState s(2);
  s = apply_gate(std::move(s), u3(t[0], t[1], t[2]), 0, noise);
  s = apply_gate(std::move(s), u3(t[3], t[4], t[5]), 1, noise);
  return apply_gate(std::move(s), cnot(), 0, 1, noise);
}

inline double ansatz_energy(const AnsatzAngles& t, const Hamiltonian& h, const MeasurementConfig& m,
                            Rng& rng) {
  if (h.kind != Hamiltonian::Kind::Dimer) throw std::invalid_argument("the ansatz targets the dimer");
  return energy(h, estimate_correlators(ansatz_state(t, m.noise), m, rng));
}

/// Central differences with step `fd_step` per angle.
inline AnsatzAngles fd_gradient(const AnsatzAngles& t, const Hamiltonian& h, const MeasurementConfig& m,
                                Rng& rng, double fd_step = 0.1) {
  AnsatzAngles g{};
  for (std::size_t i = 0; i < t.size(); ++i) {
    AnsatzAngles plus = t, minus = t;
    plus[i] += fd_step;
    minus[i] -= fd_step;
    g[i] = (ansatz_energy(plus, h, m, rng) - ansatz_energy(minus, h, m, rng)) / (2.0 * fd_step);
  }
  return g;
}

namespace detail {
// Derivative of U3 with respect to parameter `which` (0 theta, 1 phi, 2 lambda).
inline Eigen::Matrix2cd u3_derivative(double theta, double phi, double lambda, int which) {
  const double c = std::cos(theta / 2.0), s = std::sin(theta / 2.0);
  const cplx i(0.0, 1.0);
  const cplx ep = std::polar(1.0, phi), el = std::polar(1.0, lambda), epl = std::polar(1.0, phi + lambda);
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  switch (which) {
    case 0:
      d << -s / 2.0, -el * c / 2.0, ep * c / 2.0, -epl * s / 2.0;
      break;
    case 1:
      d << 0.0, 0.0, i * ep * s, i * epl * c;
      break;
    default:
      d << 0.0, -i * el * s, 0.0, i * epl * c;
      break;
  }
  return d;
}
}  // namespace detail

/// Noiseless analytic gradient, dE/dt_i = 2 Re <psi|H|d_i psi>, from dense
/// pure-state algebra.
inline AnsatzAngles analytic_gradient(const AnsatzAngles& t, const Hamiltonian& h) {
  const CMatrix cx = cnot().matrix;
  const CMatrix a = u3(t[0], t[1], t[2]).matrix, b = u3(t[3], t[4], t[5]).matrix;
  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(4);
  zero(0) = 1.0;
  const Eigen::VectorXcd psi = cx * kron(a, b) * zero;
  const CMatrix hm = h.matrix();
  AnsatzAngles g{};
  for (int k = 0; k < 6; ++k) {
    const CMatrix da = k < 3 ? CMatrix(detail::u3_derivative(t[0], t[1], t[2], k)) : a;
    const CMatrix db = k < 3 ? b : CMatrix(detail::u3_derivative(t[3], t[4], t[5], k - 3));
    const Eigen::VectorXcd dpsi = cx * kron(da, db) * zero;
    g[static_cast<std::size_t>(k)] = 2.0 * (psi.adjoint() * hm * dpsi)(0, 0).real();
  }
  return g;
}

struct VqeConfig {
  Hamiltonian hamiltonian = Hamiltonian::dimer(1.0);
  MeasurementConfig measurement;
  int iterations = 500;
  int calibrate_every = 20;
  std::vector<double> probe_steps{0.1, 0.5, 1.0, 2.0};
  double alpha_cap = 2.0;  // <= 0 disables the cap
  double fd_step = 0.1;
  std::optional<AnsatzAngles> initial_theta;  // default: uniform in [0, 2 pi)
  std::uint64_t seed = 0;
};

struct VqePoint {
  int iteration = 0;
  double alpha = 0.0;
  AnsatzAngles theta{};
  double energy = 0.0;
};

/// theta <- theta - alpha * g. Every `calibrate_every` iterations alpha is
/// re-chosen by probing the energy along -g at each probe step and keeping
/// the lowest. The first entry of the trajectory is the starting point.
inline std::vector<VqePoint> run_vqe(const VqeConfig& cfg) {
  if (cfg.iterations < 0 || cfg.calibrate_every <= 0 || cfg.probe_steps.empty())
    throw std::invalid_argument("invalid variational configuration");
  Rng rng(cfg.seed);
  AnsatzAngles theta{};
  if (cfg.initial_theta) {
    theta = *cfg.initial_theta;
  } else {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (double& v : theta) v = u(rng);
  }
  const auto& h = cfg.hamiltonian;
  const auto& m = cfg.measurement;
  auto capped = [&](double a) { return cfg.alpha_cap > 0.0 ? std::min(a, cfg.alpha_cap) : a; };

  std::vector<VqePoint> traj;
  double alpha = capped(cfg.probe_steps.front());
  traj.push_back({0, alpha, theta, ansatz_energy(theta, h, m, rng)});
  for (int k = 1; k <= cfg.iterations; ++k) {
    const AnsatzAngles g = fd_gradient(theta, h, m, rng, cfg.fd_step);
    if ((k - 1) % cfg.calibrate_every == 0) {
      double best_e = 0.0;
      bool first = true;
      for (double step : cfg.probe_steps) {
        const double a = capped(step);
        AnsatzAngles probe = theta;
        for (std::size_t i = 0; i < probe.size(); ++i) probe[i] -= a * g[i];
        const double e = ansatz_energy(probe, h, m, rng);
        if (first || e < best_e) {
          best_e = e;
          alpha = a;
          first = false;
        }
      }
    }
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= alpha * g[i];
    traj.push_back({k, alpha, theta, ansatz_energy(theta, h, m, rng)});
  }
  return traj;
}

}  // namespace qagent
