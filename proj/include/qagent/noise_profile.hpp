// Named and file-based noise profiles in flat `key = value` form.
#pragma once

#include "qagent/qsim.hpp"

#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qagent {

class ProfileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shipped default. Tuned so the one-gate single-spin ground-state circuit
/// averages about -0.80 and the dimer singlet circuit about -0.69.
inline NoiseModel melbourne_like_profile() {
  NoiseModel n;
  n.enabled = true;
  n.gate_depolarizing_1q = 0.004;
  n.gate_depolarizing_2q = 0.008;
  n.amplitude_damping_1q = 0.002;
  n.phase_damping_1q = 0.002;
  n.readout_flip_0to1 = 0.005;
  n.readout_flip_1to0 = 0.024;
  return n;
}

namespace detail {
inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\"");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\"");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

/// Reads `key = value` lines; blank lines, `#`/`;` comments and `[section]`
/// headers are skipped. Unknown keys are an error. A profile read from a
/// file is enabled unless it sets `enabled = false`.
inline NoiseModel parse_noise_profile(std::istream& in, const std::string& source = "profile") {
  NoiseModel n;
  n.enabled = true;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';' || t[0] == '[') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ProfileError(source + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(t.substr(0, eq));
    const std::string val = detail::trim(t.substr(eq + 1));
    if (key == "enabled") {
      if (val == "true" || val == "1") n.enabled = true;
      else if (val == "false" || val == "0") n.enabled = false;
      else throw ProfileError(source + ":" + std::to_string(lineno) + ": bad boolean '" + val + "'");
      continue;
    }
    double* slot = nullptr;
    if (key == "gate_depolarizing_1q") slot = &n.gate_depolarizing_1q;
    else if (key == "gate_depolarizing_2q") slot = &n.gate_depolarizing_2q;
    else if (key == "amplitude_damping_1q") slot = &n.amplitude_damping_1q;
    else if (key == "phase_damping_1q") slot = &n.phase_damping_1q;
    else if (key == "readout_flip_0to1") slot = &n.readout_flip_0to1;
    else if (key == "readout_flip_1to0") slot = &n.readout_flip_1to0;
    else throw ProfileError(source + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    std::size_t used = 0;
    try {
      *slot = std::stod(val, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != val.size())
      throw ProfileError(source + ":" + std::to_string(lineno) + ": bad number '" + val + "'");
  }
  try {
    n.validate();
  } catch (const std::invalid_argument& e) {
    throw ProfileError(source + ": " + e.what());
  }
  return n;
}

inline std::string format_noise_profile(const NoiseModel& n) {
  std::ostringstream os;
  os.precision(17);
  os << "enabled = " << (n.enabled ? "true" : "false") << '\n'
     << "gate_depolarizing_1q = " << n.gate_depolarizing_1q << '\n'
     << "gate_depolarizing_2q = " << n.gate_depolarizing_2q << '\n'
     << "amplitude_damping_1q = " << n.amplitude_damping_1q << '\n'
     << "phase_damping_1q = " << n.phase_damping_1q << '\n'
     << "readout_flip_0to1 = " << n.readout_flip_0to1 << '\n'
     << "readout_flip_1to0 = " << n.readout_flip_1to0 << '\n';
  return os.str();
}

/// "off", "melbourne-like", or a path to a profile file.
inline NoiseModel resolve_noise_profile(const std::string& spec) {
  if (spec == "off" || spec.empty()) return NoiseModel::off();
  if (spec == "melbourne-like") return melbourne_like_profile();
  std::ifstream in(spec);
  if (!in) throw ProfileError("unknown noise profile '" + spec + "' (not a built-in name or readable file)");
  return parse_noise_profile(in, spec);
}

}  // namespace qagent
