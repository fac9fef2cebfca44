// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "iontrap/trap.hpp"

#include <cmath>
#include <map>
#include <json.hpp>
#include <set>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap::trap {

using constants::kTwoPi;

IonSpecies IonSpecies::from_amu(double mass_amu, int charge) {
  return IonSpecies{mass_amu * constants::kAtomicMassUnit, charge};
}

IonSpecies IonSpecies::calcium40() {
  return from_amu(constants::kCalcium40Amu, 1);
}

double IonSpecies::charge_coulomb() const {
  return charge * constants::kElementaryCharge;
}

void IonSpecies::validate() const {
  if (!(mass_kg > 0.0)) throw std::invalid_argument("ion mass must be positive");
  if (charge < 1) throw std::invalid_argument("ion charge must be >= 1");
}

void TrapConfig::validate() const {
  species.validate();
  if (!(v0 > 0.0)) throw std::invalid_argument("rf amplitude V0 must be positive");
  if (!(rf_omega > 0.0)) throw std::invalid_argument("rf frequency must be positive");
  if (!(r0 > 0.0)) throw std::invalid_argument("r0 must be positive");
  if (!(endcap_distance > 0.0))
    throw std::invalid_argument("endcap distance must be positive");
  if (xi && !(*xi > 0.0 && *xi <= 1.0))
    throw std::invalid_argument("geometric factor xi must lie in (0, 1]");
  if (axial_omega_override && !(*axial_omega_override > 0.0))
    throw std::invalid_argument("axial frequency override must be positive");
}

namespace {

double mathieu_scale(const TrapConfig& cfg) {
  const double m = cfg.species.mass_kg;
  return cfg.species.charge_coulomb() / (m * cfg.r0 * cfg.r0 * cfg.rf_omega * cfg.rf_omega);
}

double secular(double omega_rf, double radicand) {
  return radicand > 0.0 ? 0.5 * omega_rf * std::sqrt(radicand) : 0.0;
}

}  // namespace

TrapSummary trap_characteristics(const TrapConfig& cfg) {
  cfg.validate();
  TrapSummary s;
  const double k = mathieu_scale(cfg);
  s.a = 4.0 * k * cfg.u0;
  s.b = 2.0 * k * cfg.v0;
  s.omega_x = secular(cfg.rf_omega, s.b * s.b / 2.0 + s.a);
  s.omega_y = secular(cfg.rf_omega, s.b * s.b / 2.0 - s.a);
  s.omega_r = cfg.rf_omega * s.b / (2.0 * std::sqrt(2.0));

  const double m = cfg.species.mass_kg;
  if (cfg.axial_omega_override) {
    s.omega_z = *cfg.axial_omega_override;
  } else {
    if (!cfg.u12 || !cfg.xi)
      throw std::invalid_argument(
          "axial frequency needs either an override or both U12 and xi");
    const double energy = *cfg.xi * cfg.species.charge_coulomb() * *cfg.u12;
    if (!(energy > 0.0))
      throw std::invalid_argument("xi * q * U12 must be positive");
    s.omega_z = std::sqrt(2.0 * energy / (m * cfg.endcap_distance * cfg.endcap_distance));
  }

  const double ev = constants::kElectronVolt;
  s.depth_z_ev = 0.5 * m * s.omega_z * s.omega_z * cfg.endcap_distance * cfg.endcap_distance / ev;
  s.depth_r_ev = 0.5 * m * s.omega_r * s.omega_r * cfg.r0 * cfg.r0 / ev;
  s.stable = std::abs(s.a) < s.b * s.b / 10.0 && s.b * s.b < 0.1;
  return s;
}

std::vector<SecularSample> secular_trajectory(const TrapConfig& cfg, double x0,
                                              double y0, double phi_x,
                                              double phi_y,
                                              const std::vector<double>& t_grid) {
  TrapSummary s = trap_characteristics(cfg);
  if (!s.stable)
    throw PhysicsError("secular approximation requires |a| << b^2 << 1 (a=" +
                       io::format_double(s.a) + ", b=" + io::format_double(s.b) + ")");
  std::vector<SecularSample> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const double mm = 0.5 * s.b * std::cos(cfg.rf_omega * t);
    out.push_back({t, x0 * (1.0 + mm) * std::cos(s.omega_x * t + phi_x),
                   y0 * (1.0 - mm) * std::cos(s.omega_y * t + phi_y)});
  }
  return out;
}

std::vector<TrajectoryPoint> mathieu_integrate(const TrapConfig& cfg,
                                               const PhaseState& init,
                                               double t_start, double t_end,
                                               double step) {
  // V0 = 0 is allowed here so free motion can be checked.
  cfg.species.validate();
  if (!(cfg.rf_omega > 0.0) || !(cfg.r0 > 0.0) || cfg.v0 < 0.0)
    throw std::invalid_argument("mathieu_integrate: invalid trap drive");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  const double max_step = kTwoPi / cfg.rf_omega / 50.0;
  if (step > max_step * (1.0 + 1e-12))
    throw std::invalid_argument("step exceeds T_RF/50 (" + io::format_double(max_step) + " s)");
  if (!(t_end >= t_start)) throw std::invalid_argument("t_end before t_start");

  const double c = cfg.species.charge_coulomb() / (cfg.species.mass_kg * cfg.r0 * cfg.r0);
  auto deriv = [&](double t, const PhaseState& s) {
    const double w = c * (cfg.u0 + cfg.v0 * std::cos(cfg.rf_omega * t));
    return PhaseState{s[3], s[4], s[5], -w * s[0], w * s[1], 0.0};
  };
  auto axpy = [](const PhaseState& s, double h, const PhaseState& k) {
    PhaseState r;
    for (int i = 0; i < 6; ++i) r[i] = s[i] + h * k[i];
    return r;
  };

  const auto n_steps = static_cast<long long>(std::ceil((t_end - t_start) / step - 1e-9));
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<size_t>(n_steps) + 1);
  PhaseState s = init;
  out.push_back({t_start, s});
  for (long long i = 0; i < n_steps; ++i) {
    const double t = t_start + static_cast<double>(i) * step;
    const double h = std::min(step, t_end - t);
    PhaseState k1 = deriv(t, s);
    PhaseState k2 = deriv(t + h / 2, axpy(s, h / 2, k1));
    PhaseState k3 = deriv(t + h / 2, axpy(s, h / 2, k2));
    PhaseState k4 = deriv(t + h, axpy(s, h, k3));
    for (int j = 0; j < 6; ++j) s[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    out.push_back({t + h, s});
  }
  return out;
}

LinearStability linear_stability(int n_ions, double omega_z, double omega_r) {
  if (n_ions < 2) throw std::invalid_argument("linear_stability needs N >= 2");
  if (!(omega_z > 0.0) || !(omega_r > 0.0))
    throw std::invalid_argument("frequencies must be positive");
  LinearStability r;
  r.alpha_crit = 3.23 * std::pow(static_cast<double>(n_ions), -1.83);
  const double ratio = omega_z / omega_r;
  r.is_linear = ratio * ratio < r.alpha_crit;
  return r;
}

TrapConfig parse_trap_config(const std::string& text) {
  static const std::set<std::string> kKeys = {
      "mass_amu", "charge_e", "u0_v", "v0_v", "rf_hz",
      "r0_m", "endcap_m", "u12_v", "xi", "omega_z_hz"};
  std::map<std::string, double> values;
  const auto lines = io::split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const int line_no = static_cast<int>(li) + 1;
    std::string line = lines[li];
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    size_t first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("expected key=value", line_no, static_cast<int>(first) + 1);
    auto trim = [](std::string s) {
      size_t b = s.find_first_not_of(" \t");
      size_t e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!kKeys.count(key))
      throw ParseError("unknown key '" + key + "'", line_no, static_cast<int>(first) + 1);
    if (values.count(key))
      throw ParseError("duplicate key '" + key + "'", line_no, static_cast<int>(first) + 1);
    size_t val_col = line.find_first_not_of(" \t", eq + 1);
    int col = static_cast<int>(val_col == std::string::npos ? eq + 1 : val_col) + 1;
    auto v = io::parse_double(val);
    if (!v) throw ParseError("malformed number '" + val + "'", line_no, col);
    values[key] = *v;
  }
  for (const char* req : {"mass_amu", "v0_v", "rf_hz", "r0_m", "endcap_m"})
    if (!values.count(req)) throw ParseError(std::string("missing key '") + req + "'", 0, 0);

  TrapConfig cfg;
  double charge = values.count("charge_e") ? values["charge_e"] : 1.0;
  if (charge != std::floor(charge)) throw ParseError("charge_e must be an integer", 0, 0);
  cfg.species = IonSpecies::from_amu(values["mass_amu"], static_cast<int>(charge));
  cfg.u0 = values.count("u0_v") ? values["u0_v"] : 0.0;
  cfg.v0 = values["v0_v"];
  cfg.rf_omega = kTwoPi * values["rf_hz"];
  cfg.r0 = values["r0_m"];
  cfg.endcap_distance = values["endcap_m"];
  if (values.count("u12_v")) cfg.u12 = values["u12_v"];
  if (values.count("xi")) cfg.xi = values["xi"];
  if (values.count("omega_z_hz")) cfg.axial_omega_override = kTwoPi * values["omega_z_hz"];
  return cfg;
}

TrapConfig load_trap_config(const std::string& path) {
  return parse_trap_config(io::read_file(path));
}

std::string summary_to_json(const TrapSummary& s) {
  nlohmann::ordered_json j;
  j["a"] = s.a;
  j["b"] = s.b;
  j["omega_x_hz"] = s.omega_x / kTwoPi;
  j["omega_y_hz"] = s.omega_y / kTwoPi;
  j["omega_r_hz"] = s.omega_r / kTwoPi;
  j["omega_z_hz"] = s.omega_z / kTwoPi;
  j["depth_z_ev"] = s.depth_z_ev;
  j["depth_r_ev"] = s.depth_r_ev;
  j["stable"] = s.stable;
  return j.dump(2);
}

}  // namespace iontrap::trap
