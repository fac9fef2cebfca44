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

// Classical model of a linear Paul trap.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace iontrap::trap {

struct IonSpecies {
  double mass_kg = 0.0;
  int charge = 1;  // multiples of e

  static IonSpecies from_amu(double mass_amu, int charge = 1);
  static IonSpecies calcium40();
  double charge_coulomb() const;
  void validate() const;
};

struct TrapConfig {
  double u0 = 0.0;            // dc offset, V
  double v0 = 0.0;            // rf amplitude, V
  double rf_omega = 0.0;      // rad/s
  double r0 = 0.0;            // m
  double endcap_distance = 0.0;  // m
  std::optional<double> u12;  // endcap voltage, V
  std::optional<double> xi;   // geometric factor
  IonSpecies species;
  std::optional<double> axial_omega_override;  // rad/s

  void validate() const;
};

struct TrapSummary {
  double a = 0.0;
  double b = 0.0;
  double omega_x = 0.0;
  double omega_y = 0.0;
  double omega_r = 0.0;
  double omega_z = 0.0;
  double depth_z_ev = 0.0;
  double depth_r_ev = 0.0;
  bool stable = false;
};

TrapSummary trap_characteristics(const TrapConfig& cfg);

// Closed-form secular motion with first-order micromotion.
struct SecularSample {
  double t;
  double x;
  double y;
};
std::vector<SecularSample> secular_trajectory(const TrapConfig& cfg, double x0,
                                              double y0, double phi_x,
                                              double phi_y,
                                              const std::vector<double>& t_grid);

// Phase-space point (x, y, z, vx, vy, vz).
using PhaseState = std::array<double, 6>;

struct TrajectoryPoint {
  double t;
  PhaseState s;
};

// Fixed-step RK4 on the exact Mathieu equations. Step must not exceed T_RF/50.
std::vector<TrajectoryPoint> mathieu_integrate(const TrapConfig& cfg,
                                               const PhaseState& init,
                                               double t_start, double t_end,
                                               double step);

struct LinearStability {
  double alpha_crit = 0.0;
  bool is_linear = false;
};

LinearStability linear_stability(int n_ions, double omega_z, double omega_r);

// Flat key=value file. Frequencies are given in Hz and converted to rad/s.
TrapConfig parse_trap_config(const std::string& text);
TrapConfig load_trap_config(const std::string& path);

std::string summary_to_json(const TrapSummary& s);

}  // namespace iontrap::trap
