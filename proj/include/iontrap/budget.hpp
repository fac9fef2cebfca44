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

// Error and timing estimates.

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "iontrap/trap.hpp"

namespace iontrap::budget {

struct CoolingParams {
  double linewidth = 0.0;  // Gamma, rad/s
  double omega_z = 0.0;    // rad/s
  double detuning = 0.0;   // delta > 0, rad/s
  double pattern = 0.4;    // alpha, 2/5 for a dipole pattern
};

struct CoolingLimits {
  double doppler = 0.0;          // <n> at the given detuning
  double doppler_optimal = 0.0;  // <n> at delta = Gamma
  double doppler_rule = 0.0;     // 0.7 Gamma / wz
  double sideband = 0.0;
};

CoolingLimits cooling_limits(const CoolingParams& p);

struct Spectator {
  double eta;
  double mean_n;
};

struct EitEstimate {
  double stark_shift = 0.0;      // rad/s
  double rabi_fluctuation = 0.0; // relative
};

EitEstimate eit_estimates(double delta_r, double omega_r,
                          const std::vector<Spectator>& spectators);

struct OffResonantReport {
  double p_blue = 0.0;
  double p_red = 0.0;
  double p_carrier = 0.0;
  double margin_blue = 0.0;    // lambda eta sqrt(n+1) / nu
  double margin_red = 0.0;     // lambda eta sqrt(n) / nu
  double margin_carrier = 0.0; // lambda / nu
  double stark_shift = 0.0;    // |lambda|^2 / (2 nu), rad/s
  double lamb_dicke_margin = 0.0;  // eta sqrt(n + 1/2)
};

OffResonantReport offres_report(double lambda, double eta, double n, double nu);

// Peak probability modulated in time: peak * sin^2(nu t / 2).
double offres_probability(double peak, double nu, double t);

struct TimingParams {
  int n_ions = 2;
  int gate_ions = 2;
  double fidelity = 0.99;
  double wavelength = 729e-9;
  double angle = 1.0471975511965976;  // 60 degrees
  double omega_z = 0.0;
  trap::IonSpecies species = trap::IonSpecies::calcium40();
  double t_a = 5e-6;
};

struct TimingReport {
  double recoil_energy = 0.0;  // J
  double recoil_hz = 0.0;      // E_r / h
  double eta = 0.0;            // sqrt(E_r / hbar wz)
  double t_b = 0.0;            // s
  double t_total = 0.0;        // s
};

TimingReport timing_report(const TimingParams& p);

struct TableRow {
  int n_ions;
  double t_b_99, t_b_75;  // s
  double t_99, t_75;      // s
};

// N = Q in {2, 3, 6, 9, 10} at F = 99% and 75%.
std::vector<TableRow> gate_time_table(const TimingParams& base);
std::string table_to_csv(const std::vector<TableRow>& rows, std::uint64_t seed);

// |Omega_exact - Omega_LD| / |Omega_LD| and its first-order bound
// eta^2 (1/2 + n/(|k|+1)).
double lamb_dicke_remainder(double eta, int n, int k);
double lamb_dicke_bound(double eta, int n, int k);

struct BudgetReport {
  OffResonantReport offres;
  TimingReport timing;
  double t_a = 0.0;
};

std::string report_to_json(const BudgetReport& r, const CoolingLimits* cooling,
                           const EitEstimate* eit, std::uint64_t seed);

}  // namespace iontrap::budget
