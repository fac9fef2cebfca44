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

// Laser-ion couplings and pulse evolution.

#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "iontrap/chain.hpp"
#include "iontrap/statespace.hpp"

namespace iontrap::interaction {

enum class Transition { kGE = 0, kGR = 1 };
enum class Regime { kIdealLD, kExactLaguerre, kFullOffResonant };

const char* to_string(Transition t);
const char* to_string(Regime r);

// One laser pulse. `phase` is the laser phase; the ion index is 0-based.
struct Pulse {
  int ion = 0;
  int k = 0;          // sideband: 0 carrier, -1 first red, +1 first blue
  double area = 1.0;  // in units of pi
  double phase = 0.0;
  Transition transition = Transition::kGE;
  Regime regime = Regime::kIdealLD;

  bool operator==(const Pulse&) const = default;
};

struct CouplingContext {
  // Per ion, per transition (ge, gr). Includes the position phase exp(i kappa z_j).
  std::vector<std::array<cplx, 2>> lambda;
  std::vector<double> eta;
  double nu = 0.0;  // bus mode, rad/s
  std::vector<double> position_phase;  // kappa z_j, rad
  chain::Geometry geometry = chain::Geometry::kTravelling;
  std::vector<double> chi;
  chain::TransitionKind kind = chain::TransitionKind::kQuadrupole;

  int n_ions() const { return static_cast<int>(eta.size()); }
  cplx coupling(int ion, Transition t) const {
    return lambda.at(ion)[static_cast<int>(t)];
  }
  void validate() const;
};

// Same |lambda| and eta on every ion, zero position phases.
CouplingContext uniform_context(int n_ions, double lambda, double eta, double nu,
                                double lambda_gr = -1.0);

// Context for bus mode `alpha` (1-based) of a solved chain.
CouplingContext make_context(const chain::IonChain& chain,
                             const chain::ModeSpectrum& spectrum,
                             const chain::LaserConfig& laser, int alpha,
                             double lambda_gr = -1.0);

// Generalized Laguerre polynomial L_n^a(x) by three-term recurrence.
double laguerre(int n, int a, double x);
// sqrt(n! / (n+k)!) as a running product.
double sqrt_factorial_ratio(int n, int k);
// <m| exp(i eta (a + a^dag)) |n>.
cplx displacement_element(double eta, int m, int n);

// Exact coupling lambda <n+|k|| exp(i eta (a + a^dag)) |n>.
cplx rabi_frequency(cplx lambda, double eta, int n, int k);
// Lowest-order Lamb-Dicke form.
cplx rabi_frequency_ld(cplx lambda, double eta, int n, int k);
cplx rabi_frequency(const CouplingContext& ctx, int ion, Transition t, int n, int k,
                    bool lamb_dicke = false);

cplx standing_wave_rabi(cplx lambda, double eta, int n, int k, double chi,
                        chain::TransitionKind kind);
cplx standing_wave_rabi(const CouplingContext& ctx, int ion, Transition t, int n, int k);

// Block coupling used by a pulse for phonon number n (lower Fock index of the pair).
cplx block_rate(const Pulse& p, const CouplingContext& ctx, int n);

// t = area * pi / |Omega^{0,k}|.
double pulse_duration(const Pulse& p, const CouplingContext& ctx);

struct PulseValidity {
  double lamb_dicke_measure = 0.0;  // eta^2 (n_ref + 1)
  double drive_ratio = 0.0;         // |effective coupling| / nu
  bool lamb_dicke = false;          // measure <= 0.1
  bool weak_drive = false;          // ratio <= 0.1
};

PulseValidity validity(const Pulse& p, const CouplingContext& ctx, int n_ref = 1);

// A unitary on one ion's three levels and the bus, stored as 2x2 blocks.
struct PulseOperator {
  struct Block {
    int lower;  // local index level * fock_dim + n
    int upper;
    cplx ll, lu, ul, uu;
  };
  int ion = 0;
  int fock_dim = 0;
  std::vector<Block> blocks;
  std::vector<int> frozen;  // local indices held fixed by the Fock cutoff

  // Returns the population sitting on frozen states before the pulse.
  double apply(QuantumState& state) const;
  Eigen::MatrixXcd matrix() const;
};

PulseOperator pulse_unitary(const Pulse& p, const CouplingContext& ctx, int n_max);

struct StepControl {
  double step = 0.0;  // 0 selects 2 pi / (200 max(nu, |delta|, |lambda|))
  std::function<void(double, const QuantumState&)> observer;  // called after each step
};

QuantumState evolve_full(const QuantumState& state, const Pulse& p,
                         const CouplingContext& ctx, double duration,
                         const StepControl& control = {});

// 1 - i * integral of H: carrier, red and blue terms to first order in eta.
QuantumState perturbative_evolve(const QuantumState& state, const Pulse& p,
                                 const CouplingContext& ctx, double t);

// Applies any regime. Appends human-readable warnings.
void apply_pulse(QuantumState& state, const Pulse& p, const CouplingContext& ctx,
                 std::vector<std::string>* warnings = nullptr);

struct ModeDistribution {
  std::vector<double> populations;  // P(n)
  double eta = 0.0;
  double nu = 0.0;
};

struct SpectralLine {
  double delta;
  double weight;
};

struct Spectrum {
  std::vector<SpectralLine> lines;  // sorted by delta
  std::vector<double> intensity;    // Lorentzian-broadened on the grid
};

Spectrum absorption_spectrum(const std::vector<ModeDistribution>& modes,
                             const std::vector<double>& delta_grid, double linewidth);

std::vector<double> thermal_distribution(double mean_n, int n_max);

// Text form: pulse ion=<j> k=<int> area=<rational>pi phase=<rad> transition=<ge|gr>
// regime=<ld|exact|full>. Ion numbers are 1-based in text.
std::string format_pulse(const Pulse& p);
std::string format_area(double area);
std::vector<Pulse> parse_pulse_program(const std::string& text);
std::string format_pulse_program(const std::vector<Pulse>& pulses);

Regime parse_regime(const std::string& s);

}  // namespace iontrap::interaction
