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

// Equilibria and axial normal modes of a linear Coulomb chain.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "iontrap/trap.hpp"

namespace iontrap::chain {

struct IonChain {
  int n_ions = 0;
  double gamma = 0.0;              // length scale, m
  std::vector<double> positions;   // dimensionless, ascending
  std::vector<double> positions_m; // physical, m
  double min_spacing = 0.0;        // exact, m
  double min_spacing_fit = 0.0;    // 2.018 N^-0.559 gamma, m
  double residual = 0.0;           // max |gradient| at solution
  int iterations = 0;
};

// Length scale gamma with gamma^3 = q^2 / (4 pi eps0 m wz^2).
double length_scale(const trap::IonSpecies& species, double omega_z);

// Dimensionless potential and its gradient, used by tests and by the solver.
double dimensionless_potential(const std::vector<double>& z);
std::vector<double> dimensionless_gradient(const std::vector<double>& z);

IonChain equilibrium_positions(int n_ions, const trap::IonSpecies& species,
                               double omega_z);

struct ModeSpectrum {
  int n_ions = 0;
  double omega_z = 0.0;
  Eigen::MatrixXd couplings;           // V_kl
  std::vector<double> eigenvalues;     // mu, ascending
  Eigen::MatrixXd eigenvectors;        // row alpha is D^(alpha)
  std::vector<double> frequencies;     // nu_alpha = wz sqrt(mu), rad/s
  Eigen::MatrixXd coupling_factors;    // row alpha is K^(alpha)
  double ground_state_length = 0.0;    // sqrt(hbar / 2 m wz), m
};

Eigen::MatrixXd coupling_matrix(const std::vector<double>& z);

ModeSpectrum normal_modes(const IonChain& chain, const trap::IonSpecies& species,
                          double omega_z);

enum class Geometry { kTravelling, kStanding };
enum class TransitionKind { kDipole, kQuadrupole };

struct LaserConfig {
  double wavelength = 0.0;   // m
  double angle = 0.0;        // rad, to the trap axis
  double coupling = 0.0;     // |lambda|, rad/s
  double phase = 0.0;        // rad
  Geometry geometry = Geometry::kTravelling;
  std::vector<double> chi;   // per-ion standing-wave position, rad
  TransitionKind kind = TransitionKind::kQuadrupole;

  // Projected wave number (2 pi / wavelength) cos(angle).
  double kappa() const;
  void validate() const;
};

// Mode index alpha is 1-based.
std::vector<double> lamb_dicke_parameters(const ModeSpectrum& spectrum,
                                          const LaserConfig& laser, int alpha);

// Columns alpha, mu, nu_hz, D_1..D_N, K_1..K_N, eta_1..eta_N.
std::string modes_to_csv(const ModeSpectrum& spectrum, const LaserConfig& laser);
std::string chain_to_csv(const IonChain& chain);

}  // namespace iontrap::chain
