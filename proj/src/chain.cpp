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

#include "iontrap/chain.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap::chain {

namespace {

constexpr int kMaxNewtonIterations = 200;
constexpr double kResidualTarget = 1e-12;

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

bool ascending(const std::vector<double>& z) {
  for (size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1])) return false;
  return true;
}

}  // namespace

double length_scale(const trap::IonSpecies& species, double omega_z) {
  species.validate();
  if (!(omega_z > 0.0)) throw std::invalid_argument("omega_z must be positive");
  const double q = species.charge_coulomb();
  const double g3 = q * q / (4.0 * constants::kPi * constants::kEpsilon0 *
                             species.mass_kg * omega_z * omega_z);
  return std::cbrt(g3);
}

double dimensionless_potential(const std::vector<double>& z) {
  double v = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    v += 0.5 * z[i] * z[i];
    for (size_t j = i + 1; j < z.size(); ++j) v += 1.0 / std::abs(z[i] - z[j]);
  }
  return v;
}

std::vector<double> dimensionless_gradient(const std::vector<double>& z) {
  const size_t n = z.size();
  std::vector<double> g(n);
  for (size_t i = 0; i < n; ++i) {
    double s = z[i];
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = z[i] - z[j];
      s -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
    g[i] = s;
  }
  return g;
}

Eigen::MatrixXd coupling_matrix(const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double diag = 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double c = 2.0 / std::pow(std::abs(z[k] - z[j]), 3);
      diag += c;
      v(k, j) = -c;
    }
    v(k, k) = diag;
  }
  return v;
}

IonChain equilibrium_positions(int n_ions, const trap::IonSpecies& species,
                               double omega_z) {
  if (n_ions < 1) throw std::invalid_argument("chain needs at least one ion");
  IonChain c;
  c.n_ions = n_ions;
  c.gamma = length_scale(species, omega_z);

  const double delta = 2.018 / std::pow(static_cast<double>(n_ions), 0.559);
  std::vector<double> z(n_ions);
  for (int i = 0; i < n_ions; ++i) z[i] = (i + 1 - (n_ions + 1) / 2.0) * delta;

  std::vector<double> g = dimensionless_gradient(z);
  double res = max_abs(g);
  int it = 0;
  while (res > kResidualTarget) {
    if (++it > kMaxNewtonIterations)
      throw std::runtime_error("equilibrium solver did not converge (residual " +
                               io::format_double(res) + ")");
    Eigen::MatrixXd h = coupling_matrix(z);
    Eigen::VectorXd rhs(n_ions);
    for (int i = 0; i < n_ions; ++i) rhs[i] = -g[i];
    Eigen::VectorXd step = h.ldlt().solve(rhs);

    double damping = 1.0;
    bool accepted = false;
    while (damping > 1e-12) {
      std::vector<double> trial(n_ions);
      for (int i = 0; i < n_ions; ++i) trial[i] = z[i] + damping * step[i];
      if (ascending(trial)) {
        auto tg = dimensionless_gradient(trial);
        double tres = max_abs(tg);
        if (tres < res) {
          z = std::move(trial);
          g = std::move(tg);
          res = tres;
          accepted = true;
          break;
        }
      }
      damping *= 0.5;
    }
    if (!accepted)
      throw std::runtime_error("equilibrium solver stalled at residual " +
                               io::format_double(res));
  }

  // Antisymmetrize to remove rounding drift of the centre of mass.
  for (int i = 0; i < n_ions / 2; ++i) {
    const double m = 0.5 * (z[n_ions - 1 - i] - z[i]);
    z[i] = -m;
    z[n_ions - 1 - i] = m;
  }
  if (n_ions % 2 == 1) z[n_ions / 2] = 0.0;

  c.positions = z;
  c.residual = max_abs(dimensionless_gradient(z));
  c.iterations = it;
  c.positions_m.resize(n_ions);
  for (int i = 0; i < n_ions; ++i) c.positions_m[i] = z[i] * c.gamma;
  c.min_spacing = 0.0;
  if (n_ions > 1) {
    double m = z[1] - z[0];
    for (int i = 2; i < n_ions; ++i) m = std::min(m, z[i] - z[i - 1]);
    c.min_spacing = m * c.gamma;
  }
  c.min_spacing_fit = delta * c.gamma;
  return c;
}

ModeSpectrum normal_modes(const IonChain& chain, const trap::IonSpecies& species,
                          double omega_z) {
  const int n = chain.n_ions;
  if (n < 1 || static_cast<int>(chain.positions.size()) != n)
    throw std::invalid_argument("invalid chain");
  if (!ascending(chain.positions))
    throw std::invalid_argument("chain positions must be strictly ascending");
  species.validate();

  ModeSpectrum s;
  s.n_ions = n;
  s.omega_z = omega_z;
  s.couplings = coupling_matrix(chain.positions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.couplings);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigen-decomposition of the coupling matrix failed");

  const Eigen::VectorXd& mu = solver.eigenvalues();
  for (int a = 1; a < n; ++a)
    if (mu[a] - mu[a - 1] <= 1e-8)
      throw std::runtime_error("degenerate mode eigenvalues");

  s.eigenvectors.resize(n, n);
  s.coupling_factors.resize(n, n);
  for (int a = 0; a < n; ++a) {
    Eigen::VectorXd d = solver.eigenvectors().col(a);
    double sign = 1.0;
    if (a == 0) {
      sign = d.sum() >= 0 ? 1.0 : -1.0;
    } else {
      for (int i = n - 1; i >= 0; --i) {
        if (std::abs(d[i]) > 1e-12) {
          sign = d[i] > 0 ? 1.0 : -1.0;
          break;
        }
      }
    }
    d *= sign;
    s.eigenvalues.push_back(mu[a]);
    s.frequencies.push_back(omega_z * std::sqrt(mu[a]));
    s.eigenvectors.row(a) = d.transpose();
    s.coupling_factors.row(a) = d.transpose() / std::pow(mu[a], 0.25);
  }
  s.ground_state_length = std::sqrt(constants::kHbar / (2.0 * species.mass_kg * omega_z));
  return s;
}

double LaserConfig::kappa() const {
  return constants::kTwoPi / wavelength * std::cos(angle);
}

void LaserConfig::validate() const {
  if (!(wavelength > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (coupling < 0.0) throw std::invalid_argument("coupling magnitude must be >= 0");
}

std::vector<double> lamb_dicke_parameters(const ModeSpectrum& spectrum,
                                          const LaserConfig& laser, int alpha) {
  laser.validate();
  if (alpha < 1 || alpha > spectrum.n_ions)
    throw std::out_of_range("mode index out of range");
  const double scale = laser.kappa() * spectrum.ground_state_length;
  std::vector<double> eta(spectrum.n_ions);
  for (int j = 0; j < spectrum.n_ions; ++j)
    eta[j] = spectrum.coupling_factors(alpha - 1, j) * scale;
  return eta;
}

std::string modes_to_csv(const ModeSpectrum& spectrum, const LaserConfig& laser) {
  const int n = spectrum.n_ions;
  std::ostringstream out;
  out << "alpha,mu,nu_hz";
  for (const char* p : {"D_", "K_", "eta_"})
    for (int i = 1; i <= n; ++i) out << ',' << p << i;
  out << '\n';
  for (int a = 1; a <= n; ++a) {
    auto eta = lamb_dicke_parameters(spectrum, laser, a);
    out << a << ',' << io::format_double(spectrum.eigenvalues[a - 1]) << ','
        << io::format_double(spectrum.frequencies[a - 1] / constants::kTwoPi);
    for (int i = 0; i < n; ++i) out << ',' << io::format_double(spectrum.eigenvectors(a - 1, i));
    for (int i = 0; i < n; ++i)
      out << ',' << io::format_double(spectrum.coupling_factors(a - 1, i));
    for (int i = 0; i < n; ++i) out << ',' << io::format_double(eta[i]);
    out << '\n';
  }
  return out.str();
}

std::string chain_to_csv(const IonChain& chain) {
  std::ostringstream out;
  out << "# gamma_m=" << io::format_double(chain.gamma)
      << " min_spacing_m=" << io::format_double(chain.min_spacing)
      << " min_spacing_fit_m=" << io::format_double(chain.min_spacing_fit) << '\n';
  out << "i,Z,z_m\n";
  for (int i = 0; i < chain.n_ions; ++i)
    out << i + 1 << ',' << io::format_double(chain.positions[i]) << ','
        << io::format_double(chain.positions_m[i]) << '\n';
  return out.str();
}

}  // namespace iontrap::chain
