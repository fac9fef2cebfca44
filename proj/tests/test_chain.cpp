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


#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "iontrap/chain.hpp"
#include "iontrap/constants.hpp"

using namespace iontrap;
using namespace iontrap::chain;

namespace {

constexpr double kTau = 6.283185307179586;
const trap::IonSpecies kCa = trap::IonSpecies::calcium40();
const double kWz = kTau * 700e3;

// Dimensionless potential for ascending positions, written so that it is
// analytic and can be differentiated with a complex step.
template <class T>
T potential(const std::vector<T>& u) {
  T v = 0.0;
  for (size_t i = 0; i < u.size(); ++i) {
    v += 0.5 * u[i] * u[i];
    for (size_t j = i + 1; j < u.size(); ++j) v += 1.0 / (u[j] - u[i]);
  }
  return v;
}

LaserConfig laser(double angle = kTau / 6.0) {
  LaserConfig l;
  l.wavelength = 729e-9;
  l.angle = angle;
  return l;
}

}  // namespace

TEST_SUITE("chain") {
  TEST_CASE("single ion") {
    auto c = equilibrium_positions(1, kCa, kWz);
    REQUIRE(c.positions.size() == 1);
    CHECK(c.positions[0] == 0.0);
    auto m = normal_modes(c, kCa, kWz);
    CHECK(m.eigenvalues[0] == doctest::Approx(1.0));
    CHECK(m.frequencies[0] == doctest::Approx(kWz));
    CHECK(std::abs(m.eigenvectors(0, 0)) == doctest::Approx(1.0));
  }

  TEST_CASE("length scale") {
    const double q = 1.602176634e-19, eps0 = 8.8541878128e-12;
    const double m = 39.962590863 * 1.66053906660e-27;
    const double g = std::cbrt(q * q / (4 * 3.141592653589793 * eps0 * m * kWz * kWz));
    CHECK(length_scale(kCa, kWz) == doctest::Approx(g).epsilon(1e-9));
  }

  TEST_CASE("equilibria are stationary, ordered and centred") {
    for (int n = 2; n <= 30; ++n) {
      auto c = equilibrium_positions(n, kCa, kWz);
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += c.positions[i];
        if (i > 0) CHECK(c.positions[i] > c.positions[i - 1]);
      }
      CHECK(std::abs(sum) <= 1e-10);
      CHECK(c.residual <= 1e-12);
      // complex-step derivative of an independent potential
      double worst = 0.0;
      for (int i = 0; i < n; ++i) {
        std::vector<std::complex<double>> u(c.positions.begin(), c.positions.end());
        u[i] += std::complex<double>(0.0, 1e-20);
        worst = std::max(worst, std::abs(potential(u).imag() / 1e-20));
      }
      CHECK(worst <= 1e-10);
    }
  }

  TEST_CASE("finite-difference gradient at the solution") {
    for (int n : {2, 3, 5, 8}) {
      auto c = equilibrium_positions(n, kCa, kWz);
      // extended precision so the 1e-6 step is not swamped by cancellation
      const long double h = 1e-6L;
      for (int i = 0; i < n; ++i) {
        std::vector<long double> up(c.positions.begin(), c.positions.end()), dn = up;
        up[i] += h;
        dn[i] -= h;
        const long double g = (potential(up) - potential(dn)) / (2 * h);
        CHECK(std::abs(static_cast<double>(g)) <= 1e-10);
      }
      // library gradient agrees with the independent form away from the minimum
      auto z = c.positions;
      for (int i = 0; i < n; ++i) z[i] *= 1.1;
      auto grad = dimensionless_gradient(z);
      for (int i = 0; i < n; ++i) {
        std::vector<std::complex<double>> u(z.begin(), z.end());
        u[i] += std::complex<double>(0.0, 1e-20);
        CHECK(grad[i] == doctest::Approx(potential(u).imag() / 1e-20).epsilon(1e-12));
      }
      CHECK(dimensionless_potential(z) == doctest::Approx(potential(z)).epsilon(1e-14));
    }
  }

  TEST_CASE("spacings") {
    auto c2 = equilibrium_positions(2, kCa, kWz);
    CHECK(c2.min_spacing * 1e6 == doctest::Approx(7.1).epsilon(0.01));
    CHECK(c2.min_spacing_fit * 1e6 == doctest::Approx(7.7).epsilon(0.01));
    for (int n = 3; n <= 10; ++n) {
      auto c = equilibrium_positions(n, kCa, kWz);
      CHECK(std::abs(c.min_spacing_fit - c.min_spacing) / c.min_spacing <= 0.05);
      CHECK(c.positions_m[1] - c.positions_m[0] >= c.min_spacing * (1 - 1e-12));
    }
  }

  TEST_CASE("mode spectrum properties") {
    for (int n = 2; n <= 20; ++n) {
      auto m = normal_modes(equilibrium_positions(n, kCa, kWz), kCa, kWz);
      CHECK(m.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(m.eigenvalues[1] == doctest::Approx(3.0).epsilon(1e-10));
      for (int a = 0; a < n; ++a) {
        const Eigen::VectorXd d = m.eigenvectors.row(a).transpose();
        const double res = (m.couplings * d - m.eigenvalues[a] * d).cwiseAbs().maxCoeff();
        CHECK(res <= 1e-10);
        if (a > 0) {
          CHECK(std::abs(d.sum()) <= 1e-10);
          CHECK(d[n - 1] > 0.0);
          CHECK(m.eigenvalues[a] > m.eigenvalues[a - 1]);
        } else {
          CHECK(d.sum() > 0.0);
        }
        CHECK(m.frequencies[a] == doctest::Approx(kWz * std::sqrt(m.eigenvalues[a])));
        for (int i = 0; i < n; ++i)
          CHECK(m.coupling_factors(a, i) ==
                doctest::Approx(d[i] / std::pow(m.eigenvalues[a], 0.25)));
      }
      // breathing mode amplitudes follow the equilibrium positions
      auto c = equilibrium_positions(n, kCa, kWz);
      Eigen::VectorXd z = Eigen::Map<const Eigen::VectorXd>(c.positions.data(), n);
      z.normalize();
      CHECK((m.eigenvectors.row(1).transpose() - z).cwiseAbs().maxCoeff() <= 1e-9);
    }
  }

  TEST_CASE("coupling matrix is symmetric with the analytic N=2 entries") {
    auto c = equilibrium_positions(2, kCa, kWz);
    auto v = coupling_matrix(c.positions);
    // 1 + 2 / |u1 - u2|^3 on the diagonal, -2 / |u1 - u2|^3 off it; |u1 - u2|^3 = 2
    CHECK(v(0, 0) == doctest::Approx(2.0));
    CHECK(v(0, 1) == doctest::Approx(-1.0));
    CHECK(v(1, 0) == v(0, 1));
  }

  TEST_CASE("Lamb-Dicke parameters") {
    const double hbar = 1.054571817e-34;
    const double m = 39.962590863 * 1.66053906660e-27;
    const double eta1 = kTau / 729e-9 * 0.5 * std::sqrt(hbar / (2 * m * kWz));
    auto one = normal_modes(equilibrium_positions(1, kCa, kWz), kCa, kWz);
    auto e1 = lamb_dicke_parameters(one, laser(), 1);
    CHECK(e1[0] == doctest::Approx(eta1).epsilon(1e-8));
    CHECK(e1[0] == doctest::Approx(0.06).epsilon(0.05));

    auto perp = lamb_dicke_parameters(one, laser(kTau / 4.0), 1);
    CHECK(std::abs(perp[0]) <= 1e-15);

    auto four = normal_modes(equilibrium_positions(4, kCa, kWz), kCa, kWz);
    for (double e : lamb_dicke_parameters(four, laser(), 1))
      CHECK(e == doctest::Approx(eta1 / 2.0).epsilon(1e-10));

    CHECK_THROWS(lamb_dicke_parameters(four, laser(), 0));
    CHECK_THROWS(lamb_dicke_parameters(four, laser(), 5));
  }

  TEST_CASE("csv outputs") {
    auto c = equilibrium_positions(3, kCa, kWz);
    auto m = normal_modes(c, kCa, kWz);
    const std::string modes = modes_to_csv(m, laser());
    CHECK(modes.find("alpha,mu,nu_hz,D_1,D_2,D_3,K_1,K_2,K_3,eta_1,eta_2,eta_3\n") !=
          std::string::npos);
    const std::string pos = chain_to_csv(c);
    CHECK(pos.find("i,Z,z_m\n") != std::string::npos);
  }
}
