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

#include <cmath>
#include <vector>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/trap.hpp"

using namespace iontrap;
using namespace iontrap::trap;

namespace {

// Hand-entered constants, kept separate from the library table on purpose.
constexpr double kE = 1.602176634e-19;
constexpr double kAmu = 1.66053906660e-27;
constexpr double kCaMass = 39.962590863 * kAmu;
constexpr double kTau = 6.283185307179586;

TrapConfig ca_config(double v0 = 500.0) {
  TrapConfig c;
  c.species = IonSpecies::calcium40();
  c.v0 = v0;
  c.rf_omega = kTau * 17e6;
  c.r0 = 1.2e-3;
  c.endcap_distance = 5e-3;
  c.axial_omega_override = kTau * 700e3;
  return c;
}

// V0 giving a chosen b for the Ca config.
double v0_for_b(double b) {
  const TrapConfig c = ca_config();
  return b * kCaMass * c.r0 * c.r0 * c.rf_omega * c.rf_omega / (2.0 * kE);
}

}  // namespace

TEST_SUITE("trap") {
  TEST_CASE("radial secular frequency of the Ca config") {
    const TrapSummary s = trap_characteristics(ca_config());
    const double wr = kE * 500.0 / (std::sqrt(2.0) * kCaMass * 1.2e-3 * 1.2e-3 * kTau * 17e6);
    CHECK(s.omega_r == doctest::Approx(wr).epsilon(1e-9));
    CHECK(s.omega_r / kTau == doctest::Approx(0.883e6).epsilon(0.005));
    CHECK(s.stable);
  }

  TEST_CASE("axial depth near 100 eV") {
    const TrapSummary s = trap_characteristics(ca_config());
    const double w = kTau * 700e3;
    const double vz = 0.5 * kCaMass * w * w * 25e-6 / kE;
    CHECK(s.depth_z_ev == doctest::Approx(vz).epsilon(1e-9));
    CHECK(s.depth_z_ev == doctest::Approx(100.0).epsilon(0.02));
  }

  TEST_CASE("U0 = 0 gives a = 0 and equal radial frequencies") {
    const TrapSummary s = trap_characteristics(ca_config());
    CHECK(s.a == 0.0);
    CHECK(s.omega_x == s.omega_y);
    CHECK(std::abs(s.omega_x - s.omega_r) / s.omega_r <= 1e-12);
  }

  TEST_CASE("depths scale quadratically with frequency") {
    TrapConfig c = ca_config();
    const double v1 = trap_characteristics(c).depth_z_ev;
    c.axial_omega_override = 2.0 * *c.axial_omega_override;
    const double v2 = trap_characteristics(c).depth_z_ev;
    CHECK(v2 / v1 == doctest::Approx(4.0).epsilon(1e-14));
  }

  TEST_CASE("axial frequency from the endcap voltage") {
    TrapConfig c = ca_config();
    const double w = kTau * 700e3;
    c.axial_omega_override.reset();
    c.xi = 0.5;
    c.u12 = w * w * kCaMass * c.endcap_distance * c.endcap_distance / (2.0 * 0.5 * kE);
    CHECK(trap_characteristics(c).omega_z == doctest::Approx(w).epsilon(1e-9));
    c.u12.reset();
    CHECK_THROWS_AS(trap_characteristics(c), std::invalid_argument);
  }

  TEST_CASE("invalid parameters are rejected") {
    TrapConfig c = ca_config();
    c.v0 = 0.0;
    CHECK_THROWS(trap_characteristics(c));
    c = ca_config();
    c.xi = 1.5;
    CHECK_THROWS(trap_characteristics(c));
    c = ca_config();
    c.species.mass_kg = -1.0;
    CHECK_THROWS(trap_characteristics(c));
  }

  TEST_CASE("stability flag") {
    TrapConfig c = ca_config(v0_for_b(0.5));
    CHECK_FALSE(trap_characteristics(c).stable);  // b^2 = 0.25
    c = ca_config(v0_for_b(0.2));
    c.u0 = 1.0;  // a = 2 b U0 / V0
    const TrapSummary s = trap_characteristics(c);
    CHECK(s.a == doctest::Approx(2.0 * s.b * 1.0 / c.v0));
    CHECK(s.stable == (std::abs(s.a) < s.b * s.b / 10.0));
  }

  TEST_CASE("secular trajectory closed form") {
    TrapConfig c = ca_config(v0_for_b(0.1));
    auto tr = secular_trajectory(c, 1e-6, 2e-6, 0.0, 0.0, {0.0});
    CHECK(tr[0].x == doctest::Approx(1e-6 * 1.05));
    CHECK(tr[0].y == doctest::Approx(2e-6 * 0.95));
    TrapConfig bad = ca_config(v0_for_b(0.6));
    CHECK_THROWS_AS(secular_trajectory(bad, 1e-6, 0, 0, 0, {0.0}), PhysicsError);
  }

  TEST_CASE("weak drive approaches pure harmonic motion") {
    TrapConfig c = ca_config(v0_for_b(1e-4));
    const TrapSummary s = trap_characteristics(c);
    std::vector<double> t;
    for (int i = 0; i < 50; ++i) t.push_back(i * 1e-7);
    double dev = 0.0;
    for (const auto& p : secular_trajectory(c, 1.0, 1.0, 0.3, 0.0, t))
      dev = std::max(dev, std::abs(p.x - std::cos(s.omega_x * p.t + 0.3)));
    CHECK(dev <= 1e-4);
  }

  TEST_CASE("secular form follows the Mathieu integration") {
    for (double b : {0.05, 0.1, 0.2}) {
      TrapConfig c = ca_config(v0_for_b(b));
      const TrapSummary s = trap_characteristics(c);
      const double x0 = 1e-6;
      const double t_end = 10.0 * kTau / s.omega_x;
      const double h = kTau / c.rf_omega / 100.0;
      auto num = mathieu_integrate(c, {x0 * (1 + b / 2), 0, 0, 0, 0, 0}, 0.0, t_end, h);
      std::vector<double> grid;
      for (const auto& p : num) grid.push_back(p.t);
      auto ana = secular_trajectory(c, x0, 0.0, 0.0, 0.0, grid);
      double ss = 0.0;
      for (size_t i = 0; i < num.size(); ++i) ss += std::pow(num[i].s[0] - ana[i].x, 2);
      // relative to the peak excursion x0 (1 + b/2)
      const double rms = std::sqrt(ss / num.size()) / (x0 * (1 + b / 2));
      CAPTURE(b);
      CHECK(rms <= b);
      // the deviation is dominated by the O(b^3) frequency error, so it scales as b^2
      CHECK(rms >= 2.0 * b * b);
    }
  }

  TEST_CASE("Mathieu integration basics") {
    TrapConfig c = ca_config();
    c.v0 = 0.0;
    auto free = mathieu_integrate(c, {1e-6, 0, 0, 2.0, -1.0, 0.5}, 0.0, 1e-6, 1e-9);
    const auto& end = free.back();
    CHECK(end.t == doctest::Approx(1e-6));
    CHECK(end.s[0] == doctest::Approx(1e-6 + 2e-6));
    CHECK(end.s[1] == doctest::Approx(-1e-6));
    CHECK(end.s[2] == doctest::Approx(0.5e-6));

    const double trf = kTau / ca_config().rf_omega;
    CHECK_THROWS(mathieu_integrate(ca_config(), {}, 0.0, 1e-6, trf / 40.0));

    // a = 0, b = 0.1: bounded over 100 rf periods
    TrapConfig st = ca_config(v0_for_b(0.1));
    auto tr = mathieu_integrate(st, {1e-6, 1e-6, 0, 0, 0, 0}, 0.0, 100 * trf, trf / 100);
    double peak = 0.0;
    for (const auto& p : tr) peak = std::max({peak, std::abs(p.s[0]), std::abs(p.s[1])});
    CHECK(peak <= 1.2e-6);

    // a = 0.3, b = 0.1: the y motion grows exponentially
    TrapConfig un = ca_config(v0_for_b(0.1));
    un.u0 = 0.3 / 0.1 * un.v0 / 2.0;
    CHECK(trap_characteristics(un).a == doctest::Approx(0.3));
    auto g = mathieu_integrate(un, {1e-9, 1e-9, 0, 0, 0, 0}, 0.0, 20 * trf, trf / 100);
    // Floquet estimate from the growth of log|y| over the second half
    const size_t mid = g.size() / 2;
    const double rate = (std::log(std::abs(g.back().s[1])) - std::log(std::abs(g[mid].s[1]))) /
                        (g.back().t - g[mid].t);
    CHECK(rate > 0.1 * un.rf_omega);
    CHECK(std::abs(g.back().s[1]) > 1e3 * 1e-9);
  }

  TEST_CASE("zig-zag criterion") {
    CHECK(linear_stability(10, 1.0, 10.0).alpha_crit == doctest::Approx(0.0478).epsilon(2e-3));
    auto two = linear_stability(2, kTau * 700e3, kTau * 2e6);
    CHECK(two.alpha_crit == doctest::Approx(3.23 * std::pow(2.0, -1.83)));
    CHECK(two.alpha_crit == doctest::Approx(0.909).epsilon(1e-3));
    CHECK(two.is_linear);
    const double ac = linear_stability(5, 1.0, 1.0).alpha_crit;
    CHECK(linear_stability(5, std::sqrt(ac) * 0.999, 1.0).is_linear);
    CHECK_FALSE(linear_stability(5, std::sqrt(ac) * 1.001, 1.0).is_linear);
    CHECK_THROWS(linear_stability(1, 1.0, 1.0));
  }

  TEST_CASE("config file") {
    const char* text =
        "# Ca trap\n"
        "mass_amu = 39.962590863\n"
        "charge_e = 1\n"
        "v0_v = 500\n"
        "rf_hz = 17e6\n"
        "r0_m = 1.2e-3\n"
        "endcap_m = 5e-3\n"
        "omega_z_hz = 700e3  # override\n";
    TrapConfig c = parse_trap_config(text);
    CHECK(c.v0 == 500.0);
    CHECK(c.rf_omega == doctest::Approx(kTau * 17e6));
    CHECK(*c.axial_omega_override == doctest::Approx(kTau * 700e3));
    CHECK(trap_characteristics(c).omega_r / kTau == doctest::Approx(0.883e6).epsilon(0.005));

    try {
      parse_trap_config("v0_v = 1\nbogus = 2\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_trap_config("v0_v = 1\nv0_v = 2\n"), ParseError);
    CHECK_THROWS_AS(parse_trap_config("v0_v = abc\n"), ParseError);
    CHECK_THROWS_AS(parse_trap_config("v0_v 1\n"), ParseError);
    CHECK_THROWS_AS(parse_trap_config("v0_v = 1\n"), ParseError);  // missing keys
  }
}
