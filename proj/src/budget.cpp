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

#include "iontrap/budget.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/interaction.hpp"
#include "iontrap/io.hpp"

namespace iontrap::budget {

using constants::kTwoPi;

CoolingLimits cooling_limits(const CoolingParams& p) {
  if (!(p.linewidth > 0.0) || !(p.omega_z > 0.0))
    throw std::invalid_argument("linewidth and omega_z must be positive");
  if (!(p.detuning > 0.0)) throw std::invalid_argument("Doppler detuning must be positive");
  const double g = p.linewidth / p.omega_z;
  CoolingLimits c;
  const double r = p.linewidth / p.detuning + p.detuning / p.linewidth;
  c.doppler = g * (1.0 + p.pattern) / 4.0 * r - 0.5;
  c.doppler_optimal = g * (1.0 + p.pattern) / 2.0 - 0.5;
  c.doppler_rule = 0.7 * g;
  c.sideband = g * g * (p.pattern + 0.5);
  return c;
}

EitEstimate eit_estimates(double delta_r, double omega_r,
                          const std::vector<Spectator>& spectators) {
  EitEstimate e;
  e.stark_shift = (std::sqrt(delta_r * delta_r + omega_r * omega_r) - std::abs(delta_r)) / 2.0;
  double s = 0.0;
  for (const auto& sp : spectators) {
    const double e2 = sp.eta * sp.eta;
    s += e2 * e2 * sp.mean_n * (sp.mean_n + 1.0);
  }
  e.rabi_fluctuation = std::sqrt(s);
  return e;
}

OffResonantReport offres_report(double lambda, double eta, double n, double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (n < 0.0) throw std::invalid_argument("n must be >= 0");
  lambda = std::abs(lambda);
  OffResonantReport r;
  const double x = lambda / nu;
  r.margin_carrier = x;
  r.margin_blue = x * eta * std::sqrt(n + 1.0);
  r.margin_red = x * eta * std::sqrt(n);
  r.p_carrier = std::min(1.0, x * x);
  r.p_blue = std::min(1.0, r.margin_blue * r.margin_blue);
  r.p_red = std::min(1.0, r.margin_red * r.margin_red);
  r.stark_shift = lambda * lambda / (2.0 * nu);
  r.lamb_dicke_margin = eta * std::sqrt(n + 0.5);
  return r;
}

double offres_probability(double peak, double nu, double t) {
  const double s = std::sin(nu * t / 2.0);
  return peak * s * s;
}

TimingReport timing_report(const TimingParams& p) {
  if (!(p.fidelity > 0.0 && p.fidelity < 1.0))
    throw std::invalid_argument("fidelity must lie in (0, 1)");
  if (p.gate_ions < 1 || p.gate_ions > p.n_ions)
    throw std::invalid_argument("need 1 <= Q <= N");
  if (!(p.omega_z > 0.0) || !(p.wavelength > 0.0))
    throw std::invalid_argument("omega_z and wavelength must be positive");
  p.species.validate();
  TimingReport r;
  const double kappa = kTwoPi / p.wavelength * std::cos(p.angle);
  r.recoil_energy = constants::kHbar * constants::kHbar * kappa * kappa / (2.0 * p.species.mass_kg);
  r.recoil_hz = r.recoil_energy / constants::kPlanck;
  r.eta = std::sqrt(r.recoil_energy / (constants::kHbar * p.omega_z));
  const double eps = std::sqrt(1.0 - p.fidelity);
  const double rate =
      2.0 * std::sqrt(2.0) * eps * std::sqrt(r.recoil_hz / p.n_ions * p.omega_z / kTwoPi);
  r.t_b = 1.0 / rate;
  r.t_total = 2.0 * (p.t_a + p.gate_ions * r.t_b);
  return r;
}

std::vector<TableRow> gate_time_table(const TimingParams& base) {
  std::vector<TableRow> rows;
  for (int n : {2, 3, 6, 9, 10}) {
    TimingParams p = base;
    p.n_ions = n;
    p.gate_ions = n;
    p.fidelity = 0.99;
    TimingReport a = timing_report(p);
    p.fidelity = 0.75;
    TimingReport b = timing_report(p);
    rows.push_back({n, a.t_b, b.t_b, a.t_total, b.t_total});
  }
  return rows;
}

std::string table_to_csv(const std::vector<TableRow>& rows, std::uint64_t seed) {
  std::ostringstream out;
  out << "# seed=" << seed << '\n';
  out << "N,T_B_us_F99,T_B_us_F75,T_ms_F99,T_ms_F75\n";
  for (const auto& r : rows)
    out << r.n_ions << ',' << io::format_double(r.t_b_99 * 1e6) << ','
        << io::format_double(r.t_b_75 * 1e6) << ',' << io::format_double(r.t_99 * 1e3) << ','
        << io::format_double(r.t_75 * 1e3) << '\n';
  return out.str();
}

double lamb_dicke_remainder(double eta, int n, int k) {
  const cplx exact = interaction::rabi_frequency(cplx(1.0, 0.0), eta, n, k);
  const cplx ld = interaction::rabi_frequency_ld(cplx(1.0, 0.0), eta, n, k);
  return std::abs(exact - ld) / std::abs(ld);
}

double lamb_dicke_bound(double eta, int n, int k) {
  return eta * eta * (0.5 + static_cast<double>(n) / (std::abs(k) + 1.0));
}

std::string report_to_json(const BudgetReport& r, const CoolingLimits* cooling,
                           const EitEstimate* eit, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  auto& o = j["offresonant"];
  o["p_blue"] = r.offres.p_blue;
  o["p_red"] = r.offres.p_red;
  o["p_carrier"] = r.offres.p_carrier;
  o["margin_blue"] = r.offres.margin_blue;
  o["margin_red"] = r.offres.margin_red;
  o["margin_carrier"] = r.offres.margin_carrier;
  o["stark_shift_hz"] = r.offres.stark_shift / kTwoPi;
  o["lamb_dicke_margin"] = r.offres.lamb_dicke_margin;
  auto& t = j["timing"];
  t["recoil_energy_j"] = r.timing.recoil_energy;
  t["recoil_hz"] = r.timing.recoil_hz;
  t["eta"] = r.timing.eta;
  t["t_a_s"] = r.t_a;
  t["t_b_s"] = r.timing.t_b;
  t["t_total_s"] = r.timing.t_total;
  if (cooling) {
    auto& c = j["cooling"];
    c["doppler_n"] = cooling->doppler;
    c["doppler_optimal_n"] = cooling->doppler_optimal;
    c["doppler_rule_n"] = cooling->doppler_rule;
    c["sideband_n"] = cooling->sideband;
  }
  if (eit) {
    auto& e = j["eit"];
    e["stark_shift_hz"] = eit->stark_shift / kTwoPi;
    e["rabi_fluctuation"] = eit->rabi_fluctuation;
  }
  return j.dump(2);
}

}  // namespace iontrap::budget
