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

#include "iontrap/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iontrap/budget.hpp"
#include "iontrap/chain.hpp"
#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/gates.hpp"
#include "iontrap/interaction.hpp"
#include "iontrap/io.hpp"
#include "iontrap/statespace.hpp"
#include "iontrap/trap.hpp"

namespace iontrap::cli {

namespace {

namespace fs = std::filesystem;
using constants::kTwoPi;

struct Options {
  std::string out_dir = ".";
  std::string stem;
  std::uint64_t seed = 0;

  // species and trap
  std::string config;
  double mass_amu = constants::kCalcium40Amu;
  int charge = 1;
  double omega_z_hz = 700e3;

  // chain and laser
  int ions = 0;
  int mode = 1;
  double wavelength = 729e-9;
  double angle = constants::kPi / 3.0;
  double lambda_hz = 50e3;
  double lambda_gr_hz = -1.0;
  std::optional<double> eta;

  // compile / run
  std::string circuit;
  std::string pulses;
  std::string regime = "ld";
  std::string initial;
  std::string initial_state;
  int bus = 0;
  int n_max = kDefaultFockCutoff;
  std::vector<int> truth_qubits;
  bool measure = false;

  // estimate
  double nu_hz = 700e3;
  double n_phonon = 0.0;
  int gate_ions = 2;
  double fidelity = 0.99;
  double t_a_us = 5.0;
  double gamma_hz = 20e6;
  std::optional<double> doppler_detuning_hz;
  double sideband_gamma_hz = 70e3;  // effective width of the cooling sideband
  double pattern = 0.4;
  double eit_delta_hz = 0.0;
  double eit_omega_hz = 0.0;
  std::vector<std::string> spectators;
  bool table = false;

  // spectrum
  std::vector<double> etas = {0.1};
  std::vector<double> nbar = {0.0};
  int spectrum_ions = 1;
  double span = 4.0;  // in units of nu
  int points = 2001;
  double linewidth = 0.02;  // in units of nu
  int phonon_cutoff = 60;
};

std::string output_path(const Options& o, const std::string& fallback_stem,
                        const std::string& suffix) {
  std::error_code ec;
  fs::create_directories(o.out_dir, ec);
  if (ec) throw IoError("cannot create output directory '" + o.out_dir + "'");
  const std::string stem = o.stem.empty() ? fallback_stem : o.stem;
  return (fs::path(o.out_dir) / (stem + suffix)).string();
}

std::string file_stem(const std::string& path, const std::string& fallback) {
  if (path.empty()) return fallback;
  return fs::path(path).stem().string();
}

trap::IonSpecies species(const Options& o) {
  return trap::IonSpecies::from_amu(o.mass_amu, o.charge);
}

double axial_omega(const Options& o) {
  if (!o.config.empty()) {
    trap::TrapConfig cfg = trap::load_trap_config(o.config);
    return trap::trap_characteristics(cfg).omega_z;
  }
  return kTwoPi * o.omega_z_hz;
}

chain::LaserConfig laser(const Options& o) {
  chain::LaserConfig l;
  l.wavelength = o.wavelength;
  l.angle = o.angle;
  l.coupling = kTwoPi * o.lambda_hz;
  return l;
}

interaction::CouplingContext context(const Options& o, int n_ions) {
  const auto sp = species(o);
  const double wz = axial_omega(o);
  auto ch = chain::equilibrium_positions(n_ions, sp, wz);
  auto modes = chain::normal_modes(ch, sp, wz);
  const double gr = o.lambda_gr_hz < 0.0 ? -1.0 : kTwoPi * o.lambda_gr_hz;
  auto ctx = interaction::make_context(ch, modes, laser(o), o.mode, gr);
  if (o.eta) ctx.eta.assign(n_ions, *o.eta);
  return ctx;
}

std::string with_seed_header(const std::string& csv, std::uint64_t seed) {
  return "# seed=" + std::to_string(seed) + "\n" + csv;
}

int cmd_trap(const Options& o) {
  trap::TrapConfig cfg = trap::load_trap_config(o.config);
  trap::TrapSummary s = trap::trap_characteristics(cfg);
  auto j = nlohmann::ordered_json::parse(trap::summary_to_json(s));
  j["seed"] = o.seed;
  if (o.ions >= 2 && s.omega_r > 0.0) {
    auto ls = trap::linear_stability(o.ions, s.omega_z, s.omega_r);
    j["zigzag"] = {{"n_ions", o.ions}, {"alpha_crit", ls.alpha_crit}, {"is_linear", ls.is_linear}};
  }
  io::write_file(output_path(o, file_stem(o.config, "trap"), ".report.json"), j.dump(2) + "\n");
  if (!s.stable) std::cerr << "warning: trap parameters outside the |a| << b^2 << 1 regime\n";
  return kExitOk;
}

int cmd_chain(const Options& o, bool modes) {
  if (o.ions < 1) throw std::invalid_argument("--ions must be >= 1");
  const auto sp = species(o);
  const double wz = axial_omega(o);
  auto ch = chain::equilibrium_positions(o.ions, sp, wz);
  if (!modes) {
    io::write_file(output_path(o, "chain", ".chain.csv"),
                   with_seed_header(chain::chain_to_csv(ch), o.seed));
    return kExitOk;
  }
  auto spec = chain::normal_modes(ch, sp, wz);
  io::write_file(output_path(o, "modes", ".modes.csv"),
                 with_seed_header(chain::modes_to_csv(spec, laser(o)), o.seed));
  return kExitOk;
}

int ion_count(const Options& o, int needed) {
  int n = o.ions > 0 ? o.ions : std::max(1, needed);
  if (n < needed)
    throw std::invalid_argument("--ions " + std::to_string(n) + " is smaller than the " +
                                std::to_string(needed) + " ions the program uses");
  return n;
}

int cmd_compile(const Options& o) {
  auto circuit = gates::parse_circuit(io::read_file(o.circuit));
  const int n = ion_count(o, gates::circuit_ion_count(circuit));
  auto ctx = context(o, n);
  gates::CompileOptions co;
  co.regime = interaction::parse_regime(o.regime);
  co.bus_mode = o.mode;
  auto sched = gates::compile(circuit, ctx, co);
  const std::string stem = file_stem(o.circuit, "circuit");
  io::write_file(output_path(o, stem, ".pulses"),
                 "# seed=" + std::to_string(o.seed) + "\n" +
                     interaction::format_pulse_program(sched.pulse_list()));
  io::write_file(output_path(o, stem, ".report.json"),
                 gates::schedule_report_json(sched, o.seed) + "\n");
  for (const auto& w : sched.warnings) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_run(const Options& o) {
  if (!o.circuit.empty() && !o.pulses.empty())
    throw std::invalid_argument("give either --circuit or --pulses, not both");
  std::vector<gates::GateSpec> circuit;
  std::vector<interaction::Pulse> pulses;
  int needed = 0;
  std::string src = o.circuit.empty() ? o.pulses : o.circuit;
  if (!o.circuit.empty()) {
    circuit = gates::parse_circuit(io::read_file(o.circuit));
    needed = gates::circuit_ion_count(circuit);
  } else if (!o.pulses.empty()) {
    pulses = interaction::parse_pulse_program(io::read_file(o.pulses));
    for (const auto& p : pulses) needed = std::max(needed, p.ion + 1);
  }

  std::optional<QuantumState> init;
  if (!o.initial_state.empty()) {
    init = state_from_csv(io::read_file(o.initial_state));
    needed = std::max(needed, init->n_ions());
  } else if (!o.initial.empty()) {
    needed = std::max(needed, static_cast<int>(o.initial.size()));
  }
  const int n = ion_count(o, needed);
  auto ctx = context(o, n);

  gates::PulseSchedule sched;
  if (!o.circuit.empty()) {
    gates::CompileOptions co;
    co.regime = interaction::parse_regime(o.regime);
    co.bus_mode = o.mode;
    sched = gates::compile(circuit, ctx, co);
  } else {
    sched = gates::schedule_from_pulses(pulses, ctx, o.mode);
  }

  if (!init) {
    std::vector<Level> levels(n, Level::kG);
    if (!o.initial.empty()) {
      if (static_cast<int>(o.initial.size()) != n)
        throw std::invalid_argument("--initial needs one level per ion");
      levels = parse_levels(o.initial);
    }
    init = basis_state(levels, o.bus, o.n_max);
  }
  if (init->n_ions() != n) throw std::invalid_argument("initial state ion count mismatch");

  auto sim = gates::simulate_schedule(sched, ctx, *init);
  const std::string stem = file_stem(src, "run");

  std::vector<int> qubits;
  for (int q : o.truth_qubits) qubits.push_back(q - 1);
  if (qubits.empty())
    for (int i = 0; i < n; ++i) qubits.push_back(i);
  gates::TruthTableOptions to;
  to.n_max = std::min(o.n_max, 4);
  auto rows = gates::truth_table(sched, ctx, qubits, to);

  nlohmann::ordered_json j;
  j["seed"] = o.seed;
  j["n_ions"] = n;
  j["n_max"] = init->n_max();
  j["n_pulses"] = sched.pulses.size();
  j["total_time_s"] = sched.total_time;
  double max_leak = 0.0;
  for (const auto& r : rows) max_leak = std::max(max_leak, r.leakage);
  j["truth_table_max_leakage"] = max_leak;
  std::vector<std::string> warnings = sched.warnings;
  warnings.insert(warnings.end(), sim.warnings.begin(), sim.warnings.end());
  j["warnings"] = warnings;

  if (o.measure) {
    Rng rng(o.seed);
    QuantumState s = sim.state;
    auto& arr = j["measurements"] = nlohmann::ordered_json::array();
    for (int ion = 0; ion < n; ++ion) {
      auto m = measure_internal(s, ion, rng);
      arr.push_back({{"ion", ion + 1}, {"bright", m.bright}, {"photon_count", m.photon_count}});
      s = std::move(m.collapsed);
    }
  }

  io::write_file(output_path(o, stem, ".state.csv"), state_to_csv(sim.state, o.seed));
  io::write_file(output_path(o, stem, ".truth.csv"),
                 with_seed_header(gates::truth_table_to_csv(rows), o.seed));
  io::write_file(output_path(o, stem, ".report.json"), j.dump(2) + "\n");
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return kExitOk;
}

int cmd_estimate(const Options& o) {
  const double eta = o.eta.value_or(0.06);
  budget::BudgetReport r;
  r.offres = budget::offres_report(kTwoPi * o.lambda_hz, eta, o.n_phonon, kTwoPi * o.nu_hz);
  budget::TimingParams tp;
  tp.n_ions = o.ions > 0 ? o.ions : 2;
  tp.gate_ions = o.gate_ions;
  tp.fidelity = o.fidelity;
  tp.wavelength = o.wavelength;
  tp.angle = o.angle;
  tp.omega_z = axial_omega(o);
  tp.species = species(o);
  tp.t_a = o.t_a_us * 1e-6;
  r.timing = budget::timing_report(tp);
  r.t_a = tp.t_a;

  budget::CoolingParams cp;
  cp.linewidth = kTwoPi * o.gamma_hz;
  cp.omega_z = tp.omega_z;
  cp.detuning = kTwoPi * o.doppler_detuning_hz.value_or(o.gamma_hz);
  cp.pattern = o.pattern;
  auto cooling = budget::cooling_limits(cp);
  // sideband limit uses the narrow effective linewidth, not the Doppler one
  cp.linewidth = cp.detuning = kTwoPi * o.sideband_gamma_hz;
  cooling.sideband = budget::cooling_limits(cp).sideband;

  std::vector<budget::Spectator> specs;
  for (const auto& s : o.spectators) {
    auto colon = s.find(':');
    auto e = io::parse_double(s.substr(0, colon));
    auto m = colon == std::string::npos ? std::nullopt : io::parse_double(s.substr(colon + 1));
    if (!e || !m) throw ParseError("spectator must be written eta:mean_n, got '" + s + "'", 0, 0);
    specs.push_back({*e, *m});
  }
  auto eit = budget::eit_estimates(kTwoPi * o.eit_delta_hz, kTwoPi * o.eit_omega_hz, specs);

  io::write_file(output_path(o, "estimate", ".report.json"),
                 budget::report_to_json(r, &cooling, &eit, o.seed) + "\n");
  if (o.table)
    io::write_file(output_path(o, "estimate", ".table.csv"),
                   budget::table_to_csv(budget::gate_time_table(tp), o.seed));
  return kExitOk;
}

int cmd_spectrum(const Options& o) {
  std::vector<double> freqs = {1.0};
  if (o.spectrum_ions == 2) freqs = {1.0, std::sqrt(3.0)};
  else if (o.spectrum_ions != 1) throw std::invalid_argument("--ions must be 1 or 2 for spectrum");
  const size_t modes = freqs.size();
  auto pick = [&](const std::vector<double>& v, size_t i, const char* name) {
    if (v.size() == 1) return v[0];
    if (v.size() != modes)
      throw std::invalid_argument(std::string("--") + name + " needs 1 or " +
                                  std::to_string(modes) + " values");
    return v[i];
  };
  std::vector<interaction::ModeDistribution> md;
  for (size_t i = 0; i < modes; ++i)
    md.push_back({interaction::thermal_distribution(pick(o.nbar, i, "nbar"), o.phonon_cutoff),
                  pick(o.etas, i, "eta"), freqs[i]});
  if (o.points < 2) throw std::invalid_argument("--points must be >= 2");
  std::vector<double> grid;
  for (int i = 0; i < o.points; ++i)
    grid.push_back(-o.span + 2.0 * o.span * i / (o.points - 1));
  auto s = interaction::absorption_spectrum(md, grid, o.linewidth);

  std::ostringstream out;
  out << "# seed=" << o.seed << " units: delta in multiples of the axial frequency\n";
  out << "delta,intensity\n";
  for (size_t i = 0; i < grid.size(); ++i)
    out << io::format_double(grid[i]) << ',' << io::format_double(s.intensity[i]) << '\n';
  io::write_file(output_path(o, "spectrum", ".spectrum.csv"), out.str());

  std::ostringstream lines;
  lines << "# seed=" << o.seed << '\n' << "delta,weight\n";
  for (const auto& l : s.lines)
    if (l.weight > 1e-12)
      lines << io::format_double(l.delta) << ',' << io::format_double(l.weight) << '\n';
  io::write_file(output_path(o, "spectrum", ".lines.csv"), lines.str());
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  Options o;
  CLI::App app{
      "Pulse-level simulator and compiler for a linear ion-trap processor.\n"
      "Angles are radians, frequencies are Hz (converted to angular internally)."};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto common = [&](CLI::App* c) {
    c->add_option("--out", o.out_dir, "Output directory");
    c->add_option("--stem", o.stem, "Output file stem");
    c->add_option("--seed", o.seed, "64-bit seed recorded in every output");
  };
  auto species_opts = [&](CLI::App* c) {
    c->add_option("--config", o.config, "Trap config file (key=value); sets omega_z");
    c->add_option("--mass-amu", o.mass_amu, "Ion mass in u");
    c->add_option("--charge", o.charge, "Ion charge in e");
    c->add_option("--omega-z-hz", o.omega_z_hz, "Axial frequency omega_z/2pi in Hz");
  };
  auto laser_opts = [&](CLI::App* c) {
    c->add_option("--wavelength-m", o.wavelength, "Laser wavelength in m");
    c->add_option("--angle-rad", o.angle, "Beam angle to the trap axis in rad");
  };
  auto context_opts = [&](CLI::App* c) {
    species_opts(c);
    laser_opts(c);
    c->add_option("--ions", o.ions, "Number of ions (default: from the program)");
    c->add_option("--mode", o.mode, "Bus mode index (1 = centre of mass)");
    c->add_option("--lambda-hz", o.lambda_hz, "Coupling |lambda|/2pi on g-e in Hz");
    c->add_option("--lambda-gr-hz", o.lambda_gr_hz, "Coupling on g-r in Hz (default: same)");
    c->add_option("--eta", o.eta, "Override the Lamb-Dicke parameter of every ion");
    c->add_option("--regime", o.regime, "ld | exact | full")
        ->check(CLI::IsMember({"ld", "exact", "full"}));
  };

  auto* trap_cmd = app.add_subcommand("trap", "Trap stability, secular frequencies and depths");
  common(trap_cmd);
  trap_cmd->add_option("--config", o.config, "Trap config file")->required();
  trap_cmd->add_option("--ions", o.ions, "Also report the zig-zag criterion for N ions");

  auto* chain_cmd = app.add_subcommand("chain", "Equilibrium positions of the ion string");
  common(chain_cmd);
  species_opts(chain_cmd);
  chain_cmd->add_option("--ions", o.ions, "Number of ions")->required();

  auto* modes_cmd = app.add_subcommand("modes", "Axial normal modes and Lamb-Dicke parameters");
  common(modes_cmd);
  species_opts(modes_cmd);
  laser_opts(modes_cmd);
  modes_cmd->add_option("--ions", o.ions, "Number of ions")->required();

  auto* compile_cmd = app.add_subcommand("compile", "Compile a circuit to a pulse program");
  common(compile_cmd);
  context_opts(compile_cmd);
  compile_cmd->add_option("--circuit", o.circuit, "Circuit file")->required();

  auto* run_cmd = app.add_subcommand("run", "Simulate a circuit or pulse program");
  common(run_cmd);
  context_opts(run_cmd);
  run_cmd->add_option("--circuit", o.circuit, "Circuit file");
  run_cmd->add_option("--pulses", o.pulses, "Pulse program file");
  run_cmd->add_option("--initial", o.initial, "Initial internal levels, e.g. eg");
  run_cmd->add_option("--initial-state", o.initial_state, "Initial state CSV");
  run_cmd->add_option("--bus", o.bus, "Initial bus phonon number");
  run_cmd->add_option("--n-max", o.n_max, "Fock cutoff");
  run_cmd->add_option("--truth", o.truth_qubits, "Truth-table qubits (1-based)")->delimiter(',');
  run_cmd->add_flag("--measure", o.measure, "Read out every ion with the shelving model");

  auto* est_cmd = app.add_subcommand("estimate", "Error, cooling and timing budget");
  common(est_cmd);
  species_opts(est_cmd);
  laser_opts(est_cmd);
  est_cmd->add_option("--lambda-hz", o.lambda_hz, "Coupling |lambda|/2pi in Hz");
  est_cmd->add_option("--nu-hz", o.nu_hz, "Bus mode frequency nu/2pi in Hz");
  est_cmd->add_option("--eta", o.eta, "Lamb-Dicke parameter (default 0.06)");
  est_cmd->add_option("--n", o.n_phonon, "Bus phonon number");
  est_cmd->add_option("--ions", o.ions, "Ions in the trap N (default 2)");
  est_cmd->add_option("--gate-ions", o.gate_ions, "Ions in the gate Q");
  est_cmd->add_option("--fidelity", o.fidelity, "Target fidelity F");
  est_cmd->add_option("--ta-us", o.t_a_us, "Carrier pulse time T_A in us");
  est_cmd->add_option("--gamma-hz", o.gamma_hz, "Cooling transition linewidth Gamma/2pi in Hz");
  est_cmd->add_option("--doppler-detuning-hz", o.doppler_detuning_hz,
                      "Doppler detuning delta/2pi in Hz (default Gamma)");
  est_cmd->add_option("--sideband-gamma-hz", o.sideband_gamma_hz,
                      "Effective linewidth of the sideband-cooling transition in Hz");
  est_cmd->add_option("--pattern", o.pattern, "Emission pattern factor alpha");
  est_cmd->add_option("--eit-delta-hz", o.eit_delta_hz, "EIT coupling detuning in Hz");
  est_cmd->add_option("--eit-omega-hz", o.eit_omega_hz, "EIT coupling Rabi frequency in Hz");
  est_cmd->add_option("--spectator", o.spectators, "Spectator mode eta:mean_n (repeatable)");
  est_cmd->add_flag("--table", o.table, "Also write the gate-time table CSV");

  auto* spec_cmd = app.add_subcommand("spectrum", "Absorption spectrum of one or two ions");
  common(spec_cmd);
  spec_cmd->add_option("--ions", o.spectrum_ions, "1 or 2 ions");
  spec_cmd->add_option("--eta", o.etas, "Lamb-Dicke parameter per mode")->delimiter(',');
  spec_cmd->add_option("--nbar", o.nbar, "Thermal occupation per mode")->delimiter(',');
  spec_cmd->add_option("--span", o.span, "Half-width of the detuning grid in units of nu");
  spec_cmd->add_option("--points", o.points, "Grid points");
  spec_cmd->add_option("--linewidth", o.linewidth, "Display linewidth in units of nu");
  spec_cmd->add_option("--phonon-cutoff", o.phonon_cutoff, "Largest initial phonon number");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, std::cout, std::cerr);
      return kExitOk;
    }
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  }

  try {
    if (*trap_cmd) return cmd_trap(o);
    if (*chain_cmd) return cmd_chain(o, false);
    if (*modes_cmd) return cmd_chain(o, true);
    if (*compile_cmd) return cmd_compile(o);
    if (*run_cmd) return cmd_run(o);
    if (*est_cmd) return cmd_estimate(o);
    if (*spec_cmd) return cmd_spectrum(o);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const PhysicsError& e) {
    std::cerr << "physics error: " << e.what() << '\n';
    return kExitPhysics;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitParse;
}

}  // namespace iontrap::cli
