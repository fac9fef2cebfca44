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

// Gate-to-pulse compilation and schedule simulation.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iontrap/interaction.hpp"
#include "iontrap/statespace.hpp"

namespace iontrap::gates {

using interaction::CouplingContext;
using interaction::Pulse;
using interaction::Regime;
using interaction::Transition;

// Ion indices are 0-based.
struct GateSpec {
  enum class Kind {
    kRotation,
    kCnot,
    kMultiCnot,
    kControlledR,
    kReducedControlledR,
    kMonroe,
  };
  Kind kind = Kind::kRotation;
  std::vector<int> controls;
  int target = 0;
  double theta = 0.0;
  double phi = 0.0;
  int p = 1;  // Monroe order

  static GateSpec rotation(int ion, double theta, double phi);
  static GateSpec cnot(int control, int target);
  static GateSpec multi_cnot(std::vector<int> controls, int target);
  static GateSpec controlled_r(std::vector<int> controls, int target, double theta,
                               double phi);
  static GateSpec reduced_controlled_r(std::vector<int> controls, int target,
                                       double theta);
  // Without a control ion the bus phonon acts as the control qubit.
  static GateSpec monroe(int target, int p, std::optional<int> control = std::nullopt,
                         double phi = 0.0);

  std::vector<int> ions() const;
  void validate() const;
};

struct LedgerEntry {
  int pulse_index;
  int k;
  Transition transition;
  double phase_tilde;   // phase in the rotation convention
  double laser_phase;   // after compensating the coupling phase
};

struct ScheduledPulse {
  Pulse pulse;
  double start = 0.0;
  double duration = 0.0;
};

struct PulseSchedule {
  std::vector<ScheduledPulse> pulses;
  std::map<int, std::vector<LedgerEntry>> ledger;
  double total_time = 0.0;
  int bus_mode = 1;
  std::vector<std::string> warnings;

  std::vector<Pulse> pulse_list() const;
};

struct CompileOptions {
  Regime regime = Regime::kIdealLD;
  int bus_mode = 1;
  int n_ref = 1;  // phonon number used for validity margins
};

// Rotation R(theta, phi) = [[cos t/2, e^{i phi} sin t/2], [-e^{-i phi} sin t/2, cos t/2]].
Eigen::Matrix2cd rotation_matrix(double theta, double phi);

PulseSchedule compile(const std::vector<GateSpec>& circuit, const CouplingContext& ctx,
                      const CompileOptions& options = {});

// Rebuilds durations and the ledger from bare pulses, e.g. after parsing.
PulseSchedule schedule_from_pulses(const std::vector<Pulse>& pulses,
                                   const CouplingContext& ctx, int bus_mode = 1);

struct SimulationResult {
  QuantumState state;
  std::vector<std::string> warnings;
};

// Applies pulses in order. A regime override replaces every pulse's regime.
SimulationResult simulate_schedule(const PulseSchedule& schedule, const CouplingContext& ctx,
                                   const QuantumState& initial,
                                   std::optional<Regime> regime = std::nullopt);

struct TruthRow {
  std::string input;
  std::string output;      // dominant basis label
  cplx amplitude;          // on the dominant label
  double leakage = 0.0;    // outside ions in {g,e} with the input bus number
  QuantumState final_state;
};

struct TruthTableOptions {
  std::vector<int> bus_inputs = {0};
  int n_max = 4;
  std::optional<Regime> regime;
};

// Every {g,e} assignment of `qubits` (other ions held in g) for each bus input.
std::vector<TruthRow> truth_table(const PulseSchedule& schedule, const CouplingContext& ctx,
                                  const std::vector<int>& qubits,
                                  const TruthTableOptions& options = {});

std::string truth_table_to_csv(const std::vector<TruthRow>& rows);
std::string schedule_report_json(const PulseSchedule& schedule, std::uint64_t seed);

// Circuit text, 1-based ions: rot, cnot, ccnot, ncnot, crot, rcrot, monroe.
std::vector<GateSpec> parse_circuit(const std::string& text);
// Angles: plain numbers or forms such as pi, -pi/2, 3pi/4, 0.5*pi.
std::optional<double> parse_angle(const std::string& s);

int circuit_ion_count(const std::vector<GateSpec>& circuit);

}  // namespace iontrap::gates
