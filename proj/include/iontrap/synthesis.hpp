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

// State-preparation networks.

#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "iontrap/gates.hpp"

namespace iontrap::synthesis {

// Amplitudes and phases indexed by the g/e label read as binary, qubit 1 most
// significant (g = 0, e = 1).
struct TargetState {
  int n_qubits = 0;
  std::vector<double> alpha;
  std::vector<double> phase;

  void validate() const;
  std::string label(int index) const;
};

// Q_j = [[c, s], [-s, c]] with c = sqrt((N-j)/(N-j+1)).
Eigen::Matrix2d q_rotation(int n, int j);

// Starts from |e...e>; produces the symmetric single-g superposition.
std::vector<gates::GateSpec> w_state_network(int n);

struct BlockParameters {
  double theta;  // R(theta, phi) = [[cos, e^{2i phi} sin], [-e^{-2i phi} sin, cos]]
  double phi;
};

struct SynthesisNetwork {
  std::vector<gates::GateSpec> circuit;
  std::vector<BlockParameters> blocks;  // 7 entries; theta = 0 marks a skipped block
};

// Three-qubit preparation from |ggg>.
SynthesisNetwork arbitrary_state_network(const TargetState& target);

// Rows basis_label,alpha,phi; missing labels have zero amplitude.
TargetState parse_target_csv(const std::string& text);

}  // namespace iontrap::synthesis
