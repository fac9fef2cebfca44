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

#include "iontrap/synthesis.hpp"

#include <cmath>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap::synthesis {

using constants::kPi;
using gates::GateSpec;

void TargetState::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("target needs at least one qubit");
  const size_t dim = size_t{1} << n_qubits;
  if (alpha.size() != dim || phase.size() != dim)
    throw std::invalid_argument("target needs 2^N amplitudes and phases");
  double s = 0.0;
  for (double a : alpha) {
    if (a < 0.0 || !std::isfinite(a)) throw std::invalid_argument("amplitudes must be >= 0");
    s += a * a;
  }
  for (double p : phase)
    if (!std::isfinite(p)) throw std::invalid_argument("non-finite phase");
  if (std::abs(s - 1.0) > 1e-10)
    throw std::invalid_argument("target is not normalized (sum alpha^2 = " +
                                io::format_double(s) + ")");
}

std::string TargetState::label(int index) const {
  std::string s;
  for (int q = 0; q < n_qubits; ++q) s += (index >> (n_qubits - 1 - q)) & 1 ? 'e' : 'g';
  return s;
}

Eigen::Matrix2d q_rotation(int n, int j) {
  if (n < 2 || j < 1 || j >= n) throw std::out_of_range("Q_j needs 1 <= j < N");
  const double c = std::sqrt(static_cast<double>(n - j) / (n - j + 1));
  const double s = 1.0 / std::sqrt(static_cast<double>(n - j + 1));
  Eigen::Matrix2d m;
  m << c, s, -s, c;
  return m;
}

std::vector<GateSpec> w_state_network(int n) {
  if (n < 2) throw std::invalid_argument("w_state_network needs N >= 2");
  std::vector<GateSpec> c;
  for (int j = 1; j < n; ++j) {
    Eigen::Matrix2d q = q_rotation(n, j);
    const double theta = std::atan2(q(0, 1), q(0, 0));
    std::vector<int> controls;
    for (int i = 0; i < j - 1; ++i) controls.push_back(i);
    c.push_back(GateSpec::controlled_r(controls, j - 1, theta, 0.0));
  }
  std::vector<int> controls;
  for (int i = 0; i < n - 1; ++i) controls.push_back(i);
  c.push_back(GateSpec::multi_cnot(controls, n - 1));
  return c;
}

namespace {

// Basis index (qubit 1 most significant) of each expansion term in block order.
constexpr int kTermIndex[8] = {0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111};

// Flip `target` when `on_g` is in g and `on_e` is in e.
void conditional_flip(std::vector<GateSpec>& c, int on_g, int on_e, int target) {
  c.push_back(GateSpec::rotation(on_g, kPi, 0.0));
  c.push_back(GateSpec::multi_cnot({on_g, on_e}, target));
  c.push_back(GateSpec::rotation(on_g, kPi, kPi));
}

}  // namespace

SynthesisNetwork arbitrary_state_network(const TargetState& target) {
  target.validate();
  if (target.n_qubits != 3)
    throw std::invalid_argument("arbitrary_state_network supports three qubits");

  double alpha[8], phi[8];
  for (int j = 0; j < 8; ++j) {
    alpha[j] = target.alpha[kTermIndex[j]];
    phi[j] = target.phase[kTermIndex[j]] - target.phase[0];
  }

  SynthesisNetwork net;
  net.blocks.resize(7, {0.0, 0.0});

  const double b0 = std::sqrt(std::max(0.0, 1.0 - alpha[0] * alpha[0]));
  if (b0 <= 1e-12) return net;
  net.blocks[0] = {std::asin(std::min(1.0, b0)), (kPi - phi[7]) / 2.0};
  net.circuit.push_back(
      GateSpec::controlled_r({}, 0, net.blocks[0].theta, net.blocks[0].phi));
  net.circuit.push_back(GateSpec::cnot(0, 1));
  net.circuit.push_back(GateSpec::cnot(0, 2));

  double used = alpha[0] * alpha[0];
  for (int j = 1; j <= 6; ++j) {
    const double rest = 1.0 - used;
    used += alpha[j] * alpha[j];
    if (rest <= 1e-12 || alpha[j] == 0.0) continue;
    const double b = std::min(1.0, alpha[j] / std::sqrt(rest));
    if (b == 0.0) continue;
    const BlockParameters bp{std::asin(b), (phi[j] - phi[7]) / 2.0};
    net.blocks[j] = bp;
    auto rot = [&](std::vector<int> controls, int t) {
      net.circuit.push_back(GateSpec::controlled_r(std::move(controls), t, bp.theta, bp.phi));
    };
    switch (j) {
      case 1:  // creates gee, moved to gge
        rot({1, 2}, 0);
        conditional_flip(net.circuit, 0, 2, 1);
        break;
      case 2:  // creates gee, moved to geg
        rot({1, 2}, 0);
        conditional_flip(net.circuit, 0, 1, 2);
        break;
      case 3:  // creates ege, moved to egg
        rot({0, 2}, 1);
        conditional_flip(net.circuit, 1, 0, 2);
        break;
      case 4:
        rot({1, 2}, 0);
        break;
      case 5:
        rot({0, 2}, 1);
        break;
      case 6:
        rot({0, 1}, 2);
        break;
    }
  }
  return net;
}

TargetState parse_target_csv(const std::string& text) {
  struct Row {
    std::string label;
    double a, p;
    int line;
  };
  std::vector<Row> rows;
  const auto lines = io::split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    std::string line = lines[li];
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line.rfind("basis_label", 0) == 0) continue;
    auto c1 = line.find(',');
    auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw ParseError("expected basis_label,alpha,phi", ln, 1);
    std::string label = line.substr(0, c1);
    if (label.size() >= 2 && label.front() == '|' && label.back() == '>')
      label = label.substr(1, label.size() - 2);
    for (size_t i = 0; i < label.size(); ++i)
      if (label[i] != 'g' && label[i] != 'e')
        throw ParseError("basis label must use g/e", ln, static_cast<int>(i) + 1);
    if (label.empty()) throw ParseError("empty basis label", ln, 1);
    auto a = io::parse_double(line.substr(c1 + 1, c2 - c1 - 1));
    if (!a) throw ParseError("malformed amplitude", ln, static_cast<int>(c1) + 2);
    auto p = io::parse_double(line.substr(c2 + 1));
    if (!p) throw ParseError("malformed phase", ln, static_cast<int>(c2) + 2);
    rows.push_back({label, *a, *p, ln});
  }
  if (rows.empty()) throw ParseError("target file has no rows", 0, 0);
  TargetState t;
  t.n_qubits = static_cast<int>(rows[0].label.size());
  if (t.n_qubits > 20) throw ParseError("too many qubits", rows[0].line, 1);
  t.alpha.assign(size_t{1} << t.n_qubits, 0.0);
  t.phase.assign(size_t{1} << t.n_qubits, 0.0);
  std::vector<bool> seen(t.alpha.size(), false);
  for (const auto& r : rows) {
    if (static_cast<int>(r.label.size()) != t.n_qubits)
      throw ParseError("inconsistent label length", r.line, 1);
    size_t idx = 0;
    for (char ch : r.label) idx = idx * 2 + (ch == 'e');
    if (seen[idx]) throw ParseError("duplicate label '" + r.label + "'", r.line, 1);
    seen[idx] = true;
    t.alpha[idx] = r.a;
    t.phase[idx] = r.p;
  }
  return t;
}

}  // namespace iontrap::synthesis
