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

#include "iontrap/gates.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>

#include "iontrap/constants.hpp"
#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap::gates {

using constants::kPi;

GateSpec GateSpec::rotation(int ion, double theta, double phi) {
  GateSpec g;
  g.kind = Kind::kRotation;
  g.target = ion;
  g.theta = theta;
  g.phi = phi;
  return g;
}

GateSpec GateSpec::cnot(int control, int target) {
  GateSpec g;
  g.kind = Kind::kCnot;
  g.controls = {control};
  g.target = target;
  return g;
}

GateSpec GateSpec::multi_cnot(std::vector<int> controls, int target) {
  GateSpec g;
  g.kind = Kind::kMultiCnot;
  g.controls = std::move(controls);
  g.target = target;
  return g;
}

GateSpec GateSpec::controlled_r(std::vector<int> controls, int target, double theta,
                                double phi) {
  GateSpec g;
  g.kind = Kind::kControlledR;
  g.controls = std::move(controls);
  g.target = target;
  g.theta = theta;
  g.phi = phi;
  return g;
}

GateSpec GateSpec::reduced_controlled_r(std::vector<int> controls, int target,
                                        double theta) {
  GateSpec g;
  g.kind = Kind::kReducedControlledR;
  g.controls = std::move(controls);
  g.target = target;
  g.theta = theta;
  return g;
}

GateSpec GateSpec::monroe(int target, int p, std::optional<int> control, double phi) {
  GateSpec g;
  g.kind = Kind::kMonroe;
  g.target = target;
  g.p = p;
  g.phi = phi;
  if (control) g.controls = {*control};
  return g;
}

std::vector<int> GateSpec::ions() const {
  std::vector<int> v = controls;
  v.push_back(target);
  return v;
}

void GateSpec::validate() const {
  auto all = ions();
  std::set<int> uniq(all.begin(), all.end());
  if (uniq.size() != all.size()) throw std::invalid_argument("gate uses an ion twice");
  for (int i : all)
    if (i < 0) throw std::invalid_argument("negative ion index");
  switch (kind) {
    case Kind::kCnot:
      if (controls.size() != 1) throw std::invalid_argument("cnot needs one control");
      break;
    case Kind::kMultiCnot:
      if (controls.empty()) throw std::invalid_argument("multi_cnot needs a control");
      break;
    case Kind::kMonroe:
      if (p < 1) throw std::invalid_argument("monroe order p must be >= 1");
      if (controls.size() > 1) throw std::invalid_argument("monroe takes at most one control");
      break;
    case Kind::kRotation:
      if (!controls.empty()) throw std::invalid_argument("rotation takes no controls");
      break;
    default:
      break;
  }
  if (!std::isfinite(theta) || !std::isfinite(phi))
    throw std::invalid_argument("non-finite gate angle");
}

std::vector<Pulse> PulseSchedule::pulse_list() const {
  std::vector<Pulse> v;
  for (const auto& s : pulses) v.push_back(s.pulse);
  return v;
}

Eigen::Matrix2cd rotation_matrix(double theta, double phi) {
  const cplx e(std::cos(phi), std::sin(phi));
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, e * s, -std::conj(e) * s, c;
  return m;
}

namespace {

double wrap_phase(double phi) {
  double w = std::remainder(phi, 2.0 * kPi);
  return w == 0.0 ? 0.0 : w;
}

// Phase of the n = 0 coupling at zero laser phase.
double rate_phase(const Pulse& p, const CouplingContext& ctx) {
  Pulse q = p;
  q.phase = 0.0;
  return std::arg(interaction::block_rate(q, ctx, 0));
}

class Emitter {
 public:
  Emitter(const CouplingContext& ctx, const CompileOptions& opt) : ctx_(ctx), opt_(opt) {
    schedule_.bus_mode = opt.bus_mode;
  }

  void emit(int ion, int k, double area, double phase_tilde, Transition tr,
            std::optional<Regime> regime = std::nullopt) {
    if (ion < 0 || ion >= ctx_.n_ions()) throw std::out_of_range("gate ion out of range");
    Pulse p;
    p.ion = ion;
    p.k = k;
    p.area = area;
    p.transition = tr;
    p.regime = regime.value_or(opt_.regime);
    p.phase = wrap_phase(phase_tilde + rate_phase(p, ctx_));
    const double t = interaction::pulse_duration(p, ctx_);
    const int index = static_cast<int>(schedule_.pulses.size());
    schedule_.pulses.push_back({p, schedule_.total_time, t});
    schedule_.total_time += t;
    schedule_.ledger[ion].push_back({index, k, tr, phase_tilde, p.phase});

    auto v = interaction::validity(p, ctx_, opt_.n_ref);
    if (p.regime == Regime::kIdealLD && !v.lamb_dicke)
      warn("Lamb-Dicke margin eta^2(n+1)=" + io::format_double(v.lamb_dicke_measure) +
           " exceeds 0.1 on ion " + std::to_string(ion + 1));
    if (!v.weak_drive)
      warn("weak-coupling margin |lambda|/nu=" + io::format_double(v.drive_ratio) +
           " exceeds 0.1 on ion " + std::to_string(ion + 1));
  }

  // Carrier pulse realizing R(theta, phi).
  void rotation(int ion, double theta, double phi, std::optional<Regime> regime = std::nullopt) {
    if (theta == 0.0) return;
    if (theta < 0.0) {
      theta = -theta;
      phi += kPi;
    }
    emit(ion, 0, theta / kPi, phi + kPi / 2, Transition::kGE, regime);
  }

  void multi_cnot(const std::vector<int>& controls, int target) {
    rotation(target, kPi / 2, 0.0);
    emit(controls[0], -1, 1.0, 0.0, Transition::kGE);
    for (size_t i = 1; i < controls.size(); ++i) emit(controls[i], -1, 1.0, 0.0, Transition::kGR);
    emit(target, -1, 2.0, 0.0, Transition::kGR);
    for (size_t i = controls.size(); i-- > 1;) emit(controls[i], -1, 1.0, 0.0, Transition::kGR);
    emit(controls[0], -1, 1.0, 0.0, Transition::kGE);
    rotation(target, kPi / 2, kPi);
  }

  void gate(const GateSpec& g) {
    g.validate();
    using K = GateSpec::Kind;
    switch (g.kind) {
      case K::kRotation:
        rotation(g.target, g.theta, g.phi);
        break;
      case K::kCnot:
      case K::kMultiCnot:
        multi_cnot(g.controls, g.target);
        break;
      case K::kControlledR:
        if (g.controls.empty()) {
          rotation(g.target, 2.0 * g.theta, 2.0 * g.phi);
          break;
        }
        rotation(g.target, kPi, g.phi);
        rotation(g.target, g.theta, 0.0);
        multi_cnot(g.controls, g.target);
        rotation(g.target, g.theta, kPi);
        multi_cnot(g.controls, g.target);
        rotation(g.target, kPi, g.phi + kPi);
        break;
      case K::kReducedControlledR:
        if (g.controls.empty()) {
          rotation(g.target, 2.0 * g.theta, 0.0);
          break;
        }
        rotation(g.target, g.theta, 0.0);
        multi_cnot(g.controls, g.target);
        rotation(g.target, g.theta, kPi);
        multi_cnot(g.controls, g.target);
        break;
      case K::kMonroe: {
        const double eta = ctx_.eta.at(g.target);
        const double want = 1.0 / (2.0 * g.p);
        if (std::abs(eta * eta - want) > 1e-6)
          throw PhysicsError("monroe gate of order p=" + std::to_string(g.p) +
                             " needs eta^2 = " + io::format_double(want) + " on ion " +
                             std::to_string(g.target + 1) + ", got " +
                             io::format_double(eta * eta));
        const Regime exact = Regime::kExactLaguerre;
        if (!g.controls.empty()) emit(g.controls[0], -1, 1.0, 0.0, Transition::kGE, exact);
        emit(g.target, 0, 2.0 * g.p, g.phi, Transition::kGE, exact);
        if (!g.controls.empty()) emit(g.controls[0], -1, 1.0, 0.0, Transition::kGE, exact);
        break;
      }
    }
  }

  PulseSchedule finish() { return std::move(schedule_); }

 private:
  void warn(const std::string& w) {
    if (seen_.insert(w).second) schedule_.warnings.push_back(w);
  }

  const CouplingContext& ctx_;
  CompileOptions opt_;
  PulseSchedule schedule_;
  std::set<std::string> seen_;
};

void dedupe(std::vector<std::string>& v) {
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (auto& s : v)
    if (seen.insert(s).second) out.push_back(s);
  v = std::move(out);
}

}  // namespace

PulseSchedule compile(const std::vector<GateSpec>& circuit, const CouplingContext& ctx,
                      const CompileOptions& options) {
  ctx.validate();
  Emitter e(ctx, options);
  for (const auto& g : circuit) e.gate(g);
  return e.finish();
}

PulseSchedule schedule_from_pulses(const std::vector<Pulse>& pulses,
                                   const CouplingContext& ctx, int bus_mode) {
  ctx.validate();
  PulseSchedule s;
  s.bus_mode = bus_mode;
  for (const auto& p : pulses) {
    if (p.ion < 0 || p.ion >= ctx.n_ions()) throw std::out_of_range("pulse ion out of range");
    const double t = interaction::pulse_duration(p, ctx);
    const int index = static_cast<int>(s.pulses.size());
    s.pulses.push_back({p, s.total_time, t});
    s.total_time += t;
    s.ledger[p.ion].push_back(
        {index, p.k, p.transition, wrap_phase(p.phase - rate_phase(p, ctx)), p.phase});
  }
  return s;
}

SimulationResult simulate_schedule(const PulseSchedule& schedule, const CouplingContext& ctx,
                                   const QuantumState& initial, std::optional<Regime> regime) {
  if (initial.n_ions() != ctx.n_ions())
    throw std::invalid_argument("state and coupling context disagree on the ion count");
  SimulationResult r;
  r.state = initial;
  for (const auto& sp : schedule.pulses) {
    Pulse p = sp.pulse;
    if (regime) p.regime = *regime;
    interaction::apply_pulse(r.state, p, ctx, &r.warnings);
  }
  double excited = 0.0;
  for (std::size_t i = 0; i < r.state.dimension(); ++i)
    if (r.state.fock_of(i) != 0) excited += std::norm(r.state[i]);
  if (excited > 1e-10)
    r.warnings.push_back("bus mode left excited: population " + io::format_double(excited) +
                         " outside |0>");
  dedupe(r.warnings);
  return r;
}

std::vector<TruthRow> truth_table(const PulseSchedule& schedule, const CouplingContext& ctx,
                                  const std::vector<int>& qubits,
                                  const TruthTableOptions& options) {
  const int n = ctx.n_ions();
  for (int q : qubits)
    if (q < 0 || q >= n) throw std::out_of_range("truth-table qubit out of range");
  std::vector<TruthRow> rows;
  const int q = static_cast<int>(qubits.size());
  for (int bus : options.bus_inputs) {
    for (int mask = 0; mask < (1 << q); ++mask) {
      std::vector<Level> levels(n, Level::kG);
      for (int b = 0; b < q; ++b)
        if (mask & (1 << (q - 1 - b))) levels[qubits[b]] = Level::kE;
      QuantumState in = basis_state(levels, bus, options.n_max);
      SimulationResult sim = simulate_schedule(schedule, ctx, in, options.regime);
      TruthRow row;
      row.input = in.label(in.index(levels, bus));
      std::size_t best = 0;
      double inside = 0.0;
      for (std::size_t i = 0; i < sim.state.dimension(); ++i) {
        if (std::norm(sim.state[i]) > std::norm(sim.state[best])) best = i;
        bool comp = sim.state.fock_of(i) == bus;
        for (int j = 0; j < n && comp; ++j) comp = sim.state.level_of(i, j) != Level::kR;
        if (comp) inside += std::norm(sim.state[i]);
      }
      row.output = sim.state.label(best);
      row.amplitude = sim.state[best];
      row.leakage = std::max(0.0, 1.0 - inside);
      row.final_state = std::move(sim.state);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::string truth_table_to_csv(const std::vector<TruthRow>& rows) {
  std::ostringstream out;
  out << "input,output,re,im,abs,leakage\n";
  for (const auto& r : rows)
    out << r.input << ',' << r.output << ',' << io::format_double(r.amplitude.real()) << ','
        << io::format_double(r.amplitude.imag()) << ','
        << io::format_double(std::abs(r.amplitude)) << ',' << io::format_double(r.leakage)
        << '\n';
  return out.str();
}

std::string schedule_report_json(const PulseSchedule& schedule, std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["bus_mode"] = schedule.bus_mode;
  j["n_pulses"] = schedule.pulses.size();
  j["total_time_s"] = schedule.total_time;
  auto& arr = j["pulses"] = nlohmann::ordered_json::array();
  for (size_t i = 0; i < schedule.pulses.size(); ++i) {
    const auto& sp = schedule.pulses[i];
    nlohmann::ordered_json p;
    p["index"] = i;
    p["ion"] = sp.pulse.ion + 1;
    p["k"] = sp.pulse.k;
    p["area_pi"] = sp.pulse.area;
    p["phase"] = sp.pulse.phase;
    p["transition"] = interaction::to_string(sp.pulse.transition);
    p["regime"] = interaction::to_string(sp.pulse.regime);
    p["start_s"] = sp.start;
    p["duration_s"] = sp.duration;
    arr.push_back(p);
  }
  auto& led = j["phase_ledger"] = nlohmann::ordered_json::object();
  for (const auto& [ion, entries] : schedule.ledger) {
    auto& a = led[std::to_string(ion + 1)] = nlohmann::ordered_json::array();
    for (const auto& e : entries)
      a.push_back({{"pulse", e.pulse_index},
                   {"k", e.k},
                   {"transition", interaction::to_string(e.transition)},
                   {"phase_tilde", e.phase_tilde},
                   {"laser_phase", e.laser_phase}});
  }
  j["warnings"] = schedule.warnings;
  return j.dump(2);
}

std::optional<double> parse_angle(const std::string& raw) {
  std::string s = raw;
  if (s.empty()) return std::nullopt;
  double sign = 1.0;
  if (s[0] == '-' || s[0] == '+') {
    if (s[0] == '-') sign = -1.0;
    s = s.substr(1);
  }
  auto pi = s.find("pi");
  if (pi == std::string::npos) {
    if (s.empty() || s[0] == '-' || s[0] == '+') return std::nullopt;
    auto v = io::parse_double(s);
    if (!v) return std::nullopt;
    return sign * *v;
  }
  std::string coef = s.substr(0, pi);
  std::string rest = s.substr(pi + 2);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double c = 1.0;
  if (!coef.empty()) {
    if (coef[0] == '-' || coef[0] == '+') return std::nullopt;
    auto v = io::parse_double(coef);
    if (!v) return std::nullopt;
    c = *v;
  }
  double den = 1.0;
  if (!rest.empty()) {
    if (rest[0] != '/') return std::nullopt;
    auto v = io::parse_double(rest.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    den = *v;
  }
  return sign * c * kPi / den;
}

namespace {

struct LineParser {
  const std::vector<io::Token>& toks;
  int line;

  int ion(size_t i) const {
    auto v = io::parse_int(toks[i].text);
    if (!v || *v < 1)
      throw ParseError("ion index must be a positive integer, got '" + toks[i].text + "'", line,
                       toks[i].column);
    return static_cast<int>(*v) - 1;
  }

  double angle(size_t i) const {
    auto v = parse_angle(toks[i].text);
    if (!v) throw ParseError("malformed angle '" + toks[i].text + "'", line, toks[i].column);
    return *v;
  }

  void arity(size_t lo, size_t hi) const {
    const size_t n = toks.size() - 1;
    if (n < lo || n > hi) {
      const auto& t = n < lo ? toks.back() : toks[hi + 1];
      throw ParseError("wrong number of operands for '" + toks[0].text + "'", line, t.column);
    }
  }

  // Ions in tokens [first, last), rejecting repeats.
  std::vector<int> ions(size_t first, size_t last) const {
    std::vector<int> v;
    for (size_t i = first; i < last; ++i) {
      int x = ion(i);
      if (std::find(v.begin(), v.end(), x) != v.end())
        throw ParseError("repeated ion index " + toks[i].text, line, toks[i].column);
      v.push_back(x);
    }
    return v;
  }
};

}  // namespace

std::vector<GateSpec> parse_circuit(const std::string& text) {
  std::vector<GateSpec> out;
  const auto lines = io::split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const int ln = static_cast<int>(li) + 1;
    const auto toks = io::tokenize(lines[li]);
    if (toks.empty()) continue;
    LineParser lp{toks, ln};
    const std::string& op = toks[0].text;
    const size_t n = toks.size();
    if (op == "rot") {
      lp.arity(3, 3);
      out.push_back(GateSpec::rotation(lp.ion(1), lp.angle(2), lp.angle(3)));
    } else if (op == "cnot") {
      lp.arity(2, 2);
      auto v = lp.ions(1, 3);
      out.push_back(GateSpec::cnot(v[0], v[1]));
    } else if (op == "ccnot") {
      lp.arity(3, 3);
      auto v = lp.ions(1, 4);
      out.push_back(GateSpec::multi_cnot({v[0], v[1]}, v[2]));
    } else if (op == "ncnot") {
      lp.arity(2, 64);
      auto v = lp.ions(1, n);
      int t = v.back();
      v.pop_back();
      out.push_back(GateSpec::multi_cnot(v, t));
    } else if (op == "crot") {
      lp.arity(3, 66);
      auto v = lp.ions(1, n - 2);
      int t = v.back();
      v.pop_back();
      out.push_back(GateSpec::controlled_r(v, t, lp.angle(n - 2), lp.angle(n - 1)));
    } else if (op == "rcrot") {
      lp.arity(2, 65);
      auto v = lp.ions(1, n - 1);
      int t = v.back();
      v.pop_back();
      out.push_back(GateSpec::reduced_controlled_r(v, t, lp.angle(n - 1)));
    } else if (op == "monroe") {
      lp.arity(2, 3);
      auto p = io::parse_int(toks[n - 1].text);
      if (!p || *p < 1)
        throw ParseError("monroe order must be a positive integer", ln, toks[n - 1].column);
      if (n == 3) {
        out.push_back(GateSpec::monroe(lp.ion(1), static_cast<int>(*p)));
      } else {
        auto v = lp.ions(1, 3);
        out.push_back(GateSpec::monroe(v[1], static_cast<int>(*p), v[0]));
      }
    } else {
      throw ParseError("unknown gate '" + op + "'", ln, toks[0].column);
    }
  }
  return out;
}

int circuit_ion_count(const std::vector<GateSpec>& circuit) {
  int m = 0;
  for (const auto& g : circuit)
    for (int i : g.ions()) m = std::max(m, i + 1);
  return m;
}

}  // namespace iontrap::gates
