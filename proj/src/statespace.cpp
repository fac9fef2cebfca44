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

#include "iontrap/statespace.hpp"

#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "iontrap/errors.hpp"
#include "iontrap/io.hpp"

namespace iontrap {

char level_char(Level l) {
  switch (l) {
    case Level::kG: return 'g';
    case Level::kE: return 'e';
    case Level::kR: return 'r';
  }
  return '?';
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), split_state_(seed) {
  engine_.seed(splitmix64(split_state_));
}

Rng Rng::split() { return Rng(splitmix64(split_state_)); }

double Rng::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

long Rng::poisson(double mean) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long>(mean)(engine_);
}

QuantumState::QuantumState(int n_ions, int n_max) : n_ions_(n_ions), n_max_(n_max) {
  if (n_ions < 1) throw std::invalid_argument("state needs at least one ion");
  if (n_max < 1) throw std::invalid_argument("Fock cutoff n_max must be >= 1");
  double dim = static_cast<double>(n_max) + 1.0;
  for (int i = 0; i < n_ions; ++i) {
    dim *= 3.0;
    if (dim > static_cast<double>(kMaxDimension))
      throw std::length_error("state dimension 3^N (n_max+1) exceeds 1e8");
  }
  amp_.assign(static_cast<std::size_t>(dim), cplx(0.0, 0.0));
}

std::size_t QuantumState::index(const std::vector<Level>& levels, int n) const {
  if (static_cast<int>(levels.size()) != n_ions_)
    throw std::invalid_argument("level count does not match ion count");
  if (n < 0 || n > n_max_) throw std::out_of_range("Fock index out of range");
  std::size_t idx = 0;
  for (Level l : levels) idx = idx * 3 + static_cast<std::size_t>(l);
  return idx * fock_dim() + static_cast<std::size_t>(n);
}

std::size_t QuantumState::ion_stride(int ion) const {
  std::size_t s = fock_dim();
  for (int i = ion + 1; i < n_ions_; ++i) s *= 3;
  return s;
}

Level QuantumState::level_of(std::size_t index, int ion) const {
  return static_cast<Level>((index / ion_stride(ion)) % 3);
}

double QuantumState::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

void QuantumState::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw std::runtime_error("cannot normalize a zero state");
  for (auto& a : amp_) a /= n;
}

double QuantumState::top_fock_population() const {
  double s = 0.0;
  for (std::size_t i = n_max_; i < amp_.size(); i += fock_dim()) s += std::norm(amp_[i]);
  return s;
}

std::string QuantumState::label(std::size_t index) const {
  std::string s = "|";
  for (int j = 0; j < n_ions_; ++j) s += level_char(level_of(index, j));
  s += ">|" + std::to_string(fock_of(index)) + ">";
  return s;
}

QuantumState ground_state(int n_ions, int n_max) {
  QuantumState s(n_ions, n_max);
  s[0] = 1.0;
  return s;
}

QuantumState basis_state(const std::vector<Level>& levels, int n, int n_max) {
  QuantumState s(static_cast<int>(levels.size()), n_max);
  s[s.index(levels, n)] = 1.0;
  return s;
}

std::vector<Level> parse_levels(const std::string& s) {
  std::vector<Level> out;
  for (char c : s) {
    switch (c) {
      case 'g': out.push_back(Level::kG); break;
      case 'e': out.push_back(Level::kE); break;
      case 'r': out.push_back(Level::kR); break;
      default: throw std::invalid_argument(std::string("unknown level '") + c + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty level string");
  return out;
}

cplx inner_product(const QuantumState& a, const QuantumState& b) {
  if (a.dimension() != b.dimension() || a.n_ions() != b.n_ions())
    throw std::invalid_argument("state dimensions differ");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::min(1.0, std::norm(inner_product(a, b)));
}

void ReadoutModel::validate() const {
  if (!(bright_rate > dark_rate) || dark_rate < 0.0)
    throw std::invalid_argument("readout rates need bright > dark >= 0");
  if (!(duration > 0.0)) throw std::invalid_argument("readout duration must be positive");
}

Measurement measure_internal(const QuantumState& state, int ion, Rng& rng,
                             const ReadoutModel& model) {
  model.validate();
  if (ion < 0 || ion >= state.n_ions()) throw std::out_of_range("ion index out of range");
  double p_bright = 0.0;
  for (std::size_t i = 0; i < state.dimension(); ++i)
    if (state.level_of(i, ion) == Level::kG) p_bright += std::norm(state[i]);
  const double total = state.norm() * state.norm();
  p_bright /= total;

  Measurement m;
  m.projected_bright = rng.uniform() < p_bright;
  m.collapsed = state;
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    const bool in_g = state.level_of(i, ion) == Level::kG;
    if (in_g != m.projected_bright) m.collapsed[i] = 0.0;
  }
  if (!(m.collapsed.norm() > 0.0)) throw std::runtime_error("collapse onto an empty sector");
  m.collapsed.normalize();
  m.photon_count =
      rng.poisson(m.projected_bright ? model.expected_bright() : model.expected_dark());
  m.bright = static_cast<double>(m.photon_count) >= model.threshold;
  return m;
}

Measurement measure_internal(const QuantumState& state, int ion, std::uint64_t seed,
                             const ReadoutModel& model) {
  Rng rng(seed);
  return measure_internal(state, ion, rng, model);
}

std::string state_to_csv(const QuantumState& state, std::uint64_t seed) {
  std::ostringstream out;
  out << "# n_ions=" << state.n_ions() << " n_max=" << state.n_max() << " seed=" << seed
      << '\n';
  out << "basis_label,re,im\n";
  for (std::size_t i = 0; i < state.dimension(); ++i)
    out << state.label(i) << ',' << io::format_double(state[i].real()) << ','
        << io::format_double(state[i].imag()) << '\n';
  return out.str();
}

namespace {

struct Entry {
  std::vector<Level> levels;
  int n;
  cplx amp;
};

Entry parse_row(const std::string& line, int line_no) {
  auto c1 = line.find(',');
  auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
  if (c2 == std::string::npos) throw ParseError("expected basis_label,re,im", line_no, 1);
  std::string label = line.substr(0, c1);
  // |geg>|2>
  if (label.size() < 6 || label[0] != '|')
    throw ParseError("malformed basis label '" + label + "'", line_no, 1);
  auto close = label.find('>');
  if (close == std::string::npos || close + 2 >= label.size() || label[close + 1] != '|' ||
      label.back() != '>')
    throw ParseError("malformed basis label '" + label + "'", line_no, 1);
  Entry e;
  try {
    e.levels = parse_levels(label.substr(1, close - 1));
  } catch (const std::invalid_argument& ex) {
    throw ParseError(ex.what(), line_no, 2);
  }
  auto n = io::parse_int(label.substr(close + 2, label.size() - close - 3));
  if (!n || *n < 0)
    throw ParseError("malformed Fock index", line_no, static_cast<int>(close) + 3);
  e.n = static_cast<int>(*n);
  auto re = io::parse_double(line.substr(c1 + 1, c2 - c1 - 1));
  if (!re) throw ParseError("malformed real part", line_no, static_cast<int>(c1) + 2);
  auto im = io::parse_double(line.substr(c2 + 1));
  if (!im) throw ParseError("malformed imaginary part", line_no, static_cast<int>(c2) + 2);
  e.amp = cplx(*re, *im);
  return e;
}

}  // namespace

QuantumState state_from_csv(const std::string& text) {
  std::vector<Entry> entries;
  int n_max_header = -1;
  const auto lines = io::split_lines(text);
  for (size_t li = 0; li < lines.size(); ++li) {
    const std::string& line = lines[li];
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto p = line.find("n_max=");
      if (p != std::string::npos) {
        auto v = io::parse_int(line.substr(p + 6, line.find(' ', p) - p - 6));
        if (v) n_max_header = static_cast<int>(*v);
      }
      continue;
    }
    if (line.rfind("basis_label", 0) == 0) continue;
    entries.push_back(parse_row(line, static_cast<int>(li) + 1));
  }
  if (entries.empty()) throw ParseError("state file has no amplitudes", 0, 0);
  const size_t n_ions = entries[0].levels.size();
  int n_max = n_max_header;
  for (const auto& e : entries) {
    if (e.levels.size() != n_ions) throw ParseError("inconsistent ion count", 0, 0);
    n_max = std::max(n_max, e.n);
  }
  QuantumState s(static_cast<int>(n_ions), std::max(1, n_max));
  for (const auto& e : entries) s[s.index(e.levels, e.n)] = e.amp;
  return s;
}

}  // namespace iontrap
