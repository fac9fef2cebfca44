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

// N three-level ions tensored with one truncated bus mode.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace iontrap {

using cplx = std::complex<double>;

enum class Level : int { kG = 0, kE = 1, kR = 2 };

char level_char(Level l);

// Seeded, splittable random source. Child streams are derived with SplitMix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }
  Rng split();
  double uniform();
  long poisson(double mean);
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t split_state_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t& state);

inline constexpr std::size_t kMaxDimension = 100000000;
inline constexpr int kDefaultFockCutoff = 20;

class QuantumState {
 public:
  QuantumState() = default;
  // Ions are 0-based in the API. Rejects dimensions above kMaxDimension.
  QuantumState(int n_ions, int n_max);

  int n_ions() const { return n_ions_; }
  int n_max() const { return n_max_; }
  int fock_dim() const { return n_max_ + 1; }
  std::size_t dimension() const { return amp_.size(); }

  std::size_t index(const std::vector<Level>& levels, int n) const;
  Level level_of(std::size_t index, int ion) const;
  int fock_of(std::size_t index) const { return static_cast<int>(index % fock_dim()); }
  // Distance between neighbouring internal levels of one ion in the flat array.
  std::size_t ion_stride(int ion) const;

  cplx& operator[](std::size_t i) { return amp_[i]; }
  const cplx& operator[](std::size_t i) const { return amp_[i]; }
  std::vector<cplx>& data() { return amp_; }
  const std::vector<cplx>& data() const { return amp_; }

  double norm() const;
  void normalize();
  // Total population in the highest Fock level.
  double top_fock_population() const;

  std::string label(std::size_t index) const;  // e.g. |geg>|2>

 private:
  int n_ions_ = 0;
  int n_max_ = 0;
  std::vector<cplx> amp_;
};

QuantumState ground_state(int n_ions, int n_max = kDefaultFockCutoff);
QuantumState basis_state(const std::vector<Level>& levels, int n, int n_max);
// Parses "geg" style level strings.
std::vector<Level> parse_levels(const std::string& s);

double fidelity(const QuantumState& a, const QuantumState& b);
cplx inner_product(const QuantumState& a, const QuantumState& b);

struct ReadoutModel {
  double bright_rate = 2000.0;  // counts per 100 ms
  double dark_rate = 150.0;     // counts per 100 ms
  double duration = 0.1;        // s
  double threshold = 1075.0;    // counts; bright iff count >= threshold

  double expected_bright() const { return bright_rate * duration / 0.1; }
  double expected_dark() const { return dark_rate * duration / 0.1; }
  void validate() const;
};

struct Measurement {
  bool bright = false;           // decided from the photon count
  bool projected_bright = false; // sector the state collapsed into
  long photon_count = 0;
  QuantumState collapsed;
};

Measurement measure_internal(const QuantumState& state, int ion, Rng& rng,
                             const ReadoutModel& model = {});
Measurement measure_internal(const QuantumState& state, int ion,
                             std::uint64_t seed, const ReadoutModel& model = {});

// CSV: basis_label,re,im with a comment header carrying sizes and the seed.
std::string state_to_csv(const QuantumState& state, std::uint64_t seed);
QuantumState state_from_csv(const std::string& text);

}  // namespace iontrap
