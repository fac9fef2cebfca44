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

#pragma once

#include <numbers>

namespace iontrap::constants {

// CODATA 2018, SI units.
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kPlanck = 6.62607015e-34;             // J s
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kEpsilon0 = 8.8541878128e-12;         // F/m
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;  // kg
inline constexpr double kBoltzmann = 1.380649e-23;            // J/K
inline constexpr double kSpeedOfLight = 299792458.0;          // m/s
inline constexpr double kElectronVolt = kElementaryCharge;    // J

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 40Ca atomic mass in u.
inline constexpr double kCalcium40Amu = 39.962590863;

}  // namespace iontrap::constants
