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
#include <string>
#include <vector>

#include "iontrap/errors.hpp"
#include "iontrap/gates.hpp"

using namespace iontrap;
using namespace iontrap::gates;

namespace {

constexpr double kPi = 3.141592653589793;
const cplx kI(0.0, 1.0);

CouplingContext ctx_for(int n) { return interaction::uniform_context(n, 6.283e4, 0.05, 4.4e6); }

std::vector<Level> levels_of(int mask, int n) {
  std::vector<Level> v(n);
  for (int i = 0; i < n; ++i) v[i] = (mask >> (n - 1 - i)) & 1 ? Level::kE : Level::kG;
  return v;
}

QuantumState run(const std::vector<GateSpec>& c, const CouplingContext& ctx,
                 const QuantumState& in) {
  return simulate_schedule(compile(c, ctx), ctx, in).state;
}

}  // namespace

TEST_SUITE("gates") {
  TEST_CASE("pulse counts") {
    auto ctx = ctx_for(5);
    auto cn = compile({GateSpec::cnot(0, 1)}, ctx);
    REQUIRE(cn.pulses.size() == 5);
    int carriers = 0, red_pi = 0, red_2pi = 0;
    for (const auto& p : cn.pulses) {
      if (p.pulse.k == 0 && p.pulse.area == 0.5) ++carriers;
      if (p.pulse.k == -1 && p.pulse.area == 1.0 && p.pulse.transition == Transition::kGE) ++red_pi;
      if (p.pulse.k == -1 && p.pulse.area == 2.0 && p.pulse.transition == Transition::kGR) ++red_2pi;
    }
    CHECK(carriers == 2);
    CHECK(red_pi == 2);
    CHECK(red_2pi == 1);
    for (int q = 2; q <= 5; ++q) {
      std::vector<int> controls;
      for (int j = 0; j + 1 < q; ++j) controls.push_back(j);
      CHECK(compile({GateSpec::multi_cnot(controls, q - 1)}, ctx).pulses.size() == 2u * q + 1);
    }
    CHECK(compile({GateSpec::rotation(2, 0.0, 1.3)}, ctx).pulses.empty());
  }

  TEST_CASE("schedule timing is sequential") {
    auto ctx = ctx_for(2);
    auto s = compile({GateSpec::cnot(0, 1)}, ctx);
    double t = 0.0;
    for (const auto& p : s.pulses) {
      CHECK(p.start == doctest::Approx(t));
      CHECK(p.duration > 0.0);
      t += p.duration;
    }
    CHECK(s.total_time == doctest::Approx(t));
    CHECK(s.ledger.count(0) == 1);
    CHECK(s.ledger.count(1) == 1);
  }

  TEST_CASE("rotation matrix") {
    auto ctx = ctx_for(1);
    for (double th : {0.4, kPi / 2, -1.2})
      for (double ph : {0.0, 0.9}) {
        auto r = rotation_matrix(th, ph);
        auto g = run({GateSpec::rotation(0, th, ph)}, ctx, basis_state({Level::kG}, 0, 2));
        auto e = run({GateSpec::rotation(0, th, ph)}, ctx, basis_state({Level::kE}, 0, 2));
        // columns are images of |g>, |e>
        CHECK(std::abs(g[g.index({Level::kG}, 0)] - r(0, 0)) <= 1e-12);
        CHECK(std::abs(g[g.index({Level::kE}, 0)] - r(1, 0)) <= 1e-12);
        CHECK(std::abs(e[e.index({Level::kG}, 0)] - r(0, 1)) <= 1e-12);
        CHECK(std::abs(e[e.index({Level::kE}, 0)] - r(1, 1)) <= 1e-12);
      }
  }

  TEST_CASE("CNOT middle sequence and truth table") {
    auto ctx = ctx_for(2);
    auto sched = compile({GateSpec::cnot(0, 1)}, ctx);
    auto s = basis_state({Level::kE, Level::kE}, 0, 4);
    for (int p = 1; p <= 3; ++p) interaction::apply_pulse(s, sched.pulses[p].pulse, ctx);
    CHECK(std::abs(s[s.index({Level::kE, Level::kE}, 0)] + 1.0) <= 1e-12);

    auto rows = truth_table(sched, ctx, {0, 1});
    REQUIRE(rows.size() == 4);
    CHECK(rows[2].input == "|eg>|0>");
    CHECK(rows[2].output == "|ee>|0>");
    for (const auto& r : rows) {
      CHECK(std::norm(r.amplitude) >= 1 - 1e-10);
      CHECK(r.leakage <= 1e-10);
    }
    const std::string csv = truth_table_to_csv(rows);
    CHECK(csv.rfind("input,output,re,im,abs,leakage\n", 0) == 0);
  }

  TEST_CASE("CNOT twice is the identity and the bus returns to |0>") {
    auto ctx = ctx_for(3);
    for (auto [c, t] : std::vector<std::pair<int, int>>{{0, 2}, {2, 0}, {1, 2}}) {
      auto s2 = compile({GateSpec::cnot(c, t), GateSpec::cnot(c, t)}, ctx);
      auto s1 = compile({GateSpec::cnot(c, t)}, ctx);
      for (int mask = 0; mask < 8; ++mask) {
        auto in = basis_state(levels_of(mask, 3), 0, 3);
        CHECK(fidelity(in, simulate_schedule(s2, ctx, in).state) >= 1 - 1e-9);
        auto out = simulate_schedule(s1, ctx, in).state;
        double bus0 = 0.0;
        for (size_t i = 0; i < out.dimension(); ++i)
          if (out.fock_of(i) == 0) bus0 += std::norm(out[i]);
        CHECK(bus0 >= 1 - 1e-10);
      }
    }
  }

  TEST_CASE("multi-CNOT leaves non-matching controls alone and is control symmetric") {
    auto ctx = ctx_for(4);
    auto a = compile({GateSpec::multi_cnot({0, 1, 2}, 3)}, ctx);
    auto b = compile({GateSpec::multi_cnot({2, 0, 1}, 3)}, ctx);
    auto ta = truth_table(a, ctx, {0, 1, 2, 3});
    auto tb = truth_table(b, ctx, {0, 1, 2, 3});
    REQUIRE(ta.size() == 16);
    for (size_t i = 0; i < ta.size(); ++i) {
      CHECK(ta[i].output == tb[i].output);
      CHECK(std::abs(ta[i].amplitude - tb[i].amplitude) <= 1e-10);
      const bool flip = (i >> 1) == 7;
      const size_t expect = flip ? (i ^ 1) : i;
      CHECK(ta[i].output == ta[expect].input);
    }
  }

  TEST_CASE("controlled rotation") {
    auto ctx = ctx_for(3);
    const double th = 0.37, ph = 0.81;
    auto out = run({GateSpec::controlled_r({0, 1}, 2, th, ph)}, ctx,
                   basis_state({Level::kE, Level::kE, Level::kG}, 0, 3));
    CHECK(std::abs(out[out.index({Level::kE, Level::kE, Level::kG}, 0)] - std::cos(th)) <= 1e-12);
    CHECK(std::abs(out[out.index({Level::kE, Level::kE, Level::kE}, 0)] -
                   (-std::exp(-2.0 * kI * ph) * std::sin(th))) <= 1e-12);
    // any control in g: identity
    for (int mask : {0b000, 0b010, 0b100, 0b101}) {
      auto in = basis_state(levels_of(mask, 3), 0, 3);
      auto o = run({GateSpec::controlled_r({0, 1}, 2, th, ph)}, ctx, in);
      CHECK(std::abs(inner_product(in, o) - 1.0) <= 1e-12);
    }
    auto g1 = basis_state({Level::kG}, 0, 2);
    auto o1 = run({GateSpec::controlled_r({}, 0, th, ph)}, ctx_for(1), g1);
    CHECK(std::abs(o1[g1.index({Level::kG}, 0)] - std::cos(th)) <= 1e-12);
  }

  TEST_CASE("reduced controlled rotation acts up to phases") {
    auto ctx = ctx_for(2);
    const double th = 0.6;
    auto yes = run({GateSpec::reduced_controlled_r({0}, 1, th)}, ctx,
                   basis_state({Level::kE, Level::kG}, 0, 3));
    CHECK(std::norm(yes[yes.index({Level::kE, Level::kG}, 0)]) ==
          doctest::Approx(std::pow(std::cos(th), 2)));
    auto no = run({GateSpec::reduced_controlled_r({0}, 1, th)}, ctx,
                  basis_state({Level::kG, Level::kG}, 0, 3));
    CHECK(std::norm(no[no.index({Level::kG, Level::kG}, 0)]) == doctest::Approx(1.0));
  }

  TEST_CASE("Monroe gates") {
    const double nu = 1e6;
    SUBCASE("eta mismatch is a hard error") {
      auto ctx = interaction::uniform_context(1, 0.05 * nu, 0.1, nu);
      CHECK_THROWS_AS(compile({GateSpec::monroe(0, 1)}, ctx), PhysicsError);
    }
    SUBCASE("reduced gate flips only on the |1> bus state") {
      for (int p : {1, 2}) {
        auto ctx = interaction::uniform_context(1, 0.05 * nu, std::sqrt(0.5 / p), nu);
        CompileOptions co;
        co.regime = Regime::kExactLaguerre;
        auto s = compile({GateSpec::monroe(0, p)}, ctx, co);
        auto g1 = simulate_schedule(s, ctx, basis_state({Level::kG}, 1, 6)).state;
        auto g0 = simulate_schedule(s, ctx, basis_state({Level::kG}, 0, 6)).state;
        CHECK(std::norm(g1[g1.index({Level::kE}, 1)]) == doctest::Approx(1.0));
        CHECK(std::norm(g0[g0.index({Level::kG}, 0)]) == doctest::Approx(1.0));
      }
    }
    SUBCASE("two-ion complete gate") {
      auto ctx = interaction::uniform_context(2, 0.05 * nu, std::sqrt(0.5), nu);
      CompileOptions co;
      co.regime = Regime::kExactLaguerre;
      auto s = compile({GateSpec::monroe(1, 1, 0)}, ctx, co);
      CHECK(s.pulses.size() == 3);
      auto rows = truth_table(s, ctx, {0, 1}, {{0}, 6, std::nullopt});
      CHECK(rows[0].output == "|gg>|0>");
      CHECK(rows[1].output == "|ge>|0>");
      CHECK(rows[2].output == "|ee>|0>");
      CHECK(rows[3].output == "|eg>|0>");
      for (const auto& r : rows) CHECK(std::norm(r.amplitude) >= 1 - 1e-10);
    }
  }

  TEST_CASE("simulation warns about truncation and validity") {
    auto ctx = interaction::uniform_context(1, 0.5, 0.5, 1.0);
    auto s = compile({GateSpec::rotation(0, 1.0, 0.0)}, ctx);
    CHECK_FALSE(s.warnings.empty());
  }

  TEST_CASE("regime override") {
    auto ctx = ctx_for(2);
    auto s = compile({GateSpec::cnot(0, 1)}, ctx);
    auto in = basis_state({Level::kE, Level::kG}, 0, 4);
    auto exact = simulate_schedule(s, ctx, in, Regime::kExactLaguerre).state;
    // eta = 0.05: exact couplings shift the sideband areas only slightly
    CHECK(std::norm(exact[exact.index({Level::kE, Level::kE}, 0)]) > 0.99);
  }

  TEST_CASE("angles") {
    CHECK(*parse_angle("pi") == doctest::Approx(kPi));
    CHECK(*parse_angle("-pi/2") == doctest::Approx(-kPi / 2));
    CHECK(*parse_angle("3pi/4") == doctest::Approx(0.75 * kPi));
    CHECK(*parse_angle("0.5*pi") == doctest::Approx(kPi / 2));
    CHECK(*parse_angle("1.5708") == 1.5708);
    CHECK_FALSE(parse_angle("pie"));
    CHECK_FALSE(parse_angle(""));
  }

  TEST_CASE("circuit text") {
    auto c = parse_circuit("rot 1 1.5708 0\nncnot 1 2 3 4  # four ions\n\ncrot 1 2 pi/3 0\n"
                           "ccnot 1 2 3\nmonroe 2 1\nmonroe 3 1 1\nrcrot 1 2 0.4\n");
    REQUIRE(c.size() == 7);
    CHECK(c[0].kind == GateSpec::Kind::kRotation);
    CHECK(c[0].target == 0);
    CHECK(c[0].theta == 1.5708);
    CHECK(c[1].kind == GateSpec::Kind::kMultiCnot);
    CHECK(c[1].controls == std::vector<int>{0, 1, 2});
    CHECK(c[1].target == 3);
    CHECK(c[2].kind == GateSpec::Kind::kControlledR);
    CHECK(c[2].theta == doctest::Approx(kPi / 3));
    CHECK(c[4].kind == GateSpec::Kind::kMonroe);
    CHECK(c[5].controls == std::vector<int>{2});
    CHECK(c[5].target == 0);
    CHECK(circuit_ion_count(c) == 4);

    try {
      parse_circuit("cnot 1 2\ncnot 1 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(std::string(e.what()).find("repeated ion index") != std::string::npos);
    }
    try {
      parse_circuit("rot 1 1.2.3 0\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.column() == 7);
    }
    CHECK_THROWS_AS(parse_circuit("toffoli 1 2 3\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("cnot 1\n"), ParseError);
    CHECK_THROWS_AS(parse_circuit("cnot 0 1\n"), ParseError);
    CHECK(parse_circuit("# nothing\n").empty());
  }

  TEST_CASE("pulse programs re-parse to the same schedule") {
    auto ctx = ctx_for(3);
    auto s = compile(parse_circuit("ccnot 1 2 3\ncrot 1 3 0.3 0.2\n"), ctx);
    const std::string text = interaction::format_pulse_program(s.pulse_list());
    auto back = schedule_from_pulses(interaction::parse_pulse_program(text), ctx);
    REQUIRE(back.pulses.size() == s.pulses.size());
    for (size_t i = 0; i < s.pulses.size(); ++i) {
      CHECK(back.pulses[i].pulse == s.pulses[i].pulse);
      CHECK(back.pulses[i].duration == s.pulses[i].duration);
    }
    CHECK(interaction::format_pulse_program(back.pulse_list()) == text);
  }

  TEST_CASE("report json carries the seed") {
    auto ctx = ctx_for(2);
    auto j = schedule_report_json(compile({GateSpec::cnot(0, 1)}, ctx), 1234);
    CHECK(j.find("\"seed\": 1234") != std::string::npos);
  }
}
