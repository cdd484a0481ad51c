/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file test_optimizer.cpp
  \brief Template matching, the cost-reduction driver and boundary passes
*/

#include <catch2/catch_amalgamated.hpp>

#include <ncv/optimizer.hpp>
#include <ncv/templates.hpp>
#include <ncv/unitary.hpp>

#include <random>

#include "helpers.hpp"

using namespace ncv;

SCENARIO("gate transport across commuting prefixes") {
  GIVEN("a circuit with a commuting gate in between") {
    circuit c(3);
    c.add(gate::make_cnot(0, 1)); // 0
    c.add(gate::make_x(2));       // 1, commutes with both neighbours
    c.add(gate::make_cnot(0, 1)); // 2
    THEN("the pair is gatherable") {
      REQUIRE(movable_to(c, 0, 2));
      REQUIRE(movable_to(c, 2, 0));
    }
  }
  GIVEN("a blocking gate in between") {
    circuit c(3);
    c.add(gate::make_cnot(0, 1));
    c.add(gate::make_cnot(1, 2)); // target 1 of the first feeds this control
    c.add(gate::make_cnot(0, 1));
    THEN("transport is refused") {
      REQUIRE_FALSE(movable_to(c, 0, 2));
    }
    THEN("out-of-range indices throw") {
      REQUIRE_THROWS_AS(movable_to(c, 0, 3), circuit_error);
    }
  }
}

SCENARIO("match_at finds and prices substitutions") {
  GIVEN("two adjacent equal CNOTs") {
    circuit c(2);
    c.add(gate::make_cnot(0, 1));
    c.add(gate::make_cnot(0, 1));
    auto ts = builtin_templates();
    THEN("the inverse-pair template matches with benefit 2") {
      bool found = false;
      for (const auto& t : ts) {
        auto m = match_at(c, 2, t);
        if (m && m->benefit == rational(2)) {
          found = true;
          REQUIRE(m->p == 2);
          REQUIRE(m->replacement.empty());
          circuit after = apply_match(c, *m);
          REQUIRE(after.empty());
        }
      }
      REQUIRE(found);
    }
  }
  GIVEN("a V V pair that merges into a CNOT") {
    circuit c(2);
    c.add(gate::make_v(0, 1));
    c.add(gate::make_v(0, 1));
    auto ts = builtin_templates();
    THEN("the three-gate template rewrites two gates into one") {
      bool found = false;
      for (const auto& t : ts) {
        auto m = match_at(c, 2, t);
        if (!m || t.name != "vvc") {
          continue;
        }
        found = true;
        REQUIRE(m->benefit == rational(1));
        circuit after = apply_match(c, *m);
        REQUIRE(after.size() == 1);
        REQUIRE(after.gates[0].kind == gate_kind::cnot);
        REQUIRE(equivalent(c, after));
      }
      REQUIRE(found);
    }
  }
  GIVEN("a pair separated by a commuting gate") {
    circuit c(3);
    c.add(gate::make_v(0, 1));
    c.add(gate::make_x(2));
    c.add(gate::make_vdag(0, 1));
    auto ts = builtin_templates();
    THEN("the match gathers across the gap and records the move") {
      std::optional<tmatch> best;
      for (const auto& t : ts) {
        auto m = match_at(c, 3, t);
        if (m && (!best || m->benefit > best->benefit)) {
          best = m;
        }
      }
      REQUIRE(best);
      REQUIRE(best->benefit == rational(2));
      REQUIRE_FALSE(best->moves.empty());
      circuit after = apply_match(c, *best);
      REQUIRE(after.size() == 1);
      REQUIRE(equivalent(c, after));
    }
  }
  GIVEN("a stale match") {
    circuit c(2);
    c.add(gate::make_cnot(0, 1));
    c.add(gate::make_cnot(0, 1));
    auto ts = builtin_templates();
    auto m = match_at(c, 2, ts[1]);
    THEN("apply_match rejects it after the circuit changed") {
      circuit changed = c;
      changed.add(gate::make_x(0));
      if (m) {
        REQUIRE_THROWS_AS(apply_match(changed, *m), circuit_error);
      }
    }
  }
}

SCENARIO("the cost-reduction driver") {
  GIVEN("the 8-gate full adder and the shipped set") {
    circuit adder = ncv::testing::full_adder();
    const auto& ts = ncv::testing::default_set();
    reduce_stats stats;
    circuit reduced = reduce_cost(adder, ts, {}, &stats);
    THEN("it reduces to 6 gates, unitary preserved") {
      REQUIRE(reduced.size() == 6);
      REQUIRE(equivalent(adder, reduced));
      REQUIRE(stats.substitutions >= 1);
    }
    THEN("the result is a fixpoint: reducing again changes nothing") {
      circuit again = reduce_cost(reduced, ts);
      REQUIRE(again.gates == reduced.gates);
    }
  }
  GIVEN("a non-NCV input") {
    circuit c(3);
    c.add(gate::make_toffoli(0, 1, 2));
    THEN("the driver refuses it") {
      REQUIRE_THROWS_AS(reduce_cost(c, builtin_templates()), circuit_error);
    }
  }
  GIVEN("a resumed scan via start_k") {
    circuit adder = ncv::testing::full_adder();
    const auto& ts = ncv::testing::default_set();
    circuit reduced = reduce_cost(adder, ts);
    circuit extended = reduced;
    extended.add(gate::make_v(1, 3));
    extended.add(gate::make_vdag(1, 3));
    THEN("resuming after the reduced prefix still cancels the tail") {
      circuit out = reduce_cost(extended, ts, {}, nullptr, reduced.size() + 1);
      REQUIRE(out.size() == reduced.size());
      REQUIRE(equivalent(extended, out));
    }
  }
  GIVEN("500 seeded random NCV circuits on up to 4 lines") {
    const auto& ts = ncv::testing::default_set();
    std::mt19937_64 rng(0x5eed0001ULL);
    THEN("reduction preserves the unitary and never raises the cost") {
      for (int trial = 0; trial < 500; ++trial) {
        uint32_t n = 2 + rng() % 3;
        circuit c(n);
        uint32_t len = 1 + rng() % 18;
        for (uint32_t i = 0; i < len; ++i) {
          uint32_t t = rng() % n;
          uint32_t ctl = rng() % n;
          switch (rng() % 4) {
          case 0: c.add(gate::make_x(t)); break;
          case 1:
            c.add(ctl == t ? gate::make_x(t) : gate::make_cnot(ctl, t));
            break;
          case 2:
            c.add(ctl == t ? gate::make_v(t) : gate::make_v(ctl, t));
            break;
          default:
            c.add(ctl == t ? gate::make_vdag(t) : gate::make_vdag(ctl, t));
            break;
          }
        }
        circuit r = reduce_cost(c, ts);
        REQUIRE(circuit_cost(r) <= circuit_cost(c));
        REQUIRE(equivalent(c, r));
      }
    }
  }
}

SCENARIO("template-set validation") {
  GIVEN("the builtin set") {
    THEN("it validates as identities plus irreducibility") {
      REQUIRE_NOTHROW(validate_template_set(builtin_templates()));
    }
  }
  GIVEN("a set containing a reducible template") {
    auto ts = builtin_templates();
    circuit_template quad;
    quad.name = "cccc";
    quad.wire_count = 2;
    template_gate c{template_gate_kind::cnot, 0, 1};
    quad.gates = {c, c, c, c};
    THEN("the doubled inverse pair is flagged as reducible") {
      REQUIRE(template_is_identity(quad));
      REQUIRE_FALSE(template_irreducible(quad, ts));
      ts.push_back(quad);
      REQUIRE_THROWS_WITH(validate_template_set(ts),
                          Catch::Matchers::ContainsSubstring("cccc"));
    }
  }
  GIVEN("the shipped default set") {
    THEN("it passes full validation") {
      REQUIRE_NOTHROW(validate_template_set(ncv::testing::default_set()));
    }
  }
}

SCENARIO("boundary simplification") {
  GIVEN("a control pinned to its satisfying constant") {
    circuit c(3);
    c.lines[0].constant = 1;
    c.add(gate::make_toffoli(0, 1, 2));
    circuit s = boundary_simplify(c);
    THEN("the control is stripped down to a CNOT") {
      REQUIRE(s.size() == 1);
      REQUIRE(s.gates[0] == gate::make_cnot(1, 2));
      REQUIRE(equivalent_observed(c, s));
    }
  }
  GIVEN("a control pinned to the blocking constant") {
    circuit c(3);
    c.lines[0].constant = 0;
    c.add(gate::make_toffoli(0, 1, 2));
    c.add(gate::make_cnot(1, 2));
    circuit s = boundary_simplify(c);
    THEN("the dead gate disappears") {
      REQUIRE(s.size() == 1);
      REQUIRE(equivalent_observed(c, s));
    }
  }
  GIVEN("an X that toggles a tracked constant") {
    circuit c(2);
    c.lines[0].constant = 0;
    c.add(gate::make_x(0));
    c.add(gate::make_cnot(0, 1)); // control now known 1
    circuit s = boundary_simplify(c);
    THEN("the downstream control is stripped too") {
      REQUIRE(s.gates.back() == gate::make_x(1));
      REQUIRE(equivalent_observed(c, s));
    }
  }
  GIVEN("trailing gates that only feed garbage outputs") {
    circuit c(3);
    c.lines[2].garbage = true;
    c.add(gate::make_cnot(0, 1));
    c.add(gate::make_v(0, 2));
    c.add(gate::make_x(2));
    circuit s = boundary_simplify(c);
    THEN("the dead tail is deleted") {
      REQUIRE(s.size() == 1);
      REQUIRE(s.gates[0] == gate::make_cnot(0, 1));
      REQUIRE(equivalent_observed(c, s));
    }
  }
  GIVEN("a garbage line that later feeds a live line") {
    circuit c(3);
    c.lines[2].garbage = true;
    c.add(gate::make_x(2));
    c.add(gate::make_cnot(2, 1));
    circuit s = boundary_simplify(c);
    THEN("the feeding gate survives") {
      REQUIRE(s.size() == 2);
      REQUIRE(equivalent_observed(c, s));
    }
  }
  GIVEN("no boundary declarations") {
    circuit c = ncv::testing::full_adder();
    THEN("the circuit is untouched") {
      REQUIRE(boundary_simplify(c).gates == c.gates);
    }
  }
}
