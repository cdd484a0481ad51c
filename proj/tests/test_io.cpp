/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file test_io.cpp
  \brief Circuit grammar, cost-model files and JSON reports
*/

#include <catch2/catch_amalgamated.hpp>

#include <ncv/io.hpp>
#include <ncv/level.hpp>

#include "helpers.hpp"

using namespace ncv;

SCENARIO("parsing the circuit grammar") {
  GIVEN("a full-featured circuit file") {
    const std::string text = ".qubits 4\n"
                             ".labels a b c d\n"
                             ".const d=0\n"
                             ".garbage c\n"
                             ".begin\n"
                             "v b d\n"
                             "cx a b\n"
                             "v+ b d\n"
                             "t a -b d\n"
                             "f a c d\n"
                             "x d\n"
                             ".end\n";
    circuit c = parse_circuit(text);
    THEN("lines, labels and attributes are read") {
      REQUIRE(c.line_count == 4);
      REQUIRE(c.lines[0].label == "a");
      REQUIRE(c.lines[3].constant == 0);
      REQUIRE(c.lines[2].garbage);
      REQUIRE_FALSE(c.lines[1].garbage);
    }
    THEN("gates carry kinds, polarities and operands") {
      REQUIRE(c.size() == 6);
      REQUIRE(c.gates[0].kind == gate_kind::v);
      REQUIRE(c.gates[1] == gate::make_cnot(0, 1));
      REQUIRE(c.gates[2].kind == gate_kind::vdag);
      REQUIRE(c.gates[3].controls[1].pol == polarity::negative);
      REQUIRE(c.gates[4].kind == gate_kind::fredkin);
      REQUIRE(c.gates[5] == gate::make_x(3));
    }
    THEN("the canonical writer round-trips byte-identically") {
      REQUIRE(write_circuit(c) == text);
      REQUIRE(write_circuit(parse_circuit(write_circuit(c))) ==
              write_circuit(c));
    }
  }
  GIVEN("default labels") {
    circuit c = parse_circuit(".qubits 2\n.begin\ncx q0 q1\n.end\n");
    THEN("lines are named q0, q1, ... and no .labels is emitted") {
      REQUIRE(c.lines[0].label == "q0");
      REQUIRE(write_circuit(c).find(".labels") == std::string::npos);
    }
  }
  GIVEN("level separators in the body") {
    const std::string text = ".qubits 4\n"
                             ".begin\n"
                             "v q1 q3\n"
                             "|\n"
                             "cx q0 q1\n"
                             "v q2 q3\n"
                             "|\n"
                             "x q0\n"
                             ".end\n";
    std::vector<uint32_t> levels;
    circuit c = parse_circuit(text, &levels);
    THEN("per-gate levels are reported") {
      REQUIRE(levels == std::vector<uint32_t>{1, 2, 2, 3});
    }
    THEN("the leveled writer reproduces the separators") {
      REQUIRE(write_circuit(c, &levels) == text);
    }
    THEN("a separator-free file reports no levels") {
      std::vector<uint32_t> none{9};
      parse_circuit(".qubits 1\n.begin\nx q0\n.end\n", &none);
      REQUIRE(none.empty());
    }
  }
  GIVEN("comments and blank lines") {
    const std::string text = "# header\n"
                             ".qubits 2 # two lines\n"
                             "\n"
                             ".begin\n"
                             "x q0 # flip\n"
                             ".end\n";
    THEN("they are ignored") {
      REQUIRE(parse_circuit(text).size() == 1);
    }
  }
}

SCENARIO("parse errors carry line and column") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    REQUIRE_THROWS_WITH(parse_circuit(text),
                        Catch::Matchers::ContainsSubstring(needle));
  };
  GIVEN("assorted malformed files") {
    THEN("the diagnostics point at the problem") {
      fails_with("x q0\n", ".qubits must come first");
      fails_with(".qubits 2\ncx q0 q1\n", "line 2, col 1");
      fails_with(".qubits 2\n.begin\ncz q0 q1\n.end\n",
                 "unknown mnemonic 'cz'");
      fails_with(".qubits 2\n.begin\ncx -q0 q1\n.end\n",
                 "cx control must be positive");
      fails_with(".qubits 2\n.begin\nx zz\n.end\n",
                 "unknown line label 'zz'");
      fails_with(".qubits 2\n.begin\nt q0 q0 q1\n.end\n",
                 "duplicate control line");
      fails_with(".qubits 2\n.begin\nv q0 -q1\n.end\n",
                 "targets cannot be negated");
      fails_with(".qubits 2\n.begin\nx q0\n", "missing .end");
      fails_with(".qubits two\n", "line 1, col 9: bad qubit count");
      fails_with(".qubits 2\n.bogus\n", "unknown directive");
      fails_with(".qubits 2\n.const q0=2\n", ".const needs label=0|1");
      fails_with(".qubits 2\n.labels a\n", "one label per line");
      fails_with("", "missing .qubits");
      fails_with(".qubits 2\n.begin\n.begin\n", "duplicate .begin");
      fails_with(".qubits 2\n|\n", "only valid alone inside");
    }
  }
}

SCENARIO("cost-model files") {
  GIVEN("decimal and integer weights") {
    cost_model m = parse_cost_model("v 0.5\nv+ 0.5\ncx 1\nt 5\n# note\n");
    THEN("weights become exact rationals") {
      REQUIRE(m.weight(gate_kind::v) == rational(1, 2));
      REQUIRE(m.weight(gate_kind::vdag) == rational(1, 2));
      REQUIRE(m.weight(gate_kind::toffoli) == rational(5));
      // unmentioned kinds keep the default
      REQUIRE(m.weight(gate_kind::x) == rational(1));
    }
  }
  GIVEN("malformed model lines") {
    THEN("they are rejected with positions") {
      REQUIRE_THROWS_WITH(parse_cost_model("q 1\n"),
                          Catch::Matchers::ContainsSubstring("unknown gate"));
      REQUIRE_THROWS_WITH(parse_cost_model("v abc\n"),
                          Catch::Matchers::ContainsSubstring("bad weight"));
      REQUIRE_THROWS_WITH(parse_cost_model("v\n"),
                          Catch::Matchers::ContainsSubstring("line 1"));
    }
  }
}

SCENARIO("JSON reports") {
  GIVEN("a populated report") {
    report r;
    r.input_gates = 8;
    r.output_gates = 6;
    r.input_cost = "8";
    r.output_cost = "6";
    r.input_depth = 8;
    r.output_depth = 4;
    r.histogram = {{"v", 3}, {"cx", 2}, {"v+", 1}};
    r.templates_applied = {{"vvc", 2}};
    r.strategy = "alternate";
    r.runtime_ms = 1.25;
    r.verification = "exact";
    r.flags["compact"] = true;
    auto j = report_to_json(r);
    THEN("all fields serialize under stable keys") {
      REQUIRE(j["input_gates"] == 8);
      REQUIRE(j["output_gates"] == 6);
      REQUIRE(j["output_depth"] == 4);
      REQUIRE(j["histogram"]["v"] == 3);
      REQUIRE(j["templates_applied"]["vvc"] == 2);
      REQUIRE(j["strategy"] == "alternate");
      REQUIRE(j["verification"] == "exact");
      REQUIRE(j["flags"]["compact"] == true);
    }
    THEN("the dump parses back") {
      auto back = nlohmann::json::parse(j.dump(2));
      REQUIRE(back == j);
    }
  }
  GIVEN("helper formatting") {
    THEN("rationals print as n or n/d") {
      REQUIRE(rational_string(rational(7)) == "7");
      REQUIRE(rational_string(rational(7, 2)) == "7/2");
    }
    THEN("the histogram counts kinds by mnemonic") {
      circuit c = ncv::testing::full_adder();
      auto h = gate_histogram(c);
      REQUIRE(h["v"] == 4);
      REQUIRE(h["v+"] == 2);
      REQUIRE(h["cx"] == 2);
    }
  }
}
