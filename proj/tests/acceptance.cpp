/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file acceptance.cpp
  \brief End-to-end acceptance checks, one pass/fail line per criterion

  Criterion 1 drives the installed command line tool; the rest exercise the
  library directly. The process exits nonzero if any criterion fails.
*/

#include <ncv/decompose.hpp>
#include <ncv/discovery.hpp>
#include <ncv/io.hpp>
#include <ncv/level.hpp>
#include <ncv/optimizer.hpp>
#include <ncv/templates.hpp>
#include <ncv/unitary.hpp>

#include <json.hpp>

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ncv;

namespace {

#ifndef NCVOPT_TOOL
#define NCVOPT_TOOL "ncvopt"
#endif
#ifndef NCVOPT_DATA_DIR
#define NCVOPT_DATA_DIR "data"
#endif

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

const std::vector<circuit_template>& shipped_set() {
  static const auto set =
      load_templates(slurp(std::string(NCVOPT_DATA_DIR) +
                           "/templates_default.txt"));
  return set;
}

std::vector<circuit_template> inverse_seed() {
  std::vector<circuit_template> out;
  for (const auto& t : builtin_templates()) {
    if (t.size() == 2) {
      out.push_back(t);
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

/*! \brief Writes an n-line multi-control Toffoli (n-1 controls) padded with
 * n-3 extra lines, as the circuit text format. */
std::string mct_file_text(uint32_t n, const std::vector<uint32_t>& negs = {}) {
  std::ostringstream out;
  out << ".qubits " << 2 * n - 3 << "\n.begin\nt";
  for (uint32_t i = 0; i + 1 < n; ++i) {
    out << ' ';
    for (auto x : negs) {
      if (x == i) {
        out << '-';
      }
    }
    out << 'q' << i;
  }
  out << " q" << n - 1 << "\n.end\n";
  return out.str();
}

circuit mct_gate_circuit(uint32_t lines, uint32_t m,
                         const std::vector<uint32_t>& negs = {}) {
  circuit c(lines);
  std::vector<control_spec> cs;
  for (uint32_t i = 0; i < m; ++i) {
    bool neg = false;
    for (auto x : negs) {
      neg = neg || x == i;
    }
    cs.push_back({i, neg ? polarity::negative : polarity::positive});
  }
  c.add(gate::make_toffoli(cs, m));
  return c;
}

int run_tool(const std::string& args) {
  std::string cmd = std::string(NCVOPT_TOOL) + " " + args + " > /dev/null";
  return std::system(cmd.c_str());
}

struct outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) {
      detail += "; ";
    }
    detail += why;
  }
};

// criterion 1 side data consumed by criterion 9
std::vector<uint64_t> c1_raw, c1_opt;

outcome criterion1() {
  outcome o;
  std::string dir = "/tmp/ncvopt_acc_" + std::to_string(::getpid());
  std::system(("mkdir -p " + dir).c_str());
  for (uint32_t n = 4; n <= 12; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    std::string in = dir + "/mct" + std::to_string(n) + ".ncv";
    std::string rep = dir + "/rep.json";
    spit(in, mct_file_text(n));
    if (run_tool("decompose " + in + " -o " + dir + "/raw.ncv --report " +
                 rep) != 0) {
      o.fail("decompose failed at n=" + std::to_string(n));
      break;
    }
    auto jd = nlohmann::json::parse(slurp(rep));
    uint64_t raw = jd["output_gates"].get<uint64_t>();
    if (raw != 20ull * n - 60) {
      o.fail("raw gates at n=" + std::to_string(n) + ": got " +
             std::to_string(raw) + ", want " + std::to_string(20 * n - 60));
    }
    if (run_tool("optimize " + in + " -o " + dir + "/opt.ncv --report " +
                 rep) != 0) {
      o.fail("optimize failed at n=" + std::to_string(n));
      break;
    }
    auto jo = nlohmann::json::parse(slurp(rep));
    uint64_t opt = jo["output_gates"].get<uint64_t>();
    uint64_t depth = jo["output_depth"].get<uint64_t>();
    if (opt != 12ull * n - 34) {
      o.fail("optimized gates at n=" + std::to_string(n) + ": got " +
             std::to_string(opt) + ", want " + std::to_string(12 * n - 34) +
             " (residual " + std::to_string(opt - (12 * n - 34)) + ")");
    }
    if (depth != opt) {
      o.fail("depth != gate count at n=" + std::to_string(n));
    }
    if (seconds_since(t0) >= 10.0) {
      o.fail("slower than 10 s at n=" + std::to_string(n));
    }
    c1_raw.push_back(raw);
    c1_opt.push_back(opt);
  }
  std::system(("rm -rf " + dir).c_str());
  if (o.pass) {
    o.detail = "n=4..12: raw 20n-60, optimized 12n-34, depth = gate count";
  }
  return o;
}

outcome criterion2() {
  outcome o;
  circuit adder(4);
  for (const auto& g :
       {gate::make_v(1, 3), gate::make_cnot(0, 1), gate::make_vdag(1, 3),
        gate::make_v(0, 3), gate::make_v(2, 3), gate::make_cnot(1, 2),
        gate::make_vdag(2, 3), gate::make_v(1, 3)}) {
    adder.add(g);
  }
  auto t0 = std::chrono::steady_clock::now();
  circuit reduced = reduce_cost(adder, shipped_set());
  leveled_circuit lc = assign_levels(reduced, shipped_set());
  double dt = seconds_since(t0);
  if (reduced.size() != 6) {
    o.fail("optimized to " + std::to_string(reduced.size()) + " gates, want 6");
  }
  if (lc.depth != 4) {
    o.fail("compacted to " + std::to_string(lc.depth) + " levels, want 4");
  }
  if (!equivalent(adder, lc.scheduled)) {
    o.fail("oracle equivalence lost");
  }
  if (dt >= 0.1) {
    o.fail("took " + std::to_string(dt) + " s");
  }
  if (o.pass) {
    o.detail = "8 gates -> 6 gates -> 4 levels, exact, in " +
               std::to_string(dt) + " s";
  }
  return o;
}

outcome criterion3() {
  outcome o;
  circuit tof(3);
  tof.add(gate::make_toffoli(0, 1, 2));
  circuit five(3, toffoli_to_ncv(0, 1, 2));
  if (!(circuit_unitary(five) == circuit_unitary(tof))) {
    o.fail("5-gate circuit != Toffoli");
  }
  circuit negtof(3);
  negtof.add(gate::make_toffoli(
      {{0, polarity::positive}, {1, polarity::negative}}, 2));
  circuit negfive(3, neg_toffoli_to_ncv(0, 1, 2));
  if (!(circuit_unitary(negfive) == circuit_unitary(negtof))) {
    o.fail("negative-control 5-gate circuit != Toffoli-with-not-b");
  }
  if (o.pass) {
    o.detail = "both 5-gate realizations match the exact unitary";
  }
  return o;
}

outcome criterion4() {
  outcome o;
  const auto& set = shipped_set();
  // all injective maps of w template wires into 3 lines
  auto maps = [](uint32_t w) {
    std::vector<std::vector<uint32_t>> out;
    std::vector<uint32_t> cur;
    std::vector<bool> used(3, false);
    auto rec = [&](auto&& self) -> void {
      if (cur.size() == w) {
        out.push_back(cur);
        return;
      }
      for (uint32_t l = 0; l < 3; ++l) {
        if (!used[l]) {
          used[l] = true;
          cur.push_back(l);
          self(self);
          cur.pop_back();
          used[l] = false;
        }
      }
    };
    rec(rec);
    return out;
  };
  for (const auto& t : set) {
    for (uint32_t r = 0; r < t.size() && o.pass; ++r) {
      auto rot = rotate(t, r);
      for (const auto& w : maps(t.wire_count)) {
        for (bool v0_is_v : {true, false}) {
          circuit c(3, instantiate(rot, w, {v0_is_v}));
          if (!is_identity(c)) {
            o.fail("template " + t.name + " rotation " + std::to_string(r) +
                   " is not an identity");
            break;
          }
        }
      }
    }
    for (uint32_t p = 1; p <= t.size() && o.pass; ++p) {
      for (uint32_t j = 0; j < t.size(); ++j) {
        for (auto dir : {rule_direction::forward, rule_direction::backward}) {
          for (bool v0_is_v : {true, false}) {
            auto rule = derive_rule(t, p, j, dir,
                                    identity_wire_map(t.wire_count),
                                    {v0_is_v});
            circuit lhs(t.wire_count, rule.lhs);
            circuit rhs(t.wire_count, rule.rhs);
            if (!equivalent(lhs, rhs)) {
              o.fail("rule from " + t.name + " (p=" + std::to_string(p) +
                     ", j=" + std::to_string(j) + ") has unequal sides");
            }
          }
        }
      }
    }
  }
  if (o.pass) {
    o.detail = std::to_string(set.size()) +
               " templates: all rotations, wire maps and rules exact";
  }
  return o;
}

outcome criterion5() {
  outcome o;
  const auto& set = shipped_set();
  std::mt19937_64 rng(0x5eed5eedULL);
  for (int trial = 0; trial < 1000 && o.pass; ++trial) {
    uint32_t n = 2 + rng() % 3; // 2..4 lines
    uint32_t len = 1 + rng() % 30;
    circuit c(n);
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
    try {
      circuit r = reduce_cost(c, set);
      if (circuit_cost(r) > circuit_cost(c)) {
        o.fail("cost increased at trial " + std::to_string(trial));
      }
      leveled_circuit lc = assign_levels(r, set);
      if (!equivalent(c, lc.scheduled)) {
        o.fail("unitary changed at trial " + std::to_string(trial));
      }
    } catch (const std::exception& e) {
      o.fail("trial " + std::to_string(trial) + " threw: " + e.what());
    }
  }
  if (o.pass) {
    o.detail = "1000 random circuits: unitary preserved, cost monotone";
  }
  return o;
}

outcome criterion6() {
  outcome o;
  const auto& set = shipped_set();
  for (uint32_t n = 6; n <= 10; ++n) {
    // n-1 controls on n lines plus exactly one spare line
    circuit c = mct_gate_circuit(n + 1, n - 1);
    circuit low = expand_all(c, orientation_policy::alternate,
                             ancilla_mode::single);
    circuit red = reduce_cost(low, set);
    leveled_circuit lc = assign_levels(red, set);
    uint64_t bound = 24ull * n - 88;
    if (red.size() > bound) {
      o.fail("gates " + std::to_string(red.size()) + " > " +
             std::to_string(bound) + " at n=" + std::to_string(n));
    }
    if (lc.depth > bound) {
      o.fail("depth " + std::to_string(lc.depth) + " > " +
             std::to_string(bound) + " at n=" + std::to_string(n));
    }
    auto mode = c.line_count <= 10 ? equivalence_mode::dense
                                   : equivalence_mode::sampled;
    if (!equivalent(c, lc.scheduled, mode)) {
      o.fail("equivalence lost at n=" + std::to_string(n));
    }
  }
  if (o.pass) {
    o.detail = "n=6..10: optimized gate count and depth within 24n-88";
  }
  return o;
}

outcome criterion7() {
  outcome o;
  const auto& set = shipped_set();
  for (uint32_t n = 4; n <= 12; ++n) {
    uint32_t lines = 2 * n - 3;
    auto mode = lines <= 10 ? equivalence_mode::dense
                            : equivalence_mode::sampled;
    // some but not all controls negative
    {
      circuit c = mct_gate_circuit(lines, n - 1, {0});
      circuit red = reduce_cost(
          expand_all(c, orientation_policy::alternate), set);
      if (red.size() != 12ull * n - 34) {
        o.fail("some-negative gates at n=" + std::to_string(n) + ": got " +
               std::to_string(red.size()) + ", want " +
               std::to_string(12 * n - 34));
      }
      if (!equivalent(c, red, mode)) {
        o.fail("some-negative equivalence lost at n=" + std::to_string(n));
      }
    }
    // all controls negative
    {
      std::vector<uint32_t> all;
      for (uint32_t i = 0; i + 1 < n; ++i) {
        all.push_back(i);
      }
      circuit c = mct_gate_circuit(lines, n - 1, all);
      circuit red = reduce_cost(
          expand_all(c, orientation_policy::alternate), set);
      if (red.size() != 12ull * n - 34 + 2) {
        o.fail("all-negative gates at n=" + std::to_string(n) + ": got " +
               std::to_string(red.size()) + ", want " +
               std::to_string(12 * n - 34 + 2));
      }
      leveled_circuit lc = assign_levels(red, set);
      if (lc.depth != 12ull * n - 34) {
        o.fail("all-negative depth at n=" + std::to_string(n) + ": got " +
               std::to_string(lc.depth) + ", want " +
               std::to_string(12 * n - 34));
      }
      if (!equivalent(c, lc.scheduled, mode)) {
        o.fail("all-negative equivalence lost at n=" + std::to_string(n));
      }
    }
  }
  if (o.pass) {
    o.detail = "some-negative 12n-34 exactly; all-negative +2 gates, "
               "depth still 12n-34";
  }
  return o;
}

outcome criterion8() {
  outcome o;
  auto seed = inverse_seed();
  auto key_of = [](const std::string& name) {
    for (const auto& t : builtin_templates()) {
      if (t.name == name) {
        return canonicalize(t.gates);
      }
    }
    return std::string();
  };
  // the size-3 V-merge from the bare seed
  {
    search_spec spec;
    spec.size = 3;
    spec.wire_count = 2;
    spec.existing = seed;
    auto r = enumerate_identities(spec);
    if (r.templates.size() != 1 ||
        canonicalize(r.templates[0].gates) != key_of("vvc")) {
      o.fail("size-3 search missed the V-merge identity");
    }
  }
  // the full sweep: sizes 2..6 on 3 wires, timed
  auto t0 = std::chrono::steady_clock::now();
  auto all = discover_up_to(6, 3, seed);
  double dt = seconds_since(t0);
  if (!all.exhaustive) {
    o.fail("sweep not exhaustive");
  }
  if (dt >= 300.0) {
    o.fail("sweep took " + std::to_string(dt) + " s");
  }
  std::set<std::string> keys;
  for (const auto& t : all.templates) {
    keys.insert(canonicalize(t.gates));
  }
  if (!keys.count(key_of("vvc"))) {
    o.fail("sweep missed the V-merge identity");
  }
  if (!keys.count(key_of("xcxcx"))) {
    o.fail("sweep missed the size-5 NOT-exchange identity");
  }
  if (!keys.count(key_of("ccccc"))) {
    o.fail("sweep missed the size-5 CNOT identity");
  }
  // a second run over the discovered set finds nothing new
  auto enlarged = seed;
  for (const auto& t : all.templates) {
    enlarged.push_back(t);
  }
  auto again = discover_up_to(6, 3, enlarged);
  if (!again.templates.empty()) {
    o.fail("second run found " + std::to_string(again.templates.size()) +
           " unexpected templates");
  }
  if (o.pass) {
    o.detail = "found V-merge and both size-5 identities; rediscovery "
               "empty; sweep " + std::to_string(dt) + " s";
  }
  return o;
}

outcome criterion9() {
  outcome o;
  if (c1_raw.size() != 9 || c1_opt.size() != 9) {
    o.fail("criterion 1 data unavailable");
    return o;
  }
  double prev = 0.0;
  for (size_t i = 0; i < 9; ++i) {
    double ratio = double(c1_raw[i] - c1_opt[i]) / double(c1_raw[i]);
    if (ratio < prev) {
      o.fail("reduction ratio not monotone at n=" + std::to_string(i + 4));
    }
    if (ratio >= 0.40) {
      o.fail("ratio exceeds the asymptote at n=" + std::to_string(i + 4));
    }
    prev = ratio;
  }
  if (c1_raw[8] - c1_opt[8] != 70 || c1_raw[8] != 180) {
    o.fail("n=12 reduction is not 70/180");
  }
  if (o.pass) {
    o.detail = "ratio climbs monotonically to 70/180 ~ 0.389, below 0.40";
  }
  return o;
}

} // namespace

int main() {
  struct entry {
    int id;
    const char* title;
    outcome (*run)();
  };
  const entry entries[] = {
      {1, "multi-control Toffoli table: 20n-60 raw, 12n-34 optimized",
       criterion1},
      {2, "full adder: 8 gates -> 6 gates -> 4 levels", criterion2},
      {3, "5-gate Toffoli realizations are exact", criterion3},
      {4, "shipped template set soundness", criterion4},
      {5, "random-circuit preservation property", criterion5},
      {6, "single-ancilla bound 24n-88", criterion6},
      {7, "negative-control costs", criterion7},
      {8, "template discovery regression", criterion8},
      {9, "asymptotic 40% reduction", criterion9},
  };
  bool all = true;
  for (const auto& e : entries) {
    outcome o;
    try {
      o = e.run();
    } catch (const std::exception& ex) {
      o.pass = false;
      o.detail = std::string("exception: ") + ex.what();
    }
    all = all && o.pass;
    std::cout << "criterion " << e.id << ": " << (o.pass ? "PASS" : "FAIL")
              << " - " << e.title;
    if (!o.detail.empty()) {
      std::cout << " (" << o.detail << ")";
    }
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
