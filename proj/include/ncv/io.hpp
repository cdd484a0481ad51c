/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file io.hpp
  \brief Circuit text format, cost-model files and JSON reports

  Line-oriented circuit grammar: `.qubits N`, optional `.labels`,
  `.const l=0|1 ...`, `.garbage l ...`, gates between `.begin` and `.end`
  (`x`, `cx`, `v`, `v+`, `t`, `f`; `-` prefixes a negative control), `#`
  comments, `|` level separators. The writer emits a canonical form the
  parser round-trips byte-identically.
*/

#pragma once

#include "circuit.hpp"
#include "level.hpp"

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace ncv {

class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct token {
  std::string text;
  size_t col = 0; // 1-based
};

inline std::vector<token> tokenize_line(const std::string& line) {
  std::vector<token> out;
  size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '#') {
      break;
    }
    size_t start = i;
    while (i < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[i])) &&
           line[i] != '#') {
      ++i;
    }
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

[[noreturn]] inline void fail_at(size_t line_no, size_t col,
                                 const std::string& what) {
  throw parse_error("line " + std::to_string(line_no) + ", col " +
                    std::to_string(col) + ": " + what);
}

} // namespace detail

/*! \brief Parses the circuit grammar; errors carry line and column.
 *
 * `levels_out`, when given, receives one 1-based level per gate if the body
 * contains `|` separators, and stays empty otherwise. */
inline circuit parse_circuit(const std::string& text,
                             std::vector<uint32_t>* levels_out = nullptr) {
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;

  std::optional<circuit> c;
  std::map<std::string, uint32_t> by_label;
  bool in_body = false;
  bool body_done = false;
  bool has_separators = false;
  uint32_t level = 1;
  std::vector<uint32_t> levels;

  auto lookup = [&](const detail::token& t, bool* negative) -> uint32_t {
    std::string name = t.text;
    if (negative) {
      *negative = !name.empty() && name[0] == '-';
      if (*negative) {
        name = name.substr(1);
      }
    }
    auto it = by_label.find(name);
    if (it == by_label.end()) {
      detail::fail_at(line_no, t.col, "unknown line label '" + name + "'");
    }
    return it->second;
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) {
      continue;
    }
    const auto& head = toks[0];
    if (head.text == "|") {
      if (!in_body || toks.size() != 1) {
        detail::fail_at(line_no, head.col,
                        "'|' is only valid alone inside .begin/.end");
      }
      has_separators = true;
      ++level;
      continue;
    }
    if (head.text == ".qubits") {
      if (c) {
        detail::fail_at(line_no, head.col, "duplicate .qubits");
      }
      if (toks.size() != 2) {
        detail::fail_at(line_no, head.col, ".qubits takes one count");
      }
      uint32_t n = 0;
      try {
        size_t pos = 0;
        unsigned long v = std::stoul(toks[1].text, &pos);
        if (pos != toks[1].text.size() || v > 4096) {
          throw std::invalid_argument("");
        }
        n = static_cast<uint32_t>(v);
      } catch (const std::exception&) {
        detail::fail_at(line_no, toks[1].col, "bad qubit count");
      }
      c.emplace(n);
      for (uint32_t i = 0; i < n; ++i) {
        c->lines[i].label = "q" + std::to_string(i);
        by_label[c->lines[i].label] = i;
      }
      continue;
    }
    if (!c) {
      detail::fail_at(line_no, head.col, ".qubits must come first");
    }
    if (head.text == ".labels") {
      if (in_body || body_done) {
        detail::fail_at(line_no, head.col, ".labels after .begin");
      }
      if (toks.size() != c->line_count + 1) {
        detail::fail_at(line_no, head.col,
                        ".labels needs one label per line");
      }
      by_label.clear();
      for (uint32_t i = 0; i < c->line_count; ++i) {
        const auto& t = toks[i + 1];
        if (t.text[0] == '-' || t.text[0] == '.' || t.text == "|") {
          detail::fail_at(line_no, t.col, "invalid label '" + t.text + "'");
        }
        if (by_label.count(t.text)) {
          detail::fail_at(line_no, t.col, "duplicate label '" + t.text + "'");
        }
        c->lines[i].label = t.text;
        by_label[t.text] = i;
      }
      continue;
    }
    if (head.text == ".const") {
      for (size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].text.find('=');
        if (eq == std::string::npos || eq + 2 != toks[i].text.size() ||
            (toks[i].text[eq + 1] != '0' && toks[i].text[eq + 1] != '1')) {
          detail::fail_at(line_no, toks[i].col, ".const needs label=0|1");
        }
        detail::token lt{toks[i].text.substr(0, eq), toks[i].col};
        uint32_t l = lookup(lt, nullptr);
        c->lines[l].constant = toks[i].text[eq + 1] - '0';
      }
      continue;
    }
    if (head.text == ".garbage") {
      for (size_t i = 1; i < toks.size(); ++i) {
        c->lines[lookup(toks[i], nullptr)].garbage = true;
      }
      continue;
    }
    if (head.text == ".begin") {
      if (in_body || body_done) {
        detail::fail_at(line_no, head.col, "duplicate .begin");
      }
      in_body = true;
      continue;
    }
    if (head.text == ".end") {
      if (!in_body) {
        detail::fail_at(line_no, head.col, ".end without .begin");
      }
      in_body = false;
      body_done = true;
      continue;
    }
    if (head.text[0] == '.') {
      detail::fail_at(line_no, head.col,
                      "unknown directive '" + head.text + "'");
    }
    if (!in_body) {
      detail::fail_at(line_no, head.col, "gates belong between .begin/.end");
    }

    // gate line
    std::vector<control_spec> controls;
    std::vector<uint32_t> operands;
    auto read_control = [&](const detail::token& t) {
      bool neg = false;
      uint32_t l = lookup(t, &neg);
      controls.push_back(
          {l, neg ? polarity::negative : polarity::positive});
    };
    auto read_target = [&](const detail::token& t) {
      if (t.text[0] == '-') {
        detail::fail_at(line_no, t.col, "targets cannot be negated");
      }
      operands.push_back(lookup(t, nullptr));
    };
    gate g;
    if (head.text == "x") {
      if (toks.size() != 2) {
        detail::fail_at(line_no, head.col, "x takes one target");
      }
      read_target(toks[1]);
      g = gate::make_x(operands[0]);
    } else if (head.text == "cx") {
      if (toks.size() != 3) {
        detail::fail_at(line_no, head.col, "cx takes control and target");
      }
      read_control(toks[1]);
      read_target(toks[2]);
      if (controls[0].pol == polarity::negative) {
        detail::fail_at(line_no, toks[1].col,
                        "cx control must be positive (use t or x/v forms)");
      }
      g = gate::make_cnot(controls[0].line, operands[0]);
    } else if (head.text == "v" || head.text == "v+") {
      if (toks.size() != 2 && toks.size() != 3) {
        detail::fail_at(line_no, head.col,
                        head.text + " takes [control] target");
      }
      if (toks.size() == 3) {
        read_control(toks[1]);
        read_target(toks[2]);
      } else {
        read_target(toks[1]);
      }
      g.kind = head.text == "v" ? gate_kind::v : gate_kind::vdag;
      g.controls = controls;
      g.targets = operands;
    } else if (head.text == "t") {
      if (toks.size() < 4) {
        detail::fail_at(line_no, head.col,
                        "t takes at least two controls and a target");
      }
      for (size_t i = 1; i + 1 < toks.size(); ++i) {
        read_control(toks[i]);
      }
      read_target(toks.back());
      g = gate::make_toffoli(controls, operands[0]);
    } else if (head.text == "f") {
      if (toks.size() < 4) {
        detail::fail_at(line_no, head.col,
                        "f takes at least one control and two targets");
      }
      for (size_t i = 1; i + 2 < toks.size(); ++i) {
        read_control(toks[i]);
      }
      read_target(toks[toks.size() - 2]);
      read_target(toks.back());
      g = gate::make_fredkin(controls, operands[0], operands[1]);
    } else {
      detail::fail_at(line_no, head.col,
                      "unknown mnemonic '" + head.text + "'");
    }
    try {
      g.validate(c->line_count);
    } catch (const circuit_error& e) {
      detail::fail_at(line_no, head.col, e.what());
    }
    c->add(std::move(g));
    levels.push_back(level);
  }
  if (!c) {
    throw parse_error("missing .qubits directive");
  }
  if (in_body) {
    throw parse_error("line " + std::to_string(line_no) +
                      ": missing .end");
  }
  if (levels_out) {
    if (has_separators) {
      *levels_out = std::move(levels);
    } else {
      levels_out->clear();
    }
  }
  return *c;
}

namespace detail {

inline std::string gate_line(const gate& g, const circuit& c) {
  auto name = [&](uint32_t l) { return c.lines[l].label; };
  std::string s;
  switch (g.kind) {
  case gate_kind::x: s = "x"; break;
  case gate_kind::cnot: s = "cx"; break;
  case gate_kind::v: s = "v"; break;
  case gate_kind::vdag: s = "v+"; break;
  case gate_kind::toffoli: s = "t"; break;
  case gate_kind::fredkin: s = "f"; break;
  }
  for (const auto& cs : g.controls) {
    s += ' ';
    if (cs.pol == polarity::negative) {
      s += '-';
    }
    s += name(cs.line);
  }
  for (auto t : g.targets) {
    s += ' ';
    s += name(t);
  }
  return s;
}

} // namespace detail

/*! \brief Canonical text form; `levels` (per-gate, ascending) inserts a `|`
 * line between consecutive levels. */
inline std::string write_circuit(const circuit& c,
                                 const std::vector<uint32_t>* levels =
                                     nullptr) {
  std::string out = ".qubits " + std::to_string(c.line_count) + "\n";
  bool custom = false;
  for (uint32_t i = 0; i < c.line_count; ++i) {
    if (c.lines[i].label != "q" + std::to_string(i)) {
      custom = true;
    }
  }
  if (custom) {
    out += ".labels";
    for (const auto& l : c.lines) {
      out += ' ';
      out += l.label;
    }
    out += '\n';
  }
  std::string consts, garbage;
  for (const auto& l : c.lines) {
    if (l.constant) {
      consts += ' ' + l.label + '=' + std::to_string(*l.constant);
    }
    if (l.garbage) {
      garbage += ' ' + l.label;
    }
  }
  if (!consts.empty()) {
    out += ".const" + consts + "\n";
  }
  if (!garbage.empty()) {
    out += ".garbage" + garbage + "\n";
  }
  out += ".begin\n";
  for (size_t i = 0; i < c.gates.size(); ++i) {
    if (levels && i > 0 && (*levels)[i] != (*levels)[i - 1]) {
      out += "|\n";
    }
    out += detail::gate_line(c.gates[i], c) + "\n";
  }
  out += ".end\n";
  return out;
}

inline std::string write_circuit(const leveled_circuit& lc) {
  return write_circuit(lc.scheduled, &lc.level_of);
}

/*! \brief Cost-model file: lines `<mnemonic> <weight>`, weight decimal or
 * integer, turned into an exact rational; missing kinds keep weight 1. */
inline cost_model parse_cost_model(const std::string& text) {
  cost_model m;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto toks = detail::tokenize_line(line);
    if (toks.empty()) {
      continue;
    }
    if (toks.size() != 2) {
      detail::fail_at(line_no, toks[0].col,
                      "cost model lines are '<kind> <weight>'");
    }
    gate_kind k;
    const std::string& name = toks[0].text;
    if (name == "x") k = gate_kind::x;
    else if (name == "cx") k = gate_kind::cnot;
    else if (name == "v") k = gate_kind::v;
    else if (name == "v+") k = gate_kind::vdag;
    else if (name == "t") k = gate_kind::toffoli;
    else if (name == "f") k = gate_kind::fredkin;
    else detail::fail_at(line_no, toks[0].col, "unknown gate kind '" + name + "'");
    const std::string& w = toks[1].text;
    long long num = 0, den = 1;
    size_t i = 0;
    bool digits = false;
    for (; i < w.size() && std::isdigit(static_cast<unsigned char>(w[i])); ++i) {
      num = num * 10 + (w[i] - '0');
      digits = true;
    }
    if (i < w.size() && w[i] == '.') {
      for (++i; i < w.size() &&
                std::isdigit(static_cast<unsigned char>(w[i])); ++i) {
        num = num * 10 + (w[i] - '0');
        den *= 10;
        digits = true;
      }
    }
    if (!digits || i != w.size()) {
      detail::fail_at(line_no, toks[1].col, "bad weight '" + w + "'");
    }
    m.set_weight(k, rational(num, den));
  }
  return m;
}

/*! \brief Pipeline run summary serialized as JSON. */
struct report {
  uint64_t input_gates = 0;
  uint64_t output_gates = 0;
  std::string input_cost;  // exact rational, e.g. "7/2"
  std::string output_cost;
  uint32_t input_depth = 0;
  uint32_t output_depth = 0;
  std::map<std::string, uint64_t> histogram;
  std::vector<std::pair<std::string, uint64_t>> templates_applied;
  std::string strategy;
  double runtime_ms = 0.0;
  std::string verification; // "exact" | "sampled(k)" | "skipped"
  nlohmann::json flags = nlohmann::json::object();
};

inline std::string rational_string(const rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) {
    s += "/" + std::to_string(r.denominator());
  }
  return s;
}

inline std::map<std::string, uint64_t> gate_histogram(const circuit& c) {
  std::map<std::string, uint64_t> h;
  for (const auto& g : c.gates) {
    switch (g.kind) {
    case gate_kind::x: ++h["x"]; break;
    case gate_kind::cnot: ++h["cx"]; break;
    case gate_kind::v: ++h["v"]; break;
    case gate_kind::vdag: ++h["v+"]; break;
    case gate_kind::toffoli: ++h["t"]; break;
    case gate_kind::fredkin: ++h["f"]; break;
    }
  }
  return h;
}

inline nlohmann::json report_to_json(const report& r) {
  nlohmann::json j;
  j["input_gates"] = r.input_gates;
  j["output_gates"] = r.output_gates;
  j["input_cost"] = r.input_cost;
  j["output_cost"] = r.output_cost;
  j["input_depth"] = r.input_depth;
  j["output_depth"] = r.output_depth;
  j["histogram"] = r.histogram;
  nlohmann::json applied = nlohmann::json::object();
  for (const auto& [name, count] : r.templates_applied) {
    applied[name] = count;
  }
  j["templates_applied"] = applied;
  j["strategy"] = r.strategy;
  j["runtime_ms"] = r.runtime_ms;
  j["verification"] = r.verification;
  j["flags"] = r.flags;
  return j;
}

} // namespace ncv
