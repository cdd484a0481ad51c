/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file templates.hpp
  \brief Identity templates over abstract wires and rewriting-rule derivation

  A size-m template is a gate sequence realizing the exact identity; every
  rotation, wire map and V-polarity assignment of it yields rewriting rules.
  V-kind gates carry a polarity symbol V0/V1 instead of a concrete V/V†; the
  substitution is consistent and distinct for the two symbols.
*/

#pragma once

#include "circuit.hpp"
#include "unitary.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace ncv {

class template_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class template_gate_kind : uint8_t { x, cnot, v0, v1 };

struct template_gate {
  template_gate_kind kind;
  int control = -1; // -1 for X
  int target = 0;

  friend bool operator==(const template_gate&, const template_gate&) = default;
};

inline template_gate template_gate_inverse(const template_gate& g) {
  template_gate r = g;
  if (g.kind == template_gate_kind::v0) {
    r.kind = template_gate_kind::v1;
  } else if (g.kind == template_gate_kind::v1) {
    r.kind = template_gate_kind::v0;
  }
  return r;
}

/*! \brief Identity-realizing gate sequence over abstract wires w0..w(k-1). */
struct circuit_template {
  std::string name;
  uint32_t wire_count = 0;
  std::vector<template_gate> gates;

  uint32_t size() const { return static_cast<uint32_t>(gates.size()); }
};

/*! \brief V-polarity parameter: which concrete gate V0 denotes. */
struct v_assignment {
  bool v0_is_v = true;

  gate_kind concrete(template_gate_kind k) const {
    bool v0 = k == template_gate_kind::v0;
    return v0 == v0_is_v ? gate_kind::v : gate_kind::vdag;
  }
};

/*! \brief Substitutes concrete lines and V-polarities into one template gate. */
inline gate instantiate_gate(const template_gate& tg,
                             const std::vector<uint32_t>& wires,
                             v_assignment v = {}) {
  switch (tg.kind) {
  case template_gate_kind::x:
    return gate::make_x(wires[tg.target]);
  case template_gate_kind::cnot:
    return gate::make_cnot(wires[tg.control], wires[tg.target]);
  default: {
    auto k = v.concrete(tg.kind);
    gate g{k, {{wires[tg.control], polarity::positive}}, {wires[tg.target]}};
    return g;
  }
  }
}

/*! \brief Concrete gate list for a wire map and a V-polarity assignment.
 *
 * The wire map must be injective; the result is an exact identity whenever
 * the template is valid.
 */
inline std::vector<gate> instantiate(const circuit_template& t,
                                     const std::vector<uint32_t>& wires,
                                     v_assignment v = {}) {
  if (wires.size() < t.wire_count) {
    throw template_error("wire map too small for template " + t.name);
  }
  for (size_t i = 0; i < t.wire_count; ++i) {
    for (size_t j = i + 1; j < t.wire_count; ++j) {
      if (wires[i] == wires[j]) {
        throw template_error("wire map must be injective for template " + t.name);
      }
    }
  }
  std::vector<gate> gs;
  gs.reserve(t.gates.size());
  for (const auto& tg : t.gates) {
    gs.push_back(instantiate_gate(tg, wires, v));
  }
  return gs;
}

inline std::vector<uint32_t> identity_wire_map(uint32_t k) {
  std::vector<uint32_t> w(k);
  for (uint32_t i = 0; i < k; ++i) {
    w[i] = i;
  }
  return w;
}

/*! \brief Cyclic left rotation by r; the result still realizes the identity. */
inline circuit_template rotate(const circuit_template& t, uint32_t r) {
  if (r >= t.size() && !(r == 0 && t.gates.empty())) {
    if (r >= t.size()) {
      throw template_error("rotation out of range for template " + t.name);
    }
  }
  circuit_template out = t;
  std::rotate(out.gates.begin(), out.gates.begin() + r, out.gates.end());
  return out;
}

/*! \brief Checks that every instantiation simulates to the exact identity. */
inline bool template_is_identity(const circuit_template& t) {
  for (bool v0_is_v : {true, false}) {
    circuit c(t.wire_count,
              instantiate(t, identity_wire_map(t.wire_count), {v0_is_v}));
    if (!is_identity(c)) {
      return false;
    }
  }
  return true;
}

enum class rule_direction : uint8_t { forward, backward };

/*! \brief Concrete rewriting rule: replace the lhs gate subsequence by rhs. */
struct rewriting_rule {
  std::vector<gate> lhs;
  std::vector<gate> rhs;
  std::string template_name;
  rule_direction direction;
  uint32_t start = 0;  // j
  uint32_t length = 0; // p
};

/*! \brief Derives one rewriting rule from a template.
 *
 * Forward: the lhs is the block of p cyclically consecutive template gates
 * that matches a circuit segment C(k-p+1)..Ck with C(k-i) = G((j+i) mod m);
 * the rhs is the inverted remainder. Backward swaps the roles of a gate and
 * its inverse. Both sides are unitary-equal for every valid template.
 */
inline rewriting_rule derive_rule(const circuit_template& t, uint32_t p,
                                  uint32_t j, rule_direction dir,
                                  const std::vector<uint32_t>& wires,
                                  v_assignment v = {}) {
  const uint32_t m = t.size();
  if (j >= m || p == 0 || p > m) {
    throw template_error("rule parameters out of range for template " + t.name);
  }
  rewriting_rule rule;
  rule.template_name = t.name;
  rule.direction = dir;
  rule.start = j;
  rule.length = p;
  auto at = [&](uint32_t idx) { return t.gates[idx % m]; };
  if (dir == rule_direction::forward) {
    // lhs in circuit order: G(j+p-1) ... G(j); rhs: inv G(j+p) ... inv G(j+m-1)
    for (uint32_t i = 0; i < p; ++i) {
      rule.lhs.push_back(instantiate_gate(at(j + p - 1 - i + m), wires, v));
    }
    for (uint32_t i = 0; i < m - p; ++i) {
      rule.rhs.push_back(
          instantiate_gate(template_gate_inverse(at(j + p + i)), wires, v));
    }
  } else {
    // lhs in circuit order: inv G(j-p+1) ... inv G(j); rhs: G(j+m-p) ... G(j+1)
    for (uint32_t i = 0; i < p; ++i) {
      rule.lhs.push_back(
          instantiate_gate(template_gate_inverse(at(j + m - p + 1 + i)), wires, v));
    }
    for (uint32_t i = 0; i < m - p; ++i) {
      rule.rhs.push_back(instantiate_gate(at(j + m - p - i + m), wires, v));
    }
  }
  return rule;
}

inline rewriting_rule derive_rule(const circuit_template& t, uint32_t p,
                                  uint32_t j, rule_direction dir) {
  return derive_rule(t, p, j, dir, identity_wire_map(t.wire_count));
}

// ---------------------------------------------------------------------------
// serialization

inline std::string template_gate_line(const template_gate& g) {
  switch (g.kind) {
  case template_gate_kind::x:
    return "x w" + std::to_string(g.target);
  case template_gate_kind::cnot:
    return "c w" + std::to_string(g.control) + " w" + std::to_string(g.target);
  case template_gate_kind::v0:
    return "v0 w" + std::to_string(g.control) + " w" + std::to_string(g.target);
  case template_gate_kind::v1:
    return "v1 w" + std::to_string(g.control) + " w" + std::to_string(g.target);
  }
  return {};
}

inline std::string template_body(const circuit_template& t) {
  std::string s;
  for (const auto& g : t.gates) {
    s += template_gate_line(g);
    s += '\n';
  }
  return s;
}

/*! \brief The rotation with lexicographically least serialization; used as
 * the stored canonical form. */
inline circuit_template canonical_rotation(const circuit_template& t) {
  circuit_template best = t;
  std::string best_key = template_body(t);
  for (uint32_t r = 1; r < t.size(); ++r) {
    auto rot = rotate(t, r);
    auto key = template_body(rot);
    if (key < best_key) {
      best_key = std::move(key);
      best = std::move(rot);
    }
  }
  return best;
}

inline std::string save_templates(const std::vector<circuit_template>& ts) {
  std::string out;
  for (const auto& t : ts) {
    out += "template " + t.name + " wires=" + std::to_string(t.wire_count) + "\n";
    out += template_body(t);
    out += "\n";
  }
  return out;
}

namespace detail {

inline int parse_wire(const std::string& tok, uint32_t wire_count, size_t line_no) {
  if (tok.size() < 2 || tok[0] != 'w') {
    throw template_error("line " + std::to_string(line_no) +
                         ": expected wire token, got '" + tok + "'");
  }
  int w;
  try {
    w = std::stoi(tok.substr(1));
  } catch (...) {
    throw template_error("line " + std::to_string(line_no) + ": bad wire '" +
                         tok + "'");
  }
  if (w < 0 || static_cast<uint32_t>(w) >= wire_count) {
    throw template_error("line " + std::to_string(line_no) +
                         ": wire index out of range");
  }
  return w;
}

} // namespace detail

/*! \brief Parses the line-oriented template file format.
 *
 * Header `template <name> wires=<k>`, one gate per line (`x wi`, `c wi wj`,
 * `v0 wi wj`, `v1 wi wj`), blank line terminates a template, `#` starts a
 * comment. Every loaded template is re-validated against the oracle.
 */
inline std::vector<circuit_template> load_templates(const std::string& text) {
  std::vector<circuit_template> out;
  std::istringstream in(text);
  std::string raw;
  size_t line_no = 0;
  circuit_template cur;
  bool open = false;

  auto finish = [&]() {
    if (!open) {
      return;
    }
    if (cur.gates.empty()) {
      throw template_error("template " + cur.name + " has no gates");
    }
    if (!template_is_identity(cur)) {
      throw template_error("template " + cur.name +
                           " does not simulate to the identity");
    }
    out.push_back(cur);
    open = false;
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) {
      toks.push_back(tok);
    }
    if (toks.empty()) {
      finish();
      continue;
    }
    if (toks[0] == "template") {
      finish();
      if (toks.size() != 3 || toks[2].rfind("wires=", 0) != 0) {
        throw template_error("line " + std::to_string(line_no) +
                             ": malformed template header");
      }
      cur = {};
      cur.name = toks[1];
      try {
        cur.wire_count = std::stoul(toks[2].substr(6));
      } catch (...) {
        throw template_error("line " + std::to_string(line_no) +
                             ": bad wire count");
      }
      if (cur.wire_count == 0) {
        throw template_error("line " + std::to_string(line_no) +
                             ": wire count must be positive");
      }
      open = true;
      continue;
    }
    if (!open) {
      throw template_error("line " + std::to_string(line_no) +
                           ": gate outside template block");
    }
    template_gate g;
    if (toks[0] == "x" && toks.size() == 2) {
      g.kind = template_gate_kind::x;
      g.target = detail::parse_wire(toks[1], cur.wire_count, line_no);
    } else if ((toks[0] == "c" || toks[0] == "v0" || toks[0] == "v1") &&
               toks.size() == 3) {
      g.kind = toks[0] == "c" ? template_gate_kind::cnot
               : toks[0] == "v0" ? template_gate_kind::v0
                                 : template_gate_kind::v1;
      g.control = detail::parse_wire(toks[1], cur.wire_count, line_no);
      g.target = detail::parse_wire(toks[2], cur.wire_count, line_no);
      if (g.control == g.target) {
        throw template_error("line " + std::to_string(line_no) +
                             ": control equals target");
      }
    } else {
      throw template_error("line " + std::to_string(line_no) +
                           ": unknown gate '" + toks[0] + "'");
    }
    cur.gates.push_back(g);
  }
  finish();
  return out;
}

/*! \brief The template families derivable from gate-inverse and exchange
 * rules plus the size-5 identities; every entry is oracle-checked.
 *
 * Moving rules are deliberately not stored as templates; they live in
 * gates_commute.
 */
inline std::vector<circuit_template> builtin_templates() {
  const std::string text = R"(# builtin NCV templates
template inv_xx wires=1
x w0
x w0

template inv_cc wires=2
c w0 w1
c w0 w1

template inv_vv wires=2
v0 w0 w1
v1 w0 w1

template vvc wires=2
v0 w0 w1
v0 w0 w1
c w0 w1

template xcxcx wires=2
x w0
c w0 w1
x w0
c w0 w1
x w1

template ccccc wires=3
c w1 w2
c w0 w1
c w1 w2
c w0 w1
c w0 w2
)";
  return load_templates(text);
}

/*! \brief Sorts a template set by size, then name; the order used by the
 * cost-reduction driver. */
inline void sort_templates(std::vector<circuit_template>& ts) {
  std::stable_sort(ts.begin(), ts.end(),
                   [](const circuit_template& a, const circuit_template& b) {
                     if (a.size() != b.size()) {
                       return a.size() < b.size();
                     }
                     return a.name < b.name;
                   });
}

} // namespace ncv
