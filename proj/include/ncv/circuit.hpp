/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file circuit.hpp
  \brief Gate and circuit intermediate representation with gate algebra
*/

#pragma once

#include <boost/rational.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncv {

class circuit_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class gate_kind : uint8_t { x, cnot, v, vdag, toffoli, fredkin };

enum class polarity : uint8_t { positive, negative };

struct control_spec {
  uint32_t line;
  polarity pol = polarity::positive;

  friend bool operator==(const control_spec&, const control_spec&) = default;
};

/*! \brief One primitive operation: kind, control set with polarities, target(s).
 *
 * X has no controls, CNOT exactly one positive control, V/V† carry zero or
 * one control, TOFFOLI at least two controls (mixed polarity allowed) and
 * FREDKIN at least one control with exactly two targets.
 */
struct gate {
  gate_kind kind;
  std::vector<control_spec> controls;
  std::vector<uint32_t> targets;

  static gate make_x(uint32_t t) { return {gate_kind::x, {}, {t}}; }
  static gate make_cnot(uint32_t c, uint32_t t) {
    return {gate_kind::cnot, {{c, polarity::positive}}, {t}};
  }
  static gate make_v(uint32_t c, uint32_t t) {
    return {gate_kind::v, {{c, polarity::positive}}, {t}};
  }
  static gate make_vdag(uint32_t c, uint32_t t) {
    return {gate_kind::vdag, {{c, polarity::positive}}, {t}};
  }
  static gate make_v(uint32_t t) { return {gate_kind::v, {}, {t}}; }
  static gate make_vdag(uint32_t t) { return {gate_kind::vdag, {}, {t}}; }
  static gate make_toffoli(std::vector<control_spec> cs, uint32_t t) {
    return {gate_kind::toffoli, std::move(cs), {t}};
  }
  static gate make_toffoli(uint32_t c1, uint32_t c2, uint32_t t) {
    return {gate_kind::toffoli,
            {{c1, polarity::positive}, {c2, polarity::positive}},
            {t}};
  }
  static gate make_fredkin(std::vector<control_spec> cs, uint32_t t1, uint32_t t2) {
    return {gate_kind::fredkin, std::move(cs), {t1, t2}};
  }

  bool has_control_line(uint32_t line) const {
    return std::any_of(controls.begin(), controls.end(),
                       [line](const control_spec& c) { return c.line == line; });
  }

  bool has_target_line(uint32_t line) const {
    return std::find(targets.begin(), targets.end(), line) != targets.end();
  }

  bool touches(uint32_t line) const {
    return has_control_line(line) || has_target_line(line);
  }

  std::vector<uint32_t> lines() const {
    std::vector<uint32_t> ls;
    for (const auto& c : controls) {
      ls.push_back(c.line);
    }
    for (auto t : targets) {
      ls.push_back(t);
    }
    return ls;
  }

  bool is_ncv() const {
    switch (kind) {
    case gate_kind::x:
    case gate_kind::cnot:
    case gate_kind::v:
    case gate_kind::vdag:
      return true;
    default:
      return false;
    }
  }

  /*! \brief Checks the per-kind shape invariants against a line count. */
  void validate(uint32_t line_count) const {
    for (auto t : targets) {
      if (t >= line_count) {
        throw circuit_error("gate target out of range");
      }
    }
    for (const auto& c : controls) {
      if (c.line >= line_count) {
        throw circuit_error("gate control out of range");
      }
      if (has_target_line(c.line)) {
        throw circuit_error("gate control coincides with target");
      }
    }
    for (size_t i = 0; i < controls.size(); ++i) {
      for (size_t j = i + 1; j < controls.size(); ++j) {
        if (controls[i].line == controls[j].line) {
          throw circuit_error("duplicate control line");
        }
      }
    }
    switch (kind) {
    case gate_kind::x:
      if (!controls.empty() || targets.size() != 1) {
        throw circuit_error("X takes no controls and one target");
      }
      break;
    case gate_kind::cnot:
      if (controls.size() != 1 || controls[0].pol != polarity::positive ||
          targets.size() != 1) {
        throw circuit_error("CNOT takes one positive control and one target");
      }
      break;
    case gate_kind::v:
    case gate_kind::vdag:
      if (controls.size() > 1 || targets.size() != 1) {
        throw circuit_error("V takes at most one control and one target");
      }
      break;
    case gate_kind::toffoli:
      if (controls.size() < 2 || targets.size() != 1) {
        throw circuit_error("TOFFOLI takes at least two controls and one target");
      }
      break;
    case gate_kind::fredkin:
      if (controls.empty() || targets.size() != 2 || targets[0] == targets[1]) {
        throw circuit_error("FREDKIN takes at least one control and two targets");
      }
      break;
    }
  }

  friend bool operator==(const gate&, const gate&) = default;
};

struct line_attr {
  std::optional<int> constant;
  bool garbage = false;
  std::string label;

  friend bool operator==(const line_attr&, const line_attr&) = default;
};

/*! \brief An ordered gate sequence over a fixed number of lines.
 *
 * Gate order is the sole encoding of time; index 0 holds the leftmost gate,
 * applied first.
 */
struct circuit {
  uint32_t line_count = 0;
  std::vector<gate> gates;
  std::vector<line_attr> lines;

  circuit() = default;
  explicit circuit(uint32_t n) : line_count(n), lines(n) {}
  circuit(uint32_t n, std::vector<gate> gs)
      : line_count(n), gates(std::move(gs)), lines(n) {}

  void add(gate g) { gates.push_back(std::move(g)); }
  size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }

  bool is_ncv() const {
    return std::all_of(gates.begin(), gates.end(),
                       [](const gate& g) { return g.is_ncv(); });
  }

  void validate() const {
    for (const auto& g : gates) {
      g.validate(line_count);
    }
    if (lines.size() != line_count) {
      throw circuit_error("line attribute table size mismatch");
    }
  }
};

using rational = boost::rational<long long>;

/*! \brief Per-gate-kind nonnegative weights; the default model counts gates. */
struct cost_model {
  rational weight_x{1};
  rational weight_cnot{1};
  rational weight_v{1};
  rational weight_vdag{1};
  rational weight_toffoli{1};
  rational weight_fredkin{1};
  bool depth_mode = false;

  const rational& weight(gate_kind k) const {
    switch (k) {
    case gate_kind::x: return weight_x;
    case gate_kind::cnot: return weight_cnot;
    case gate_kind::v: return weight_v;
    case gate_kind::vdag: return weight_vdag;
    case gate_kind::toffoli: return weight_toffoli;
    case gate_kind::fredkin: return weight_fredkin;
    }
    return weight_x;
  }

  void set_weight(gate_kind k, rational w) {
    if (w < 0) {
      throw circuit_error("gate weights must be nonnegative");
    }
    switch (k) {
    case gate_kind::x: weight_x = w; break;
    case gate_kind::cnot: weight_cnot = w; break;
    case gate_kind::v: weight_v = w; break;
    case gate_kind::vdag: weight_vdag = w; break;
    case gate_kind::toffoli: weight_toffoli = w; break;
    case gate_kind::fredkin: weight_fredkin = w; break;
    }
  }
};

/*! \brief Returns g^-1: X, CNOT, TOFFOLI and FREDKIN are self-inverse,
 * V and V† swap kinds with controls and targets unchanged. */
inline gate gate_inverse(const gate& g) {
  gate r = g;
  if (g.kind == gate_kind::v) {
    r.kind = gate_kind::vdag;
  } else if (g.kind == gate_kind::vdag) {
    r.kind = gate_kind::v;
  }
  return r;
}

/*! \brief Inverse circuit: reversed order with every gate inverted. */
inline circuit circuit_inverse(const circuit& c) {
  circuit r = c;
  r.gates.clear();
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    r.gates.push_back(gate_inverse(*it));
  }
  return r;
}

namespace detail {

inline bool target_hits_control(const gate& a, const gate& b) {
  return std::any_of(a.targets.begin(), a.targets.end(),
                     [&b](uint32_t t) { return b.has_control_line(t); });
}

} // namespace detail

/*! \brief The moving rule: two gates commute when neither one's target lies
 * in the other's control set (polarity ignored).
 *
 * All NCV / Toffoli target operators are powers of X, so the condition is
 * sound for them. A FREDKIN target is a swap, which does not commute with
 * another gate on a shared target line; pairs involving FREDKIN therefore
 * additionally require shared lines to be controls in both gates, unless
 * both gates swap the identical target pair.
 */
inline bool gates_commute(const gate& a, const gate& b) {
  if (detail::target_hits_control(a, b) || detail::target_hits_control(b, a)) {
    return false;
  }
  if (a.kind == gate_kind::fredkin || b.kind == gate_kind::fredkin) {
    if (a.kind == gate_kind::fredkin && b.kind == gate_kind::fredkin) {
      bool same_pair = (a.targets[0] == b.targets[0] && a.targets[1] == b.targets[1]) ||
                       (a.targets[0] == b.targets[1] && a.targets[1] == b.targets[0]);
      if (same_pair) {
        return true;
      }
    }
    for (auto t : a.targets) {
      if (b.has_target_line(t)) {
        return false;
      }
    }
  }
  return true;
}

/*! \brief Sum of per-gate weights under the model (gate count by default). */
inline rational circuit_cost(const circuit& c, const cost_model& m = {}) {
  rational total{0};
  for (const auto& g : c.gates) {
    total += m.weight(g.kind);
  }
  return total;
}

inline rational gates_cost(const std::vector<gate>& gs, const cost_model& m) {
  rational total{0};
  for (const auto& g : gs) {
    total += m.weight(g.kind);
  }
  return total;
}

/*! \brief Greedy as-soon-as-possible level count without any reordering:
 * each gate joins the level after the latest level touching one of its lines. */
inline uint32_t naive_depth(const circuit& c) {
  std::vector<uint32_t> line_level(c.line_count, 0);
  uint32_t depth = 0;
  for (const auto& g : c.gates) {
    uint32_t lvl = 0;
    for (auto l : g.lines()) {
      lvl = std::max(lvl, line_level[l]);
    }
    ++lvl;
    for (auto l : g.lines()) {
      line_level[l] = lvl;
    }
    depth = std::max(depth, lvl);
  }
  return depth;
}

} // namespace ncv
