/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file optimizer.hpp
  \brief Template-driven cost reduction with moving-rule gathering

  Implements per-position template matching (forward and backward), the
  benefit-gated substitution driver with the cost-retaining Flag mechanism,
  boundary simplification against constant inputs and garbage outputs, and
  template-set validation (identity plus irreducibility).
*/

#pragma once

#include "circuit.hpp"
#include "templates.hpp"
#include "unitary.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace ncv {

/*! \brief True iff the gate at `from` commutes pairwise with every gate
 * strictly between `from` and `to`; transport is then a sequence of adjacent
 * transpositions. */
inline bool movable_to(const circuit& c, size_t from, size_t to) {
  if (from >= c.size() || to >= c.size()) {
    throw circuit_error("movable_to: index out of range");
  }
  size_t lo = std::min(from, to);
  size_t hi = std::max(from, to);
  for (size_t i = lo + 1; i < hi; ++i) {
    if (!gates_commute(c.gates[from], c.gates[i])) {
      return false;
    }
  }
  return true;
}

/*! \brief A template match found at a start gate, ready to apply. */
struct tmatch {
  std::string template_name;
  rule_direction direction = rule_direction::forward;
  uint32_t j = 0; //!< template start index
  uint32_t p = 0; //!< matched length
  uint32_t m = 0; //!< template size
  std::vector<uint32_t> wire_map;
  v_assignment v;
  //! adjacent-transposition transports (from -> to) gathering the match
  std::vector<std::pair<size_t, size_t>> moves;
  //! original positions of the p matched circuit gates
  std::vector<size_t> matched_positions;
  std::vector<gate> matched_gates;
  std::vector<gate> replacement;
  rational benefit{0};
  size_t block_start = 0; //!< leftmost matched index after the moves
  size_t anchor = 0;      //!< 0-based index of the start gate C_k
  std::vector<gate> snapshot;
};

struct match_options {
  //! restrict to even-size templates with p == m/2 (level compaction mode)
  bool even_half_only = false;
  //! bound on search nodes per (template, direction, start index)
  uint32_t node_budget = 20000;
};

namespace detail {

struct match_search {
  const circuit& circ;
  const circuit_template& tpl;
  const cost_model& model;
  const match_options& opts;
  size_t anchor; // 0-based
  rule_direction dir;
  uint32_t j;

  std::vector<gate> scratch;
  std::vector<size_t> orig;
  std::vector<int> sigma;        // template wire -> line, -1 unset
  std::vector<bool> line_used;   // injectivity
  int v_state = -1;              // -1 unset, 1 v0->V, 0 v0->Vdag
  std::vector<std::pair<size_t, size_t>> moves;
  std::vector<size_t> matched;   // original positions, anchor first
  uint32_t nodes = 0;

  std::optional<tmatch> best;

  match_search(const circuit& c, const circuit_template& t,
               const cost_model& cm, const match_options& o, size_t a,
               rule_direction d, uint32_t start)
      : circ(c), tpl(t), model(cm), opts(o), anchor(a), dir(d), j(start),
        scratch(c.gates), sigma(t.wire_count, -1),
        line_used(c.line_count, false) {
    orig.resize(scratch.size());
    for (size_t i = 0; i < orig.size(); ++i) {
      orig[i] = i;
    }
  }

  const template_gate slot_gate(uint32_t slot) const {
    uint32_t m = tpl.size();
    uint32_t idx = dir == rule_direction::forward ? (j + slot) % m
                                                  : (j + m - slot % m) % m;
    template_gate g = tpl.gates[idx];
    return dir == rule_direction::forward ? g : template_gate_inverse(g);
  }

  // Tries to unify one template gate with a concrete gate; records the
  // sigma/v extensions performed so they can be undone on backtrack.
  bool unify(const template_gate& tg, const gate& g,
             std::vector<uint32_t>& bound_wires, bool& bound_v) {
    bound_wires.clear();
    bound_v = false;
    auto bind = [&](int wire, uint32_t line) {
      if (sigma[wire] >= 0) {
        return static_cast<uint32_t>(sigma[wire]) == line;
      }
      if (line_used[line]) {
        return false;
      }
      sigma[wire] = static_cast<int>(line);
      line_used[line] = true;
      bound_wires.push_back(static_cast<uint32_t>(wire));
      return true;
    };
    auto undo = [&]() {
      for (auto w : bound_wires) {
        line_used[static_cast<size_t>(sigma[w])] = false;
        sigma[w] = -1;
      }
      bound_wires.clear();
      if (bound_v) {
        v_state = -1;
        bound_v = false;
      }
    };
    switch (tg.kind) {
    case template_gate_kind::x:
      if (g.kind != gate_kind::x) {
        return false;
      }
      if (!bind(tg.target, g.targets[0])) {
        undo();
        return false;
      }
      return true;
    case template_gate_kind::cnot:
      if (g.kind != gate_kind::cnot) {
        return false;
      }
      if (!bind(tg.control, g.controls[0].line) ||
          !bind(tg.target, g.targets[0])) {
        undo();
        return false;
      }
      return true;
    case template_gate_kind::v0:
    case template_gate_kind::v1: {
      if ((g.kind != gate_kind::v && g.kind != gate_kind::vdag) ||
          g.controls.size() != 1) {
        return false;
      }
      bool want_v0_is_v;
      if (tg.kind == template_gate_kind::v0) {
        want_v0_is_v = g.kind == gate_kind::v;
      } else {
        want_v0_is_v = g.kind == gate_kind::vdag;
      }
      if (v_state >= 0) {
        if ((v_state == 1) != want_v0_is_v) {
          return false;
        }
      } else {
        v_state = want_v0_is_v ? 1 : 0;
        bound_v = true;
      }
      if (!bind(tg.control, g.controls[0].line) ||
          !bind(tg.target, g.targets[0])) {
        if (bound_v) {
          v_state = -1;
          bound_v = false;
        }
        undo();
        return false;
      }
      return true;
    }
    }
    return false;
  }

  void undo_bindings(const std::vector<uint32_t>& bound_wires, bool bound_v) {
    for (auto w : bound_wires) {
      line_used[static_cast<size_t>(sigma[w])] = false;
      sigma[w] = -1;
    }
    if (bound_v) {
      v_state = -1;
    }
  }

  // Completes sigma over the wires the replacement needs; returns false if
  // there are not enough unused lines.
  bool complete_sigma(std::vector<uint32_t>& map_out,
                      const std::vector<uint32_t>& needed) const {
    std::vector<int> sig = sigma;
    std::vector<bool> used = line_used;
    for (auto w : needed) {
      if (sig[w] >= 0) {
        continue;
      }
      uint32_t line = 0;
      while (line < circ.line_count && used[line]) {
        ++line;
      }
      if (line == circ.line_count) {
        return false;
      }
      sig[w] = static_cast<int>(line);
      used[line] = true;
    }
    map_out.assign(tpl.wire_count, 0);
    for (uint32_t w = 0; w < tpl.wire_count; ++w) {
      map_out[w] = sig[w] < 0 ? 0 : static_cast<uint32_t>(sig[w]);
    }
    return true;
  }

  void consider(size_t block_start) {
    uint32_t p = static_cast<uint32_t>(matched.size());
    uint32_t m = tpl.size();
    if (opts.even_half_only && (m % 2 != 0 || p != m / 2)) {
      return;
    }
    // replacement template gates and the wires they need
    std::vector<template_gate> repl;
    std::vector<uint32_t> needed;
    for (uint32_t i = 0; i < m - p; ++i) {
      uint32_t idx = dir == rule_direction::forward
                         ? (j + p + i) % m
                         : (j + m - p - i + m) % m;
      template_gate tg = tpl.gates[idx];
      if (dir == rule_direction::forward) {
        tg = template_gate_inverse(tg);
      }
      repl.push_back(tg);
      needed.push_back(static_cast<uint32_t>(tg.target));
      if (tg.control >= 0) {
        needed.push_back(static_cast<uint32_t>(tg.control));
      }
    }
    std::vector<uint32_t> wires;
    if (!complete_sigma(wires, needed)) {
      return;
    }
    v_assignment v{v_state != 0};
    std::vector<gate> replacement;
    for (const auto& tg : repl) {
      replacement.push_back(instantiate_gate(tg, wires, v));
    }
    std::vector<gate> matched_gates(scratch.begin() +
                                        static_cast<long>(block_start),
                                    scratch.begin() +
                                        static_cast<long>(anchor) + 1);
    rational benefit =
        gates_cost(matched_gates, model) - gates_cost(replacement, model);
    if (benefit < 0) {
      return;
    }
    // a substitution must change something: skip identical rewrites
    if (benefit.numerator() == 0 && moves.empty() &&
        replacement == matched_gates) {
      return;
    }
    bool better = false;
    if (!best) {
      better = true;
    } else if (benefit != best->benefit) {
      better = benefit > best->benefit;
    } else if (p != best->p) {
      better = p > best->p;
    }
    if (!better) {
      return;
    }
    tmatch mm;
    mm.template_name = tpl.name;
    mm.direction = dir;
    mm.j = j;
    mm.p = p;
    mm.m = m;
    mm.wire_map = std::move(wires);
    mm.v = v;
    mm.moves = moves;
    mm.matched_positions = matched;
    mm.matched_gates = std::move(matched_gates);
    mm.replacement = std::move(replacement);
    mm.benefit = benefit;
    mm.block_start = block_start;
    mm.anchor = anchor;
    mm.snapshot = circ.gates;
    best = std::move(mm);
  }

  void dfs(size_t block_start, uint32_t slot) {
    if (++nodes > opts.node_budget) {
      return;
    }
    consider(block_start);
    if (slot >= tpl.size()) {
      return;
    }
    const template_gate want = slot_gate(slot);
    for (size_t q = block_start; q-- > 0;) {
      // the candidate must commute with everything it crosses
      bool transportable = true;
      for (size_t x = q + 1; x < block_start && transportable; ++x) {
        transportable = gates_commute(scratch[q], scratch[x]);
      }
      if (!transportable) {
        continue;
      }
      std::vector<uint32_t> bound_wires;
      bool bound_v = false;
      if (!unify(want, scratch[q], bound_wires, bound_v)) {
        continue;
      }
      // transport scratch[q] to block_start - 1
      gate moved = scratch[q];
      size_t moved_orig = orig[q];
      scratch.erase(scratch.begin() + static_cast<long>(q));
      scratch.insert(scratch.begin() + static_cast<long>(block_start) - 1,
                     moved);
      orig.erase(orig.begin() + static_cast<long>(q));
      orig.insert(orig.begin() + static_cast<long>(block_start) - 1,
                  moved_orig);
      moves.emplace_back(q, block_start - 1);
      matched.push_back(moved_orig);

      dfs(block_start - 1, slot + 1);

      matched.pop_back();
      moves.pop_back();
      scratch.erase(scratch.begin() + static_cast<long>(block_start) - 1);
      scratch.insert(scratch.begin() + static_cast<long>(q), moved);
      orig.erase(orig.begin() + static_cast<long>(block_start) - 1);
      orig.insert(orig.begin() + static_cast<long>(q), moved_orig);
      undo_bindings(bound_wires, bound_v);
    }
  }
};

inline bool match_better(const tmatch& a, const tmatch& b) {
  // maximal benefit; ties by larger p, smaller j, forward before backward
  if (a.benefit != b.benefit) {
    return a.benefit > b.benefit;
  }
  if (a.p != b.p) {
    return a.p > b.p;
  }
  if (a.j != b.j) {
    return a.j < b.j;
  }
  return a.direction == rule_direction::forward &&
         b.direction == rule_direction::backward;
}

} // namespace detail

/*! \brief Searches wire maps, V-assignments, directions and (j, p) for the
 * best match of one template with start gate C_k (1-based k).
 *
 * Matched gates are gathered rightward-adjacent to C_k with the moving
 * rules; the circuit itself is left untouched (moves are recorded in the
 * match and committed by apply_match).
 */
inline std::optional<tmatch> match_at(const circuit& c, size_t k,
                                      const circuit_template& t,
                                      const cost_model& model = {},
                                      const match_options& opts = {}) {
  if (k < 2 || k > c.size()) {
    return std::nullopt;
  }
  if (t.wire_count > c.line_count) {
    return std::nullopt;
  }
  std::optional<tmatch> best;
  for (auto dir : {rule_direction::forward, rule_direction::backward}) {
    for (uint32_t j = 0; j < t.size(); ++j) {
      detail::match_search search(c, t, model, opts, k - 1, dir, j);
      std::vector<uint32_t> bound_wires;
      bool bound_v = false;
      if (!search.unify(search.slot_gate(0), c.gates[k - 1], bound_wires,
                        bound_v)) {
        continue;
      }
      search.matched.push_back(k - 1);
      search.dfs(k - 1, 1);
      if (search.best &&
          (!best || detail::match_better(*search.best, *best))) {
        best = std::move(search.best);
      }
    }
  }
  // p == 0 or pure-anchor matches with negative benefit were filtered in
  // consider(); a surviving match always has p >= 1
  return best;
}

/*! \brief Commits a match: performs the recorded moves, deletes the matched
 * gates and inserts the replacement at the match site. Rejects stale
 * matches. */
inline circuit apply_match(const circuit& c, const tmatch& m) {
  if (c.gates != m.snapshot) {
    throw circuit_error("stale match: circuit changed since match_at");
  }
  circuit out = c;
  for (auto [from, to] : m.moves) {
    gate g = out.gates[from];
    out.gates.erase(out.gates.begin() + static_cast<long>(from));
    out.gates.insert(out.gates.begin() + static_cast<long>(to), g);
  }
  out.gates.erase(out.gates.begin() + static_cast<long>(m.block_start),
                  out.gates.begin() + static_cast<long>(m.anchor) + 1);
  out.gates.insert(out.gates.begin() + static_cast<long>(m.block_start),
                   m.replacement.begin(), m.replacement.end());
  return out;
}

struct reduce_stats {
  uint64_t substitutions = 0;
  uint64_t cost_retaining = 0;
  uint64_t steps = 0;
  std::vector<std::pair<std::string, uint64_t>> per_template;

  void count_template(const std::string& name) {
    for (auto& [n, c] : per_template) {
      if (n == name) {
        ++c;
        return;
      }
    }
    per_template.emplace_back(name, 1);
  }
};

/*! \brief The cost-reduction driver.
 *
 * The start gate C_k walks the circuit from k = 2. At each position the
 * templates are tried in order of size; a beneficial substitution is always
 * applied, a cost-retaining one only when k exceeds the Flag, which is then
 * set to k (any cost-reducing substitution resets the Flag to 0). A run of
 * cost-retaining substitutions is speculative: if the scan passes the first
 * retaining site again without any cost reduction, the run is rolled back,
 * so a plain fixpoint input is returned unchanged. After a substitution k
 * returns to the leftmost substituted gate. Terminates at the rightmost
 * gate; the result never costs more than the input.
 *
 * start_k > 2 resumes an earlier scan: valid when positions before start_k
 * were already scanned without a match (e.g. after appending gates to an
 * already-reduced circuit), exactly like the driver's own mid-scan resume.
 */
inline circuit reduce_cost(const circuit& c,
                           const std::vector<circuit_template>& templates,
                           const cost_model& model = {},
                           reduce_stats* stats = nullptr,
                           size_t start_k = 2) {
  if (!c.is_ncv()) {
    throw circuit_error("reduce_cost requires an NCV-only circuit");
  }
  std::vector<circuit_template> ts = templates;
  sort_templates(ts);

  circuit cur = c;
  rational initial_cost = circuit_cost(cur, model);
  long long cost_ceil =
      initial_cost.numerator() / initial_cost.denominator() + 1;
  unsigned long long bound =
      static_cast<unsigned long long>(cost_ceil + 1) *
      (cur.size() + 2) * (cur.size() + 2) *
      static_cast<unsigned long long>(initial_cost.denominator());

  size_t k = std::max<size_t>(2, std::min(start_k, cur.size() + 1));
  size_t flag = 0;
  bool trial = false; // an unjustified cost-retaining run is pending
  std::vector<gate> trial_backup;
  size_t trial_site = 0;
  unsigned long long steps = 0;
  while (k <= cur.size()) {
    if (++steps > bound) {
      throw circuit_error("reduce_cost exceeded its iteration bound");
    }
    std::optional<tmatch> beneficial;
    std::optional<tmatch> retaining;
    for (const auto& t : ts) {
      auto m = match_at(cur, k, t, model);
      if (!m) {
        continue;
      }
      if (m->benefit > 0) {
        beneficial = std::move(m);
        break;
      }
      if (!retaining && m->benefit.numerator() == 0 && m->p < m->m) {
        retaining = std::move(m);
      }
    }
    std::optional<tmatch> chosen;
    if (beneficial) {
      chosen = std::move(beneficial);
      flag = 0;
      trial = false; // the retaining run paid off
    } else if (retaining && k > flag) {
      if (!trial) {
        trial = true;
        trial_backup = cur.gates;
        trial_site = k;
      }
      flag = k;
      chosen = std::move(retaining);
      if (stats) {
        ++stats->cost_retaining;
      }
    }
    if (chosen) {
      cur = apply_match(cur, *chosen);
      if (stats) {
        ++stats->substitutions;
        stats->count_template(chosen->template_name);
      }
      size_t resume = chosen->block_start + 1; // 1-based leftmost substituted
      k = std::max<size_t>(2, resume);
      if (cur.size() < 2) {
        break;
      }
      k = std::min(k, cur.size());
    } else {
      ++k;
      if (trial && k > flag) {
        // no cost reduction materialized: undo the retaining run
        cur.gates = trial_backup;
        trial = false;
        k = trial_site + 1;
      }
    }
  }
  if (stats) {
    stats->steps = steps;
  }
  return cur;
}

/*! \brief True iff no rotation of the template body can be shortened by the
 * given (strictly smaller) templates. */
inline bool template_irreducible(const circuit_template& t,
                                 const std::vector<circuit_template>& smaller) {
  for (uint32_t r = 0; r < t.size(); ++r) {
    auto rot = rotate(t, r);
    for (bool v0_is_v : {true, false}) {
      circuit body(t.wire_count,
                   instantiate(rot, identity_wire_map(t.wire_count),
                               {v0_is_v}));
      circuit reduced = reduce_cost(body, smaller);
      if (reduced.size() < t.size()) {
        return false;
      }
    }
  }
  return true;
}

/*! \brief Full template-set validation: every template must be an exact
 * identity and irreducible by the strictly smaller members of the set.
 * Throws naming the offending template. */
inline void validate_template_set(const std::vector<circuit_template>& set) {
  std::vector<circuit_template> sorted = set;
  sort_templates(sorted);
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (!template_is_identity(sorted[i])) {
      throw template_error("template " + sorted[i].name +
                           " does not simulate to the identity");
    }
    std::vector<circuit_template> smaller;
    for (const auto& o : sorted) {
      if (o.size() < sorted[i].size()) {
        smaller.push_back(o);
      }
    }
    if (!template_irreducible(sorted[i], smaller)) {
      throw template_error("template " + sorted[i].name +
                           " is reducible by smaller templates");
    }
  }
}

// ---------------------------------------------------------------------------
// boundary simplification (constant inputs / garbage outputs)

namespace detail {

// Constant-input pass: tracks known line values along the frontier, strips
// always-satisfied controls, deletes never-satisfied gates.
inline bool boundary_const_pass(circuit& c) {
  std::vector<std::optional<int>> known(c.line_count);
  for (uint32_t l = 0; l < c.line_count; ++l) {
    known[l] = c.lines[l].constant;
  }
  std::vector<gate> out;
  bool changed = false;
  for (const auto& g : c.gates) {
    gate cur = g;
    bool dead = false;
    std::vector<control_spec> kept;
    for (const auto& ctl : cur.controls) {
      if (known[ctl.line]) {
        bool satisfied =
            (*known[ctl.line] == 1) == (ctl.pol == polarity::positive);
        if (satisfied) {
          changed = true; // control stripped
          continue;
        }
        dead = true;
        break;
      }
      kept.push_back(ctl);
    }
    if (dead) {
      changed = true;
      continue;
    }
    cur.controls = std::move(kept);
    // re-normalize the kind after stripping
    std::vector<gate> emit;
    switch (cur.kind) {
    case gate_kind::cnot:
      if (cur.controls.empty()) {
        emit.push_back(gate::make_x(cur.targets[0]));
      } else {
        emit.push_back(cur);
      }
      break;
    case gate_kind::toffoli:
      if (cur.controls.empty()) {
        emit.push_back(gate::make_x(cur.targets[0]));
      } else if (cur.controls.size() == 1) {
        if (cur.controls[0].pol == polarity::positive) {
          emit.push_back(gate::make_cnot(cur.controls[0].line, cur.targets[0]));
        } else {
          // negative-control CNOT: X^(1 xor c) = CNOT then X on the target
          emit.push_back(gate::make_cnot(cur.controls[0].line, cur.targets[0]));
          emit.push_back(gate::make_x(cur.targets[0]));
        }
      } else {
        emit.push_back(cur);
      }
      break;
    case gate_kind::fredkin:
      if (cur.controls.empty()) {
        emit.push_back(gate::make_cnot(cur.targets[0], cur.targets[1]));
        emit.push_back(gate::make_cnot(cur.targets[1], cur.targets[0]));
        emit.push_back(gate::make_cnot(cur.targets[0], cur.targets[1]));
      } else {
        emit.push_back(cur);
      }
      break;
    default:
      emit.push_back(cur);
      break;
    }
    for (const auto& e : emit) {
      // frontier update: a NOT toggles a tracked constant, anything else
      // writing a line makes it unknown
      if (e.kind == gate_kind::x && e.controls.empty() &&
          known[e.targets[0]]) {
        known[e.targets[0]] = 1 - *known[e.targets[0]];
      } else {
        for (auto t : e.targets) {
          known[t] = std::nullopt;
        }
      }
      out.push_back(e);
    }
  }
  if (out != c.gates) {
    changed = true;
  }
  c.gates = std::move(out);
  return changed;
}

// Garbage-output pass: deletes, right to left, gates whose targets are all
// dead at the circuit end.
inline bool boundary_garbage_pass(circuit& c) {
  std::vector<bool> live(c.line_count);
  for (uint32_t l = 0; l < c.line_count; ++l) {
    live[l] = !c.lines[l].garbage;
  }
  std::vector<bool> keep(c.size(), true);
  bool changed = false;
  for (size_t i = c.size(); i-- > 0;) {
    const gate& g = c.gates[i];
    bool any_live_target = false;
    for (auto t : g.targets) {
      any_live_target = any_live_target || live[t];
    }
    if (!any_live_target) {
      keep[i] = false;
      changed = true;
      continue;
    }
    for (auto l : g.lines()) {
      live[l] = true;
    }
  }
  if (changed) {
    std::vector<gate> out;
    for (size_t i = 0; i < c.size(); ++i) {
      if (keep[i]) {
        out.push_back(c.gates[i]);
      }
    }
    c.gates = std::move(out);
  }
  return changed;
}

} // namespace detail

/*! \brief Boundary simplification to fixpoint: gates conditioned on constant
 * inputs are deleted or uncontrolled, gates targeting only garbage outputs
 * at the circuit end are deleted. The function on non-garbage outputs is
 * preserved for all values of the non-constant inputs. */
inline circuit boundary_simplify(const circuit& c) {
  circuit cur = c;
  bool changed = true;
  size_t rounds = 0;
  while (changed && rounds++ <= c.size() + 1) {
    changed = detail::boundary_const_pass(cur);
    changed = detail::boundary_garbage_pass(cur) || changed;
  }
  return cur;
}

} // namespace ncv
