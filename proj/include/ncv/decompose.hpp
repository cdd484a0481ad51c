/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file decompose.hpp
  \brief Lowering passes to the NCV gate set

  Toffoli to the optimal 5-gate NCV circuit (two orientations and the
  negative-control variant), Fredkin via a CNOT sandwich, multi-control
  Toffolis through the 4(m-2)-Toffoli ladder with m-2 borrowed ancillas or
  through the single-ancilla double-product construction, and the global
  V/V† polarity swap for classical-reversible circuits.
*/

#pragma once

#include "circuit.hpp"
#include "optimizer.hpp"
#include "templates.hpp"
#include "unitary.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ncv {

/*! \brief The two 5-gate Toffoli realizations kept: the base circuit and
 * its inverse. */
enum class orientation : uint8_t { a, a_inverse };

/*! \brief Toffoli(a,b;c) with positive controls as 5 NCV gates. */
inline std::vector<gate> toffoli_to_ncv(uint32_t a, uint32_t b, uint32_t c,
                                        orientation o = orientation::a) {
  std::vector<gate> gs{gate::make_v(b, c), gate::make_cnot(a, b),
                       gate::make_vdag(b, c), gate::make_cnot(a, b),
                       gate::make_v(a, c)};
  if (o == orientation::a_inverse) {
    std::reverse(gs.begin(), gs.end());
    for (auto& g : gs) {
      g = gate_inverse(g);
    }
  }
  return gs;
}

/*! \brief Toffoli with positive control a and negative control b, target c,
 * as 5 NCV gates (same minimal count as the all-positive case). */
inline std::vector<gate> neg_toffoli_to_ncv(uint32_t a, uint32_t b, uint32_t c,
                                            orientation o = orientation::a) {
  // target V-exponent ledger: a + (a xor b) - b = 2a(1-b)
  std::vector<gate> gs{gate::make_v(a, c), gate::make_cnot(a, b),
                       gate::make_v(b, c), gate::make_cnot(a, b),
                       gate::make_vdag(b, c)};
  if (o == orientation::a_inverse) {
    std::reverse(gs.begin(), gs.end());
    for (auto& g : gs) {
      g = gate_inverse(g);
    }
  }
  return gs;
}

/*! \brief 2-control Toffoli with arbitrary control polarities as 5 NCV
 * gates, preserving the control roles (a, b).
 *
 * Emits V^e1(b,c) CNOT(a,b) V^e2(b,c) CNOT(a,b) V^e3(a,c): the CNOTs always
 * run a -> b and only the V exponents carry the polarities (ledger
 * e1·b + e2·(a⊕b) + e3·a ≡ 2·lit(a)·lit(b) mod 4). Both controls positive
 * reproduces toffoli_to_ncv exactly; (a positive, b negative) under
 * a_inverse reproduces neg_toffoli_to_ncv. Keeping the CNOT direction fixed
 * is what lets adjacent ladder stages cancel regardless of polarities. */
inline std::vector<gate> toffoli_any_to_ncv(control_spec ca, control_spec cb,
                                            uint32_t t,
                                            orientation o = orientation::a) {
  bool na = ca.pol == polarity::negative;
  bool nb = cb.pol == polarity::negative;
  if (na && nb) {
    throw circuit_error("toffoli_any_to_ncv: two negative controls need a "
                        "NOT wrap (see toffoli2_to_ncv)");
  }
  uint32_t a = ca.line, b = cb.line;
  int e1 = +1, e2 = -1, e3 = +1; // positive/positive: orientation A
  if (na) {
    e2 = +1;
    e3 = -1; // ledger b + (a⊕b) − a = 2b(1−a)
  } else if (nb) {
    e3 = -1; // ledger b − (a⊕b) − a = −2a(1−b) ≡ 2a(1−b) (mod 4)
  }
  auto mkv = [&](uint32_t c, int e) {
    return e == 1 ? gate::make_v(c, t) : gate::make_vdag(c, t);
  };
  std::vector<gate> gs{mkv(b, e1), gate::make_cnot(a, b), mkv(b, e2),
                       gate::make_cnot(a, b), mkv(a, e3)};
  if (o == orientation::a_inverse) {
    std::reverse(gs.begin(), gs.end());
    for (auto& g : gs) {
      g = gate_inverse(g);
    }
  }
  return gs;
}

/*! \brief Any 2-control Toffoli as NCV; two negative controls cost one
 * extra NOT pair. */
inline std::vector<gate> toffoli2_to_ncv(const gate& g,
                                         orientation o = orientation::a) {
  if (g.kind != gate_kind::toffoli || g.controls.size() != 2) {
    throw circuit_error("toffoli2_to_ncv needs a 2-control TOFFOLI");
  }
  control_spec c0 = g.controls[0];
  control_spec c1 = g.controls[1];
  uint32_t t = g.targets[0];
  bool n0 = c0.pol == polarity::negative;
  bool n1 = c1.pol == polarity::negative;
  if (!n0 || !n1) {
    return toffoli_any_to_ncv(c0, c1, t, o);
  }
  // two negatives: conjugate the first control with NOTs
  c0.pol = polarity::positive;
  std::vector<gate> gs{gate::make_x(c0.line)};
  auto inner = toffoli_any_to_ncv(c0, c1, t, o);
  gs.insert(gs.end(), inner.begin(), inner.end());
  gs.push_back(gate::make_x(c0.line));
  return gs;
}

/*! \brief Multi-control Toffoli as a 4(m-2)-Toffoli ladder using m-2
 * borrowed (dirty, restored) ancillas.
 *
 * Emits F D F D with F = T(c_m, a_{m-2}; t),
 * D = U_{m-3}..U_1 W U_1..U_{m-3}, W = T(c_1, c_2; a_1) and
 * U_i = T(c_{i+2}, a_i; a_{i+1}). Control polarities ride on the single
 * ladder Toffoli shape fed by each control; if the two W controls are both
 * negative, either a positive control is swapped into position 2 or, when
 * every control is negative, line c_1 is conjugated with one NOT pair.
 */
inline std::vector<gate> mct_barenco(std::vector<control_spec> controls,
                                     uint32_t target,
                                     const std::vector<uint32_t>& ancillas) {
  const size_t m = controls.size();
  if (m < 3) {
    throw circuit_error("mct_barenco needs at least 3 controls");
  }
  if (ancillas.size() < m - 2) {
    throw circuit_error("mct_barenco needs m-2 ancillas");
  }
  for (size_t i = 0; i + 1 < m - 2; ++i) {
    if (ancillas[i] == ancillas[i + 1]) {
      throw circuit_error("duplicate ancilla line");
    }
  }
  auto is_neg = [&](size_t i) {
    return controls[i].pol == polarity::negative;
  };
  bool wrap = false;
  if (is_neg(0) && is_neg(1)) {
    size_t pos = m;
    for (size_t i = 2; i < m; ++i) {
      if (!is_neg(i)) {
        pos = i;
        break;
      }
    }
    if (pos < m) {
      std::swap(controls[1], controls[pos]);
    } else {
      wrap = true; // all controls negative: conjugate c_1 with NOTs
      controls[0].pol = polarity::positive;
    }
  }
  auto tof = [](control_spec a, control_spec b, uint32_t tgt) {
    return gate::make_toffoli({a, b}, tgt);
  };
  auto anc = [&](size_t i) {
    return control_spec{ancillas[i], polarity::positive};
  };
  std::vector<gate> ladder;
  auto emit_d = [&]() {
    for (size_t i = m - 3; i >= 1; --i) {
      ladder.push_back(tof(controls[i + 1], anc(i - 1), ancillas[i]));
    }
    ladder.push_back(tof(controls[0], controls[1], ancillas[0]));
    for (size_t i = 1; i <= m - 3; ++i) {
      ladder.push_back(tof(controls[i + 1], anc(i - 1), ancillas[i]));
    }
  };
  gate f = tof(controls[m - 1], anc(m - 3), target);
  ladder.push_back(f);
  emit_d();
  ladder.push_back(f);
  emit_d();
  if (wrap) {
    std::vector<gate> out{gate::make_x(controls[0].line)};
    out.insert(out.end(), ladder.begin(), ladder.end());
    out.push_back(gate::make_x(controls[0].line));
    return out;
  }
  return ladder;
}

/*! \brief Multi-control Toffoli via one ancilla: G1 G2 G1 G2 with
 * G1 = MCT(first ⌈m/2⌉ controls -> a) and G2 = MCT(rest ∪ {a} -> t), each
 * lowered by mct_barenco borrowing the idle original lines (ascending) as
 * dirty ancillas. */
inline std::vector<gate> mct_single_ancilla(
    const std::vector<control_spec>& controls, uint32_t target,
    uint32_t ancilla, uint32_t line_count, uint32_t split = 0) {
  const size_t m = controls.size();
  if (m < 5) {
    throw circuit_error("mct_single_ancilla needs at least 5 controls");
  }
  if (split == 0) {
    split = static_cast<uint32_t>((m + 1) / 2);
  }
  if (split < 2 || split > m - 2) {
    throw circuit_error("mct_single_ancilla: bad split point");
  }
  std::vector<control_spec> h1(controls.begin(), controls.begin() + split);
  std::vector<control_spec> h2(controls.begin() + split, controls.end());
  h2.push_back({ancilla, polarity::positive});

  auto lower = [&](const std::vector<control_spec>& cs, uint32_t tgt) {
    if (cs.size() == 2) {
      return std::vector<gate>{gate::make_toffoli({cs[0], cs[1]}, tgt)};
    }
    std::vector<bool> busy(line_count, false);
    for (const auto& c : cs) {
      busy[c.line] = true;
    }
    busy[tgt] = true;
    std::vector<uint32_t> dirty;
    for (uint32_t l = 0; l < line_count && dirty.size() < cs.size() - 2; ++l) {
      if (!busy[l]) {
        dirty.push_back(l);
      }
    }
    if (dirty.size() < cs.size() - 2) {
      throw circuit_error("mct_single_ancilla: not enough idle lines");
    }
    return mct_barenco(cs, tgt, dirty);
  };
  auto g1 = lower(h1, ancilla);
  auto g2 = lower(h2, target);
  std::vector<gate> out;
  for (int rep = 0; rep < 2; ++rep) {
    out.insert(out.end(), g1.begin(), g1.end());
    out.insert(out.end(), g2.begin(), g2.end());
  }
  return out;
}

enum class ancilla_mode : uint8_t { dirty_many, single };

enum class orientation_policy : uint8_t { uniform_a, alternate, greedy };

namespace detail {

// Greedy orientation choice: preview both orientations by reducing the
// growing circuit, keep the orientation whose reduction is cheaper. The
// emitted lowering stays unreduced; `preview` carries the reduced prefix
// the next decision builds on.
inline orientation pick_orientation_greedy(circuit& preview, const gate& g,
                                           const std::vector<circuit_template>& ts,
                                           const cost_model& model) {
  circuit best;
  rational best_cost{-1};
  orientation chosen = orientation::a;
  for (auto o : {orientation::a, orientation::a_inverse}) {
    circuit cand = preview;
    for (const auto& ng : toffoli2_to_ncv(g, o)) {
      cand.add(ng);
    }
    circuit reduced = reduce_cost(cand, ts, model);
    rational cost = circuit_cost(reduced, model);
    if (best_cost < 0 || cost < best_cost) {
      best_cost = cost;
      best = std::move(reduced);
      chosen = o;
    }
  }
  preview = std::move(best);
  return chosen;
}

} // namespace detail

/*! \brief Lowers every gate to the NCV set.
 *
 * Fredkin becomes a CNOT / multi-control Toffoli / CNOT sandwich;
 * multi-control Toffolis expand through the ladder (borrowing idle lines)
 * or the single-ancilla construction per `mode`; 2-control Toffolis take
 * the 5-gate circuits with orientations per `policy`. The greedy policy
 * interleaves window-local cost reduction, the others are pure lowerings.
 */
inline circuit expand_all(const circuit& c,
                          orientation_policy policy = orientation_policy::uniform_a,
                          ancilla_mode mode = ancilla_mode::dirty_many,
                          const std::vector<circuit_template>* ts = nullptr,
                          const cost_model& model = {}) {
  std::vector<circuit_template> owned;
  if (policy == orientation_policy::greedy && !ts) {
    owned = builtin_templates();
    ts = &owned;
  }
  // phase 1: everything down to <= 2-control Toffolis plus NCV gates
  std::vector<gate> mid;
  std::vector<gate> work(c.gates.rbegin(), c.gates.rend());
  while (!work.empty()) {
    gate g = work.back();
    work.pop_back();
    switch (g.kind) {
    case gate_kind::fredkin: {
      uint32_t x = g.targets[0];
      uint32_t y = g.targets[1];
      std::vector<control_spec> cs = g.controls;
      cs.push_back({x, polarity::positive});
      std::vector<gate> sub{gate::make_cnot(y, x)};
      if (cs.size() == 1) {
        sub.push_back(gate::make_cnot(cs[0].line, y));
      } else {
        sub.push_back(gate::make_toffoli(cs, y));
      }
      sub.push_back(gate::make_cnot(y, x));
      for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
        work.push_back(*it);
      }
      break;
    }
    case gate_kind::toffoli: {
      if (g.controls.size() <= 2) {
        mid.push_back(g);
        break;
      }
      std::vector<bool> busy(c.line_count, false);
      for (auto l : g.lines()) {
        busy[l] = true;
      }
      std::vector<uint32_t> idle;
      for (uint32_t l = 0; l < c.line_count; ++l) {
        if (!busy[l]) {
          idle.push_back(l);
        }
      }
      size_t m = g.controls.size();
      std::vector<gate> sub;
      if (mode == ancilla_mode::dirty_many && idle.size() >= m - 2) {
        sub = mct_barenco(g.controls, g.targets[0], idle);
      } else if (!idle.empty() && m >= 5) {
        sub = mct_single_ancilla(g.controls, g.targets[0], idle[0],
                                 c.line_count);
      } else if (idle.size() >= m - 2) {
        sub = mct_barenco(g.controls, g.targets[0], idle);
      } else {
        throw circuit_error("not enough idle lines to expand a "
                            "multi-control TOFFOLI");
      }
      for (auto it = sub.rbegin(); it != sub.rend(); ++it) {
        work.push_back(*it);
      }
      break;
    }
    default:
      mid.push_back(g);
      break;
    }
  }
  // phase 2: 2-control Toffolis to NCV with the orientation policy
  circuit out(c.line_count);
  out.lines = c.lines;
  circuit preview(c.line_count); // greedy decision state only
  std::map<std::string, size_t> occurrences; // alternate: per-shape counters
  auto shape_key = [](const gate& g) {
    std::string key;
    for (const auto& cs : g.controls) {
      key += std::to_string(cs.line);
      key += cs.pol == polarity::negative ? 'n' : 'p';
    }
    key += '>';
    key += std::to_string(g.targets[0]);
    return key;
  };
  for (const auto& g : mid) {
    if (g.kind != gate_kind::toffoli) {
      out.add(g);
      if (policy == orientation_policy::greedy) {
        preview.add(g);
      }
      continue;
    }
    orientation o = orientation::a;
    switch (policy) {
    case orientation_policy::uniform_a:
      break;
    case orientation_policy::alternate: {
      // a repeated shape alternates A, A-inverse, A, ... so the paired
      // occurrences straddling a ladder stage cancel after optimization
      size_t& n = occurrences[shape_key(g)];
      o = n % 2 == 0 ? orientation::a : orientation::a_inverse;
      ++n;
      break;
    }
    case orientation_policy::greedy:
      o = detail::pick_orientation_greedy(preview, g, *ts, model);
      break;
    }
    for (const auto& ng : toffoli2_to_ncv(g, o)) {
      out.add(ng);
    }
  }
  return out;
}

/*! \brief Swaps every V with V†. Valid only for circuits computing a
 * classical reversible function, where it preserves that function. */
inline circuit v_polarity_swap(const circuit& c) {
  if (!is_classical_reversible(c)) {
    throw circuit_error(
        "v_polarity_swap requires a classical-reversible circuit");
  }
  circuit out = c;
  for (auto& g : out.gates) {
    if (g.kind == gate_kind::v) {
      g.kind = gate_kind::vdag;
    } else if (g.kind == gate_kind::vdag) {
      g.kind = gate_kind::v;
    }
  }
  return out;
}

} // namespace ncv
