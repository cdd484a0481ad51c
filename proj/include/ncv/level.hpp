/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file level.hpp
  \brief Greedy level compaction with even-template reshaping

  A level is a set of gates on pairwise-disjoint lines, applicable in
  parallel. The greedy pass opens each level with the leftmost unassigned
  gate, pulls in every gate that can be moved up to the level boundary, and,
  when movement is blocked, tries zero-benefit substitutions with even-size
  templates (p = m/2) to reshape the remainder.
*/

#pragma once

#include "circuit.hpp"
#include "optimizer.hpp"
#include "templates.hpp"
#include "unitary.hpp"

#include <cstdint>
#include <set>
#include <vector>

namespace ncv {

/*! \brief A circuit with a parallel schedule: per-gate level numbers 1..depth. */
struct leveled_circuit {
  circuit source;                 //!< the input circuit
  circuit scheduled;              //!< reordered gates, grouped by level
  std::vector<uint32_t> level_of; //!< level of scheduled.gates[i], 1-based
  uint32_t depth = 0;
};

/*! \brief Lower bound on any schedule: the busiest line's gate count. */
inline uint32_t line_load_lower_bound(const circuit& c) {
  std::vector<uint32_t> load(c.line_count, 0);
  for (const auto& g : c.gates) {
    for (auto l : g.lines()) {
      ++load[l];
    }
  }
  uint32_t lb = 0;
  for (auto x : load) {
    lb = std::max(lb, x);
  }
  return lb;
}

namespace detail {

inline bool lines_disjoint(const gate& g, const std::vector<bool>& used) {
  for (auto l : g.lines()) {
    if (used[l]) {
      return false;
    }
  }
  return true;
}

// One admission sweep over the unassigned remainder. Admits every gate that
// is line-disjoint from the open level and commutes with all unassigned
// gates before it. Returns the number of gates admitted.
inline size_t admit_sweep(std::vector<gate>& rest, std::vector<gate>& level,
                          std::vector<bool>& used) {
  size_t admitted = 0;
  size_t idx = 0;
  while (idx < rest.size()) {
    const gate& g = rest[idx];
    bool ok = lines_disjoint(g, used);
    for (size_t j = 0; ok && j < idx; ++j) {
      ok = gates_commute(rest[j], g);
    }
    if (ok) {
      for (auto l : g.lines()) {
        used[l] = true;
      }
      level.push_back(g);
      rest.erase(rest.begin() + static_cast<long>(idx));
      ++admitted;
    } else {
      ++idx;
    }
  }
  return admitted;
}

} // namespace detail

/*! \brief Greedy level assignment (NCV circuits only).
 *
 * When a gate is blocked from joining the open level, even-size templates
 * are tried with that gate as start (p = m/2 substitutions over unassigned
 * gates only, one attempt per gate and level); a substitution is kept only
 * if the retried sweep admits something, otherwise it is rolled back.
 */
inline leveled_circuit assign_levels(const circuit& c,
                                     const std::vector<circuit_template>& ts,
                                     const cost_model& model = {}) {
  if (!c.is_ncv()) {
    throw circuit_error("assign_levels requires an NCV-only circuit");
  }
  std::vector<circuit_template> even;
  for (const auto& t : ts) {
    if (t.size() % 2 == 0) {
      even.push_back(t);
    }
  }
  sort_templates(even);

  leveled_circuit lc;
  lc.source = c;
  lc.scheduled = circuit(c.line_count);
  lc.scheduled.lines = c.lines;

  std::vector<gate> rest = c.gates;
  match_options mopts;
  mopts.even_half_only = true;

  unsigned long long guard = 0;
  const unsigned long long guard_max =
      (static_cast<unsigned long long>(c.size()) + 2) *
      (static_cast<unsigned long long>(c.size()) + 2) * 4 + 64;

  while (!rest.empty()) {
    ++lc.depth;
    std::vector<gate> level;
    std::vector<bool> used(c.line_count, false);
    std::set<size_t> tried; // start positions already attempted this level
    for (;;) {
      if (++guard > guard_max) {
        throw circuit_error("assign_levels exceeded its iteration bound");
      }
      size_t admitted = detail::admit_sweep(rest, level, used);
      if (admitted > 0) {
        continue;
      }
      // blocked: attempt one even-template substitution per start position
      bool substituted = false;
      circuit remainder(c.line_count, rest);
      for (size_t k = 2; k <= remainder.size() && !substituted; ++k) {
        if (tried.count(k)) {
          continue;
        }
        const gate& g = remainder.gates[k - 1];
        bool blocked_only_by_movement = detail::lines_disjoint(g, used);
        if (!blocked_only_by_movement) {
          continue;
        }
        for (const auto& t : even) {
          auto m = match_at(remainder, k, t, model, mopts);
          if (!m) {
            continue;
          }
          tried.insert(k);
          circuit candidate = apply_match(remainder, *m);
          std::vector<gate> crest = candidate.gates;
          std::vector<gate> clevel = level;
          std::vector<bool> cused = used;
          if (detail::admit_sweep(crest, clevel, cused) > 0) {
            rest = std::move(crest);
            level = std::move(clevel);
            used = std::move(cused);
            substituted = true;
          }
          break; // one attempt per (gate, level)
        }
      }
      if (!substituted) {
        break;
      }
    }
    if (level.empty()) {
      // cannot happen: the leftmost gate always admits
      throw circuit_error("assign_levels opened an empty level");
    }
    for (const auto& g : level) {
      lc.scheduled.add(g);
      lc.level_of.push_back(lc.depth);
    }
  }
  return lc;
}

/*! \brief Checks both schedule invariants: gates in one level act on
 * pairwise-disjoint lines, and the schedule reproduces the source unitary
 * (dense oracle up to 10 lines, sampled beyond). */
inline bool validate_levels(const leveled_circuit& lc) {
  if (lc.level_of.size() != lc.scheduled.size()) {
    return false;
  }
  std::vector<std::vector<bool>> used;
  for (size_t i = 0; i < lc.scheduled.size(); ++i) {
    uint32_t lvl = lc.level_of[i];
    if (lvl == 0 || lvl > lc.depth) {
      return false;
    }
    if (i > 0 && lvl < lc.level_of[i - 1]) {
      return false; // levels must be emitted in ascending order
    }
    if (used.size() < lvl) {
      used.resize(lvl, std::vector<bool>(lc.scheduled.line_count, false));
    }
    for (auto l : lc.scheduled.gates[i].lines()) {
      if (used[lvl - 1][l]) {
        return false;
      }
      used[lvl - 1][l] = true;
    }
  }
  auto mode = lc.source.line_count <= 10 ? equivalence_mode::dense
                                         : equivalence_mode::sampled;
  return equivalent(lc.source, lc.scheduled, mode);
}

} // namespace ncv
