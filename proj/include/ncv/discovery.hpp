/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file discovery.hpp
  \brief Exhaustive identity search emitting new templates

  Enumerates NCV gate sequences of a fixed size on k wires by
  meet-in-the-middle over exact matrix keys, keeps the exact identities that
  the current template set cannot reduce, and deduplicates them modulo
  rotation, wire relabeling, global V/V† swap and inversion.
*/

#pragma once

#include "circuit.hpp"
#include "optimizer.hpp"
#include "templates.hpp"
#include "unitary.hpp"

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace ncv {

struct search_spec {
  uint32_t size = 0;       //!< exact sequence length m to search
  uint32_t wire_count = 2; //!< k <= 4
  std::vector<circuit_template> existing;
  uint64_t node_budget = 0; //!< 0 = unlimited
};

struct discovery_result {
  std::vector<circuit_template> templates;
  bool exhaustive = true;
  uint64_t nodes = 0;
};

/*! \brief All placements of X, CNOT, V0, V1 on k wires:
 * k + 3k(k-1) symbolic gates. */
inline std::vector<template_gate> gate_alphabet(uint32_t k) {
  std::vector<template_gate> out;
  for (uint32_t t = 0; t < k; ++t) {
    out.push_back({template_gate_kind::x, -1, static_cast<int>(t)});
  }
  for (auto kind : {template_gate_kind::cnot, template_gate_kind::v0,
                    template_gate_kind::v1}) {
    for (uint32_t c = 0; c < k; ++c) {
      for (uint32_t t = 0; t < k; ++t) {
        if (c != t) {
          out.push_back({kind, static_cast<int>(c), static_cast<int>(t)});
        }
      }
    }
  }
  return out;
}

namespace detail {

inline std::string unitary_key(const exact_unitary& u) {
  std::string key;
  for (uint64_t c = 0; c < u.dimension(); ++c) {
    for (const auto& [row, amp] : u.column(c)) {
      key += std::to_string(c) + ":" + std::to_string(row) + "=" +
             amp.str() + ";";
    }
  }
  return key;
}

// Compact wire relabeling by order of first use; leaves unused wires out.
inline std::vector<template_gate> relabel_first_use(
    const std::vector<template_gate>& gs, uint32_t& wires_out) {
  std::map<int, int> map;
  auto look = [&](int w) {
    auto it = map.find(w);
    if (it == map.end()) {
      int fresh = static_cast<int>(map.size());
      map.emplace(w, fresh);
      return fresh;
    }
    return it->second;
  };
  std::vector<template_gate> out;
  for (const auto& g : gs) {
    template_gate h = g;
    if (h.control >= 0) {
      h.control = look(h.control);
    }
    h.target = look(h.target);
    out.push_back(h);
  }
  wires_out = static_cast<uint32_t>(map.size());
  return out;
}

inline std::string body_string(const std::vector<template_gate>& gs) {
  std::string s;
  for (const auto& g : gs) {
    s += template_gate_line(g);
    s += '\n';
  }
  return s;
}

inline std::vector<template_gate> vswap(std::vector<template_gate> gs) {
  for (auto& g : gs) {
    if (g.kind == template_gate_kind::v0) {
      g.kind = template_gate_kind::v1;
    } else if (g.kind == template_gate_kind::v1) {
      g.kind = template_gate_kind::v0;
    }
  }
  return gs;
}

inline std::vector<template_gate> invert(const std::vector<template_gate>& gs) {
  std::vector<template_gate> out;
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) {
    out.push_back(template_gate_inverse(*it));
  }
  return out;
}

inline bool inverse_pair(const template_gate& a, const template_gate& b) {
  return template_gate_inverse(a) == b;
}

} // namespace detail

/*! \brief Canonical key of an identity sequence: the least body serialization
 * over rotations × inversion × global V-swap, each compact-relabeled by
 * first use. Wire relabeling is fully absorbed by the first-use renaming. */
inline std::string canonicalize(const std::vector<template_gate>& gs) {
  std::string best;
  const size_t m = gs.size();
  for (int inv = 0; inv < 2; ++inv) {
    std::vector<template_gate> base = inv ? detail::invert(gs) : gs;
    for (int swap = 0; swap < 2; ++swap) {
      std::vector<template_gate> var = swap ? detail::vswap(base) : base;
      for (size_t r = 0; r < m; ++r) {
        std::vector<template_gate> rot(var.begin() + static_cast<long>(r),
                                       var.end());
        rot.insert(rot.end(), var.begin(), var.begin() + static_cast<long>(r));
        uint32_t wires = 0;
        auto canon = detail::relabel_first_use(rot, wires);
        auto key = detail::body_string(canon);
        if (best.empty() || key < best) {
          best = std::move(key);
        }
      }
    }
  }
  return best;
}

/*! \brief The canonical representative sequence behind canonicalize(). */
inline circuit_template canonical_template(const std::vector<template_gate>& gs,
                                           const std::string& name) {
  std::string best_key = canonicalize(gs);
  // re-derive the sequence whose body equals the canonical key
  const size_t m = gs.size();
  for (int inv = 0; inv < 2; ++inv) {
    std::vector<template_gate> base = inv ? detail::invert(gs) : gs;
    for (int swap = 0; swap < 2; ++swap) {
      std::vector<template_gate> var = swap ? detail::vswap(base) : base;
      for (size_t r = 0; r < m; ++r) {
        std::vector<template_gate> rot(var.begin() + static_cast<long>(r),
                                       var.end());
        rot.insert(rot.end(), var.begin(), var.begin() + static_cast<long>(r));
        uint32_t wires = 0;
        auto canon = detail::relabel_first_use(rot, wires);
        if (detail::body_string(canon) == best_key) {
          circuit_template t;
          t.name = name;
          t.wire_count = wires;
          t.gates = std::move(canon);
          return t;
        }
      }
    }
  }
  throw template_error("canonical representative not found"); // unreachable
}

/*! \brief Finds every size-m identity on k wires that the existing set
 * cannot reduce, deduplicated canonically.
 *
 * Meet-in-the-middle: all half sequences (immediate inverse pairs pruned
 * inside a half) are indexed by the exact matrix of their product; a join
 * succeeds when the second half realizes the inverse matrix. Every surviving
 * candidate is validated as an identity under both V assignments and for
 * irreducibility over all rotations.
 */
inline discovery_result enumerate_identities(const search_spec& spec) {
  if (spec.size < 2 || spec.wire_count < 1 || spec.wire_count > 4) {
    throw template_error("search spec out of range (size >= 2, wires 1..4)");
  }
  const uint32_t k = spec.wire_count;
  const uint32_t m = spec.size;
  const auto alphabet = gate_alphabet(k);
  std::vector<exact_unitary> gate_mats;
  std::vector<uint32_t> wmap = identity_wire_map(k);
  for (const auto& g : alphabet) {
    gate_mats.push_back(gate_unitary(instantiate_gate(g, wmap), k));
  }

  discovery_result result;

  // enumerate all sequences of a given length with their product matrices
  struct half {
    std::vector<uint16_t> seq;
    exact_unitary mat;
  };
  auto enumerate_halves = [&](uint32_t len, std::vector<half>& out,
                              bool& within_budget) {
    std::vector<uint16_t> seq;
    std::vector<exact_unitary> mats{exact_unitary::identity(k)};
    auto rec = [&](auto&& self) -> void {
      if (!within_budget) {
        return;
      }
      if (spec.node_budget && ++result.nodes > spec.node_budget) {
        within_budget = false;
        return;
      }
      if (seq.size() == len) {
        out.push_back({seq, mats.back()});
        return;
      }
      for (uint16_t i = 0; i < alphabet.size(); ++i) {
        if (!seq.empty() &&
            detail::inverse_pair(alphabet[seq.back()], alphabet[i])) {
          continue; // a half containing A A^-1 is reducible
        }
        seq.push_back(i);
        mats.push_back(gate_mats[i] * mats[mats.size() - 1]);
        self(self);
        mats.pop_back();
        seq.pop_back();
      }
    };
    rec(rec);
  };

  bool within_budget = true;
  uint32_t h1 = (m + 1) / 2;
  uint32_t h2 = m - h1;
  std::vector<half> first, second;
  enumerate_halves(h1, first, within_budget);
  if (h2 == h1) {
    second = first;
  } else if (within_budget) {
    enumerate_halves(h2, second, within_budget);
  }
  result.exhaustive = within_budget;

  std::map<std::string, std::vector<size_t>> by_key;
  for (size_t i = 0; i < second.size(); ++i) {
    by_key[detail::unitary_key(second[i].mat)].push_back(i);
  }

  std::set<std::string> seen;
  for (const auto& t : spec.existing) {
    seen.insert(canonicalize(t.gates));
  }

  std::vector<std::pair<std::string, circuit_template>> found;
  for (const auto& a : first) {
    if (spec.node_budget && result.nodes > spec.node_budget) {
      result.exhaustive = false;
      break;
    }
    auto it = by_key.find(detail::unitary_key(a.mat.dagger()));
    if (it == by_key.end()) {
      continue;
    }
    for (size_t bi : it->second) {
      result.nodes++;
      const auto& b = second[bi];
      std::vector<template_gate> gs;
      for (auto i : a.seq) {
        gs.push_back(alphabet[i]);
      }
      for (auto i : b.seq) {
        gs.push_back(alphabet[i]);
      }
      auto key = canonicalize(gs);
      if (seen.count(key)) {
        continue;
      }
      circuit_template cand = canonical_template(gs, "pending");
      if (!template_is_identity(cand)) {
        continue; // defensive: the matrix join should guarantee this
      }
      if (!template_irreducible(cand, spec.existing)) {
        seen.insert(key); // remember so equivalent candidates skip the check
        continue;
      }
      seen.insert(key);
      found.emplace_back(key, std::move(cand));
    }
  }
  // deterministic order and names regardless of enumeration order
  std::sort(found.begin(), found.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  size_t idx = 0;
  for (auto& [key, t] : found) {
    t.name = "t" + std::to_string(m) + "_" + std::to_string(idx++);
    result.templates.push_back(std::move(t));
  }
  return result;
}

/*! \brief Cumulative discovery for sizes 2..max_size: each round feeds the
 * previous rounds' output (plus the seed) back as the existing set. */
inline discovery_result discover_up_to(uint32_t max_size, uint32_t wires,
                                       std::vector<circuit_template> seed,
                                       uint64_t node_budget = 0) {
  discovery_result all;
  for (uint32_t s = 2; s <= max_size; ++s) {
    search_spec spec;
    spec.size = s;
    spec.wire_count = wires;
    spec.existing = seed;
    spec.node_budget = node_budget;
    auto r = enumerate_identities(spec);
    all.nodes += r.nodes;
    all.exhaustive = all.exhaustive && r.exhaustive;
    for (const auto& t : r.templates) {
      seed.push_back(t);
      all.templates.push_back(t);
    }
  }
  return all;
}

} // namespace ncv
