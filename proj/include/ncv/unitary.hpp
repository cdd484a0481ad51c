/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file unitary.hpp
  \brief Exact ground-truth simulation of NCV / Toffoli circuits

  Builds unitaries over dyadic Gaussian numbers and decides identity and
  circuit equivalence with no floating point anywhere.
*/

#pragma once

#include "circuit.hpp"
#include "dyadic.hpp"

#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

namespace ncv {

class dimension_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Dense unitaries are capped at 2^12 x 2^12.
inline constexpr uint32_t dense_line_cap = 12;

/*! \brief Sparse state vector: basis index -> amplitude, zero entries absent. */
using sparse_state = std::map<uint64_t, dyadic_gaussian>;

namespace detail {

inline bool controls_satisfied(const gate& g, uint64_t idx) {
  for (const auto& c : g.controls) {
    bool bit = (idx >> c.line) & 1u;
    if (bit != (c.pol == polarity::positive)) {
      return false;
    }
  }
  return true;
}

inline void add_amp(sparse_state& s, uint64_t idx, const dyadic_gaussian& amp) {
  auto it = s.find(idx);
  if (it == s.end()) {
    if (!amp.is_zero()) {
      s.emplace(idx, amp);
    }
    return;
  }
  it->second += amp;
  if (it->second.is_zero()) {
    s.erase(it);
  }
}

} // namespace detail

/*! \brief Applies one gate to a sparse state. */
inline sparse_state apply_gate(const gate& g, const sparse_state& in) {
  sparse_state out;
  const auto diag = g.kind == gate_kind::v ? dyadic_gaussian::half_one_plus_i()
                                           : dyadic_gaussian::half_one_minus_i();
  const auto off = g.kind == gate_kind::v ? dyadic_gaussian::half_one_minus_i()
                                          : dyadic_gaussian::half_one_plus_i();
  for (const auto& [idx, amp] : in) {
    if (!detail::controls_satisfied(g, idx)) {
      detail::add_amp(out, idx, amp);
      continue;
    }
    switch (g.kind) {
    case gate_kind::x:
    case gate_kind::cnot:
    case gate_kind::toffoli:
      detail::add_amp(out, idx ^ (uint64_t{1} << g.targets[0]), amp);
      break;
    case gate_kind::fredkin: {
      uint64_t b0 = (idx >> g.targets[0]) & 1u;
      uint64_t b1 = (idx >> g.targets[1]) & 1u;
      uint64_t swapped = b0 == b1 ? idx
                                  : idx ^ (uint64_t{1} << g.targets[0]) ^
                                        (uint64_t{1} << g.targets[1]);
      detail::add_amp(out, swapped, amp);
      break;
    }
    case gate_kind::v:
    case gate_kind::vdag:
      detail::add_amp(out, idx, diag * amp);
      detail::add_amp(out, idx ^ (uint64_t{1} << g.targets[0]), off * amp);
      break;
    }
  }
  return out;
}

/*! \brief Applies the circuit to basis state |x>, leftmost gate first.
 *
 * Works on the sparse support only, so wide circuits are fine as long as the
 * superposition stays small.
 */
inline sparse_state apply_basis(const circuit& c, uint64_t x) {
  if (c.line_count < 64 && x >= (uint64_t{1} << c.line_count)) {
    throw dimension_error("basis index out of range");
  }
  sparse_state s{{x, dyadic_gaussian::one()}};
  for (const auto& g : c.gates) {
    s = apply_gate(g, s);
  }
  return s;
}

/*! \brief Exact 2^n x 2^n unitary stored as sparse columns. */
class exact_unitary {
public:
  exact_unitary(uint32_t lines, std::vector<sparse_state> cols)
      : lines_(lines), cols_(std::move(cols)) {}

  static exact_unitary identity(uint32_t lines) {
    check_lines(lines);
    std::vector<sparse_state> cols(size_t{1} << lines);
    for (uint64_t c = 0; c < cols.size(); ++c) {
      cols[c].emplace(c, dyadic_gaussian::one());
    }
    return {lines, std::move(cols)};
  }

  uint32_t lines() const { return lines_; }
  uint64_t dimension() const { return uint64_t{1} << lines_; }
  const sparse_state& column(uint64_t c) const { return cols_[c]; }

  dyadic_gaussian entry(uint64_t row, uint64_t col) const {
    auto it = cols_[col].find(row);
    return it == cols_[col].end() ? dyadic_gaussian::zero() : it->second;
  }

  bool is_identity() const {
    for (uint64_t c = 0; c < cols_.size(); ++c) {
      if (cols_[c].size() != 1) {
        return false;
      }
      const auto& [row, amp] = *cols_[c].begin();
      if (row != c || !amp.is_one()) {
        return false;
      }
    }
    return true;
  }

  exact_unitary dagger() const {
    std::vector<sparse_state> cols(cols_.size());
    for (uint64_t c = 0; c < cols_.size(); ++c) {
      for (const auto& [row, amp] : cols_[c]) {
        cols[row].emplace(c, amp.conj());
      }
    }
    return {lines_, std::move(cols)};
  }

  /*! \brief Matrix product this * rhs (rhs applied first). */
  exact_unitary operator*(const exact_unitary& rhs) const {
    if (lines_ != rhs.lines_) {
      throw dimension_error("dimension mismatch in unitary product");
    }
    std::vector<sparse_state> cols(cols_.size());
    for (uint64_t c = 0; c < cols_.size(); ++c) {
      for (const auto& [mid, amp] : rhs.cols_[c]) {
        for (const auto& [row, lamp] : cols_[mid]) {
          detail::add_amp(cols[c], row, lamp * amp);
        }
      }
    }
    return {lines_, std::move(cols)};
  }

  /*! \brief Exact column orthonormality, i.e. U†U = I. */
  bool is_unitary() const {
    for (uint64_t i = 0; i < cols_.size(); ++i) {
      for (uint64_t j = i; j < cols_.size(); ++j) {
        dyadic_gaussian dot;
        for (const auto& [row, amp] : cols_[i]) {
          auto it = cols_[j].find(row);
          if (it != cols_[j].end()) {
            dot += amp.conj() * it->second;
          }
        }
        if (i == j ? !dot.is_one() : !dot.is_zero()) {
          return false;
        }
      }
    }
    return true;
  }

  friend bool operator==(const exact_unitary& a, const exact_unitary& b) {
    return a.lines_ == b.lines_ && a.cols_ == b.cols_;
  }

  static void check_lines(uint32_t lines) {
    if (lines > dense_line_cap) {
      throw dimension_error("dense unitary limited to " +
                            std::to_string(dense_line_cap) + " lines");
    }
  }

private:
  uint32_t lines_;
  std::vector<sparse_state> cols_;
};

/*! \brief The 2^n x 2^n matrix of a single gate on n lines. */
inline exact_unitary gate_unitary(const gate& g, uint32_t lines) {
  exact_unitary::check_lines(lines);
  g.validate(lines);
  std::vector<sparse_state> cols(size_t{1} << lines);
  for (uint64_t c = 0; c < cols.size(); ++c) {
    cols[c] = apply_gate(g, sparse_state{{c, dyadic_gaussian::one()}});
  }
  return {lines, std::move(cols)};
}

/*! \brief Exact ordered product of the circuit's gate matrices. */
inline exact_unitary circuit_unitary(const circuit& c) {
  exact_unitary::check_lines(c.line_count);
  std::vector<sparse_state> cols(size_t{1} << c.line_count);
  for (uint64_t x = 0; x < cols.size(); ++x) {
    cols[x] = apply_basis(c, x);
  }
  return {c.line_count, std::move(cols)};
}

/*! \brief True iff the circuit implements the identity operator exactly
 * (literal equality, no global-phase quotient). */
inline bool is_identity(const circuit& c) {
  exact_unitary::check_lines(c.line_count);
  for (uint64_t x = 0; x < (uint64_t{1} << c.line_count); ++x) {
    sparse_state s = apply_basis(c, x);
    if (s.size() != 1) {
      return false;
    }
    const auto& [row, amp] = *s.begin();
    if (row != x || !amp.is_one()) {
      return false;
    }
  }
  return true;
}

enum class equivalence_mode { dense, sampled };

/*! \brief Decides circuit equivalence.
 *
 * Dense mode compares exact unitaries. Sampled mode compares the action on
 * `samples` pseudo-random basis states drawn from a fixed seed; agreement is
 * a necessary condition only.
 */
inline bool equivalent(const circuit& c1, const circuit& c2,
                       equivalence_mode mode = equivalence_mode::dense,
                       uint32_t samples = 64, uint64_t seed = 0x5eed5eedULL) {
  if (c1.line_count != c2.line_count) {
    return false;
  }
  if (mode == equivalence_mode::dense) {
    return circuit_unitary(c1) == circuit_unitary(c2);
  }
  std::mt19937_64 rng(seed);
  uint64_t dim_mask = c1.line_count >= 64
                          ? ~uint64_t{0}
                          : (uint64_t{1} << c1.line_count) - 1;
  for (uint32_t i = 0; i < samples; ++i) {
    uint64_t x = rng() & dim_mask;
    if (apply_basis(c1, x) != apply_basis(c2, x)) {
      return false;
    }
  }
  return true;
}

/*! \brief True iff the circuit maps every basis state to a basis state,
 * i.e. computes a classical reversible function. Exhaustive up to the dense
 * cap, sampled beyond. */
inline bool is_classical_reversible(const circuit& c, uint32_t samples = 256,
                                    uint64_t seed = 0x5eed5eedULL) {
  auto classical = [&](uint64_t x) {
    sparse_state s = apply_basis(c, x);
    return s.size() == 1 && s.begin()->second.is_one();
  };
  if (c.line_count <= dense_line_cap) {
    for (uint64_t x = 0; x < (uint64_t{1} << c.line_count); ++x) {
      if (!classical(x)) {
        return false;
      }
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  uint64_t dim_mask = (uint64_t{1} << c.line_count) - 1;
  for (uint32_t i = 0; i < samples; ++i) {
    if (!classical(rng() & dim_mask)) {
      return false;
    }
  }
  return true;
}

/*! \brief Equivalence under the declared line roles of `reference.lines`:
 * inputs range only over constant-consistent basis states and outputs are
 * compared as exact probability distributions over the non-garbage lines.
 *
 * With no constants and no garbage this defers to `equivalent` (which also
 * catches relative phases). Exhaustive over the free inputs up to the dense
 * cap, sampled beyond; a necessary condition in either case, exact for
 * classical outputs.
 */
inline bool equivalent_observed(const circuit& reference, const circuit& c2,
                                equivalence_mode mode =
                                    equivalence_mode::dense,
                                uint32_t samples = 64,
                                uint64_t seed = 0x5eed5eedULL) {
  if (reference.line_count != c2.line_count) {
    return false;
  }
  uint64_t const_mask = 0, const_bits = 0, keep_mask = 0;
  bool restricted = false;
  for (uint32_t l = 0; l < reference.line_count; ++l) {
    const auto& attr = reference.lines[l];
    if (attr.constant) {
      const_mask |= uint64_t{1} << l;
      if (*attr.constant) {
        const_bits |= uint64_t{1} << l;
      }
      restricted = true;
    }
    if (!attr.garbage) {
      keep_mask |= uint64_t{1} << l;
    } else {
      restricted = true;
    }
  }
  if (!restricted) {
    return equivalent(reference, c2, mode, samples, seed);
  }
  auto observed = [&](const circuit& c, uint64_t x) {
    sparse_state s = apply_basis(c, x);
    std::map<uint64_t, dyadic_gaussian> prob;
    for (const auto& [basis, amp] : s) {
      auto p = amp * amp.conj();
      auto [it, fresh] = prob.emplace(basis & keep_mask, p);
      if (!fresh) {
        it->second = it->second + p;
      }
    }
    return prob;
  };
  auto check = [&](uint64_t x) {
    uint64_t in = (x & ~const_mask) | const_bits;
    return observed(reference, in) == observed(c2, in);
  };
  if (mode == equivalence_mode::dense &&
      reference.line_count <= dense_line_cap) {
    for (uint64_t x = 0; x < (uint64_t{1} << reference.line_count); ++x) {
      if ((x & const_mask) != const_bits) {
        continue;
      }
      if (!check(x)) {
        return false;
      }
    }
    return true;
  }
  std::mt19937_64 rng(seed);
  uint64_t dim_mask = reference.line_count >= 64
                          ? ~uint64_t{0}
                          : (uint64_t{1} << reference.line_count) - 1;
  for (uint32_t i = 0; i < samples; ++i) {
    if (!check(rng() & dim_mask)) {
      return false;
    }
  }
  return true;
}

} // namespace ncv
