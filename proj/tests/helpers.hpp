/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file helpers.hpp
  \brief Shared fixtures for the test suites
*/

#pragma once

#include <ncv/circuit.hpp>
#include <ncv/templates.hpp>

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ncv::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/*! \brief The shipped default template set, loaded (and oracle-revalidated
 * by the loader) from the data directory. */
inline const std::vector<circuit_template>& default_set() {
  static const std::vector<circuit_template> set = load_templates(
      read_file(std::string(NCVOPT_DATA_DIR) + "/templates_default.txt"));
  return set;
}

/*! \brief A single m-control Toffoli over m+1+extra lines; `negs` lists the
 * controls to negate. */
inline circuit mct_circuit(uint32_t m, uint32_t extra,
                           const std::vector<uint32_t>& negs = {}) {
  circuit c(m + 1 + extra);
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

/*! \brief The two-Peres NCV full adder on lines a=0, b=1, c=2, d=3. */
inline circuit full_adder() {
  circuit c(4);
  c.add(gate::make_v(1, 3));
  c.add(gate::make_cnot(0, 1));
  c.add(gate::make_vdag(1, 3));
  c.add(gate::make_v(0, 3));
  c.add(gate::make_v(2, 3));
  c.add(gate::make_cnot(1, 2));
  c.add(gate::make_vdag(2, 3));
  c.add(gate::make_v(1, 3));
  return c;
}

} // namespace ncv::testing
