/*--------------------------------------------------------------------------
| Part of the ncvopt project, distributed under the MIT License.
| See the accompanying LICENSE file for details.
*--------------------------------------------------------------------------*/

/*!
  \file ncvopt.cpp
  \brief Command line front end: optimize, decompose, discover, verify, stats

  Exit codes: 0 success, 1 verification failure / inequivalence, 2 parse
  error, 3 budget or resource problem.
*/

#include <ncv/circuit.hpp>
#include <ncv/decompose.hpp>
#include <ncv/discovery.hpp>
#include <ncv/io.hpp>
#include <ncv/level.hpp>
#include <ncv/optimizer.hpp>
#include <ncv/templates.hpp>
#include <ncv/unitary.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_verify = 1;
constexpr int exit_parse = 2;
constexpr int exit_resource = 3;

struct cli_error {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cli_error{exit_resource, "cannot open '" + path + "'"};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw cli_error{exit_resource, "cannot write '" + path + "'"};
  }
  out << text;
}

#ifndef NCVOPT_DATA_DIR
#define NCVOPT_DATA_DIR "."
#endif

std::vector<ncv::circuit_template> load_template_set(const std::string& path) {
  std::string file = path;
  if (file.empty()) {
    file = std::string(NCVOPT_DATA_DIR) + "/templates_default.txt";
  }
  try {
    return ncv::load_templates(read_file(file));
  } catch (const ncv::template_error& e) {
    throw cli_error{exit_parse,
                    "template file '" + file + "': " + e.what()};
  }
}

ncv::cost_model load_model(const std::string& path) {
  if (path.empty()) {
    return {};
  }
  try {
    return ncv::parse_cost_model(read_file(path));
  } catch (const ncv::parse_error& e) {
    throw cli_error{exit_parse, "cost model '" + path + "': " + e.what()};
  }
}

ncv::circuit parse_input(const std::string& path,
                         std::vector<uint32_t>* levels = nullptr) {
  try {
    return ncv::parse_circuit(read_file(path), levels);
  } catch (const ncv::parse_error& e) {
    throw cli_error{exit_parse, path + ": " + e.what()};
  }
}

struct common_flags {
  std::string templates_path;
  std::string model_path;
  std::string out_path;
  std::string report_path;
};

void add_common(CLI::App* cmd, common_flags& f, bool with_out = true) {
  cmd->add_option("--templates", f.templates_path,
                  "template file (default: shipped set)");
  cmd->add_option("--cost-model", f.model_path, "cost model file");
  if (with_out) {
    cmd->add_option("-o,--out", f.out_path, "output circuit file");
  }
  cmd->add_option("--report", f.report_path, "JSON report file");
}

void emit(const common_flags& f, const std::string& circuit_text,
          const ncv::report& rep) {
  if (!f.out_path.empty()) {
    write_file(f.out_path, circuit_text);
  } else {
    std::cout << circuit_text;
  }
  std::string json = ncv::report_to_json(rep).dump(2) + "\n";
  if (!f.report_path.empty()) {
    write_file(f.report_path, json);
  } else if (!f.out_path.empty()) {
    std::cout << json;
  }
}

std::string verification_label(const ncv::circuit& c) {
  return c.line_count <= ncv::dense_line_cap ? "exact" : "sampled(64)";
}

bool verify_pair(const ncv::circuit& original, const ncv::circuit& result) {
  auto mode = original.line_count <= ncv::dense_line_cap
                  ? ncv::equivalence_mode::dense
                  : ncv::equivalence_mode::sampled;
  return ncv::equivalent_observed(original, result, mode);
}

ncv::orientation_policy parse_policy(const std::string& name) {
  if (name == "uniform") {
    return ncv::orientation_policy::uniform_a;
  }
  if (name == "alternate") {
    return ncv::orientation_policy::alternate;
  }
  if (name == "greedy") {
    return ncv::orientation_policy::greedy;
  }
  throw cli_error{exit_parse, "unknown orientation policy '" + name + "'"};
}

uint32_t depth_of_flat(const ncv::circuit& c,
                       const std::vector<uint32_t>& levels) {
  if (!levels.empty()) {
    return levels.back();
  }
  return static_cast<uint32_t>(c.size()); // uncompacted: depth = gate count
}

int cmd_optimize(const std::string& in_path, const common_flags& f,
                 bool compact, const std::string& orientation,
                 const std::string& ancilla) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<uint32_t> in_levels;
  ncv::circuit original = parse_input(in_path, &in_levels);
  auto templates = load_template_set(f.templates_path);
  ncv::cost_model model = load_model(f.model_path);
  auto amode = ancilla == "single" ? ncv::ancilla_mode::single
                                   : ncv::ancilla_mode::dirty_many;

  std::vector<std::string> policies =
      orientation == "best"
          ? std::vector<std::string>{"uniform", "alternate", "greedy"}
          : std::vector<std::string>{orientation};
  ncv::circuit best;
  ncv::reduce_stats best_stats;
  std::string best_policy;
  bool have_best = false;
  for (const auto& p : policies) {
    ncv::circuit expanded = ncv::expand_all(original, parse_policy(p), amode,
                                            &templates, model);
    expanded = ncv::boundary_simplify(expanded);
    ncv::reduce_stats stats;
    ncv::circuit reduced = ncv::reduce_cost(expanded, templates, model, &stats);
    if (!have_best ||
        ncv::circuit_cost(reduced, model) < ncv::circuit_cost(best, model)) {
      best = std::move(reduced);
      best_stats = stats;
      best_policy = p;
      have_best = true;
    }
  }

  ncv::report rep;
  rep.input_gates = original.size();
  rep.input_cost = ncv::rational_string(ncv::circuit_cost(original, model));
  rep.input_depth = depth_of_flat(original, in_levels);
  rep.strategy = best_policy;
  rep.templates_applied = best_stats.per_template;
  rep.flags["compact"] = compact;
  rep.flags["ancilla"] = ancilla;
  rep.flags["orientation"] = orientation;
  rep.flags["seed"] = "0x5eed5eed";

  std::string text;
  ncv::circuit final = best;
  uint32_t out_depth = static_cast<uint32_t>(best.size());
  if (compact) {
    ncv::leveled_circuit lc = ncv::assign_levels(best, templates, model);
    final = lc.scheduled;
    out_depth = lc.depth;
    text = ncv::write_circuit(lc);
  } else {
    text = ncv::write_circuit(best);
  }
  rep.output_gates = final.size();
  rep.output_cost = ncv::rational_string(ncv::circuit_cost(final, model));
  rep.output_depth = out_depth;
  rep.histogram = ncv::gate_histogram(final);
  rep.verification = verification_label(original);
  if (!verify_pair(original, final)) {
    std::cerr << "ncvopt: verification FAILED (transformation bug)\n";
    return exit_verify;
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  emit(f, text, rep);
  return exit_ok;
}

int cmd_decompose(const std::string& in_path, const common_flags& f,
                  const std::string& orientation, const std::string& ancilla) {
  auto t0 = std::chrono::steady_clock::now();
  std::vector<uint32_t> in_levels;
  ncv::circuit original = parse_input(in_path, &in_levels);
  auto templates = load_template_set(f.templates_path);
  ncv::cost_model model = load_model(f.model_path);
  auto amode = ancilla == "single" ? ncv::ancilla_mode::single
                                   : ncv::ancilla_mode::dirty_many;

  std::vector<std::string> policies =
      orientation == "best"
          ? std::vector<std::string>{"uniform", "alternate", "greedy"}
          : std::vector<std::string>{orientation};
  ncv::circuit best_raw;
  std::string best_policy;
  ncv::rational best_cost{-1};
  for (const auto& p : policies) {
    ncv::circuit raw = ncv::expand_all(original, parse_policy(p), amode,
                                       &templates, model);
    // rank raw expansions by how well they optimize, emit the raw circuit
    ncv::rational cost =
        ncv::circuit_cost(ncv::reduce_cost(raw, templates, model), model);
    if (best_cost < 0 || cost < best_cost) {
      best_raw = std::move(raw);
      best_policy = p;
      best_cost = cost;
    }
  }

  ncv::report rep;
  rep.input_gates = original.size();
  rep.input_cost = ncv::rational_string(ncv::circuit_cost(original, model));
  rep.input_depth = depth_of_flat(original, in_levels);
  rep.output_gates = best_raw.size();
  rep.output_cost = ncv::rational_string(ncv::circuit_cost(best_raw, model));
  rep.output_depth = static_cast<uint32_t>(best_raw.size());
  rep.histogram = ncv::gate_histogram(best_raw);
  rep.strategy = best_policy;
  rep.flags["ancilla"] = ancilla;
  rep.flags["orientation"] = orientation;
  if (original.size() == 1 &&
      original.gates[0].kind == ncv::gate_kind::toffoli &&
      original.gates[0].controls.size() >= 3 &&
      amode == ncv::ancilla_mode::dirty_many) {
    // n counts the gate's own lines: controls plus target
    uint64_t n = original.gates[0].controls.size() + 1;
    rep.flags["expected_gates"] = 20 * n - 60;
    rep.flags["formula_ok"] = best_raw.size() == 20 * n - 60;
  }
  rep.verification = verification_label(original);
  if (!verify_pair(original, best_raw)) {
    std::cerr << "ncvopt: verification FAILED (transformation bug)\n";
    return exit_verify;
  }
  auto t1 = std::chrono::steady_clock::now();
  rep.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  emit(f, ncv::write_circuit(best_raw), rep);
  return exit_ok;
}

int cmd_discover(uint32_t size, uint32_t wires, uint64_t budget,
                 const std::string& out_path, const common_flags& f) {
  auto t0 = std::chrono::steady_clock::now();
  auto templates = load_template_set(f.templates_path);
  ncv::search_spec spec;
  spec.size = size;
  spec.wire_count = wires;
  spec.existing = templates;
  spec.node_budget = budget;
  ncv::discovery_result result = ncv::enumerate_identities(spec);
  if (!out_path.empty()) {
    write_file(out_path, ncv::save_templates(result.templates));
  }
  nlohmann::json manifest;
  manifest["size"] = size;
  manifest["wires"] = wires;
  manifest["found"] = result.templates.size();
  manifest["exhaustive"] = result.exhaustive;
  manifest["nodes"] = result.nodes;
  nlohmann::json names = nlohmann::json::array();
  for (const auto& t : result.templates) {
    names.push_back(t.name);
  }
  manifest["templates"] = names;
  auto t1 = std::chrono::steady_clock::now();
  manifest["runtime_ms"] =
      std::chrono::duration<double, std::milli>(t1 - t0).count();
  std::string json = manifest.dump(2) + "\n";
  if (!f.report_path.empty()) {
    write_file(f.report_path, json);
  } else {
    std::cout << json;
  }
  return result.exhaustive ? exit_ok : exit_resource;
}

int cmd_verify(const std::string& a_path, const std::string& b_path) {
  ncv::circuit a = parse_input(a_path);
  ncv::circuit b = parse_input(b_path);
  std::string mode = verification_label(a);
  bool eq = verify_pair(a, b);
  nlohmann::json j;
  j["equivalent"] = eq;
  j["mode"] = mode;
  std::cout << j.dump(2) << "\n";
  return eq ? exit_ok : exit_verify;
}

int cmd_stats(const std::string& in_path, const common_flags& f) {
  std::vector<uint32_t> levels;
  ncv::circuit c = parse_input(in_path, &levels);
  ncv::cost_model model = load_model(f.model_path);
  nlohmann::json j;
  j["lines"] = c.line_count;
  j["gates"] = c.size();
  j["depth"] = depth_of_flat(c, levels);
  j["cost"] = ncv::rational_string(ncv::circuit_cost(c, model));
  j["histogram"] = ncv::gate_histogram(c);
  std::cout << j.dump(2) << "\n";
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"peephole optimization toolkit for NCV quantum circuits"};
  app.require_subcommand(1);

  std::string in_path, in_path_b, orientation = "alternate";
  std::string ancilla = "dirty-many";
  bool compact = false;
  uint32_t size = 3, wires = 2;
  uint64_t budget = 0;
  std::string discover_out;
  common_flags flags;

  auto* opt = app.add_subcommand("optimize",
                                 "lower, simplify and optionally compact");
  opt->add_option("input", in_path, "circuit file")->required();
  opt->add_flag("--compact", compact, "assign parallel levels");
  opt->add_option("--orientation", orientation,
                  "uniform|alternate|greedy|best");
  opt->add_option("--ancilla", ancilla, "dirty-many|single");
  add_common(opt, flags);

  auto* dec = app.add_subcommand("decompose", "lower to the NCV gate set");
  dec->add_option("input", in_path, "circuit file")->required();
  dec->add_option("--orientation", orientation,
                  "uniform|alternate|greedy|best");
  dec->add_option("--ancilla", ancilla, "dirty-many|single");
  add_common(dec, flags);

  auto* dis = app.add_subcommand("discover", "search for new templates");
  dis->add_option("--size", size, "identity size to search")->required();
  dis->add_option("--wires", wires, "wire count (1..4)")->required();
  dis->add_option("--budget", budget, "node budget (0 = unlimited)");
  dis->add_option("--out", discover_out, "output template file");
  add_common(dis, flags, false);

  auto* ver = app.add_subcommand("verify", "check two circuits for equality");
  ver->add_option("a", in_path, "first circuit file")->required();
  ver->add_option("b", in_path_b, "second circuit file")->required();

  auto* sta = app.add_subcommand("stats", "gate counts, depth and cost");
  sta->add_option("input", in_path, "circuit file")->required();
  add_common(sta, flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (opt->parsed()) {
      return cmd_optimize(in_path, flags, compact, orientation, ancilla);
    }
    if (dec->parsed()) {
      return cmd_decompose(in_path, flags, orientation, ancilla);
    }
    if (dis->parsed()) {
      return cmd_discover(size, wires, budget, discover_out, flags);
    }
    if (ver->parsed()) {
      return cmd_verify(in_path, in_path_b);
    }
    if (sta->parsed()) {
      return cmd_stats(in_path, flags);
    }
  } catch (const cli_error& e) {
    std::cerr << "ncvopt: " << e.message << "\n";
    return e.code;
  } catch (const ncv::parse_error& e) {
    std::cerr << "ncvopt: " << e.what() << "\n";
    return exit_parse;
  } catch (const std::exception& e) {
    std::cerr << "ncvopt: " << e.what() << "\n";
    return exit_resource;
  }
  return exit_ok;
}
