#pragma once

// `bratteli` command-line front end. Exit codes: 0 success, 2 invalid input,
// 3 inconclusive verdict or nonconverged solver.

#include "cli_io.hpp"

#include <bratteli/bratteli.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace bratteli::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInconclusive = 3;

struct Outcome {
  Json report;
  /// Rows after the CSV header; each row is already comma-joined.
  std::string csv_header = "n,value";
  std::vector<std::string> csv_rows;
  int exit_code = kExitOk;
};

namespace detail {

inline Json input_entry(const InputFile& f) {
  return Json{{"path", f.path}, {"sha256", f.sha256}};
}

inline Json start_report(const std::string& command, std::initializer_list<const InputFile*> inputs) {
  Json inputs_json = Json::array();
  for (const InputFile* f : inputs) inputs_json.push_back(input_entry(*f));
  return Json{{"command", command}, {"inputs", inputs_json}};
}

inline void trace_rows(Outcome& out, const std::vector<TracePoint>& trace) {
  for (const auto& p : trace) {
    out.csv_rows.push_back(std::to_string(p.level) + "," + format_double(p.value));
  }
}

inline void vector_rows(Outcome& out, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.csv_rows.push_back(std::to_string(i) + "," + format_double(v(i)));
  }
}

inline Json verdict_json(const ErgodicityVerdict& v) {
  return Json{{"status", std::string(to_string(v.status))},
              {"base", v.base_level},
              {"horizon", v.horizon},
              {"tolerance", v.tolerance},
              {"trace", to_json(v.trace)}};
}

/// A path from level 0: comma-separated edge ordinals, or "@v" for the
/// empty path at vertex v of level 0.
inline FinitePath parse_path(const BratteliDiagram& d, const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    const auto v = parse_index_list(text.substr(1));
    if (v.size() != 1) throw InvalidArgument("\"" + text + "\" is not a vertex reference");
    return FinitePath{0, v.front(), {}};
  }
  auto edges = parse_index_list(text);
  if (!edges.empty() && edges.front() >= d.edges(1).size()) {
    throw InvalidArgument("path \"" + text + "\" starts with an unknown edge");
  }
  return path_from_edges(d, 0, std::move(edges));
}

inline std::string path_text(const FinitePath& p) {
  return p.edges.empty() ? "@" + std::to_string(p.start_vertex) : join_indices(p.edges);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string diagram;
  std::vector<std::string> paths;
  std::size_t cap = 10000;
};

inline Outcome cmd_validate(const ValidateArgs& args) {
  const InputFile file = load_json(args.diagram);
  const BratteliDiagram d = parse_diagram(file);
  const ValidationReport report = validate(d);
  Outcome out;
  out.report = detail::start_report("validate", {&file});
  out.report["levels"] = d.level_count();
  Json violations = Json::array();
  out.csv_header = "level,index,kind";
  for (const Violation& v : report) {
    violations.push_back(Json{{"kind", std::string(to_string(v.kind))},
                              {"level", v.level},
                              {"index", v.index},
                              {"message", v.message}});
    out.csv_rows.push_back(std::to_string(v.level) + "," + std::to_string(v.index) + "," +
                           std::string(to_string(v.kind)));
  }
  out.report["valid"] = report.empty();
  out.report["violations"] = violations;
  if (!args.paths.empty()) {
    if (!report.empty()) throw InvalidArgument("cannot enumerate paths of an invalid diagram");
    Json listing = Json::array();
    for (const std::string& item : args.paths) {
      const auto parts = parse_index_list([&] {
        std::string s = item;
        std::replace(s.begin(), s.end(), ':', ',');
        return s;
      }());
      if (parts.size() != 3) throw InvalidArgument("--paths expects FROM:TO:VERTEX");
      const auto paths = enumerate_paths(d, parts[0], parts[1], parts[2], args.cap);
      Json list = Json::array();
      for (const FinitePath& p : paths) list.push_back(join_indices(p.edges));
      listing.push_back(Json{{"from", parts[0]},
                             {"to", parts[1]},
                             {"vertex", parts[2]},
                             {"count", paths.size()},
                             {"paths", list}});
    }
    out.report["paths"] = listing;
  }
  out.exit_code = report.empty() ? kExitOk : kExitInvalid;
  return out;
}

struct TelescopeArgs {
  std::string diagram;
  std::string cuts;
};

inline Outcome cmd_telescope(const TelescopeArgs& args) {
  const InputFile file = load_json(args.diagram);
  const BratteliDiagram d = parse_diagram(file);
  require_valid(d);
  const auto cuts = parse_index_list(args.cuts);
  const TelescopedDiagram t = telescope(d, cuts);
  Outcome out;
  out.report = detail::start_report("telescope", {&file});
  out.report["cut_levels"] = t.cut_levels;
  const Json body = diagram_to_json(t.diagram);
  for (const auto& [key, value] : body.items()) out.report[key] = value;
  Json provenance = Json::array();
  for (const auto& level : t.provenance) {
    Json l = Json::array();
    for (const auto& path : level) l.push_back(join_indices(path));
    provenance.push_back(std::move(l));
  }
  out.report["provenance"] = provenance;
  for (std::size_t n = 1; n <= t.diagram.level_count(); ++n) {
    out.csv_rows.push_back(std::to_string(n) + "," + std::to_string(t.diagram.edges(n).size()));
  }
  return out;
}

struct CheckArgs {
  std::string diagram;
  std::size_t base = 0;
  std::optional<std::size_t> horizon;
  double tol = 1e-8;
  bool declare_divergent = false;
  std::string condition = "both";
  bool matrices = false;
  bool verify_epsilon = false;
};

inline Outcome cmd_check_unique(const CheckArgs& args) {
  const InputFile file = load_json(args.diagram);
  const WeightedSystem s(parse_diagram(file));
  const std::size_t horizon = args.horizon.value_or(s.level_count());
  Outcome out;
  out.report = detail::start_report("check-unique", {&file});
  out.report["levels"] = s.level_count();
  out.report["stationary"] = s.stationary();

  bool certified = false;
  if (args.condition == "variation" || args.condition == "both") {
    const auto v = check_variation_condition(s, args.base, horizon, args.tol);
    out.report["variation"] = detail::verdict_json(v);
    detail::trace_rows(out, v.trace);
    certified = certified || v.certified();
  }
  if (args.condition == "series" || args.condition == "both") {
    const auto v = check_series_condition(s, horizon, args.declare_divergent);
    Json j = detail::verdict_json(v);
    j["declared_divergent"] = args.declare_divergent;
    out.report["series"] = j;
    if (args.condition == "series") detail::trace_rows(out, v.trace);
    certified = certified || v.certified();
  }

  Json levels = Json::array();
  for (std::size_t n = 1; n <= horizon; ++n) {
    const Matrix& a = s.transition_matrix(n);
    const MarkovianMatrix& b = markovianize(s, n);
    Json level{{"n", n}, {"contraction_epsilon", contraction_epsilon(b)}};
    level["ratio_bound"] = a.minCoeff() > 0.0 ? Json(ratio_bound(a)) : Json(nullptr);
    if (args.verify_epsilon && b.cols() <= 16) {
      level["contraction_epsilon_bruteforce"] = contraction_epsilon_bruteforce(b);
    }
    if (args.matrices) {
      level["A"] = to_json(a);
      level["B"] = to_json(b.entries());
    }
    levels.push_back(std::move(level));
  }
  out.report["per_level"] = levels;
  out.exit_code = certified ? kExitOk : kExitInconclusive;
  return out;
}

struct StateArgs {
  std::string diagram;
  std::optional<std::size_t> seed_depth;
  std::size_t probe_delta = 5;
  double tol = 1e-8;
  std::size_t compare_depth = 0;
};

inline StateOptions state_options(const WeightedSystem& s, const StateArgs& args) {
  StateOptions o;
  o.probe_delta = args.probe_delta;
  o.tol = args.tol;
  o.compare_depth = args.compare_depth;
  if (args.seed_depth) {
    o.seed_depth = *args.seed_depth;
  } else {
    if (args.probe_delta >= s.level_count()) {
      throw InvalidArgument("probe delta leaves no room for a seed level");
    }
    o.seed_depth = s.level_count() - args.probe_delta;
  }
  return o;
}

inline Json state_json(const StateSequence& st, const StateOptions& o) {
  return Json{{"seed_depth", o.seed_depth},
              {"probe_depth", o.seed_depth + o.probe_delta},
              {"compare_depth", std::min(o.compare_depth, o.seed_depth)},
              {"tolerance", o.tol},
              {"converged", st.converged},
              {"convergence_estimate", st.convergence_estimate}};
}

inline Outcome cmd_state(const StateArgs& args) {
  const InputFile file = load_json(args.diagram);
  const WeightedSystem s(parse_diagram(file));
  const StateOptions o = state_options(s, args);
  const StateSequence st = solve_state(s, o);
  Outcome out;
  out.report = detail::start_report("state", {&file});
  const Json summary = state_json(st, o);
  for (const auto& [k, v] : summary.items()) out.report[k] = v;
  out.report["residual"] = state_equation_residual(s, st).equation;
  Json levels = Json::array();
  out.csv_header = "n,vertex,value";
  for (std::size_t n = 0; n <= st.truncation; ++n) {
    const LogScaledVector& u = scaled_path_sums(s, n);
    Vector masses(u.size());
    for (Eigen::Index v = 0; v < u.size(); ++v) {
      masses(v) = std::exp(st.rho[n].log_value(v) + u.log_value(v));
      out.csv_rows.push_back(std::to_string(n) + "," + std::to_string(v) + "," +
                             format_double(st.value(n, static_cast<std::size_t>(v))));
    }
    levels.push_back(Json{{"n", n},
                          {"rho_mantissa", to_json(st.rho[n].mantissa)},
                          {"rho_log_scale", st.rho[n].log_scale},
                          {"path_sums_mantissa", to_json(u.mantissa)},
                          {"path_sums_log_scale", u.log_scale},
                          {"masses", to_json(masses)}});
  }
  out.report["levels"] = levels;
  out.exit_code = st.converged ? kExitOk : kExitInconclusive;
  return out;
}

struct MeasureArgs {
  StateArgs state;
  std::vector<std::string> paths;
  std::vector<std::string> compare;
  std::string function;
  std::optional<std::size_t> level;
};

inline Outcome cmd_measure(const MeasureArgs& args) {
  const InputFile file = load_json(args.state.diagram);
  const WeightedSystem s(parse_diagram(file));
  const StateOptions o = state_options(s, args.state);
  const StateSequence st = solve_state(s, o);
  const MarkovMeasure m = edge_probabilities(s, st);
  const BratteliDiagram& d = s.diagram();

  std::vector<const InputFile*> inputs{&file};
  std::optional<InputFile> function_file;
  if (!args.function.empty()) function_file = load_json(args.function);

  Outcome out;
  out.report = detail::start_report("measure", {&file});
  if (function_file) out.report["inputs"].push_back(detail::input_entry(*function_file));
  const Json summary = state_json(st, o);
  for (const auto& [k, v] : summary.items()) out.report[k] = v;

  Json cylinders = Json::array();
  for (std::size_t i = 0; i < args.paths.size(); ++i) {
    const FinitePath p = detail::parse_path(d, args.paths[i]);
    const double mass = cylinder_mass(m, p);
    Json local = Json::array();
    for (std::size_t k = 0; k < p.edges.size(); ++k) {
      local.push_back(local_potential(s, k + 1, p.edges[k]));
    }
    cylinders.push_back(Json{{"path", detail::path_text(p)},
                             {"mass", mass},
                             {"normalized_potential", normalized_potential(s, p)},
                             {"local_potentials", local}});
    out.csv_rows.push_back(std::to_string(i) + "," + format_double(mass));
  }
  out.report["cylinders"] = cylinders;

  if (!args.compare.empty()) {
    Json pairs = Json::array();
    for (const std::string& item : args.compare) {
      const auto split = item.find(';');
      if (split == std::string::npos) throw InvalidArgument("--compare expects X;Y");
      const FinitePath x = detail::parse_path(d, item.substr(0, split));
      const FinitePath y = detail::parse_path(d, item.substr(split + 1));
      pairs.push_back(Json{{"x", detail::path_text(x)},
                           {"y", detail::path_text(y)},
                           {"cocycle", cocycle_value(s, x, y)},
                           {"mass_ratio", cylinder_mass(m, x) / cylinder_mass(m, y)}});
    }
    out.report["cocycle"] = pairs;
  }

  if (function_file) {
    const CylinderFunction f = parse_cylinder_function(*function_file, d);
    const std::size_t n = args.level.value_or(m.depth());
    out.report["g_measure"] = Json{{"level", n},
                                   {"integral", integrate(m, f)},
                                   {"residual", g_measure_residual(m, s, f, n)}};
  }
  out.exit_code = st.converged ? kExitOk : kExitInconclusive;
  return out;
}

struct ExpectArgs {
  std::string diagram;
  std::string function;
  std::optional<std::size_t> level;
  std::optional<std::size_t> base;
  std::optional<std::size_t> horizon;
};

inline Outcome cmd_expect(const ExpectArgs& args) {
  const InputFile file = load_json(args.diagram);
  const InputFile function_file = load_json(args.function);
  const WeightedSystem s(parse_diagram(file));
  const CylinderFunction f = parse_cylinder_function(function_file, s.diagram());
  const std::size_t level = args.level.value_or(s.level_count());
  const std::size_t base = args.base.value_or(f.depth());
  const std::size_t horizon = args.horizon.value_or(s.level_count());

  Outcome out;
  out.report = detail::start_report("expect", {&file, &function_file});
  out.report["depth"] = f.depth();
  out.report["level"] = level;
  const Vector e = expectation(s, f, level);
  out.report["expectation"] = to_json(e);
  out.report["variation"] = variation(e);
  const auto decay = variation_decay(s, f, base, horizon);
  out.report["variation_decay"] = to_json(decay);
  detail::trace_rows(out, decay);
  return out;
}

struct PfArgs {
  std::string matrix;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
};

inline Outcome cmd_pf(const PfArgs& args) {
  const InputFile file = load_json(args.matrix);
  const Matrix a = parse_matrix(file);
  Outcome out;
  out.report = detail::start_report("pf", {&file});
  const auto exponent = primitivity_exponent(a);
  out.report["dimension"] = a.rows();
  out.report["primitivity_exponent"] = exponent ? Json(*exponent) : Json(nullptr);
  const PerronResult r = perron(a, args.tol, args.max_iter);
  out.report["lambda"] = r.lambda;
  out.report["left_vector"] = to_json(r.left_vector);
  out.report["residual"] = r.residual;
  out.report["iterations"] = r.iterations;
  out.report["contraction_bound"] = r.contraction_bound;
  out.report["converged"] = r.converged;
  detail::vector_rows(out, r.left_vector);
  out.exit_code = r.converged ? kExitOk : kExitInconclusive;
  return out;
}

struct RuelleArgs {
  std::string graph;
  std::string potential;
  double tol = 1e-8;
  std::size_t max_iter = 100000;
  std::vector<std::string> words;
  std::string function;
  std::optional<std::size_t> steps;
  bool matrix = false;
};

inline Outcome cmd_ruelle(const RuelleArgs& args) {
  const InputFile graph_file = load_json(args.graph);
  const InputFile potential_file = load_json(args.potential);
  const sft::Graph g = parse_graph(graph_file);
  sft::validate_graph(g);
  const KeyedValues kv = parse_keyed_values(potential_file);
  const sft::SftSystem s(g, kv.depth, kv.values);

  std::optional<InputFile> function_file;
  if (!args.function.empty()) function_file = load_json(args.function);

  Outcome out;
  out.report = detail::start_report("ruelle", {&graph_file, &potential_file});
  if (function_file) out.report["inputs"].push_back(detail::input_entry(*function_file));
  out.report["depth"] = s.depth();
  Json words = Json::array();
  for (const auto& w : s.words()) words.push_back(join_indices(w));
  out.report["words"] = words;
  if (args.matrix) out.report["ruelle_matrix"] = to_json(sft::build_ruelle_matrix(s).matrix);

  const sft::WaltersCertificate c = sft::walters_check_locally_constant(s);
  out.report["walters"] = Json{
      {"potential_depth", c.potential_depth},
      {"lag", c.lag},
      {"graph_primitivity_exponent", c.graph_exponent ? Json(*c.graph_exponent) : Json(nullptr)},
      {"uniquely_ergodic", c.uniquely_ergodic}};

  const sft::EigenMeasure em = sft::eigen_measure(s, args.tol, args.max_iter);
  out.report["lambda"] = em.lambda;
  out.report["lambda_from_mass"] = em.lambda_from_mass;
  out.report["mu"] = to_json(em.mu);
  out.report["residual"] = em.residual;
  out.report["iterations"] = em.iterations;
  out.report["contraction_bound"] = em.contraction_bound;
  out.report["converged"] = em.converged;
  detail::vector_rows(out, em.mu);

  if (!args.words.empty()) {
    Json cylinders = Json::array();
    for (const std::string& text : args.words) {
      const sft::Word w = parse_index_list(text);
      cylinders.push_back(Json{{"word", join_indices(w)},
                               {"mass", sft::extend_cylinder_measure(s, em.lambda, em.mu, w)}});
    }
    out.report["cylinders"] = cylinders;
  }
  if (function_file) {
    const sft::WordFunction f = parse_word_function(*function_file, g);
    const std::size_t steps = args.steps.value_or(std::max<std::size_t>(f.depth, 1));
    const auto e = sft::stationary_expectation(s, f, steps);
    Json keys = Json::array();
    for (const auto& w : e.words) keys.push_back(join_indices(w));
    out.report["expectation"] = Json{{"steps", steps},
                                     {"word_length", e.word_length},
                                     {"words", keys},
                                     {"values", to_json(e.values)},
                                     {"variation", variation(e.values)}};
  }
  out.exit_code = em.converged ? kExitOk : kExitInconclusive;
  return out;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Unique ergodicity, Markov measures and Perron-Frobenius data for "
               "weighted Bratteli diagrams and subshifts of finite type",
               "bratteli"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  ValidateArgs validate_args;
  auto* validate_cmd = app.add_subcommand("validate", "Check the diagram invariants");
  validate_cmd->add_option("diagram", validate_args.diagram)->required();
  validate_cmd->add_option("--paths", validate_args.paths,
                           "Enumerate paths FROM:TO:VERTEX (repeatable)");
  validate_cmd->add_option("--cap", validate_args.cap, "Maximum paths per listing");

  TelescopeArgs telescope_args;
  auto* telescope_cmd = app.add_subcommand("telescope", "Contract a diagram along cut levels");
  telescope_cmd->add_option("diagram", telescope_args.diagram)->required();
  telescope_cmd->add_option("--cuts", telescope_args.cuts, "Cut levels, e.g. 0,2,4")->required();

  CheckArgs check_args;
  auto* check_cmd = app.add_subcommand("check-unique", "Unique-ergodicity checks");
  check_cmd->add_option("diagram", check_args.diagram)->required();
  check_cmd->add_option("--base", check_args.base, "Base level m");
  check_cmd->add_option("--horizon", check_args.horizon, "Last level examined");
  check_cmd->add_option("--tol", check_args.tol, "Variation tolerance");
  check_cmd->add_flag("--declare-divergent", check_args.declare_divergent,
                      "Assert that sum eps_n diverges");
  check_cmd->add_option("--condition", check_args.condition)
      ->check(CLI::IsMember({"variation", "series", "both"}));
  check_cmd->add_flag("--matrices", check_args.matrices, "Include A_n and B_n");
  check_cmd->add_flag("--verify-epsilon", check_args.verify_epsilon,
                      "Cross-check eps_n by exhaustive subset scan");

  StateArgs state_args;
  auto add_state_options = [](CLI::App* cmd, StateArgs& a) {
    cmd->add_option("diagram", a.diagram)->required();
    cmd->add_option("--seed-depth", a.seed_depth, "Seed level N");
    cmd->add_option("--probe-delta", a.probe_delta, "Probe solve at N + delta");
    cmd->add_option("--tol", a.tol, "Convergence tolerance");
    cmd->add_option("--compare-depth", a.compare_depth, "Compare level masses up to here");
  };
  auto* state_cmd = app.add_subcommand("state", "Solve the state equations");
  add_state_options(state_cmd, state_args);

  MeasureArgs measure_args;
  auto* measure_cmd = app.add_subcommand("measure", "Cylinder masses of the Markov measure");
  add_state_options(measure_cmd, measure_args.state);
  measure_cmd->add_option("--path", measure_args.paths,
                          "Cylinder as comma-separated edge ordinals from level 0, or @v");
  measure_cmd->add_option("--compare", measure_args.compare,
                          "Path pair X;Y: cocycle value against the mass ratio");
  measure_cmd->add_option("--function", measure_args.function, "Cylinder function JSON");
  measure_cmd->add_option("--level", measure_args.level, "Level of the G-measure check");

  ExpectArgs expect_args;
  auto* expect_cmd = app.add_subcommand("expect", "Conditional expectations E_n(f)");
  expect_cmd->add_option("diagram", expect_args.diagram)->required();
  expect_cmd->add_option("--function", expect_args.function, "Cylinder function JSON")->required();
  expect_cmd->add_option("--level", expect_args.level, "Level n of E_n(f)");
  expect_cmd->add_option("--base", expect_args.base, "First level of the decay trace");
  expect_cmd->add_option("--horizon", expect_args.horizon, "Last level of the decay trace");

  PfArgs pf_args;
  auto* pf_cmd = app.add_subcommand("pf", "Perron-Frobenius data of a primitive matrix");
  pf_cmd->add_option("matrix", pf_args.matrix)->required();
  pf_cmd->add_option("--tol", pf_args.tol, "Residual tolerance");
  pf_cmd->add_option("--max-iter", pf_args.max_iter, "Iteration cap");

  RuelleArgs ruelle_args;
  auto* ruelle_cmd = app.add_subcommand("ruelle", "Ruelle operator of a subshift of finite type");
  ruelle_cmd->add_option("graph", ruelle_args.graph)->required();
  ruelle_cmd->add_option("potential", ruelle_args.potential)->required();
  ruelle_cmd->add_option("--tol", ruelle_args.tol, "Residual tolerance");
  ruelle_cmd->add_option("--max-iter", ruelle_args.max_iter, "Iteration cap");
  ruelle_cmd->add_option("--word", ruelle_args.words, "Cylinder word (repeatable)");
  ruelle_cmd->add_option("--function", ruelle_args.function, "Word function JSON");
  ruelle_cmd->add_option("--steps", ruelle_args.steps, "n for E_n(f)");
  ruelle_cmd->add_flag("--matrix", ruelle_args.matrix, "Include the transfer matrix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInvalid;
  }

  const auto started = std::chrono::steady_clock::now();
  Outcome result;
  try {
    if (validate_cmd->parsed()) result = cmd_validate(validate_args);
    else if (telescope_cmd->parsed()) result = cmd_telescope(telescope_args);
    else if (check_cmd->parsed()) result = cmd_check_unique(check_args);
    else if (state_cmd->parsed()) result = cmd_state(state_args);
    else if (measure_cmd->parsed()) result = cmd_measure(measure_args);
    else if (expect_cmd->parsed()) result = cmd_expect(expect_args);
    else if (pf_cmd->parsed()) result = cmd_pf(pf_args);
    else result = cmd_ruelle(ruelle_args);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidArgument& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const UnsupportedInput& e) {
    err << "error: unsupported input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const CapacityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  if (format == "csv") {
    out << result.csv_header << "\n";
    for (const auto& row : result.csv_rows) out << row << "\n";
  } else {
    result.report["wall_time"] = elapsed.count();
    write_json(out, result.report);
  }
  return result.exit_code;
}

}  // namespace bratteli::cli
