#include "banachlab/cli.hpp"

#include <chrono>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "banachlab/convergence_lab.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/index_solver.hpp"
#include "banachlab/operator_calculus.hpp"
#include "banachlab/parallel.hpp"
#include "banachlab/state_correction.hpp"
#include "banachlab/subspace_geometry.hpp"
#include "banachlab/verification.hpp"

namespace banachlab {

namespace {

struct Outcome {
  Json result;
  bool assertion_failed = false;
  std::string failure;  ///< what failed, when assertion_failed
  std::vector<std::vector<std::string>> csv_rows;  ///< command-specific CSV
  std::vector<std::string> table_lines;            ///< command-specific table
};

const Json& need(const Json& j, const char* key) {
  require(j.is_object() && j.contains(key),
          std::string("input record is missing \"") + key + "\"");
  return j[key];
}

SearchBudget budget_for(const RunConfig& c, SearchBudget fallback) {
  if (!c.budget) return fallback;
  require(*c.budget >= 1, "--budget must be positive");
  return {*c.budget, fallback.steps};
}

Outcome run_radius(const RunConfig& c) {
  const SpacePtr space = parse_space(need(c.input, "space"));
  const Mat t = parse_matrix(need(c.input, "operator"), *space, "operator");
  RadiusOptions options;
  options.budget = budget_for(c, options.budget);
  options.seed = c.seed;
  const BoundsCertificate v = numerical_radius(*space, t, options);
  Outcome o;
  o.result["space"] = space->label();
  o.result["radius"] = to_json(v, space->is_complex());
  o.table_lines.push_back("v(T) in [" + format_number(v.lower) + ", " + format_number(v.upper) +
                          "] (" + to_string(v.method) + ")");
  return o;
}

Outcome run_opnorm(const RunConfig& c) {
  const SpacePtr space = parse_space(need(c.input, "space"));
  const Mat t = parse_matrix(need(c.input, "operator"), *space, "operator");
  const BoundsCertificate n = operator_norm(*space, t, budget_for(c, {}), c.seed);
  Outcome o;
  o.result["space"] = space->label();
  o.result["norm"] = to_json(n, space->is_complex());
  o.table_lines.push_back("|T| in [" + format_number(n.lower) + ", " + format_number(n.upper) +
                          "] (" + to_string(n.method) + ")");
  return o;
}

Outcome run_index(const RunConfig& c) {
  const SpacePtr space = parse_space(need(c.input, "space"));
  IndexOptions options;
  options.budget = budget_for(c, options.budget);
  const IndexEstimate e = numerical_index(space, options, c.seed);
  Outcome o;
  o.result["index"] = to_json(e);
  o.table_lines.push_back("n(X) in [" + format_number(e.heuristic_lower) + ", " +
                          format_number(e.upper) + "] (upper certified by the witness" +
                          std::string(e.exact ? ", exact" : "") + ")");
  return o;
}

std::pair<Subspace, Subspace> subspace_pair(const Json& input) {
  const SpacePtr ambient = parse_space(need(input, "space"));
  return {parse_subspace(need(input, "y"), ambient), parse_subspace(need(input, "z"), ambient)};
}

Outcome run_gap(const RunConfig& c) {
  const auto [y, z] = subspace_pair(c.input);
  const BoundsCertificate q = gap_opening(y, z, budget_for(c, {}), c.seed);
  Outcome o;
  o.result["gap"] = to_json(q, y.ambient->is_complex());
  o.table_lines.push_back("Q(Y,Z) in [" + format_number(q.lower) + ", " +
                          format_number(q.upper) + "] (" + to_string(q.method) + ")");
  return o;
}

Outcome run_opening(const RunConfig& c) {
  const auto [y, z] = subspace_pair(c.input);
  std::vector<InvertibleMap> maps;
  if (c.input.contains("maps"))
    for (const auto& m : c.input["maps"]) maps.push_back(parse_map(m, y.ambient));
  const OpeningBound b = operator_opening(y, z, maps, budget_for(c, {}), c.seed);
  Outcome o;
  o.result["opening"] = to_json(b, y.ambient->is_complex());
  o.table_lines.push_back("r(Y,Z) <= " + format_number(b.bound.upper) + " (" +
                          (b.convention ? std::string("dimension convention")
                                        : "candidate " + b.best_candidate) +
                          ")");
  return o;
}

Outcome run_bpb(const RunConfig& c) {
  const SpacePtr space = parse_space(need(c.input, "space"));
  const Vec u = parse_vector(need(c.input, "u"), *space, "u");
  const Vec u_star = parse_vector(need(c.input, "u_star"), *space, "u_star");
  const Json& eps = need(c.input, "epsilon");
  require(eps.is_number(), "\"epsilon\" must be a number");
  BpbOptions options;
  options.budget = budget_for(c, options.budget);
  options.exploratory = c.input.value("exploratory", false);
  const BpbResult r = bpb_correct(*space, u, u_star, eps.get<double>(), options);
  Outcome o;
  o.result["bpb"] = to_json(r, space->is_complex());
  o.table_lines.push_back("defect " + format_number(r.defect) + ", distances " +
                          format_number(r.primal_distance) + " / " +
                          format_number(r.dual_distance) + ", " + to_string(r.status));
  if (!options.exploratory && r.status == SearchStatus::stagnated) {
    o.assertion_failed = true;
    o.failure = "correction stagnated on an admissible input";
  }
  return o;
}

Outcome run_converge(const RunConfig& c) {
  const SpacePtr ambient = parse_space(need(c.input, "space"));
  const Subspace x = parse_subspace(need(c.input, "subspace"), ambient);
  const Json& fam = need(c.input, "family");
  PerturbationFamily family;
  family.kind = family_kind_from_string(need(fam, "kind").get<std::string>());
  family.from = fam.value("from", 0);
  family.to = fam.value("to", 1);
  family.scale = fam.value("scale", 1.0);
  family.seed = fam.value("seed", std::uint64_t{0});
  std::vector<int> steps{5, 10, 20, 40, 80};
  if (c.input.contains("steps")) steps = c.input["steps"].get<std::vector<int>>();
  ExperimentOptions options;
  options.index.budget = budget_for(c, options.index.budget);
  const ExperimentReport r = run_convergence_experiment(x, family, steps, options, c.seed);
  Outcome o;
  o.result["experiment"] = to_json(r);
  o.csv_rows = experiment_rows(r);
  for (const auto& row : o.csv_rows) {
    std::string line;
    for (const auto& cell : row) line += (line.empty() ? "" : "  ") + cell;
    o.table_lines.push_back(line);
  }
  if (!r.all_inside) {
    o.assertion_failed = true;
    o.failure = "a step left its sandwich interval";
  }
  return o;
}

Outcome run_verify(const RunConfig& c) {
  std::vector<int> ids;
  if (c.input.contains("criteria")) ids = c.input["criteria"].get<std::vector<int>>();
  else
    for (int id = 1; id <= kCriterionCount; ++id) ids.push_back(id);
  Outcome o;
  o.result["criteria"] = Json::array();
  std::vector<std::string> failed;
  for (int id : ids) {
    const CriterionResult r = run_criterion(id, c.seed);
    o.result["criteria"].push_back(to_json(r, !c.deterministic));
    o.table_lines.push_back(format_line(r));
    if (!r.passed) failed.push_back(std::to_string(id));
  }
  o.result["passed"] = failed.empty();
  if (!failed.empty()) {
    o.assertion_failed = true;
    std::string list;
    for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
    o.failure = "criteria failed: " + list;
  }
  return o;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

Json config_to_json(const RunConfig& config) {
  Json j;
  j["command"] = config.command;
  j["seed"] = config.seed;
  j["budget"] = config.budget ? Json(*config.budget) : Json(nullptr);
  j["format"] = config.format;
  j["threads"] = config.threads;
  j["deterministic"] = config.deterministic;
  j["input"] = config.input;
  return j;
}

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Outcome o;
  try {
    require(config.format == "table" || config.format == "json" || config.format == "csv",
            "--format must be table, json or csv");
    set_worker_count(config.threads);
    const std::string& cmd = config.command;
    if (cmd == "radius") o = run_radius(config);
    else if (cmd == "opnorm") o = run_opnorm(config);
    else if (cmd == "index") o = run_index(config);
    else if (cmd == "gap") o = run_gap(config);
    else if (cmd == "opening") o = run_opening(config);
    else if (cmd == "bpb") o = run_bpb(config);
    else if (cmd == "converge") o = run_converge(config);
    else if (cmd == "verify-all") o = run_verify(config);
    else throw InputError("unknown command '" + cmd + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    err << "assertion failed: " << e.what() << "\n";
    return kExitAssertion;
  }

  Json report;
  report["config"] = config_to_json(config);
  if (!config.deterministic) report["timestamp"] = timestamp();
  report["result"] = o.result;
  report["status"] = o.assertion_failed ? "assertion_failed" : "ok";

  if (config.format == "json") {
    out << report.dump(2) << "\n";
  } else if (config.format == "csv") {
    if (!o.csv_rows.empty()) out << write_csv(o.csv_rows);
    else out << write_csv(flatten(report));
  } else {
    out << "command: " << config.command << "  seed: " << config.seed;
    if (!config.deterministic) out << "  timestamp: " << report["timestamp"].get<std::string>();
    out << "\nconfig: " << config_to_json(config).dump() << "\n";
    for (const auto& line : o.table_lines) out << line << "\n";
    out << "status: " << report["status"].get<std::string>() << "\n";
  }
  if (o.assertion_failed) {
    err << "assertion failed: " << o.failure << "\n";
    return kExitAssertion;
  }
  return kExitOk;
}

}  // namespace banachlab
