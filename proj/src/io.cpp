#include "banachlab/io.hpp"

#include <cmath>
#include <sstream>

#include "banachlab/errors.hpp"

namespace banachlab {

namespace {

const Json& field(const Json& j, const char* key, const char* context) {
  require(j.is_object(), std::string(context) + " must be a JSON object");
  const auto it = j.find(key);
  require(it != j.end(), std::string(context) + " is missing \"" + key + "\"");
  return *it;
}

double number(const Json& j, const std::string& what) {
  require(j.is_number(), what + " must be a number");
  const double v = j.get<double>();
  require(std::isfinite(v), what + " must be finite");
  return v;
}

cd scalar(const Json& j, bool complex, const std::string& what) {
  if (j.is_number()) return {number(j, what), 0.0};
  require(j.is_array() && j.size() == 2, what + " must be a number or a [re, im] pair");
  const cd z{number(j[0], what), number(j[1], what)};
  require(complex || z.imag() == 0.0, what + " has an imaginary part in a real space");
  return z;
}

Json scalar_to_json(cd z, bool complex) {
  if (!complex) return z.real();
  return Json::array({z.real(), z.imag()});
}

Field parse_field(const Json& record) {
  if (!record.contains("field")) return Field::real;
  const Json& f = record["field"];
  require(f.is_string(), "\"field\" must be \"real\" or \"complex\"");
  if (f == "real") return Field::real;
  if (f == "complex") return Field::complex;
  throw InputError("\"field\" must be \"real\" or \"complex\"");
}

Vec parse_raw_vector(const Json& j, bool complex, const std::string& what) {
  require(j.is_array() && !j.empty() && j.size() <= static_cast<std::size_t>(kMaxDim),
          what + " must be a nonempty array of at most " + std::to_string(kMaxDim) + " entries");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[i] = scalar(j[i], complex, what);
  return v;
}

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void flatten_into(const Json& j, const std::string& path,
                  std::vector<std::vector<std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten_into(v, path.empty() ? k : path + "." + k, rows);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i)
      flatten_into(j[i], path + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.push_back({path, j.get<std::string>()});
  } else {
    rows.push_back({path, j.dump()});
  }
}

}  // namespace

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  return Json(value).dump();
}

SpacePtr parse_space(const Json& record) {
  const Json& kind = field(record, "kind", "space");
  require(kind.is_string(), "space \"kind\" must be a string");
  const Field f = parse_field(record);
  std::string label;
  if (record.contains("label")) {
    require(record["label"].is_string(), "space \"label\" must be a string");
    label = record["label"].get<std::string>();
  }
  if (kind == "lp") {
    const Json& p = field(record, "p", "lp space");
    double pv = 0.0;
    if (p.is_string()) {
      require(p == "inf" || p == "infinity", "lp exponent string must be \"inf\"");
      pv = kInf;
    } else {
      pv = number(p, "lp exponent");
    }
    const Json& dim = field(record, "dim", "lp space");
    require(dim.is_number_integer(), "space \"dim\" must be an integer");
    return NormedSpace::lp(dim.get<int>(), pv, f, label);
  }
  if (kind == "polyhedral") {
    require(f == Field::real, "polyhedral spaces are real");
    const Json& vertices = field(record, "vertices", "polyhedral space");
    require(vertices.is_array() && !vertices.empty(), "\"vertices\" must be a nonempty array");
    std::vector<Vec> list;
    for (const auto& v : vertices) list.push_back(parse_raw_vector(v, false, "vertex"));
    if (record.contains("dim"))
      require(record["dim"] == static_cast<int>(list.front().size()),
              "\"dim\" disagrees with the vertex length");
    return NormedSpace::polyhedral(std::move(list), label);
  }
  if (kind == "weighted_euclidean") {
    const Json& weights = field(record, "weights", "weighted_euclidean space");
    require(weights.is_array() && !weights.empty(), "\"weights\" must be a nonempty array");
    std::vector<double> w;
    for (const auto& x : weights) w.push_back(number(x, "weight"));
    if (record.contains("dim"))
      require(record["dim"] == static_cast<int>(w.size()), "\"dim\" disagrees with the weights");
    return NormedSpace::weighted_euclidean(std::move(w), f, label);
  }
  throw InputError("unknown space kind " + kind.dump());
}

Json space_to_json(const NormedSpace& space) {
  Json j;
  const bool complex = space.is_complex();
  std::visit(
      [&](const auto& kind) {
        using K = std::decay_t<decltype(kind)>;
        if constexpr (std::is_same_v<K, LpNorm>) {
          j["kind"] = "lp";
          j["p"] = std::isinf(kind.p) ? Json("inf") : Json(kind.p);
          j["dim"] = space.dim();
        } else if constexpr (std::is_same_v<K, PolyhedralNorm>) {
          j["kind"] = "polyhedral";
          j["dim"] = space.dim();
          j["vertices"] = Json::array();
          for (const auto& v : kind.ball_vertices) j["vertices"].push_back(vector_to_json(v, false));
        } else if constexpr (std::is_same_v<K, WeightedEuclideanNorm>) {
          j["kind"] = "weighted_euclidean";
          j["dim"] = space.dim();
          j["weights"] = kind.weights;
        } else if constexpr (std::is_same_v<K, GramNorm>) {
          j["kind"] = "gram";
          j["dim"] = space.dim();
          j["gram"] = matrix_to_json(kind.gram, complex);
        } else {
          j["kind"] = "induced";
          j["dim"] = space.dim();
          j["ambient"] = space_to_json(*kind.ambient);
          j["basis"] = Json::array();
          for (Eigen::Index c = 0; c < kind.basis.cols(); ++c)
            j["basis"].push_back(vector_to_json(kind.basis.col(c), complex));
        }
      },
      space.kind());
  j["field"] = complex ? "complex" : "real";
  j["label"] = space.label();
  return j;
}

Vec parse_vector(const Json& j, const NormedSpace& space, const char* what) {
  const Vec v = parse_raw_vector(j, space.is_complex(), what);
  space.check_vector(v, what);
  return v;
}

Json vector_to_json(const Vec& v, bool complex) {
  Json j = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(scalar_to_json(v[i], complex));
  return j;
}

Mat parse_matrix(const Json& j, const NormedSpace& space, const char* what) {
  const std::string name(what);
  require(j.is_array() && j.size() == static_cast<std::size_t>(space.dim()),
          name + " must have " + std::to_string(space.dim()) + " rows");
  Mat m(space.dim(), space.dim());
  for (int r = 0; r < space.dim(); ++r) {
    require(j[r].is_array() && j[r].size() == static_cast<std::size_t>(space.dim()),
            name + " must be square");
    for (int c = 0; c < space.dim(); ++c) m(r, c) = scalar(j[r][c], space.is_complex(), name);
  }
  return m;
}

Json matrix_to_json(const Mat& m, bool complex) {
  Json j = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c), complex));
    j.push_back(row);
  }
  return j;
}

Subspace parse_subspace(const Json& j, const SpacePtr& ambient) {
  require(j.is_object(), "subspace must be a JSON object");
  SpacePtr space = ambient;
  if (j.contains("ambient")) space = parse_space(j["ambient"]);
  require(space != nullptr, "subspace needs an \"ambient\" space");
  const Json& basis = field(j, "basis", "subspace");
  require(basis.is_array() && !basis.empty(), "\"basis\" must be a nonempty list of columns");
  Mat b(space->dim(), static_cast<Eigen::Index>(basis.size()));
  require(basis.size() <= static_cast<std::size_t>(space->dim()),
          "subspace has more basis vectors than the ambient dimension");
  for (std::size_t c = 0; c < basis.size(); ++c) b.col(c) = parse_vector(basis[c], *space, "basis column");
  std::string label;
  if (j.contains("label") && j["label"].is_string()) label = j["label"].get<std::string>();
  return make_subspace(space, std::move(b), label);
}

Json subspace_to_json(const Subspace& s) {
  Json j;
  j["label"] = s.label;
  j["basis"] = Json::array();
  for (Eigen::Index c = 0; c < s.basis.cols(); ++c)
    j["basis"].push_back(vector_to_json(s.basis.col(c), s.ambient->is_complex()));
  return j;
}

InvertibleMap parse_map(const Json& j, const SpacePtr& ambient, SearchBudget budget,
                        std::uint64_t seed) {
  const Json& m = field(j, "matrix", "map");
  return make_invertible_map(ambient, parse_matrix(m, *ambient, "map matrix"), budget, seed);
}

Json to_json(const BoundsCertificate& c, bool complex) {
  Json j;
  j["lower"] = c.lower;
  j["upper"] = c.upper;
  j["method"] = to_string(c.method);
  j["budget"] = c.budget_used;
  if (!c.witnesses.empty()) {
    j["witnesses"] = Json::array();
    for (const auto& w : c.witnesses) j["witnesses"].push_back(vector_to_json(w, complex));
  }
  return j;
}

Json to_json(const IndexEstimate& e) {
  Json j;
  j["space"] = e.space_label;
  j["upper"] = e.upper;
  j["heuristic_lower"] = e.heuristic_lower;
  j["exact"] = e.exact;
  j["restarts"] = e.restarts;
  j["budget"] = e.budget_used;
  if (e.witness) {
    const bool complex = e.witness->space->is_complex();
    j["witness"] = matrix_to_json(e.witness->matrix, complex);
    j["witness_radius"] = to_json(e.witness_ratio.radius, complex);
    j["witness_norm"] = to_json(e.witness_ratio.norm, complex);
  }
  return j;
}

Json to_json(const BpbResult& r, bool complex) {
  Json j;
  j["u"] = vector_to_json(r.u, complex);
  j["u_star"] = vector_to_json(r.u_star, complex);
  j["defect"] = r.defect;
  j["epsilon"] = r.epsilon;
  j["y"] = vector_to_json(r.corrected.x, complex);
  j["y_star"] = vector_to_json(r.corrected.f, complex);
  j["pair_defect"] = r.corrected.defect;
  j["primal_residual"] = r.corrected.primal_residual;
  j["dual_residual"] = r.corrected.dual_residual;
  j["primal_distance"] = r.primal_distance;
  j["dual_distance"] = r.dual_distance;
  j["status"] = to_string(r.status);
  j["evaluations"] = r.evaluations;
  return j;
}

Json to_json(const OpeningBound& o, bool complex) {
  Json j = to_json(o.bound, complex);
  j["convention"] = o.convention;
  j["candidate"] = o.best_candidate;
  if (o.best_map.size() > 0) j["map"] = matrix_to_json(o.best_map, complex);
  if (!o.candidates.empty()) {
    j["candidates"] = Json::object();
    for (const auto& [name, value] : o.candidates) j["candidates"][name] = value;
  }
  return j;
}

Json to_json(const ExperimentReport& r) {
  Json j;
  j["family"] = r.family_label;
  j["space"] = r.space_label;
  j["base_index"] = Json::array({r.base_index.lower, r.base_index.upper});
  j["steps"] = Json::array();
  for (const auto& s : r.steps) {
    Json step;
    step["n"] = s.n;
    step["eta"] = s.eta;
    step["index"] = Json::array({s.index.lower, s.index.upper});
    step["sandwich"] = Json::array({s.sandwich.lower, s.sandwich.upper});
    step["inside"] = s.inside;
    step["gap_lower"] = s.gap_lower;
    step["opening_upper"] = s.opening_upper;
    step["deviation"] = s.deviation;
    j["steps"].push_back(step);
  }
  j["max_violation"] = r.max_violation;
  j["trend_slope"] = r.trend_slope;
  j["all_inside"] = r.all_inside;
  j["envelope_nonincreasing"] = r.envelope_nonincreasing;
  return j;
}

std::vector<std::vector<std::string>> experiment_rows(const ExperimentReport& r) {
  std::vector<std::vector<std::string>> rows{{"n", "eta", "index_lower", "index_upper",
                                              "sandwich_lower", "sandwich_upper", "inside",
                                              "gap_lower", "opening_upper"}};
  for (const auto& s : r.steps)
    rows.push_back({std::to_string(s.n), format_number(s.eta), format_number(s.index.lower),
                    format_number(s.index.upper), format_number(s.sandwich.lower),
                    format_number(s.sandwich.upper), s.inside ? "true" : "false",
                    format_number(s.gap_lower), format_number(s.opening_upper)});
  return rows;
}

std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out += ',';
      out += quote(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  bool pending = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char ch = text[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell += ch;
      }
      continue;
    }
    if (ch == '"') {
      quoted = true;
      pending = true;
    } else if (ch == ',') {
      row.push_back(std::move(cell));
      cell.clear();
      pending = true;
    } else if (ch == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      rows.push_back(std::move(row));
      row.clear();
      pending = false;
    } else if (ch != '\r') {
      cell += ch;
      pending = true;
    }
  }
  require(!quoted, "unterminated quote in CSV");
  if (pending) {
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> flatten(const Json& j) {
  std::vector<std::vector<std::string>> rows{{"key", "value"}};
  flatten_into(j, "", rows);
  return rows;
}

}  // namespace banachlab
