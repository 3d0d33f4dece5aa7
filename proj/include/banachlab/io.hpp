#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "banachlab/certificate.hpp"
#include "banachlab/convergence_lab.hpp"
#include "banachlab/index_solver.hpp"
#include "banachlab/normed_space.hpp"
#include "banachlab/state_correction.hpp"
#include "banachlab/subspace.hpp"
#include "banachlab/subspace_geometry.hpp"

namespace banachlab {

using Json = nlohmann::ordered_json;

// Space records: {"kind": "lp"|"polyhedral"|"weighted_euclidean",
// "p": number|"inf", "dim", "field": "real"|"complex", "vertices", "weights"}.
SpacePtr parse_space(const Json& record);
Json space_to_json(const NormedSpace& space);

// Vectors: arrays of numbers, or of [re, im] pairs in complex spaces.
Vec parse_vector(const Json& j, const NormedSpace& space, const char* what = "vector");
Json vector_to_json(const Vec& v, bool complex);

// Matrices: row-major nested arrays with the same entry convention.
Mat parse_matrix(const Json& j, const NormedSpace& space, const char* what = "matrix");
Json matrix_to_json(const Mat& m, bool complex);

/// {"ambient": <space>, "basis": [[column], ...]}; `ambient` may instead be
/// supplied by the caller when the record has none.
Subspace parse_subspace(const Json& j, const SpacePtr& ambient = nullptr);
Json subspace_to_json(const Subspace& s);

InvertibleMap parse_map(const Json& j, const SpacePtr& ambient, SearchBudget budget = {},
                        std::uint64_t seed = 0);

Json to_json(const BoundsCertificate& c, bool complex);
Json to_json(const IndexEstimate& e);
Json to_json(const BpbResult& r, bool complex);
Json to_json(const OpeningBound& o, bool complex);
Json to_json(const ExperimentReport& r);

/// Frozen column order: n, eta, index_lower, index_upper, sandwich_lower,
/// sandwich_upper, inside, gap_lower, opening_upper.
std::vector<std::vector<std::string>> experiment_rows(const ExperimentReport& r);

/// Minimal RFC 4180 style CSV (quotes only where needed).
std::string write_csv(const std::vector<std::vector<std::string>>& rows);
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_number(double value);

/// Flattens nested objects/arrays into (path, scalar text) rows.
std::vector<std::vector<std::string>> flatten(const Json& j);

}  // namespace banachlab
