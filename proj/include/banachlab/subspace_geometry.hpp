#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "banachlab/certificate.hpp"
#include "banachlab/compass_search.hpp"
#include "banachlab/subspace.hpp"

namespace banachlab {

/// inf |y - z| over the unit sphere of Z, for a unit vector y of the
/// ambient space. Exact for Euclidean norms and one-dimensional real Z;
/// otherwise the upper end is an evaluated candidate and the lower end is
/// heuristic.
BoundsCertificate dist_to_sphere(const Vec& y, const Subspace& z, SearchBudget budget = {},
                                 std::uint64_t seed = 0);

/// sup over the unit sphere of Y of dist(y, S_Z). Exact for Euclidean
/// norms (smallest principal cosine).
BoundsCertificate directed_gap(const Subspace& y, const Subspace& z, SearchBudget budget = {},
                               std::uint64_t seed = 0);

/// max of the two directed gaps. Arguments are put in a canonical order
/// first, so swapping them returns the identical certificate.
BoundsCertificate gap_opening(const Subspace& y, const Subspace& z, SearchBudget budget = {},
                              std::uint64_t seed = 0);

struct OpeningBound {
  BoundsCertificate bound;
  /// Set when dim Y != dim Z and the value 1 comes from the convention.
  bool convention = false;
  Mat best_map;
  std::string best_candidate;
  /// |C - I| upper end of every candidate tried, in trial order.
  std::vector<std::pair<std::string, double>> candidates;
};

/// Upper bound on inf |C - I| over invertible C with C(Y) = Z, taken over
/// explicit candidates: the direct rotation (Euclidean ambients), basis
/// exchange maps and the supplied maps. Supplied maps that are not onto Z
/// are rejected.
OpeningBound operator_opening_upper(const Subspace& y, const Subspace& z,
                                    std::span<const InvertibleMap> candidates = {},
                                    SearchBudget budget = {}, std::uint64_t seed = 0);

/// max of both directed bounds; supplied maps are inverted for Z -> Y.
OpeningBound operator_opening(const Subspace& y, const Subspace& z,
                              std::span<const InvertibleMap> candidates = {},
                              SearchBudget budget = {}, std::uint64_t seed = 0);

/// The subspace C(X).
Subspace perturb_subspace(const Subspace& x, const InvertibleMap& c);

/// True when both bases span the same subspace (rank test at 1e-10).
bool same_span(const Subspace& a, const Subspace& b);

bool same_ambient(const Subspace& a, const Subspace& b);

}  // namespace banachlab
