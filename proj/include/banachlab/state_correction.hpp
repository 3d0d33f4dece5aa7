#pragma once

#include "banachlab/compass_search.hpp"
#include "banachlab/normed_space.hpp"

namespace banachlab {

enum class SearchStatus { converged, stagnated };

struct BpbResult {
  Vec u;
  Vec u_star;
  double defect = 0.0;
  double epsilon = 0.0;
  StatePair corrected;
  double primal_distance = 0.0;  ///< |u - y|
  double dual_distance = 0.0;    ///< |u* - y*|*
  SearchStatus status = SearchStatus::stagnated;
  long evaluations = 0;
};

/// 1 - Re u*(u), for u and u* in the unit balls (inflated by 1e-9).
double defect(const NormedSpace& space, const Vec& u, const Vec& u_star);

struct BpbOptions {
  SearchBudget budget{4, 200};
  /// Skip the defect < epsilon^2 / 2 precondition and return best effort.
  bool exploratory = false;
};

/// Finds an exact state pair (y, y*) minimizing max(|u - y|, |u* - y*|*).
/// Candidates: u/|u|, norming points of u*, and their face snaps, each with
/// the norming functional nearest u*; then compass descent over the sphere.
/// Converged means both distances are below epsilon.
BpbResult bpb_correct(const NormedSpace& space, const Vec& u, const Vec& u_star, double epsilon,
                      const BpbOptions& options = {});

const char* to_string(SearchStatus status);

}  // namespace banachlab
