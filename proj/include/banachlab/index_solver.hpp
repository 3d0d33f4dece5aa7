#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "banachlab/certificate.hpp"
#include "banachlab/compass_search.hpp"
#include "banachlab/normed_space.hpp"
#include "banachlab/operator_calculus.hpp"

namespace banachlab {

/// [v_lower / |T|_upper, v_upper / |T|_lower].
struct IndexRatio {
  double lower = 0.0;
  double upper = 0.0;
  BoundsCertificate radius;
  BoundsCertificate norm;
};

IndexRatio index_ratio(const NormedSpace& space, const Mat& t, const RadiusOptions& options = {});
inline IndexRatio index_ratio(const OperatorRep& op, const RadiusOptions& options = {}) {
  return index_ratio(*op.space, op.matrix, options);
}

/// n(X) estimate: `upper` is certified by `witness` (its certified ratio
/// upper end); `heuristic_lower` is the search's belief, not a bound.
struct IndexEstimate {
  std::string space_label;
  double upper = 1.0;
  double heuristic_lower = 0.0;
  std::optional<OperatorRep> witness;
  IndexRatio witness_ratio;
  long budget_used = 0;
  int restarts = 0;
  /// True only where the value is known exactly (dimension one).
  bool exact = false;
};

struct IndexOptions {
  SearchBudget budget{24, 250};
  /// Inner radius/norm searches for spaces without closed forms.
  SearchBudget inner{3, 40};
  /// Finals re-certified at `certify` budget for such spaces.
  int certify_top = 4;
  SearchBudget certify{16, 200};
};

/// Minimizes the certified ratio v(T)/|T| over the operator sphere by
/// multistart compass search, seeded with rotations and nilpotent shifts
/// (in the Euclidean frame when the norm has one) and random operators.
IndexEstimate numerical_index(const SpacePtr& space, const IndexOptions& options,
                              std::uint64_t seed);
inline IndexEstimate numerical_index(const SpacePtr& space, std::uint64_t seed = 0) {
  return numerical_index(space, IndexOptions{}, seed);
}

/// Recomputes the witness ratio from scratch at doubled budgets; true when
/// its certified upper end is still within 1e-6 of the recorded upper.
bool index_witness_check(const IndexEstimate& estimate, std::uint64_t seed = 0);

/// True when radius and norm are both computed by closed forms or
/// enumeration on this space.
bool has_exact_calculus(const NormedSpace& space);

}  // namespace banachlab
