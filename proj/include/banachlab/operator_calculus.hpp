#pragma once

#include <cstdint>
#include <vector>

#include "banachlab/certificate.hpp"
#include "banachlab/compass_search.hpp"
#include "banachlab/normed_space.hpp"
#include "banachlab/subspace.hpp"

namespace banachlab {

/// A square matrix acting on `space` (for subspaces, the induced space in
/// basis coordinates) together with its operator norm bounds.
struct OperatorRep {
  SpacePtr space;
  Mat matrix;
  BoundsCertificate norm_bounds;
};

OperatorRep make_operator(SpacePtr space, Mat matrix, SearchBudget budget = {},
                          std::uint64_t seed = 0);

/// |T| = sup |Tx| over the unit sphere. Closed forms for l1, l2, l-inf and
/// weighted Euclidean norms, vertex enumeration for real polytope balls,
/// multistart search otherwise.
BoundsCertificate operator_norm(const NormedSpace& space, const Mat& t,
                                SearchBudget budget = {}, std::uint64_t seed = 0);

/// Values f(Tx) over sampled state pairs, plus every vertex/face pair of a
/// real polytope ball.
std::vector<cd> numerical_range_samples(const OperatorRep& op, int count, std::uint64_t seed);

struct RadiusOptions {
  SearchBudget budget{};
  std::uint64_t seed = 0;
  /// Use closed forms and enumeration where available; false forces the
  /// multistart path everywhere.
  bool allow_exact = true;
  /// Re-run multistart search against enumerated results.
  bool cross_check = true;
  SearchBudget cross_check_budget{8, 150};
  double hilbert_tolerance = 1e-10;
  int hilbert_max_solves = 1 << 14;
};

/// v(T) = sup |f(Tx)| over state pairs (x, f).
BoundsCertificate numerical_radius(const NormedSpace& space, const Mat& t,
                                   const RadiusOptions& options = {});
inline BoundsCertificate numerical_radius(const OperatorRep& op,
                                          const RadiusOptions& options = {}) {
  return numerical_radius(*op.space, op.matrix, options);
}

/// C^{-1} T C restricted to Y, in Y's basis coordinates, for T acting on Z
/// and C carrying Y onto Z. Throws when some C y_j leaves span(Z) by more
/// than 1e-9 (least-squares residual).
OperatorRep conjugate_operator(const OperatorRep& t_on_z, const Subspace& z,
                               const InvertibleMap& c, const Subspace& y,
                               SearchBudget budget = {}, std::uint64_t seed = 0);

struct LipschitzReport {
  BoundsCertificate radius_s;
  BoundsCertificate radius_t;
  BoundsCertificate distance;  ///< |S - T|
  double slack_st = 0.0;       ///< |S-T|_up + 2e-9 - (v_lo(S) - v_up(T))
  double slack_ts = 0.0;
  bool passed = false;
};

LipschitzReport radius_lipschitz_check(const OperatorRep& s, const OperatorRep& t,
                                       const RadiusOptions& options = {});

}  // namespace banachlab
