#include "banachlab/index_solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "banachlab/errors.hpp"

namespace banachlab {

namespace {

constexpr double kWitnessTolerance = 1e-6;

RadiusOptions fast_options(const IndexOptions& options, std::uint64_t seed) {
  RadiusOptions r;
  r.budget = options.inner;
  r.seed = seed;
  r.cross_check = false;
  return r;
}

// Rotations and shifts on coordinate pairs, moved into the Euclidean
// frame (R^{-1} W R has the same radius and norm there as W in l2).
std::vector<Mat> analytic_seeds(const NormedSpace& space) {
  const int n = space.dim();
  std::vector<Mat> seeds;
  seeds.push_back(Mat::Identity(n, n));
  for (int i = 0; i + 1 < n; ++i) {
    Mat rot = Mat::Zero(n, n);
    rot(i, i + 1) = -1.0;
    rot(i + 1, i) = 1.0;
    seeds.push_back(rot);
    Mat shift = Mat::Zero(n, n);
    shift(i + 1, i) = 1.0;
    seeds.push_back(shift);
  }
  if (n > 2) {
    Mat cycle = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i) cycle((i + 1) % n, i) = 1.0;
    seeds.push_back(cycle);
  }
  if (const Mat* r = space.euclidean_factor())
    for (auto& s : seeds) s = (*space.euclidean_factor_inverse()) * s * (*r);
  return seeds;
}

}  // namespace

bool has_exact_calculus(const NormedSpace& space) {
  return space.dim() == 1 || space.euclidean_factor() != nullptr || space.polytope() != nullptr ||
         space.is_lp(1.0) || space.is_lp(kInf);
}

IndexRatio index_ratio(const NormedSpace& space, const Mat& t, const RadiusOptions& options) {
  space.check_matrix(t, "operator matrix");
  require(t.cols() == space.dim(), "operator matrix must be square");
  require(max_abs_entry(t) > 0.0, "index ratio of the zero operator is undefined");
  IndexRatio r;
  r.radius = numerical_radius(space, t, options);
  r.norm = operator_norm(space, t, options.budget, options.seed);
  r.lower = r.radius.lower / r.norm.upper;
  r.upper = r.radius.upper / r.norm.lower;
  return r;
}

IndexEstimate numerical_index(const SpacePtr& space_ptr, const IndexOptions& options,
                              std::uint64_t seed) {
  require(space_ptr != nullptr, "index needs a space");
  const NormedSpace& space = *space_ptr;
  const int n = space.dim();
  const bool complex = space.is_complex();
  IndexEstimate est;
  est.space_label = space.label();

  if (n == 1) {
    const Mat one = Mat::Identity(1, 1);
    est.upper = est.heuristic_lower = 1.0;
    est.exact = true;
    est.witness = make_operator(space_ptr, one);
    est.witness_ratio = index_ratio(space, one);
    est.restarts = 1;
    return est;
  }

  const bool exact = has_exact_calculus(space);
  const RadiusOptions inner = fast_options(options, seed);

  // Objective: minus the certified ratio upper end (exact spaces) or the
  // cheap search estimate (others).
  CompassProblem problem;
  problem.parameters = complex ? 2 * n * n : n * n;
  problem.project = [&](Params& p) {
    const Mat t = unpack_matrix(p, n, complex);
    const double scale =
        exact ? operator_norm(space, t).upper : max_abs_entry(t);
    if (!(scale > 1e-12) || !std::isfinite(scale)) return false;
    p /= scale;
    return true;
  };
  problem.objective = [&](const Params& p) {
    const Mat t = unpack_matrix(p, n, complex);
    const BoundsCertificate v = numerical_radius(space, t, inner);
    const BoundsCertificate norm = operator_norm(space, t, inner.budget, inner.seed);
    return -(exact ? v.upper / norm.lower : v.lower / norm.lower);
  };
  problem.random_start = [&](Engine& rng) {
    Params p(problem.parameters);
    for (auto& x : p) x = gaussian(rng);
    return p;
  };
  std::vector<Params> starts;
  for (const auto& s : analytic_seeds(space)) starts.push_back(pack_matrix(s, complex));

  const MultistartResult res = multistart_maximize(problem, options.budget, seed, starts);
  est.budget_used = res.evaluations;
  est.restarts = options.budget.restarts;

  // order finals by objective, best first (ties keep restart order)
  std::vector<std::size_t> order(res.restarts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return res.restarts[a].value > res.restarts[b].value;
  });

  RadiusOptions certify;
  certify.budget = options.certify;
  certify.seed = seed;
  const std::size_t count =
      exact ? 1 : std::min<std::size_t>(order.size(), std::max(1, options.certify_top));
  double best = kInf;
  Mat best_t;
  for (std::size_t k = 0; k < count; ++k) {
    const Mat t = unpack_matrix(res.restarts[order[k]].point, n, complex);
    const IndexRatio ratio = index_ratio(space, t, exact ? inner : certify);
    if (ratio.upper < best) {
      best = ratio.upper;
      best_t = t;
      est.witness_ratio = ratio;
    }
  }
  // n(X) <= 1 always (v <= |.|)
  est.upper = std::min(best, 1.0);
  est.witness = make_operator(space_ptr, best_t, options.certify, seed);
  est.heuristic_lower = std::clamp(est.upper * (1.0 - res.stagnation_slack()), 0.0, est.upper);
  return est;
}

bool index_witness_check(const IndexEstimate& estimate, std::uint64_t seed) {
  require(estimate.witness.has_value(), "index estimate has no witness");
  const OperatorRep& w = *estimate.witness;
  RadiusOptions options;
  options.budget = IndexOptions{}.certify.doubled();
  options.cross_check_budget = options.cross_check_budget.doubled();
  options.seed = seed;
  const IndexRatio ratio = index_ratio(*w.space, w.matrix, options);
  return ratio.upper <= estimate.upper + kWitnessTolerance;
}

}  // namespace banachlab
