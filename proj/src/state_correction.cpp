#include "banachlab/state_correction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "banachlab/errors.hpp"
#include "banachlab/sphere_search.hpp"

namespace banachlab {

namespace {

constexpr std::uint64_t kBpbSeed = 0xb9b;

// Unit vectors x with f(x) = |f|*.
std::vector<Vec> norming_points(const NormedSpace& space, const Vec& f) {
  const int n = space.dim();
  std::vector<Vec> out;
  if (f.cwiseAbs().maxCoeff() == 0.0) return out;
  auto emit = [&](Vec x) {
    const double norm = space.norm(x);
    if (norm > 0.0) out.push_back(x / norm);
  };
  if (space.euclidean_factor()) {
    const Mat& r_inv = *space.euclidean_factor_inverse();
    emit(r_inv * (r_inv.adjoint() * Vec(f.conjugate())));
    return out;
  }
  if (const Polytope* poly = space.polytope()) {
    double best = 0.0;
    for (const auto& v : poly->vertices) best = std::max(best, pair(f, v).real());
    for (const auto& v : poly->vertices)
      if (pair(f, v).real() >= best * (1.0 - 1e-12)) out.push_back(v);
    return out;
  }
  const auto* lp = std::get_if<LpNorm>(&space.kind());
  if (lp == nullptr) return out;
  if (lp->p == 1.0) {
    const double top = f.cwiseAbs().maxCoeff();
    for (int i = 0; i < n; ++i) {
      if (std::abs(f[i]) < top * (1.0 - 1e-12)) continue;
      Vec x = Vec::Zero(n);
      x[i] = std::conj(phase(f[i]));
      emit(x);
    }
  } else if (std::isinf(lp->p)) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = f[i] == 0.0 ? cd{1.0} : std::conj(phase(f[i]));
    emit(x);
  } else {
    const double q = lp->p / (lp->p - 1.0);
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = std::conj(phase(f[i])) * std::pow(std::abs(f[i]), q - 1.0);
    emit(x);
  }
  return out;
}

struct Evaluation {
  double score;
  Vec y;
  Vec y_star;
  double primal;
  double dual;
};

}  // namespace

const char* to_string(SearchStatus status) {
  return status == SearchStatus::converged ? "converged" : "stagnated";
}

double defect(const NormedSpace& space, const Vec& u, const Vec& u_star) {
  space.check_vector(u, "u");
  space.check_vector(u_star, "u*");
  require(space.norm(u) <= 1.0 + 1e-9, "u lies outside the unit ball");
  require(space.dual_norm(u_star) <= 1.0 + 1e-9, "u* lies outside the dual unit ball");
  return 1.0 - pair(u_star, u).real();
}

BpbResult bpb_correct(const NormedSpace& space, const Vec& u, const Vec& u_star, double epsilon,
                      const BpbOptions& options) {
  require(epsilon > 0.0 && epsilon < std::numbers::sqrt2, "epsilon must lie in (0, sqrt 2)");
  const double delta = defect(space, u, u_star);
  const double norm_u = space.norm(u);
  require(norm_u > 0.0, "u must be nonzero");
  if (!options.exploratory)
    require(delta < 0.5 * epsilon * epsilon,
            "defect must be below epsilon^2/2 (pass the exploratory flag to override)");

  BpbResult result;
  result.u = u;
  result.u_star = u_star;
  result.defect = delta;
  result.epsilon = epsilon;

  auto evaluate = [&](const Vec& y) {
    const Vec y_star = space.nearest_norming_functional(y, u_star);
    const double primal = space.norm(u - y);
    const double dual = space.dual_norm(u_star - y_star);
    return Evaluation{std::max(primal, dual), y, y_star, primal, dual};
  };

  std::vector<Vec> candidates{u / norm_u};
  for (const auto& v : space.snap_candidates(u / norm_u)) candidates.push_back(v);
  for (const auto& x : norming_points(space, u_star)) {
    candidates.push_back(x);
    // points between u and the norming point
    for (double t : {0.25, 0.5, 0.75}) {
      const Vec mix = (1.0 - t) * (u / norm_u) + t * x;
      const double m = space.norm(mix);
      if (m > 0.0) candidates.push_back(mix / m);
    }
  }
  result.evaluations = static_cast<long>(candidates.size());
  Evaluation best = evaluate(candidates.front());
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    Evaluation e = evaluate(candidates[i]);
    if (e.score < best.score) best = std::move(e);
  }

  if (best.score >= epsilon) {
    CompassProblem problem =
        sphere_problem(space, [&](const Vec& y) { return -evaluate(y).score; });
    problem.target = -0.999 * epsilon;
    std::vector<Params> starts;
    starts.push_back(pack_vector(best.y, space.is_complex()));
    for (const auto& c : candidates) starts.push_back(pack_vector(c, space.is_complex()));
    SearchBudget budget = options.budget;
    budget.restarts = std::max<int>(budget.restarts, static_cast<int>(starts.size()));
    const MultistartResult res = multistart_maximize(problem, budget, kBpbSeed, starts);
    result.evaluations += res.evaluations;
    Evaluation e = evaluate(unpack_vector(res.argbest, space.dim(), space.is_complex()));
    if (e.score < best.score) best = std::move(e);
  }

  Vec y_star = best.y_star;
  // f(y) must be real: fold any residual phase into y*
  const cd value = pair(y_star, best.y);
  if (std::abs(value) > 0.0) y_star *= std::conj(phase(value));
  result.corrected = make_state_pair(space, best.y, y_star);
  result.primal_distance = space.norm(u - result.corrected.x);
  result.dual_distance = space.dual_norm(u_star - result.corrected.f);
  const bool exact = result.corrected.exact(1e-8) &&
                     std::abs(pair(result.corrected.f, result.corrected.x).imag()) <= 1e-9;
  result.status = exact && result.primal_distance < epsilon && result.dual_distance < epsilon
                      ? SearchStatus::converged
                      : SearchStatus::stagnated;
  return result;
}

}  // namespace banachlab
