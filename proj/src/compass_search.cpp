#include "banachlab/compass_search.hpp"

#include <algorithm>
#include <cmath>

#include "banachlab/errors.hpp"
#include "banachlab/parallel.hpp"

namespace banachlab {

namespace {

constexpr double kInitialStep = 0.25;
constexpr double kMinStep = 1e-10;
constexpr int kRandomDirections = 2;

RestartOutcome run_restart(const CompassProblem& problem, int steps,
                           Params start, Engine& rng) {
  RestartOutcome out;
  Params x = std::move(start);
  if (!problem.project(x)) {
    // Fall back to a random feasible point.
    for (int tries = 0; tries < 100; ++tries) {
      x = problem.random_start(rng);
      if (problem.project(x)) break;
    }
  }
  double fx = problem.objective(x);
  ++out.evaluations;

  const int n = problem.parameters;
  double step = kInitialStep;
  Params direction(n);
  Params candidate(n);
  Params best_point(n);
  std::vector<Params> refined;

  for (int it = 0; it < steps && step >= kMinStep; ++it) {
    if (problem.target && fx >= *problem.target) break;
    double best_value = fx;
    bool improved = false;
    auto consider = [&](const Params& d) {
      candidate = x + step * d;
      if (!problem.project(candidate)) return;
      const double value = problem.objective(candidate);
      ++out.evaluations;
      if (value > best_value) {
        best_value = value;
        best_point = candidate;
        improved = true;
      }
    };
    for (int j = 0; j < n; ++j) {
      direction.setZero();
      direction[j] = 1.0;
      consider(direction);
      direction[j] = -1.0;
      consider(direction);
    }
    for (int r = 0; r < kRandomDirections; ++r) {
      for (int j = 0; j < n; ++j) direction[j] = gaussian(rng);
      const double len = direction.norm();
      if (len > 0) consider(direction / len);
    }

    const double tiny = 1e-15 * std::max(1.0, std::abs(fx));
    if (improved && best_value > fx + tiny) {
      x = best_point;
      fx = best_value;
      step = std::min(2.0 * step, 1.0);
      if (problem.refine) {
        refined.clear();
        problem.refine(x, refined);
        for (auto& r : refined) {
          if (!problem.project(r)) continue;
          const double value = problem.objective(r);
          ++out.evaluations;
          if (value > fx + tiny) {
            fx = value;
            x = r;
          }
        }
      }
    } else {
      step *= 0.5;
    }
  }
  out.value = fx;
  out.point = std::move(x);
  return out;
}

}  // namespace

double MultistartResult::agreement() const {
  if (restarts.empty()) return 0.0;
  const double tol = 1e-6 * std::max(1.0, std::abs(best));
  const auto hits = std::count_if(
      restarts.begin(), restarts.end(),
      [&](const RestartOutcome& r) { return r.value >= best - tol; });
  return static_cast<double>(hits) / static_cast<double>(restarts.size());
}

double MultistartResult::stagnation_slack() const {
  return 1e-6 + 1e-3 * (1.0 - agreement());
}

MultistartResult multistart_maximize(const CompassProblem& problem,
                                     SearchBudget budget, std::uint64_t seed,
                                     std::span<const Params> starts) {
  require(budget.restarts >= 1 && budget.steps >= 0,
          "search budget needs at least one restart");
  require(problem.parameters > 0, "search problem has no parameters");
  const auto restarts = static_cast<std::size_t>(budget.restarts);
  MultistartResult result;
  result.restarts.resize(restarts);
  parallel_for(restarts, [&](std::size_t r) {
    Engine rng = make_stream(seed, {r});
    Params start =
        r < starts.size() ? starts[r] : problem.random_start(rng);
    result.restarts[r] = run_restart(problem, budget.steps, std::move(start), rng);
  });

  result.best = result.restarts.front().value;
  result.argbest = result.restarts.front().point;
  for (const auto& r : result.restarts) {
    result.evaluations += r.evaluations;
    if (r.value > result.best) {
      result.best = r.value;
      result.argbest = r.point;
    }
  }
  return result;
}

}  // namespace banachlab
