#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "banachlab/linalg.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

struct SearchBudget {
  int restarts = 64;
  int steps = 500;

  SearchBudget doubled() const { return {2 * restarts, 2 * steps}; }
};

/// Maximization problem over a real parameter vector constrained to a set
/// reached by `project` (for example a unit sphere or a normalized operator).
struct CompassProblem {
  int parameters = 0;
  /// Maps a raw point onto the feasible set; false when it cannot.
  std::function<bool(Params&)> project;
  std::function<double(const Params&)> objective;
  std::function<Params(Engine&)> random_start;
  /// Optional extra feasible candidates near an accepted iterate, such as
  /// points snapped onto lower-dimensional faces of a polyhedral ball.
  std::function<void(const Params&, std::vector<Params>&)> refine;
  /// A restart stops as soon as its value reaches this level.
  std::optional<double> target;
};

struct RestartOutcome {
  double value = 0.0;
  Params point;
  long evaluations = 0;
};

struct MultistartResult {
  double best = 0.0;
  Params argbest;
  std::vector<RestartOutcome> restarts;
  long evaluations = 0;

  /// Fraction of restarts that ended within a relative 1e-6 of the best.
  double agreement() const;
  /// Declared relative slack for heuristic bounds: small when restarts
  /// agree, larger when the best value was found only rarely.
  double stagnation_slack() const;
};

/// Multistart compass search. Each step tries the signed coordinate
/// directions plus two random directions at the current step length, moves
/// to the best improving candidate and backtracks (halves the step) when
/// none improves. Restart r uses the stream (seed, r) and starts from
/// `starts[r]` when given, so results are independent of thread count.
MultistartResult multistart_maximize(const CompassProblem& problem,
                                     SearchBudget budget, std::uint64_t seed,
                                     std::span<const Params> starts = {});

}  // namespace banachlab
