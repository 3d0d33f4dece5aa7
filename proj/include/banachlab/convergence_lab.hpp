#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "banachlab/index_solver.hpp"
#include "banachlab/operator_calculus.hpp"
#include "banachlab/subspace.hpp"

namespace banachlab {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool intersects(const Interval& other) const {
    return lower <= other.upper && other.lower <= upper;
  }
  /// 0 when the intervals meet, else the gap between them.
  double distance(const Interval& other) const {
    return std::max({0.0, lower - other.upper, other.lower - upper});
  }
  double width() const { return upper - lower; }
};

/// eta = min(eps/2, eps^2/2) for eps in (0, 1).
struct EpsilonEta {
  double epsilon = 0.0;
  double eta = 0.0;

  static EpsilonEta from_epsilon(double epsilon);
  /// eps = sqrt(2 eta), for eta in (0, 1/2).
  static EpsilonEta from_eta(double eta);
};

struct ConditionReport {
  double norm_c = 0.0;      ///< |C| upper end
  double norm_c_inv = 0.0;  ///< |C^{-1}| upper end
  double lhs = 0.0;         ///< 1 / (|C| |C^{-1}|)
  double rhs = 0.0;         ///< (2 - eta) / (2 + eta)
  double slack = 0.0;       ///< lhs - rhs + 1e-9
  bool passed = false;
};

/// Checks 1/(|C||C^{-1}|) >= (2-eta)/(2+eta) - 1e-9 for |C - I| < eta/2.
ConditionReport condition_bound_check(const InvertibleMap& c, double eta,
                                      SearchBudget budget = {}, std::uint64_t seed = 0);

struct TransportOptions {
  int samples = 100;
  RadiusOptions radius{};
  std::uint64_t seed = 0;
};

struct TransportReport {
  Mat conjugated;  ///< C^{-1} T C on C^{-1}(X), in basis coordinates
  double norm_floor = 0.0;  ///< |T_c| lower end
  double floor_rhs = 0.0;   ///< (2 - eta)/(2 + eta)
  double floor_slack = 0.0;
  double radius_conjugated = 0.0;  ///< v(T_c) upper end
  double radius_rhs = 0.0;         ///< (2+eta)/(2-eta) (v_up(T) + 2 eps)
  double radius_slack = 0.0;
  double max_defect = 0.0;  ///< over transported state pairs
  double defect_bound = 0.0;  ///< 2 eta / (2 + eta)
  double defect_slack = 0.0;
  int transported = 0;
  bool passed = false;
};

/// With X_c = C^{-1}(X) (so C carries X_c onto X) and T_c = C^{-1} T C on
/// X_c: checks the norm floor, the radius bound with eps = sqrt(2 eta), and
/// the defect of transported state pairs x = C x_c, x* = x_c* o C^{-1}.
TransportReport conjugation_transport_check(const Subspace& x, const OperatorRep& t,
                                            const InvertibleMap& c, double eta,
                                            const TransportOptions& options = {});

/// [n_lo ((2-m)/(2+m))^2 - 3 eps, ((2+m)/(2-m))^2 (n_up + 3 eps)] with
/// eps = sqrt(2 eta), m = max(eta, eps), clamped below at 0.
Interval sandwich_bounds(double eta, Interval n_of_x);

enum class FamilyKind { identity, diagonal, shear, rotation, random_direction };

/// C_n = I + (scale/n) E for the named E (rotation: angle scale/n).
struct PerturbationFamily {
  FamilyKind kind = FamilyKind::shear;
  int from = 0;  ///< e_from -> e_from + t e_to for shears; plane (from, to)
  int to = 1;
  double scale = 1.0;
  std::uint64_t seed = 0;  ///< random_direction only
};

std::string to_string(FamilyKind kind);
FamilyKind family_kind_from_string(const std::string& name);
std::string describe(const PerturbationFamily& family);

Mat family_matrix(const PerturbationFamily& family, int dim, int n, bool complex);

struct ExperimentOptions {
  IndexOptions index{};
  SearchBudget geometry{8, 120};
  SearchBudget maps{16, 200};
  /// Index interval of X itself; computed when absent.
  std::optional<Interval> base_index;
};

struct StepRecord {
  int n = 0;
  double eta = 0.0;
  Interval index;
  Interval sandwich;
  bool inside = false;
  double gap_lower = 0.0;
  double opening_upper = 0.0;
  double deviation = 0.0;  ///< upper end of |n(X_n) - n(X)|
};

struct ExperimentReport {
  std::string family_label;
  std::string space_label;
  Interval base_index;
  std::vector<StepRecord> steps;
  double max_violation = 0.0;
  double trend_slope = 0.0;
  bool all_inside = false;
  bool envelope_nonincreasing = false;
};

ExperimentReport run_convergence_experiment(const Subspace& x, const PerturbationFamily& family,
                                            std::span<const int> steps,
                                            const ExperimentOptions& options = {},
                                            std::uint64_t seed = 0);

struct SequenceReport {
  std::vector<double> distances;   ///< |T_n - T| upper ends
  std::vector<double> deviations;  ///< |v(T_n) - v(T)| at midpoints
  std::vector<double> slacks;      ///< Lipschitz slack, >= 0 when it holds
  bool lipschitz = false;
  bool shrinking = false;
  bool converging_input = false;
  bool passed = false;
};

SequenceReport radius_sequence_limit_check(std::span<const OperatorRep> sequence,
                                           const OperatorRep& limit,
                                           const RadiusOptions& options = {});

/// Ordinary limit of a sequence whose tail (last half) stays within
/// `tolerance`; throws ConvergenceError otherwise.
double sequence_ultralimit(std::span<const double> values, double tolerance);

}  // namespace banachlab
