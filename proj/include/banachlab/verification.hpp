#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "banachlab/io.hpp"
#include "banachlab/normed_space.hpp"

namespace banachlab {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;  ///< one line, numbers only from the computation
  Json details;         ///< counts and worst slacks; deterministic
  double seconds = 0.0; ///< wall time; left out of deterministic reports
};

/// The 2-dimensional spaces every battery sweeps: real and complex l1, l2,
/// l-inf, real l3, a weighted Euclidean plane and a hexagonal polyhedral
/// plane.
std::vector<SpacePtr> battery_spaces();

CriterionResult check_known_indices(std::uint64_t seed);
CriterionResult check_condition_bound(std::uint64_t seed);
CriterionResult check_bpb(std::uint64_t seed);
CriterionResult check_transport(std::uint64_t seed);
CriterionResult check_convergence(std::uint64_t seed);
CriterionResult check_lipschitz(std::uint64_t seed);
CriterionResult check_geometry(std::uint64_t seed);
CriterionResult check_oracle_agreement(std::uint64_t seed);
/// Re-runs a reduced battery with 1 and 4 workers and twice with the same
/// worker count; passes when every serialized result is identical.
CriterionResult check_determinism(std::uint64_t seed);

inline constexpr int kCriterionCount = 9;

/// Runs criterion `id` (1-based).
CriterionResult run_criterion(int id, std::uint64_t seed);

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed);

/// "criterion 3 PASS bpb correction: ..." (no timing).
std::string format_line(const CriterionResult& r);

Json to_json(const CriterionResult& r, bool with_timing);

}  // namespace banachlab
