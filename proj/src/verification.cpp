#include "banachlab/verification.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

#include "banachlab/convergence_lab.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/index_solver.hpp"
#include "banachlab/operator_calculus.hpp"
#include "banachlab/oracles.hpp"
#include "banachlab/parallel.hpp"
#include "banachlab/state_correction.hpp"
#include "banachlab/subspace_geometry.hpp"

namespace banachlab {

namespace {

// Pinned tolerances and battery sizes.
constexpr double kRealL2IndexMax = 1e-6;
constexpr double kHalfBelow = 1e-3;
constexpr double kHalfAbove = 1e-6;
constexpr double kOneBelow = 1e-3;
constexpr double kOneAbove = 1e-9;
constexpr int kConditionMaps = 1000;
constexpr int kBpbInputs = 500;
constexpr double kBpbResidual = 1e-8;
constexpr int kTransportInstances = 200;
constexpr double kL1Deviation = 0.1;
constexpr double kL2Deviation = 0.02;
constexpr int kLipschitzPairs = 1000;
constexpr double kSequenceSlack = 2e-9;
constexpr double kGapTolerance = 1e-6;
constexpr double kRotationTolerance = 1e-9;
constexpr double kSelfOpening = 1e-12;
constexpr int kOracleOperators = 50;
constexpr double kOracleAgreement = 1e-3;
constexpr int kPolyhedralInputs = 1000;
constexpr double kPolyhedralAgreement = 1e-9;

using Clock = std::chrono::steady_clock;

Engine stream(std::uint64_t seed, int criterion, std::uint64_t a, std::uint64_t b = 0,
              std::uint64_t c = 0) {
  return make_stream(seed, {static_cast<std::uint64_t>(criterion), a, b, c});
}

Mat random_matrix(int rows, int cols, bool complex, Engine& rng) {
  Mat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) {
      const double re = gaussian(rng);
      m(i, j) = {re, complex ? gaussian(rng) : 0.0};
    }
  return m;
}

Vec random_functional(const NormedSpace& space, Engine& rng) {
  Vec f(space.dim());
  for (int i = 0; i < space.dim(); ++i) {
    const double re = gaussian(rng);
    f[i] = {re, space.is_complex() ? gaussian(rng) : 0.0};
  }
  return f / space.dual_norm(f);
}

Vec unit(int dim, int i) {
  Vec v = Vec::Zero(dim);
  v[i] = 1.0;
  return v;
}

Vec from_real(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

std::string num(double x) { return format_number(x); }

// Runs body(k) for every instance, in parallel, and collects the failures
// into the per-instance slots; exceptions count as failures.
template <typename Slot>
std::vector<Slot> run_instances(std::size_t count, const std::function<Slot(std::size_t)>& body,
                                std::vector<std::string>& errors) {
  std::vector<Slot> slots(count);
  std::vector<std::string> messages(count);
  parallel_for(count, [&](std::size_t k) {
    try {
      slots[k] = body(k);
    } catch (const std::exception& e) {
      messages[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < count; ++k)
    if (!messages[k].empty()) errors.push_back("instance " + std::to_string(k) + ": " + messages[k]);
  return slots;
}

CriterionResult timed(int id, const char* name, const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.details = Json::object();
  const auto start = Clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.summary = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

SpacePtr hexagon_space() {
  return NormedSpace::polyhedral({from_real({1.0, 0.0}), from_real({0.5, 0.9}),
                                  from_real({-0.5, 0.9}), from_real({-1.0, 0.0}),
                                  from_real({-0.5, -0.9}), from_real({0.5, -0.9})},
                                 "hexagon");
}

}  // namespace

std::vector<SpacePtr> battery_spaces() {
  return {
      NormedSpace::lp(2, 1.0),
      NormedSpace::lp(2, 2.0),
      NormedSpace::lp(2, kInf),
      NormedSpace::lp(2, 3.0),
      NormedSpace::lp(2, 1.0, Field::complex),
      NormedSpace::lp(2, 2.0, Field::complex),
      NormedSpace::lp(2, kInf, Field::complex),
      NormedSpace::weighted_euclidean({1.0, 3.0}),
      hexagon_space(),
  };
}

CriterionResult check_known_indices(std::uint64_t seed) {
  return timed(1, "known numerical indices", [&](CriterionResult& r) {
    struct Case {
      SpacePtr space;
      double low;
      double high;
    };
    const std::vector<Case> cases{
        {NormedSpace::lp(2, 2.0), 0.0, kRealL2IndexMax},
        {NormedSpace::lp(2, 2.0, Field::complex), 0.5 - kHalfBelow, 0.5 + kHalfAbove},
        {NormedSpace::lp(2, 1.0), 1.0 - kOneBelow, 1.0 + kOneAbove},
        {NormedSpace::lp(2, kInf), 1.0 - kOneBelow, 1.0 + kOneAbove},
    };
    bool ok = true;
    std::ostringstream summary;
    Json estimates = Json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
      const Case& c = cases[i];
      const IndexEstimate est = numerical_index(c.space, seed + i);
      const bool inside = est.heuristic_lower >= c.low && est.upper <= c.high;
      // the certified witness radius may not sit below a sampled value
      const oracle::DenseGrid grid(*c.space, 100'000);
      const double sampled = grid.radius(est.witness->matrix);
      const bool consistent = sampled <= est.witness_ratio.radius.upper + 1e-9;
      ok = ok && inside && consistent;
      estimates.push_back({{"space", c.space->label()},
                           {"lower", est.heuristic_lower},
                           {"upper", est.upper},
                           {"target_low", c.low},
                           {"target_high", c.high},
                           {"witness_radius_upper", est.witness_ratio.radius.upper},
                           {"oracle_witness_radius", sampled}});
      summary << c.space->label() << " [" << num(est.heuristic_lower) << ", " << num(est.upper)
              << "]; ";
    }

    // the nilpotent shift alone certifies n(complex l2^2) <= 1/2
    const SpacePtr c2 = NormedSpace::lp(2, 2.0, Field::complex);
    Mat shift = Mat::Zero(2, 2);
    shift(1, 0) = 1.0;
    const IndexRatio shift_ratio = index_ratio(*c2, shift);
    const double shift_oracle = oracle::dense_radius(*c2, shift);
    const bool shift_ok = shift_ratio.upper <= 0.5 + kHalfAbove &&
                          std::abs(shift_oracle - 0.5) <= kHalfBelow;
    ok = ok && shift_ok;

    // on l1 and l-inf planes every sampled operator has ratio close to 1
    double worst_sampled_ratio = 1.0;
    for (double p : {1.0, kInf}) {
      const SpacePtr s = NormedSpace::lp(2, p);
      const oracle::DenseGrid grid(*s, 100'000);
      for (int k = 0; k < 20; ++k) {
        Engine rng = stream(seed, 1, static_cast<std::uint64_t>(p == 1.0), k);
        const Mat t = random_matrix(2, 2, false, rng);
        worst_sampled_ratio = std::min(
            worst_sampled_ratio, grid.radius(t) / oracle::dense_operator_norm(*s, t, 100'000));
      }
    }
    ok = ok && worst_sampled_ratio >= 1.0 - kOneBelow;

    bool dim_one = true;
    for (Field f : {Field::real, Field::complex}) {
      const IndexEstimate est = numerical_index(NormedSpace::lp(1, 2.0, f), seed);
      dim_one = dim_one && est.exact && est.upper == 1.0 && est.heuristic_lower == 1.0;
    }
    ok = ok && dim_one;

    r.passed = ok;
    r.details = {{"estimates", estimates},
                 {"shift_ratio_upper", shift_ratio.upper},
                 {"shift_oracle_radius", shift_oracle},
                 {"worst_sampled_ratio_l1_linf", worst_sampled_ratio},
                 {"dimension_one_exact", dim_one}};
    summary << "shift ratio " << num(shift_ratio.upper) << "; dim 1 exact "
            << (dim_one ? "yes" : "no");
    r.summary = summary.str();
  });
}

CriterionResult check_condition_bound(std::uint64_t seed) {
  return timed(2, "condition-number bound", [&](CriterionResult& r) {
    int violations = 0;
    int checked = 0;
    double min_slack = kInf;
    std::vector<std::string> errors;
    Json configs = Json::array();
    for (int dim : {2, 3, 4})
      for (double p : {1.0, 2.0, kInf}) {
        const SpacePtr space = NormedSpace::lp(dim, p);
        const auto slacks = run_instances<double>(
            kConditionMaps,
            [&](std::size_t k) {
              Engine rng = stream(seed, 2, static_cast<std::uint64_t>(dim),
                                  static_cast<std::uint64_t>(std::isinf(p) ? 0 : p), k);
              const double eta = uniform(rng, 0.01, 1.9);
              const Mat e = random_matrix(dim, dim, false, rng);
              const double size = uniform(rng, 0.0, 0.999) * 0.5 * eta;
              const Mat c = Mat::Identity(dim, dim) + e * (size / operator_norm(*space, e).upper);
              const InvertibleMap map = make_invertible_map(space, c);
              return condition_bound_check(map, eta).slack;
            },
            errors);
        double local = kInf;
        for (double s : slacks) {
          local = std::min(local, s);
          violations += s < 0.0;
        }
        checked += kConditionMaps;
        min_slack = std::min(min_slack, local);
        configs.push_back({{"dim", dim}, {"p", std::isinf(p) ? Json("inf") : Json(p)},
                           {"min_slack", local}});
      }
    violations += static_cast<int>(errors.size());
    r.passed = violations == 0;
    r.details = {{"checked", checked}, {"violations", violations}, {"min_slack", min_slack},
                 {"configs", configs}, {"errors", errors}};
    r.summary = std::to_string(checked) + " maps, " + std::to_string(violations) +
                " violations, min slack " + num(min_slack);
  });
}

namespace {

struct BpbOutcome {
  bool ok = false;
  bool stagnated = false;
  double score = 0.0;
  double residual = 0.0;
  double excess = 0.0;  ///< score minus the 2D polygon optimum (polygons only)
  bool optimum_ok = true;
};

// A near-state pair (u, u*) with defect below eps^2/2: an exact state pair
// pushed off in random directions, the push halved until admissible.
std::pair<Vec, Vec> admissible_pair(const NormedSpace& s, double eps, Engine& rng) {
  const Vec x = random_unit_vector(s, rng);
  const StatePair sp = state_pair_at(s, x);
  const Vec e = random_unit_vector(s, rng);
  const Vec g = random_functional(s, rng);
  double push = eps * uniform(rng, 0.2, 1.0);
  for (int attempt = 0; attempt < 80; ++attempt, push *= 0.5) {
    Vec u = sp.x + push * e;
    u /= std::max(1.0, s.norm(u));
    Vec u_star = sp.f + push * g;
    u_star /= std::max(1.0, s.dual_norm(u_star));
    if (defect(s, u, u_star) < 0.5 * eps * eps) return {u, u_star};
  }
  return {sp.x, sp.f};
}

}  // namespace

CriterionResult check_bpb(std::uint64_t seed) {
  return timed(3, "BPB correction battery", [&](CriterionResult& r) {
    const auto spaces = battery_spaces();
    int failures = 0;
    int stagnations = 0;
    int total = 0;
    double worst_ratio = 0.0;  // max distance / eps
    double worst_residual = 0.0;
    double worst_excess = -kInf;
    std::vector<std::string> errors;
    Json per_space = Json::array();
    for (std::size_t si = 0; si < spaces.size(); ++si) {
      const NormedSpace& s = *spaces[si];
      const bool polygon = !s.is_complex() && (s.polytope() != nullptr);
      for (double eps : {0.5, 0.2, 0.1}) {
        const auto out = run_instances<BpbOutcome>(
            kBpbInputs,
            [&](std::size_t k) {
              Engine rng = stream(seed, 3, si, static_cast<std::uint64_t>(eps * 1000), k);
              const auto [u, u_star] = admissible_pair(s, eps, rng);
              const BpbResult res = bpb_correct(s, u, u_star, eps);
              BpbOutcome o;
              o.stagnated = res.status == SearchStatus::stagnated;
              o.score = std::max(res.primal_distance, res.dual_distance);
              o.residual = std::max({res.corrected.defect, res.corrected.primal_residual,
                                     res.corrected.dual_residual,
                                     std::abs(pair(res.corrected.f, res.corrected.x).imag())});
              o.ok = !o.stagnated && o.residual <= kBpbResidual && o.score < eps;
              if (polygon) {
                const double best = oracle::bpb_optimum(s, u, u_star);
                o.excess = o.score - best;
                // the search cannot beat the optimum, which itself is below eps
                o.optimum_ok = best < eps && o.excess >= -1e-9;
                o.ok = o.ok && o.optimum_ok;
              }
              return o;
            },
            errors);
        int local_fail = 0;
        for (const auto& o : out) {
          local_fail += !o.ok;
          stagnations += o.stagnated;
          worst_ratio = std::max(worst_ratio, o.score / eps);
          worst_residual = std::max(worst_residual, o.residual);
          if (polygon) worst_excess = std::max(worst_excess, o.excess);
        }
        failures += local_fail;
        total += kBpbInputs;
        per_space.push_back({{"space", s.label()}, {"epsilon", eps}, {"failures", local_fail}});
      }
    }
    failures += static_cast<int>(errors.size());
    r.passed = failures == 0 && stagnations == 0;
    r.details = {{"inputs", total},
                 {"failures", failures},
                 {"stagnations", stagnations},
                 {"worst_distance_over_eps", worst_ratio},
                 {"worst_residual", worst_residual},
                 {"worst_excess_over_polygon_optimum", worst_excess},
                 {"per_space", per_space},
                 {"errors", errors}};
    r.summary = std::to_string(total) + " inputs, " + std::to_string(failures) + " failures, " +
                std::to_string(stagnations) + " stagnations, worst distance/eps " +
                num(worst_ratio);
  });
}

CriterionResult check_transport(std::uint64_t seed) {
  return timed(4, "conjugation transport", [&](CriterionResult& r) {
    const std::array<SpacePtr, 4> ambients{NormedSpace::lp(3, 1.0), NormedSpace::lp(3, 2.0),
                                           NormedSpace::lp(3, kInf),
                                           NormedSpace::lp(3, 2.0, Field::complex)};
    std::vector<std::string> errors;
    const auto reports = run_instances<TransportReport>(
        kTransportInstances,
        [&](std::size_t k) {
          const SpacePtr& ambient = ambients[k % ambients.size()];
          const bool complex = ambient->is_complex();
          Engine rng = stream(seed, 4, k);
          const Subspace x = make_subspace(ambient, random_matrix(3, 2, complex, rng));
          Mat t = random_matrix(2, 2, complex, rng);
          t /= operator_norm(*x.induced, t).upper;
          const OperatorRep op = make_operator(x.induced, t);
          const double eta = uniform(rng, 0.01, 0.45);
          const Mat e = random_matrix(3, 3, complex, rng);
          const double size = uniform(rng, 0.05, 0.95) * 0.5 * eta;
          const InvertibleMap c = make_invertible_map(
              ambient, Mat(Mat::Identity(3, 3) + e * (size / operator_norm(*ambient, e).upper)));
          TransportOptions options;
          options.seed = seed + k;
          options.radius.seed = seed + k;
          TransportReport rep = conjugation_transport_check(x, op, c, eta, options);
          return rep;
        },
        errors);
    int failures = static_cast<int>(errors.size());
    double floor_slack = kInf, radius_slack = kInf, defect_slack = kInf;
    long pairs = 0;
    for (const auto& rep : reports) {
      if (rep.transported == 0) continue;  // errored instance, already counted
      failures += !rep.passed;
      floor_slack = std::min(floor_slack, rep.floor_slack);
      radius_slack = std::min(radius_slack, rep.radius_slack);
      defect_slack = std::min(defect_slack, rep.defect_slack);
      pairs += rep.transported;
    }
    r.passed = failures == 0;
    r.details = {{"instances", kTransportInstances}, {"failures", failures},
                 {"transported_pairs", pairs},        {"min_floor_slack", floor_slack},
                 {"min_radius_slack", radius_slack},  {"min_defect_slack", defect_slack},
                 {"errors", errors}};
    r.summary = std::to_string(kTransportInstances) + " instances, " + std::to_string(failures) +
                " failures, min slacks floor " + num(floor_slack) + " radius " +
                num(radius_slack) + " defect " + num(defect_slack);
  });
}

CriterionResult check_convergence(std::uint64_t seed) {
  return timed(5, "index convergence under shrinking perturbations", [&](CriterionResult& r) {
    const std::array<int, 5> steps{5, 10, 20, 40, 80};
    PerturbationFamily family;
    family.kind = FamilyKind::shear;
    family.from = 0;
    family.to = 2;
    family.scale = 1.0;
    struct Run {
      double p;
      double threshold;
    };
    bool ok = true;
    std::ostringstream summary;
    Json runs = Json::array();
    for (const Run& run : {Run{1.0, kL1Deviation}, Run{2.0, kL2Deviation}}) {
      const SpacePtr ambient = NormedSpace::lp(3, run.p);
      Mat basis = Mat::Zero(3, 2);
      basis(0, 0) = basis(1, 1) = 1.0;
      const Subspace x = make_subspace(ambient, basis, "span(e1,e2) in " + ambient->label());
      const ExperimentReport rep = run_convergence_experiment(x, family, steps, {}, seed);
      const StepRecord& last = rep.steps.back();
      // the deviation the sandwich itself allows at the last step
      const Interval sw = sandwich_bounds(last.eta, rep.base_index);
      const double sandwich_allowance =
          std::max(sw.upper - rep.base_index.lower, rep.base_index.upper - sw.lower);
      const bool good = rep.all_inside && rep.envelope_nonincreasing &&
                        last.deviation <= run.threshold && last.deviation <= sandwich_allowance;
      ok = ok && good;
      runs.push_back({{"experiment", to_json(rep)},
                      {"final_deviation", last.deviation},
                      {"pinned_threshold", run.threshold},
                      {"sandwich_allowance", sandwich_allowance},
                      {"passed", good}});
      summary << x.label << ": final deviation " << num(last.deviation) << " (pinned "
              << num(run.threshold) << ", sandwich " << num(sandwich_allowance) << "), inside "
              << (rep.all_inside ? "all" : "not all") << "; ";
    }
    r.passed = ok;
    r.details = {{"runs", runs}};
    r.summary = summary.str();
  });
}

CriterionResult check_lipschitz(std::uint64_t seed) {
  return timed(6, "numerical radius Lipschitz continuity", [&](CriterionResult& r) {
    const auto spaces = battery_spaces();
    int failures = 0;
    double min_slack = kInf;
    std::vector<std::string> errors;
    Json per_space = Json::array();
    RadiusOptions options;
    options.budget = {8, 150};
    for (std::size_t si = 0; si < spaces.size(); ++si) {
      const SpacePtr& s = spaces[si];
      const auto slacks = run_instances<double>(
          kLipschitzPairs,
          [&](std::size_t k) {
            Engine rng = stream(seed, 6, si, k);
            Mat t = random_matrix(2, 2, s->is_complex(), rng);
            t /= max_abs_entry(t);
            const double size = std::pow(10.0, -uniform(rng, 0.0, 3.0));
            const Mat e = random_matrix(2, 2, s->is_complex(), rng);
            const Mat sm = t + e * (size / max_abs_entry(e));
            RadiusOptions local = options;
            local.seed = seed + k;
            // search-only spaces run five searches per pair
            if (!s->euclidean_factor() && s->polytope() == nullptr) local.budget = {4, 120};
            const LipschitzReport rep =
                radius_lipschitz_check(make_operator(s, sm, local.budget, local.seed),
                                       make_operator(s, t, local.budget, local.seed), local);
            return std::min(rep.slack_st, rep.slack_ts);
          },
          errors);
      double local = kInf;
      int local_fail = 0;
      for (double v : slacks) {
        local = std::min(local, v);
        local_fail += v < 0.0;
      }
      failures += local_fail;
      min_slack = std::min(min_slack, local);
      per_space.push_back({{"space", s->label()}, {"min_slack", local}, {"failures", local_fail}});
    }

    // built-in sequences T_n = T + E/n
    struct Sequence {
      SpacePtr space;
      Mat limit;
    };
    std::vector<Sequence> sequences;
    {
      Mat shift = Mat::Zero(2, 2);
      shift(1, 0) = 1.0;
      sequences.push_back({NormedSpace::lp(2, 2.0, Field::complex), shift});
      Mat cycle = Mat::Zero(3, 3);
      for (int i = 0; i < 3; ++i) cycle((i + 1) % 3, i) = 1.0;
      sequences.push_back({NormedSpace::lp(3, 1.0), cycle});
      Engine rng = stream(seed, 6, 1000);
      sequences.push_back({hexagon_space(), random_matrix(2, 2, false, rng)});
      sequences.push_back({NormedSpace::lp(2, 3.0), random_matrix(2, 2, false, rng)});
    }
    Json seq_json = Json::array();
    int sequence_failures = 0;
    double sequence_min_slack = kInf;
    for (std::size_t q = 0; q < sequences.size(); ++q) {
      const Sequence& sq = sequences[q];
      const int n = sq.space->dim();
      Engine rng = stream(seed, 6, 2000, q);
      const Mat e = random_matrix(n, n, sq.space->is_complex(), rng);
      std::vector<OperatorRep> ops;
      for (int m = 1; m <= 20; ++m)
        ops.push_back(make_operator(sq.space, Mat(sq.limit + e / static_cast<double>(m))));
      RadiusOptions seq_options;
      seq_options.seed = seed + q;
      const SequenceReport rep =
          radius_sequence_limit_check(ops, make_operator(sq.space, sq.limit), seq_options);
      double local = kInf;
      for (double v : rep.slacks) local = std::min(local, v);
      // slacks already carry the 2e-9 allowance
      const bool good = rep.passed && local >= kSequenceSlack - 2e-9;
      sequence_failures += !good;
      sequence_min_slack = std::min(sequence_min_slack, local);
      seq_json.push_back({{"space", sq.space->label()}, {"min_slack", local}, {"passed", good}});
    }
    failures += static_cast<int>(errors.size());
    r.passed = failures == 0 && sequence_failures == 0;
    r.details = {{"pairs", kLipschitzPairs * static_cast<int>(spaces.size())},
                 {"failures", failures},
                 {"min_slack", min_slack},
                 {"per_space", per_space},
                 {"sequences", seq_json},
                 {"errors", errors}};
    r.summary = std::to_string(kLipschitzPairs * spaces.size()) + " pairs, " +
                std::to_string(failures) + " failures, min slack " + num(min_slack) + "; " +
                std::to_string(sequences.size()) + " sequences, " +
                std::to_string(sequence_failures) + " failures";
  });
}

CriterionResult check_geometry(std::uint64_t seed) {
  return timed(7, "gap and opening geometry", [&](CriterionResult& r) {
    const SpacePtr l2 = NormedSpace::lp(2, 2.0);
    auto line = [&](double angle) {
      Mat b(2, 1);
      b << std::cos(angle), std::sin(angle);
      return make_subspace(l2, b);
    };
    bool ok = true;
    Json checks = Json::array();
    auto record = [&](const std::string& what, double value, double target, double tol) {
      const bool good = std::abs(value - target) <= tol;
      ok = ok && good;
      checks.push_back({{"check", what}, {"value", value}, {"target", target}, {"passed", good}});
    };

    const Subspace e1 = line(0.0);
    for (double angle : {std::numbers::pi / 2.0, std::numbers::pi / 6.0}) {
      const Subspace z = line(angle);
      const BoundsCertificate q = gap_opening(e1, z, {}, seed);
      const double target = 2.0 * std::sin(angle / 2.0);
      const double principal = oracle::principal_angle_gap(e1.basis, z.basis);
      record("gap lower at angle " + num(angle), q.lower, target, kGapTolerance);
      record("gap upper at angle " + num(angle), q.upper, target, kGapTolerance);
      record("principal-angle oracle at angle " + num(angle), principal, target, 1e-12);
    }
    for (double angle : {std::numbers::pi / 6.0, std::numbers::pi / 3.0, 1.0}) {
      const OpeningBound o = operator_opening_upper(e1, line(angle), {}, {}, seed);
      double rotation = kInf;
      for (const auto& [name, value] : o.candidates)
        if (name == "direct_rotation") rotation = value;
      record("rotation candidate at angle " + num(angle), rotation, 2.0 * std::sin(angle / 2.0),
             kRotationTolerance);
      // the reported bound is the best candidate, never worse than the rotation
      const bool best_ok = o.bound.upper <= rotation;
      ok = ok && best_ok;
      checks.push_back({{"check", "best candidate at angle " + num(angle)},
                        {"value", o.bound.upper},
                        {"candidate", o.best_candidate},
                        {"passed", best_ok}});
    }
    {
      const SpacePtr l3 = NormedSpace::lp(3, 2.0);
      const Subspace y = make_subspace(l3, Mat(Mat::Identity(3, 1)));
      const Subspace z = make_subspace(l3, Mat(Mat::Identity(3, 2)));
      const OpeningBound o = operator_opening(y, z, {}, {}, seed);
      const bool good = o.convention && o.bound.upper == 1.0 && o.bound.lower == 1.0;
      ok = ok && good;
      checks.push_back({{"check", "dimension mismatch"}, {"value", o.bound.upper},
                        {"convention", o.convention}, {"passed", good}});
    }
    {
      Engine rng = stream(seed, 7, 0);
      const std::array<SpacePtr, 3> ambients{NormedSpace::lp(3, 2.0), NormedSpace::lp(3, 1.0),
                                             NormedSpace::lp(3, 2.0, Field::complex)};
      for (const auto& ambient : ambients) {
        const Subspace y = make_subspace(ambient, random_matrix(3, 2, ambient->is_complex(), rng));
        const BoundsCertificate q = gap_opening(y, y, {}, seed);
        const OpeningBound o = operator_opening(y, y, {}, {}, seed);
        const bool good = q.upper == 0.0 && q.lower == 0.0 && o.bound.upper <= kSelfOpening;
        ok = ok && good;
        checks.push_back({{"check", "self distance in " + ambient->label()},
                          {"gap", q.upper},
                          {"opening", o.bound.upper},
                          {"passed", good}});
      }
    }
    r.passed = ok;
    r.details = {{"checks", checks}};
    int passed = 0;
    for (const auto& c : checks) passed += c["passed"].get<bool>();
    r.summary = std::to_string(passed) + "/" + std::to_string(checks.size()) + " checks";
  });
}

CriterionResult check_oracle_agreement(std::uint64_t seed) {
  return timed(8, "oracle agreement", [&](CriterionResult& r) {
    const auto spaces = battery_spaces();
    double worst = 0.0;
    int failures = 0;
    Json per_space = Json::array();
    for (std::size_t si = 0; si < spaces.size(); ++si) {
      const SpacePtr& s = spaces[si];
      const oracle::DenseGrid grid(*s);
      std::vector<Mat> ops;
      for (int k = 0; k < kOracleOperators; ++k) {
        Engine rng = stream(seed, 8, si, k);
        Mat t = random_matrix(2, 2, s->is_complex(), rng);
        ops.push_back(t / operator_norm(*s, t).upper);
      }
      std::vector<double> search(ops.size());
      std::vector<double> dense(ops.size());
      parallel_for(ops.size(), [&](std::size_t k) {
        RadiusOptions options;
        options.allow_exact = false;
        options.seed = seed + k;
        search[k] = numerical_radius(*s, ops[k], options).lower;
        dense[k] = grid.radius(ops[k]);
      });
      double local = 0.0;
      for (std::size_t k = 0; k < ops.size(); ++k)
        local = std::max(local, std::abs(search[k] - dense[k]));
      const int local_fail = local > kOracleAgreement;
      failures += local_fail;
      worst = std::max(worst, local);
      per_space.push_back({{"space", s->label()}, {"max_difference", local}});
    }

    double worst_norm = 0.0;
    for (int dim : {2, 3, 4}) {
      std::vector<Vec> cross;
      std::vector<Vec> cube;
      for (int i = 0; i < dim; ++i) {
        cross.push_back(unit(dim, i));
        cross.push_back(-unit(dim, i));
      }
      for (int mask = 0; mask < (1 << dim); ++mask) {
        Vec v(dim);
        for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? 1.0 : -1.0;
        cube.push_back(v);
      }
      const std::array<std::pair<SpacePtr, SpacePtr>, 2> matched{
          std::pair{NormedSpace::polyhedral(cross), NormedSpace::lp(dim, 1.0)},
          std::pair{NormedSpace::polyhedral(cube), NormedSpace::lp(dim, kInf)}};
      for (std::size_t m = 0; m < matched.size(); ++m) {
        const auto& [poly, lp] = matched[m];
        for (int k = 0; k < kPolyhedralInputs; ++k) {
          Engine rng = stream(seed, 8, 100 + dim, m, k);
          Vec x(dim);
          for (int i = 0; i < dim; ++i) x[i] = gaussian(rng) * std::exp(gaussian(rng));
          worst_norm = std::max({worst_norm, std::abs(poly->norm(x) - lp->norm(x)),
                                 std::abs(poly->norm(x) - oracle::norm(*lp, x)),
                                 std::abs(poly->dual_norm(x) - lp->dual_norm(x))});
        }
      }
    }
    failures += worst_norm > kPolyhedralAgreement;
    r.passed = failures == 0;
    r.details = {{"operators", kOracleOperators * static_cast<int>(spaces.size())},
                 {"max_radius_difference", worst},
                 {"per_space", per_space},
                 {"polyhedral_inputs", kPolyhedralInputs * 6},
                 {"max_norm_difference", worst_norm}};
    r.summary = std::to_string(kOracleOperators * spaces.size()) +
                " operators, max radius difference " + num(worst) + "; " +
                std::to_string(kPolyhedralInputs * 6) + " polyhedral inputs, max difference " +
                num(worst_norm);
  });
}

namespace {

// A reduced battery touching every parallel path: restarts, instance
// batteries and experiment steps.
std::string determinism_probe(std::uint64_t seed) {
  Json out = Json::object();
  const SpacePtr c2 = NormedSpace::lp(2, 2.0, Field::complex);
  IndexOptions small;
  small.budget = {8, 120};
  out["index"] = to_json(numerical_index(c2, small, seed));
  out["index_l3"] = to_json(numerical_index(NormedSpace::lp(2, 3.0), {{4, 40}, {2, 20}, 2, {4, 60}}, seed));

  const auto spaces = battery_spaces();
  std::vector<std::string> errors;
  const auto bpb = run_instances<Json>(
      24,
      [&](std::size_t k) {
        const NormedSpace& s = *spaces[k % spaces.size()];
        Engine rng = stream(seed, 9, k);
        const auto [u, u_star] = admissible_pair(s, 0.2, rng);
        return to_json(bpb_correct(s, u, u_star, 0.2), s.is_complex());
      },
      errors);
  out["bpb"] = bpb;
  const auto radii = run_instances<Json>(
      24,
      [&](std::size_t k) {
        const NormedSpace& s = *spaces[k % spaces.size()];
        Engine rng = stream(seed, 9, 100 + k);
        RadiusOptions options;
        options.allow_exact = false;
        options.budget = {8, 100};
        options.seed = seed;
        return to_json(numerical_radius(s, random_matrix(2, 2, s.is_complex(), rng), options),
                       s.is_complex());
      },
      errors);
  out["radii"] = radii;

  const Subspace x = make_subspace(NormedSpace::lp(3, 2.0), Mat(Mat::Identity(3, 2)));
  ExperimentOptions eo;
  eo.index = small;
  const std::array<int, 3> steps{5, 10, 20};
  out["experiment"] = to_json(run_convergence_experiment(x, PerturbationFamily{}, steps, eo, seed));
  out["errors"] = errors;
  return out.dump();
}

}  // namespace

CriterionResult check_determinism(std::uint64_t seed) {
  return timed(9, "determinism", [&](CriterionResult& r) {
    const unsigned saved = worker_count();
    std::vector<std::string> runs;
    for (unsigned workers : {1u, 1u, 4u}) {
      set_worker_count(workers);
      try {
        runs.push_back(determinism_probe(seed));
      } catch (...) {
        set_worker_count(saved);
        throw;
      }
    }
    set_worker_count(saved);
    const bool repeat = runs[0] == runs[1];
    const bool threads = runs[0] == runs[2];
    r.passed = repeat && threads;
    r.details = {{"probe_bytes", runs[0].size()},
                 {"repeat_identical", repeat},
                 {"thread_counts_identical", threads}};
    r.summary = std::string("repeat run ") + (repeat ? "identical" : "differs") +
                ", 1 vs 4 workers " + (threads ? "identical" : "differs");
  });
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  switch (id) {
    case 1: return check_known_indices(seed);
    case 2: return check_condition_bound(seed);
    case 3: return check_bpb(seed);
    case 4: return check_transport(seed);
    case 5: return check_convergence(seed);
    case 6: return check_lipschitz(seed);
    case 7: return check_geometry(seed);
    case 8: return check_oracle_agreement(seed);
    case 9: return check_determinism(seed);
    default: throw InputError("criterion id must lie in 1.." + std::to_string(kCriterionCount));
  }
}

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, seed));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return "criterion " + std::to_string(r.id) + " " + (r.passed ? "PASS" : "FAIL") + " " + r.name +
         ": " + r.summary;
}

Json to_json(const CriterionResult& r, bool with_timing) {
  Json j = {{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary},
            {"details", r.details}};
  if (with_timing) j["seconds"] = r.seconds;
  return j;
}

}  // namespace banachlab
