#include "banachlab/convergence_lab.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "banachlab/errors.hpp"
#include "banachlab/parallel.hpp"
#include "banachlab/subspace_geometry.hpp"

namespace banachlab {

namespace {

double ratio_down(double eta) { return (2.0 - eta) / (2.0 + eta); }

constexpr std::array<std::pair<FamilyKind, const char*>, 5> kFamilyNames{{
    {FamilyKind::identity, "identity"},
    {FamilyKind::diagonal, "diagonal"},
    {FamilyKind::shear, "shear"},
    {FamilyKind::rotation, "rotation"},
    {FamilyKind::random_direction, "random_direction"},
}};

}  // namespace

EpsilonEta EpsilonEta::from_epsilon(double epsilon) {
  require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0, 1)");
  return {epsilon, std::min(0.5 * epsilon, 0.5 * epsilon * epsilon)};
}

EpsilonEta EpsilonEta::from_eta(double eta) {
  require(eta > 0.0 && eta < 0.5, "eta must lie in (0, 1/2)");
  return {std::sqrt(2.0 * eta), eta};
}

ConditionReport condition_bound_check(const InvertibleMap& c, double eta, SearchBudget budget,
                                      std::uint64_t seed) {
  require(eta > 0.0 && eta < 2.0, "eta must lie in (0, 2)");
  require(c.deviation.upper < 0.5 * eta, "condition bound needs |C - I| < eta/2");
  ConditionReport r;
  r.norm_c = operator_norm(*c.ambient, c.matrix, budget, seed).upper;
  r.norm_c_inv = operator_norm(*c.ambient, c.inverse, budget, seed).upper;
  r.lhs = 1.0 / (r.norm_c * r.norm_c_inv);
  r.rhs = ratio_down(eta);
  r.slack = r.lhs - r.rhs + 1e-9;
  r.passed = r.slack >= 0.0;
  return r;
}

TransportReport conjugation_transport_check(const Subspace& x, const OperatorRep& t,
                                            const InvertibleMap& c, double eta,
                                            const TransportOptions& options) {
  require(eta > 0.0 && eta < 0.5, "transport check needs eta in (0, 1/2)");
  require(c.deviation.upper < 0.5 * eta, "transport check needs |C - I| < eta/2");
  require(std::abs(t.norm_bounds.lower - 1.0) <= 1e-6 && std::abs(t.norm_bounds.upper - 1.0) <= 1e-6,
          "transport check needs |T| = 1");
  const double epsilon = std::sqrt(2.0 * eta);

  // C carries X_c = C^{-1}(X) onto X.
  const InvertibleMap c_inv = make_invertible_map(c.ambient, c.inverse, options.radius.budget,
                                                  options.seed);
  const Subspace xc = perturb_subspace(x, c_inv);
  const OperatorRep tc =
      conjugate_operator(t, x, c, xc, options.radius.budget, options.radius.seed);

  TransportReport r;
  r.conjugated = tc.matrix;
  r.norm_floor = tc.norm_bounds.lower;
  r.floor_rhs = ratio_down(eta);
  r.floor_slack = r.norm_floor - r.floor_rhs + 1e-6;

  const BoundsCertificate vt = numerical_radius(t, options.radius);
  const BoundsCertificate vc = numerical_radius(tc, options.radius);
  r.radius_conjugated = vc.upper;
  r.radius_rhs = (vt.upper + 2.0 * epsilon) / ratio_down(eta);
  r.radius_slack = r.radius_rhs + 1e-6 - r.radius_conjugated;

  // x = C x_c in X coordinates is M c where C basis(X_c) = basis(X) M.
  const Mat m = x.basis.colPivHouseholderQr().solve(Mat(c.matrix * xc.basis));
  const Mat m_inv_t = m.inverse().transpose();
  const NormedSpace& xs = *x.induced;
  r.defect_bound = 2.0 * eta / (2.0 + eta);
  for (const auto& point : sample_sphere(*xc.induced, options.samples, options.seed)) {
    const StatePair sp = state_pair_at(*xc.induced, point);
    const Vec u = m * sp.x;
    const Vec u_star = m_inv_t * sp.f;
    const double value = pair(u_star, u).real() / (xs.norm(u) * xs.dual_norm(u_star));
    r.max_defect = std::max(r.max_defect, 1.0 - value);
    ++r.transported;
  }
  r.defect_slack = r.defect_bound + 1e-9 - r.max_defect;
  r.passed = r.floor_slack >= 0.0 && r.radius_slack >= 0.0 && r.defect_slack >= 0.0;
  return r;
}

Interval sandwich_bounds(double eta, Interval n_of_x) {
  require(eta >= 0.0 && eta < 0.5, "sandwich needs eta in [0, 1/2)");
  require(n_of_x.lower <= n_of_x.upper, "index interval is reversed");
  const double epsilon = std::sqrt(2.0 * eta);
  const double m = std::max(eta, epsilon);
  const double down = ratio_down(m) * ratio_down(m);
  return {std::max(0.0, n_of_x.lower * down - 3.0 * epsilon),
          std::max(0.0, (n_of_x.upper + 3.0 * epsilon) / down)};
}

std::string to_string(FamilyKind kind) {
  for (const auto& [k, name] : kFamilyNames)
    if (k == kind) return name;
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  for (const auto& [k, n] : kFamilyNames)
    if (name == n) return k;
  throw InputError("unknown perturbation family '" + name + "'");
}

std::string describe(const PerturbationFamily& family) {
  std::string out = to_string(family.kind);
  if (family.kind != FamilyKind::identity && family.kind != FamilyKind::random_direction)
    out += "(e" + std::to_string(family.from + 1) + "->e" + std::to_string(family.to + 1) + ")";
  return out + " x " + std::to_string(family.scale) + "/n";
}

Mat family_matrix(const PerturbationFamily& family, int dim, int n, bool complex) {
  require(n >= 1, "family step must be positive");
  require(family.from >= 0 && family.from < dim && family.to >= 0 && family.to < dim,
          "family direction indices out of range");
  const double t = family.scale / n;
  Mat c = Mat::Identity(dim, dim);
  switch (family.kind) {
    case FamilyKind::identity:
      break;
    case FamilyKind::diagonal:
      c(family.from, family.from) += t;
      break;
    case FamilyKind::shear:
      require(family.from != family.to, "shear needs two distinct directions");
      c(family.to, family.from) += t;
      break;
    case FamilyKind::rotation: {
      require(family.from != family.to, "rotation needs two distinct directions");
      const int i = family.from;
      const int j = family.to;
      c(i, i) = c(j, j) = std::cos(t);
      c(j, i) = std::sin(t);
      c(i, j) = -std::sin(t);
      break;
    }
    case FamilyKind::random_direction: {
      Engine rng = make_stream(family.seed, {0xfa11});
      Mat e(dim, dim);
      for (int j = 0; j < dim; ++j)
        for (int i = 0; i < dim; ++i) {
          const double re = gaussian(rng);
          const double im = complex ? gaussian(rng) : 0.0;
          e(i, j) = {re, im};
        }
      c += t * e / max_abs_entry(e);
      break;
    }
  }
  return c;
}

ExperimentReport run_convergence_experiment(const Subspace& x, const PerturbationFamily& family,
                                            std::span<const int> steps,
                                            const ExperimentOptions& options, std::uint64_t seed) {
  require(!steps.empty(), "experiment needs at least one step");
  ExperimentReport report;
  report.family_label = describe(family);
  report.space_label = x.label;
  if (options.base_index) {
    report.base_index = *options.base_index;
  } else {
    const IndexEstimate base = numerical_index(x.induced, options.index, seed);
    report.base_index = {base.heuristic_lower, base.upper};
  }

  const SpacePtr& ambient = x.ambient;
  const std::size_t count = steps.size();
  std::vector<InvertibleMap> maps;
  std::vector<double> deviations;
  for (int n : steps) {
    InvertibleMap c = make_invertible_map(
        ambient, family_matrix(family, ambient->dim(), n, ambient->is_complex()), options.maps,
        seed);
    const InvertibleMap c_inv = inverse_map(c, options.maps, seed);
    deviations.push_back(std::max(c.deviation.upper, c_inv.deviation.upper));
    maps.push_back(std::move(c));
  }
  for (std::size_t k = 1; k < count; ++k)
    require(deviations[k] <= deviations[k - 1] + 1e-12,
            "perturbation family is not shrinking along the steps");

  report.steps.resize(count);
  parallel_for(count, [&](std::size_t k) {
    StepRecord& s = report.steps[k];
    s.n = steps[k];
    s.eta = 2.0 * deviations[k] * (1.0 + 1e-9);
    require(s.eta < 0.5, "perturbation at step " + std::to_string(s.n) +
                             " is too large for the sandwich (eta >= 1/2)");
    const Subspace xn = perturb_subspace(x, maps[k]);
    const IndexEstimate est = numerical_index(xn.induced, options.index, seed);
    s.index = {est.heuristic_lower, est.upper};
    s.sandwich = sandwich_bounds(s.eta, report.base_index);
    s.inside = s.index.intersects(s.sandwich);
    s.gap_lower = gap_opening(xn, x, options.geometry, seed).lower;
    const std::array<InvertibleMap, 1> supplied{maps[k]};
    s.opening_upper = operator_opening(x, xn, supplied, options.maps, seed).bound.upper;
    s.deviation = std::max({0.0, s.index.upper - report.base_index.lower,
                            report.base_index.upper - s.index.lower});
  });

  report.all_inside = true;
  report.envelope_nonincreasing = true;
  for (std::size_t k = 0; k < count; ++k) {
    const StepRecord& s = report.steps[k];
    report.all_inside = report.all_inside && s.inside;
    report.max_violation = std::max(report.max_violation, s.index.distance(s.sandwich));
    if (k > 0) {
      const StepRecord& prev = report.steps[k - 1];
      const double allowance = prev.index.width() + s.index.width() + 1e-6;
      if (s.deviation > prev.deviation + allowance) report.envelope_nonincreasing = false;
    }
  }
  // least-squares slope of the deviation against the step position
  if (count > 1) {
    const double mean_k = 0.5 * static_cast<double>(count - 1);
    double mean_d = 0.0;
    for (const auto& s : report.steps) mean_d += s.deviation;
    mean_d /= static_cast<double>(count);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      num += (k - mean_k) * (report.steps[k].deviation - mean_d);
      den += (k - mean_k) * (k - mean_k);
    }
    report.trend_slope = num / den;
  }
  return report;
}

SequenceReport radius_sequence_limit_check(std::span<const OperatorRep> sequence,
                                           const OperatorRep& limit,
                                           const RadiusOptions& options) {
  require(!sequence.empty(), "sequence is empty");
  SequenceReport r;
  const BoundsCertificate v = numerical_radius(limit, options);
  r.lipschitz = true;
  for (const auto& t : sequence) {
    require(t.space->dim() == limit.space->dim() && t.space->label() == limit.space->label(),
            "sequence operators act on different spaces");
    const BoundsCertificate vn = numerical_radius(t, options);
    const double d =
        operator_norm(*t.space, Mat(t.matrix - limit.matrix), options.budget, options.seed).upper;
    const double slack = std::min(d + 2e-9 - (vn.lower - v.upper), d + 2e-9 - (v.lower - vn.upper));
    r.distances.push_back(d);
    r.deviations.push_back(std::abs(vn.midpoint() - v.midpoint()));
    r.slacks.push_back(slack);
    r.lipschitz = r.lipschitz && slack >= 0.0;
  }
  r.converging_input = r.distances.back() <= r.distances.front();
  r.shrinking = r.deviations.back() <= r.deviations.front() + 2e-9;
  r.passed = r.lipschitz && r.shrinking && r.converging_input;
  return r;
}

double sequence_ultralimit(std::span<const double> values, double tolerance) {
  require(!values.empty(), "sequence is empty");
  require(tolerance >= 0.0, "tolerance must be nonnegative");
  const auto tail = values.subspan(values.size() / 2);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  if (*hi - *lo > tolerance)
    throw ConvergenceError("sequence tail spreads over " + std::to_string(*hi - *lo) +
                           ", more than the tolerance " + std::to_string(tolerance));
  return std::accumulate(tail.begin(), tail.end(), 0.0) / static_cast<double>(tail.size());
}

}  // namespace banachlab
