#include <doctest.h>

#include <cmath>

#include "banachlab/convergence_lab.hpp"
#include "banachlab/errors.hpp"
#include "helpers.hpp"

using namespace banachlab;
using testing::mat;

namespace {

// Interval from the two rate envelopes, written out independently.
Interval envelope(double eta, double lo, double hi) {
  const double eps = std::sqrt(2.0 * eta);
  const double m = eta > eps ? eta : eps;
  const double shrink = ((2.0 - m) / (2.0 + m)) * ((2.0 - m) / (2.0 + m));
  const double grow = ((2.0 + m) / (2.0 - m)) * ((2.0 + m) / (2.0 - m));
  Interval out{lo * shrink - 3.0 * eps, grow * (hi + 3.0 * eps)};
  if (out.lower < 0.0) out.lower = 0.0;
  return out;
}

Mat columns(int rows, std::initializer_list<int> axes) {
  Mat b = Mat::Zero(rows, static_cast<int>(axes.size()));
  int j = 0;
  for (int a : axes) b(a, j++) = 1.0;
  return b;
}

}  // namespace

TEST_SUITE("convergence_lab") {

TEST_CASE("epsilon and eta") {
  CHECK(EpsilonEta::from_epsilon(0.2).eta == doctest::Approx(0.02));
  CHECK(EpsilonEta::from_epsilon(0.5).eta == doctest::Approx(0.125));
  CHECK(EpsilonEta::from_eta(0.02).epsilon == doctest::Approx(0.2));
}

TEST_CASE("sandwich examples") {
  const Interval a = sandwich_bounds(0.02, {1.0, 1.0});
  const Interval e = envelope(0.02, 1.0, 1.0);
  CHECK(std::abs(a.lower - e.lower) <= 1e-9);
  CHECK(std::abs(a.upper - e.upper) <= 1e-9);
  CHECK(std::abs(a.lower - 0.0694215) <= 1e-6);
  CHECK(std::abs(a.upper - 2.3901235) <= 1e-6);
  // (1.8/2.2)^2 and (2.2/1.8)^2
  CHECK(std::abs((1.8 / 2.2) * (1.8 / 2.2) - 0.669421) <= 1e-6);
  CHECK(std::abs((2.2 / 1.8) * (2.2 / 1.8) - 1.493827) <= 1e-6);

  const Interval tiny = sandwich_bounds(1e-14, {0.3, 0.6});
  CHECK(std::abs(tiny.lower - 0.3) <= 1e-6);
  CHECK(std::abs(tiny.upper - 0.6) <= 1e-6);
  CHECK(sandwich_bounds(0.0, {0.3, 0.6}).lower == 0.3);
  CHECK(sandwich_bounds(0.3, {0.0, 0.0}).lower == 0.0);
  CHECK_THROWS_AS(sandwich_bounds(0.5, {0.0, 1.0}), InputError);
}

TEST_CASE("sandwich widens with eta and contains the base interval") {
  Engine rng = make_stream(91);
  for (int k = 0; k < 1000; ++k) {
    const double lo = uniform(rng);
    const double hi = lo + uniform(rng, 0.0, 1.0 - lo);
    const double e1 = uniform(rng, 0.0, 0.49);
    const double e2 = uniform(rng, e1, 0.49);
    const Interval a = sandwich_bounds(e1, {lo, hi});
    const Interval b = sandwich_bounds(e2, {lo, hi});
    const Interval ref = envelope(e1, lo, hi);
    CHECK(std::abs(a.lower - ref.lower) <= 1e-12);
    CHECK(std::abs(a.upper - ref.upper) <= 1e-12 * ref.upper);
    CHECK(a.lower <= lo);
    CHECK(a.upper >= hi);
    CHECK(b.lower <= a.lower);
    CHECK(b.upper >= a.upper);
  }
}

TEST_CASE("condition bound examples") {
  const SpacePtr l2 = NormedSpace::lp(2, 2.0);
  const ConditionReport id = condition_bound_check(identity_map(l2), 0.3);
  CHECK(id.passed);
  CHECK(std::abs(id.lhs - 1.0) <= 1e-12);

  const InvertibleMap c = make_invertible_map(l2, mat(2, 2, {1.4, 0.0, 0.0, 1.0}));
  CHECK(std::abs(c.deviation.upper - 0.4) <= 1e-12);
  const ConditionReport r = condition_bound_check(c, 0.9);
  CHECK(r.passed);
  CHECK(std::abs(r.lhs - 1.0 / 1.4) <= 1e-12);
  CHECK(std::abs(r.rhs - 1.1 / 2.9) <= 1e-12);
  CHECK(std::abs(r.lhs - 0.7143) <= 1e-4);
  CHECK(std::abs(r.rhs - 0.3793) <= 1e-4);

  CHECK_THROWS_AS(condition_bound_check(c, 0.5), InputError);
}

TEST_CASE("condition bound holds on random admissible maps") {
  Engine rng = make_stream(97);
  for (double p : {1.0, 2.0, kInf}) {
    const SpacePtr s = NormedSpace::lp(3, p);
    for (int k = 0; k < 200; ++k) {
      const double eta = uniform(rng, 0.01, 1.9);
      const Mat e = testing::random_matrix(3, false, rng);
      const double size = uniform(rng, 0.0, 0.99) * eta / 2.0;
      const InvertibleMap c = make_invertible_map(
          s, Mat(Mat::Identity(3, 3) + e * (size / operator_norm(*s, e).upper)));
      REQUIRE(c.deviation.upper < eta / 2.0);
      CHECK(condition_bound_check(c, eta).passed);
    }
  }
}

TEST_CASE("transport with the identity map") {
  const SpacePtr s = NormedSpace::lp(3, 1.0);
  const Subspace x = whole_space(s);
  Mat cycle = Mat::Zero(3, 3);
  for (int i = 0; i < 3; ++i) cycle((i + 1) % 3, i) = 1.0;
  const OperatorRep t = make_operator(s, cycle);
  const TransportReport r = conjugation_transport_check(x, t, identity_map(s), 0.1);
  CHECK(r.passed);
  CHECK((r.conjugated - cycle).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(r.max_defect <= r.defect_bound + 1e-9);
}

TEST_CASE("transport with a random near-identity map") {
  const SpacePtr s = NormedSpace::lp(3, 1.0);
  const Subspace x = whole_space(s);
  Mat perm = Mat::Zero(3, 3);
  perm(1, 0) = perm(0, 1) = perm(2, 2) = 1.0;
  const OperatorRep t = make_operator(s, perm);
  Engine rng = make_stream(101);
  for (int k = 0; k < 5; ++k) {
    const Mat e = testing::random_matrix(3, false, rng);
    const InvertibleMap c =
        make_invertible_map(s, Mat(Mat::Identity(3, 3) + 0.05 * e / operator_norm(*s, e).upper));
    const double eta = 0.3;
    REQUIRE(c.deviation.upper < eta / 2.0);
    const TransportReport r = conjugation_transport_check(x, t, c, eta);
    CHECK(r.passed);
    CHECK(r.floor_slack >= 0.0);
    CHECK(r.radius_slack >= 0.0);
    CHECK(r.defect_slack >= 0.0);
    CHECK(std::abs(r.defect_bound - 2.0 * eta / (2.0 + eta)) <= 1e-12);
    CHECK(r.transported > 0);
  }
}

TEST_CASE("family matrices") {
  PerturbationFamily shear;
  shear.kind = FamilyKind::shear;
  shear.from = 0;
  shear.to = 2;
  const Mat c = family_matrix(shear, 3, 4, false);
  Mat expected = Mat::Identity(3, 3);
  expected(2, 0) = 0.25;
  CHECK(c == expected);
  PerturbationFamily id;
  id.kind = FamilyKind::identity;
  CHECK(family_matrix(id, 3, 7, false) == Mat::Identity(3, 3));
  for (const char* name : {"identity", "diagonal", "shear", "rotation", "random_direction"})
    CHECK(to_string(family_kind_from_string(name)) == name);
  CHECK_THROWS_AS(family_kind_from_string("spiral"), InputError);
}

TEST_CASE("identity family leaves every step inside") {
  const SpacePtr s = NormedSpace::lp(3, 1.0);
  const Subspace x = make_subspace(s, columns(3, {0, 1}));
  PerturbationFamily id;
  id.kind = FamilyKind::identity;
  ExperimentOptions options;
  options.index.budget = {6, 100};
  const std::vector<int> steps{5, 10};
  const ExperimentReport r = run_convergence_experiment(x, id, steps, options, 1);
  CHECK(r.all_inside);
  for (const auto& step : r.steps) {
    CHECK(step.inside);
    CHECK(step.gap_lower == 0.0);
    CHECK(step.eta == 0.0);
  }
}

TEST_CASE("radius sequence examples") {
  const SpacePtr c2 = NormedSpace::lp(2, 2.0, Field::complex);
  const Mat shift = mat(2, 2, {0.0, 0.0, 1.0, 0.0});
  const OperatorRep limit = make_operator(c2, shift);
  const std::vector<OperatorRep> constant(5, limit);
  const SequenceReport flat = radius_sequence_limit_check(constant, limit);
  for (double d : flat.deviations) CHECK(d <= 1e-12);

  Engine rng = make_stream(103);
  const Mat e = testing::random_matrix(2, true, rng);
  std::vector<OperatorRep> seq;
  for (int n = 1; n <= 10; ++n) seq.push_back(make_operator(c2, Mat(shift + e / static_cast<double>(n))));
  const SequenceReport r = radius_sequence_limit_check(seq, limit);
  CHECK(r.passed);
  CHECK(r.lipschitz);
  const double norm_e = operator_norm(*c2, e).upper;
  for (std::size_t i = 0; i < r.deviations.size(); ++i)
    CHECK(r.deviations[i] <= norm_e / static_cast<double>(i + 1) + 1e-9);
}

TEST_CASE("index estimate is stable across repeated runs") {
  const SpacePtr s = NormedSpace::lp(2, 2.0, Field::complex);
  IndexOptions o;
  o.budget = {8, 120};
  const IndexEstimate a = numerical_index(s, o, 1);
  const IndexEstimate b = numerical_index(s, o, 2);
  CHECK(std::abs(a.upper - b.upper) <= 1e-6);
}

TEST_CASE("ordinary limits of convergent sequences") {
  const std::vector<double> constant(10, 0.25);
  CHECK(sequence_ultralimit(constant, 0.0) == 0.25);
  std::vector<double> harmonic;
  for (int n = 1; n <= 100; ++n) harmonic.push_back(1.0 + 1.0 / n);
  CHECK(std::abs(sequence_ultralimit(harmonic, 0.05) - 1.0) <= 0.05);
  const std::vector<double> alternating{0, 1, 0, 1, 0, 1, 0, 1};
  CHECK_THROWS_AS(sequence_ultralimit(alternating, 0.05), ConvergenceError);
}

}  // TEST_SUITE
