#include <doctest.h>

#include <cmath>

#include "banachlab/errors.hpp"
#include "banachlab/operator_calculus.hpp"
#include "banachlab/oracles.hpp"
#include "banachlab/subspace.hpp"
#include "helpers.hpp"

using namespace banachlab;
using testing::mat;
using testing::vec;

namespace {

double max_column_sum(const Mat& t) {
  double best = 0.0;
  for (int j = 0; j < t.cols(); ++j) best = std::max(best, t.col(j).cwiseAbs().sum());
  return best;
}

double max_row_sum(const Mat& t) {
  double best = 0.0;
  for (int i = 0; i < t.rows(); ++i) best = std::max(best, t.row(i).cwiseAbs().sum());
  return best;
}

std::vector<SpacePtr> plane_spaces() {
  return {NormedSpace::lp(2, 1.0),
          NormedSpace::lp(2, 2.0),
          NormedSpace::lp(2, kInf),
          NormedSpace::lp(2, 3.0),
          NormedSpace::lp(2, 1.0, Field::complex),
          NormedSpace::lp(2, 2.0, Field::complex),
          NormedSpace::lp(2, kInf, Field::complex),
          NormedSpace::weighted_euclidean({1.0, 3.0}),
          NormedSpace::polyhedral({vec({1.0, 0.0}), vec({0.5, 1.0}), vec({-0.5, 1.0}),
                                   vec({-1.0, 0.0}), vec({-0.5, -1.0}), vec({0.5, -1.0})})};
}

}  // namespace

TEST_SUITE("operator_calculus") {

TEST_CASE("operator norm of the identity is one") {
  for (const auto& s : plane_spaces()) {
    const BoundsCertificate n = operator_norm(*s, Mat::Identity(2, 2));
    CHECK(std::abs(n.lower - 1.0) <= 1e-9);
    CHECK(std::abs(n.upper - 1.0) <= 1e-9);
  }
}

TEST_CASE("operator norm on l1 and l-inf matches column and row sums") {
  const Mat t = mat(2, 2, {1.0, 2.0, 0.0, 1.0});
  const SpacePtr l1 = NormedSpace::lp(2, 1.0);
  const SpacePtr linf = NormedSpace::lp(2, kInf);
  CHECK(max_column_sum(t) == 3.0);
  CHECK(max_row_sum(t) == 3.0);
  const BoundsCertificate a = operator_norm(*l1, t);
  const BoundsCertificate b = operator_norm(*linf, t);
  CHECK(std::abs(a.upper - 3.0) <= 1e-12);
  CHECK(std::abs(b.upper - 3.0) <= 1e-12);
  CHECK(a.claims_exact());
  // the sampling oracle only sees points of the sphere, so it bounds from below
  CHECK(oracle::dense_operator_norm(*l1, t) <= 3.0 + 1e-12);
  CHECK(oracle::dense_operator_norm(*l1, t) >= 3.0 - 1e-6);
  CHECK(oracle::dense_operator_norm(*linf, t) >= 3.0 - 1e-6);

  Engine rng = make_stream(3);
  for (int k = 0; k < 100; ++k) {
    const Mat m = testing::random_matrix(3, k % 2 == 1, rng);
    const Field f = k % 2 == 1 ? Field::complex : Field::real;
    CHECK(std::abs(operator_norm(*NormedSpace::lp(3, 1.0, f), m).upper - max_column_sum(m)) <= 1e-12);
    CHECK(std::abs(operator_norm(*NormedSpace::lp(3, kInf, f), m).upper - max_row_sum(m)) <= 1e-12);
  }
}

TEST_CASE("operator norm agrees with the sampling oracle") {
  for (const auto& s : plane_spaces()) {
    Engine rng = make_stream(7);
    for (int k = 0; k < 5; ++k) {
      const Mat t = testing::random_matrix(2, s->is_complex(), rng);
      const BoundsCertificate n = operator_norm(*s, t);
      const double sampled = oracle::dense_operator_norm(*s, t, 40'000);
      CHECK(n.lower <= n.upper + 1e-12);
      CHECK(sampled <= n.upper * (1.0 + 1e-9));
      CHECK(sampled >= n.lower * (1.0 - 2e-3));
    }
  }
}

TEST_CASE("numerical range samples") {
  const SpacePtr l2 = NormedSpace::lp(2, 2.0);
  for (cd v : numerical_range_samples(make_operator(l2, Mat::Identity(2, 2)), 50, 1))
    CHECK(std::abs(v - 1.0) <= 1e-9);
  for (cd v : numerical_range_samples(make_operator(l2, mat(2, 2, {0.0, -1.0, 1.0, 0.0})), 50, 1))
    CHECK(std::abs(v) <= 1e-9);

  // f(T e1) for f = (1, 1) and (1, -1)
  const Mat swap = mat(2, 2, {0.0, 1.0, 1.0, 0.0});
  const Vec te1 = swap * vec({1.0, 0.0});
  CHECK(pair(vec({1.0, 1.0}), te1) == cd{1.0});
  CHECK(pair(vec({1.0, -1.0}), te1) == cd{-1.0});
  const auto values = numerical_range_samples(make_operator(NormedSpace::lp(2, 1.0), swap), 10, 1);
  bool plus = false;
  bool minus = false;
  for (cd v : values) {
    plus = plus || std::abs(v - 1.0) <= 1e-12;
    minus = minus || std::abs(v + 1.0) <= 1e-12;
    CHECK(std::abs(v) <= 1.0 + 1e-9);
  }
  CHECK(plus);
  CHECK(minus);
}

TEST_CASE("numerical radius examples") {
  for (const auto& s : plane_spaces()) {
    const BoundsCertificate v = numerical_radius(*s, Mat::Identity(2, 2));
    CHECK(std::abs(v.lower - 1.0) <= 1e-9);
    CHECK(std::abs(v.upper - 1.0) <= 1e-9);
  }
  const BoundsCertificate rot =
      numerical_radius(*NormedSpace::lp(2, 2.0), mat(2, 2, {0.0, -1.0, 1.0, 0.0}));
  CHECK(rot.upper <= 1e-9);

  const SpacePtr c2 = NormedSpace::lp(2, 2.0, Field::complex);
  const Mat shift = mat(2, 2, {0.0, 0.0, 1.0, 0.0});
  const BoundsCertificate v = numerical_radius(*c2, shift);
  CHECK(std::abs(v.lower - 0.5) <= 1e-6);
  CHECK(std::abs(v.upper - 0.5) <= 1e-6);
  CHECK(std::abs(oracle::dense_radius(*c2, shift, 100'000) - 0.5) <= 1e-3);
}

TEST_CASE("numerical radius agrees with the dense oracle") {
  for (const auto& s : plane_spaces()) {
    const oracle::DenseGrid grid(*s, 40'000);
    Engine rng = make_stream(13);
    for (int k = 0; k < 5; ++k) {
      const Mat t = testing::random_matrix(2, s->is_complex(), rng);
      const BoundsCertificate v = numerical_radius(*s, t);
      const double sampled = grid.radius(t);
      CAPTURE(s->label());
      CHECK(v.lower <= v.upper + 1e-12);
      CHECK(sampled <= v.upper + 1e-9 * std::max(1.0, v.upper));
      CHECK(sampled >= v.lower - 5e-3 * std::max(1.0, v.lower));
    }
  }
}

TEST_CASE("radius never exceeds the operator norm") {
  for (const auto& s : plane_spaces()) {
    Engine rng = make_stream(19);
    for (int k = 0; k < 20; ++k) {
      const Mat t = testing::random_matrix(2, s->is_complex(), rng);
      const BoundsCertificate v = numerical_radius(*s, t);
      CHECK(v.lower <= operator_norm(*s, t).upper + 1e-9);
    }
  }
}

TEST_CASE("radius and norm are absolutely homogeneous") {
  for (const auto& s : plane_spaces()) {
    Engine rng = make_stream(29);
    const Mat t = testing::random_matrix(2, s->is_complex(), rng);
    const BoundsCertificate v = numerical_radius(*s, t);
    const BoundsCertificate n = operator_norm(*s, t);
    for (double a : {-2.5, 0.3, 4.0}) {
      const Mat at = a * t;
      CAPTURE(s->label());
      if (v.claims_exact())
        CHECK(std::abs(numerical_radius(*s, at).upper - std::abs(a) * v.upper) <=
              1e-9 * std::abs(a) * v.upper);
      if (n.claims_exact())
        CHECK(std::abs(operator_norm(*s, at).upper - std::abs(a) * n.upper) <=
              1e-9 * std::abs(a) * n.upper);
    }
  }
}

TEST_CASE("conjugation examples") {
  const SpacePtr s = NormedSpace::lp(2, 2.0);
  const Subspace full = whole_space(s);
  const Mat t = mat(2, 2, {0.0, 1.0, 0.0, 0.0});
  const OperatorRep op = make_operator(s, t);

  const OperatorRep same = conjugate_operator(op, full, identity_map(s), full);
  CHECK((same.matrix - t).cwiseAbs().maxCoeff() <= 1e-12);

  // diag(1/2, 1) [[0,1],[0,0]] diag(2, 1) = [[0, 1/2], [0, 0]]
  const InvertibleMap c = make_invertible_map(s, mat(2, 2, {2.0, 0.0, 0.0, 1.0}));
  const Mat expected = mat(2, 2, {0.0, 0.5, 0.0, 0.0});
  const OperatorRep conj = conjugate_operator(op, full, c, full);
  CHECK((conj.matrix - expected).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("conjugation round trip") {
  const SpacePtr s = NormedSpace::lp(3, 1.0);
  const Subspace full = whole_space(s);
  Engine rng = make_stream(37);
  for (int k = 0; k < 20; ++k) {
    const Mat t = testing::random_matrix(3, false, rng);
    const Mat c = Mat::Identity(3, 3) + 0.1 * testing::random_matrix(3, false, rng);
    const InvertibleMap map = make_invertible_map(s, c);
    const OperatorRep there = conjugate_operator(make_operator(s, t), full, map, full);
    const OperatorRep back = conjugate_operator(there, full, inverse_map(map), full);
    CHECK((back.matrix - t).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("conjugation rejects a map that leaves the target subspace") {
  const SpacePtr s = NormedSpace::lp(3, 2.0);
  Mat by = Mat::Zero(3, 1);
  by(0, 0) = 1.0;
  Mat bz = Mat::Zero(3, 1);
  bz(1, 0) = 1.0;
  const Subspace y = make_subspace(s, by);
  const Subspace z = make_subspace(s, bz);
  const OperatorRep t = make_operator(z.induced, Mat::Identity(1, 1));
  CHECK_THROWS_AS(conjugate_operator(t, z, identity_map(s), y), InputError);
}

TEST_CASE("Lipschitz check examples") {
  const SpacePtr l1 = NormedSpace::lp(2, 1.0);
  Engine rng = make_stream(43);
  const Mat t = testing::random_matrix(2, false, rng);
  const LipschitzReport same = radius_lipschitz_check(make_operator(l1, t), make_operator(l1, t));
  CHECK(same.passed);
  CHECK(same.slack_st >= 0.0);

  const LipschitzReport zero =
      radius_lipschitz_check(make_operator(l1, t), make_operator(l1, Mat::Zero(2, 2)));
  CHECK(zero.passed);
  CHECK(zero.radius_s.lower <= operator_norm(*l1, t).upper + 1e-9);
}

TEST_CASE("Lipschitz check holds on 1000 random l1 pairs") {
  const SpacePtr l1 = NormedSpace::lp(2, 1.0);
  RadiusOptions options;
  options.cross_check = false;
  int failures = 0;
  for (int k = 0; k < 1000; ++k) {
    Engine rng = make_stream(47, {static_cast<std::uint64_t>(k)});
    const Mat s = testing::random_matrix(2, false, rng);
    const Mat t = s + std::pow(10.0, -uniform(rng, 0.0, 3.0)) * testing::random_matrix(2, false, rng);
    const LipschitzReport r = radius_lipschitz_check(make_operator(l1, s), make_operator(l1, t), options);
    failures += !r.passed;
    // the enumeration must agree with the brute-force face evaluation at its witness
    if (k % 100 == 0) {
      const BoundsCertificate v = numerical_radius(*l1, s, options);
      REQUIRE(!v.witnesses.empty());
      const Vec x = v.witnesses.front();
      CHECK(std::abs(oracle::face_sup(*l1, x, s * x) - v.lower) <= 1e-9);
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("malformed operators are rejected") {
  const SpacePtr s = NormedSpace::lp(2, 2.0);
  CHECK_THROWS_AS(operator_norm(*s, Mat::Identity(3, 3)), InputError);
  CHECK_THROWS_AS(numerical_radius(*s, mat(2, 2, {cd{0.0, 1.0}, 0.0, 0.0, 0.0})), InputError);
}

}  // TEST_SUITE
