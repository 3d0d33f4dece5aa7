#include <doctest.h>

#include <cmath>

#include "banachlab/index_solver.hpp"
#include "banachlab/oracles.hpp"
#include "helpers.hpp"

using namespace banachlab;
using testing::mat;

namespace {

IndexOptions small_budget() {
  IndexOptions o;
  o.budget = {8, 120};
  return o;
}

}  // namespace

TEST_SUITE("index_solver") {

TEST_CASE("index ratio examples") {
  for (const auto& s : {NormedSpace::lp(2, 1.0), NormedSpace::lp(2, 2.0, Field::complex),
                        NormedSpace::lp(2, kInf)}) {
    const IndexRatio r = index_ratio(*s, Mat::Identity(2, 2));
    CHECK(std::abs(r.lower - 1.0) <= 1e-9);
    CHECK(std::abs(r.upper - 1.0) <= 1e-9);
  }
  const IndexRatio rot = index_ratio(*NormedSpace::lp(2, 2.0), mat(2, 2, {0.0, -1.0, 1.0, 0.0}));
  CHECK(rot.upper <= 1e-9);
  CHECK(rot.lower >= 0.0);

  // |x2 x1| on the complex Euclidean sphere peaks at 1/2; the shift has norm 1
  const IndexRatio shift =
      index_ratio(*NormedSpace::lp(2, 2.0, Field::complex), mat(2, 2, {0.0, 0.0, 1.0, 0.0}));
  CHECK(std::abs(shift.lower - 0.5) <= 1e-6);
  CHECK(std::abs(shift.upper - 0.5) <= 1e-6);
}

TEST_CASE("dimension one is exactly one") {
  for (const auto& s : {NormedSpace::lp(1, 1.0), NormedSpace::lp(1, 3.0, Field::complex),
                        NormedSpace::weighted_euclidean({4.0})}) {
    const IndexEstimate e = numerical_index(s, small_budget(), 1);
    CHECK(e.exact);
    CHECK(e.upper == 1.0);
    CHECK(e.heuristic_lower == 1.0);
  }
}

TEST_CASE("real Euclidean plane has index zero") {
  const IndexEstimate e = numerical_index(NormedSpace::lp(2, 2.0), small_budget(), 3);
  CHECK(e.upper <= 1e-6);
  REQUIRE(e.witness);
  CHECK(index_witness_check(e, 3));
  // the witness must be a genuinely skew map: x . Tx vanishes on the sphere grid
  CHECK(oracle::dense_radius(*e.witness->space, e.witness->matrix, 20'000) <= 1e-6 * e.witness->norm_bounds.upper + 1e-12);
}

TEST_CASE("complex Euclidean plane has index one half") {
  const IndexEstimate e =
      numerical_index(NormedSpace::lp(2, 2.0, Field::complex), small_budget(), 5);
  CHECK(e.upper <= 0.5 + 1e-6);
  CHECK(e.heuristic_lower >= 0.5 - 1e-3);
  REQUIRE(e.witness);
  CHECK(index_witness_check(e, 5));
}

TEST_CASE("real l1 plane has index one") {
  const IndexEstimate e = numerical_index(NormedSpace::lp(2, 1.0), small_budget(), 7);
  CHECK(e.upper >= 1.0 - 1e-3);
  CHECK(e.upper <= 1.0 + 1e-9);
  CHECK(e.heuristic_lower >= 1.0 - 1e-3);
}

TEST_CASE("corrupted witness fails the check") {
  IndexEstimate e = numerical_index(NormedSpace::lp(2, 2.0, Field::complex), small_budget(), 5);
  REQUIRE(e.witness);
  e.witness->matrix(0, 0) += 0.1;
  CHECK_FALSE(index_witness_check(e, 5));

  IndexEstimate r = numerical_index(NormedSpace::lp(2, 2.0), small_budget(), 3);
  REQUIRE(r.witness);
  r.witness->matrix += 0.1 * Mat::Identity(2, 2);
  CHECK_FALSE(index_witness_check(r, 3));
}

TEST_CASE("estimates stay inside [0, 1]") {
  for (const auto& s : {NormedSpace::lp(2, 1.0), NormedSpace::lp(2, kInf, Field::complex),
                        NormedSpace::weighted_euclidean({1.0, 2.0}),
                        NormedSpace::lp(2, 1.0, Field::complex)}) {
    const IndexEstimate e = numerical_index(s, small_budget(), 11);
    CAPTURE(s->label());
    CHECK(e.upper >= -1e-9);
    CHECK(e.upper <= 1.0 + 1e-9);
    CHECK(e.heuristic_lower >= -1e-9);
    CHECK(e.heuristic_lower <= e.upper + 1e-12);
  }
}

TEST_CASE("doubling the budget never raises the upper end on exact spaces") {
  for (const auto& s : {NormedSpace::lp(2, 1.0), NormedSpace::lp(2, kInf),
                        NormedSpace::lp(2, 2.0, Field::complex)}) {
    REQUIRE(has_exact_calculus(*s));
    IndexOptions a;
    a.budget = {4, 60};
    IndexOptions b;
    b.budget = a.budget.doubled();
    const IndexEstimate ea = numerical_index(s, a, 21);
    const IndexEstimate eb = numerical_index(s, b, 21);
    CAPTURE(s->label());
    CHECK(eb.upper <= ea.upper + 1e-12);
  }
}

TEST_CASE("index is invariant under scaling the norm") {
  const IndexEstimate a =
      numerical_index(NormedSpace::weighted_euclidean({1.0, 1.0}), small_budget(), 9);
  const IndexEstimate b =
      numerical_index(NormedSpace::weighted_euclidean({9.0, 9.0}), small_budget(), 9);
  CHECK(std::abs(a.upper - b.upper) <= 1e-6);
}

TEST_CASE("estimates are reproducible for a fixed seed") {
  const IndexEstimate a = numerical_index(NormedSpace::lp(2, kInf), small_budget(), 13);
  const IndexEstimate b = numerical_index(NormedSpace::lp(2, kInf), small_budget(), 13);
  CHECK(a.upper == b.upper);
  CHECK(a.heuristic_lower == b.heuristic_lower);
  REQUIRE(a.witness);
  REQUIRE(b.witness);
  CHECK(a.witness->matrix == b.witness->matrix);
}

}  // TEST_SUITE
