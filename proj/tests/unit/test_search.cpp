#include <doctest.h>

#include <atomic>
#include <cmath>
#include <vector>

#include "banachlab/compass_search.hpp"
#include "banachlab/parallel.hpp"
#include "banachlab/sphere_search.hpp"
#include "helpers.hpp"

using namespace banachlab;

namespace {

// Maximize -(p - c)^2 over R^2: the optimum is c.
CompassProblem quadratic(Params centre) {
  CompassProblem p;
  p.parameters = 2;
  p.project = [](Params&) { return true; };
  p.objective = [centre](const Params& x) { return -(x - centre).squaredNorm(); };
  p.random_start = [](Engine& rng) {
    Params x(2);
    x << gaussian(rng), gaussian(rng);
    return x;
  };
  return p;
}

struct WorkerGuard {
  unsigned saved = worker_count();
  ~WorkerGuard() { set_worker_count(saved); }
};

}  // namespace

TEST_SUITE("search") {

TEST_CASE("compass search finds a smooth maximum") {
  Params c(2);
  c << 0.3, -1.2;
  const MultistartResult r = multistart_maximize(quadratic(c), {4, 400}, 1);
  CHECK(r.best >= -1e-10);
  CHECK((r.argbest - c).norm() <= 1e-5);
  CHECK(r.restarts.size() == 4);
  CHECK(r.agreement() == doctest::Approx(1.0));
}

TEST_CASE("a target stops each restart early") {
  Params c(2);
  c << 0.0, 0.0;
  CompassProblem p = quadratic(c);
  const MultistartResult full = multistart_maximize(p, {4, 400}, 1);
  p.target = -0.5;
  const MultistartResult early = multistart_maximize(p, {4, 400}, 1);
  CHECK(early.evaluations < full.evaluations);
  CHECK(early.best >= -0.5);
}

TEST_CASE("results do not depend on the worker count") {
  WorkerGuard guard;
  const SpacePtr s = NormedSpace::lp(3, 3.0, Field::complex);
  const Mat t = [] {
    Engine rng = make_stream(4);
    return testing::random_matrix(3, true, rng);
  }();
  const auto run = [&] {
    return multistart_maximize(
        sphere_problem(*s, [&](const Vec& x) { return s->norm(t * x); }), {12, 100}, 99);
  };
  set_worker_count(1);
  const MultistartResult one = run();
  set_worker_count(4);
  const MultistartResult four = run();
  CHECK(one.best == four.best);
  CHECK(one.argbest == four.argbest);
  CHECK(one.evaluations == four.evaluations);
  REQUIRE(one.restarts.size() == four.restarts.size());
  for (std::size_t i = 0; i < one.restarts.size(); ++i)
    CHECK(one.restarts[i].value == four.restarts[i].value);
}

TEST_CASE("sphere search stays on the sphere") {
  const SpacePtr s = NormedSpace::lp(3, 1.0);
  const MultistartResult r = multistart_maximize(
      sphere_problem(*s, [](const Vec& x) { return std::abs(x[0] + 2.0 * x[1]); }), {6, 150}, 2);
  const Vec x = unpack_vector(r.argbest, 3, false);
  CHECK(std::abs(s->norm(x) - 1.0) <= 1e-12);
  // the l-inf norm of (1, 2, 0) is the exact maximum over the l1 ball
  CHECK(std::abs(r.best - 2.0) <= 1e-9);
}

TEST_CASE("coordinate starts are normalized coordinate vectors") {
  const SpacePtr s = NormedSpace::weighted_euclidean({4.0, 1.0});
  const auto starts = coordinate_starts(*s);
  REQUIRE(starts.size() >= 2);
  for (const auto& p : starts) CHECK(std::abs(s->norm(unpack_vector(p, 2, false)) - 1.0) <= 1e-12);
}

TEST_CASE("parallel_for visits every index once") {
  WorkerGuard guard;
  for (unsigned w : {1u, 3u}) {
    set_worker_count(w);
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("nested parallel_for runs serially without deadlock") {
  WorkerGuard guard;
  set_worker_count(2);
  std::atomic<int> total{0};
  parallel_for(4, [&](std::size_t) { parallel_for(5, [&](std::size_t) { total += 1; }); });
  CHECK(total.load() == 20);
}

TEST_CASE("streams are independent and reproducible") {
  Engine a = make_stream(1, {2});
  Engine b = make_stream(1, {2});
  Engine c = make_stream(1, {3});
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
}

}  // TEST_SUITE
