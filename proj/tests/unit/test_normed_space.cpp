#include <doctest.h>

#include <cmath>

#include "banachlab/errors.hpp"
#include "banachlab/normed_space.hpp"
#include "banachlab/oracles.hpp"
#include "helpers.hpp"

using namespace banachlab;
using testing::vec;

namespace {

SpacePtr cross_polytope(int dim) {
  std::vector<Vec> v;
  for (int i = 0; i < dim; ++i) {
    Vec e = Vec::Zero(dim);
    e[i] = 1.0;
    v.push_back(e);
    v.push_back(-e);
  }
  return NormedSpace::polyhedral(v);
}

SpacePtr hypercube(int dim) {
  std::vector<Vec> v;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) x[i] = (mask >> i) & 1 ? 1.0 : -1.0;
    v.push_back(x);
  }
  return NormedSpace::polyhedral(v);
}

std::vector<SpacePtr> assorted_spaces() {
  return {NormedSpace::lp(3, 1.0),
          NormedSpace::lp(3, 2.0),
          NormedSpace::lp(3, kInf),
          NormedSpace::lp(3, 1.5),
          NormedSpace::lp(3, 4.0),
          NormedSpace::lp(3, 1.0, Field::complex),
          NormedSpace::lp(3, 2.0, Field::complex),
          NormedSpace::lp(3, kInf, Field::complex),
          NormedSpace::lp(3, 3.0, Field::complex),
          NormedSpace::weighted_euclidean({1.0, 2.0, 0.5}),
          NormedSpace::weighted_euclidean({1.0, 4.0, 2.0}, Field::complex),
          cross_polytope(3),
          hypercube(3)};
}

// Dual norm straight from its definition on a polytope: max over vertices.
double max_over_vertices(const std::vector<Vec>& vertices, const Vec& f) {
  double best = 0.0;
  for (const auto& v : vertices) best = std::max(best, std::abs(pair(f, v)));
  return best;
}

}  // namespace

TEST_SUITE("normed_space") {

TEST_CASE("norm closed forms") {
  CHECK(NormedSpace::lp(2, 2.0)->norm(vec({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(NormedSpace::lp(2, 1.0)->norm(vec({1.0, -2.0})) == doctest::Approx(3.0).epsilon(1e-15));
}

TEST_CASE("cross-polytope gauge equals the l1 norm") {
  const SpacePtr poly = cross_polytope(2);
  const Vec x = vec({0.5, 0.5});
  CHECK(std::abs(poly->norm(x) - 1.0) <= 1e-12);
  CHECK(std::abs(poly->norm(x) - oracle::norm(*NormedSpace::lp(2, 1.0), x)) <= 1e-12);
}

TEST_CASE("dual norm closed forms") {
  CHECK(NormedSpace::lp(2, 1.0)->dual_norm(vec({2.0, -3.0})) == doctest::Approx(3.0));
  CHECK(NormedSpace::lp(2, 2.0)->dual_norm(vec({3.0, 4.0})) == doctest::Approx(5.0));
  const std::vector<Vec> vertices{vec({1.0, 0.0}), vec({-1.0, 0.0}), vec({0.0, 1.0}),
                                  vec({0.0, -1.0})};
  const Vec f = vec({2.0, -3.0});
  CHECK(std::abs(cross_polytope(2)->dual_norm(f) - max_over_vertices(vertices, f)) <= 1e-12);
  CHECK(std::abs(cross_polytope(2)->dual_norm(f) - 3.0) <= 1e-12);
}

TEST_CASE("invalid spaces and vectors are rejected") {
  CHECK_THROWS_AS(NormedSpace::lp(2, 0.5), InputError);
  CHECK_THROWS_AS(NormedSpace::lp(0, 2.0), InputError);
  CHECK_THROWS_AS(NormedSpace::weighted_euclidean({1.0, -1.0}), InputError);
  CHECK_THROWS_AS(NormedSpace::polyhedral({vec({1.0, 0.0}), vec({0.0, 1.0})}), InputError);
  CHECK_THROWS_AS(NormedSpace::polyhedral({vec({1.0, 1.0}), vec({-1.0, -1.0})}), InputError);
  const SpacePtr s = NormedSpace::lp(2, 2.0);
  CHECK_THROWS_AS(s->check_vector(vec({1.0, 2.0, 3.0})), InputError);
  CHECK_THROWS_AS(s->check_vector(vec({cd{1.0, 1.0}, 0.0})), InputError);
}

TEST_CASE("l1 norming functionals at a sparse vector") {
  const SpacePtr s = NormedSpace::lp(2, 1.0);
  const NormingFace face = s->norming_functionals(vec({1.0, 0.0}));
  REQUIRE(face.functionals.size() == 2);
  CHECK(face.functionals[0] == vec({1.0, 1.0}));
  CHECK(face.functionals[1] == vec({1.0, -1.0}));
  CHECK_FALSE(face.truncated);
  for (const auto& f : face.functionals) {
    CHECK(std::abs(pair(f, vec({1.0, 0.0})) - 1.0) <= 1e-12);
    CHECK(std::abs(f.cwiseAbs().maxCoeff() - 1.0) <= 1e-12);  // l-inf norm by hand
  }
}

TEST_CASE("unique norming functionals") {
  const NormingFace h = NormedSpace::lp(2, 2.0)->norming_functionals(vec({0.6, 0.8}));
  REQUIRE(h.functionals.size() == 1);
  CHECK((h.functionals[0] - vec({0.6, 0.8})).norm() <= 1e-12);

  const NormingFace l1 = NormedSpace::lp(2, 1.0)->norming_functionals(vec({0.5, -0.5}));
  REQUIRE(l1.functionals.size() == 1);
  CHECK(l1.functionals[0] == vec({1.0, -1.0}));
}

TEST_CASE("face enumeration is capped with a flag") {
  const SpacePtr s = NormedSpace::lp(8, 1.0);
  Vec x = Vec::Zero(8);
  x[0] = 1.0;
  const NormingFace face = s->norming_functionals(x);
  CHECK(face.functionals.size() == kDefaultFaceCap);
  CHECK(face.truncated);
  CHECK(s->norming_functionals(x, 200).functionals.size() == 128);
}

TEST_CASE("every returned functional norms its vector") {
  for (const auto& s : assorted_spaces()) {
    for (const auto& x : sample_sphere(*s, 50, 11)) {
      for (const auto& f : s->norming_functionals(x).functionals) {
        CHECK(std::abs(s->dual_norm(f) - 1.0) <= 1e-9);
        CHECK(std::abs(pair(f, x) - s->norm(x)) <= 1e-9);
      }
    }
    // sparse vectors hit the non-smooth faces
    Vec e = Vec::Zero(3);
    e[0] = 1.0;
    for (const auto& f : s->norming_functionals(e).functionals) {
      CHECK(std::abs(s->dual_norm(f) - 1.0) <= 1e-9);
      CHECK(std::abs(pair(f, e) - s->norm(e)) <= 1e-9);
    }
  }
}

TEST_CASE("face support agrees with the brute-force face") {
  for (const auto& s : {NormedSpace::lp(2, 1.0), NormedSpace::lp(2, kInf), NormedSpace::lp(2, 3.0),
                        NormedSpace::lp(2, 1.0, Field::complex), cross_polytope(2), hypercube(2),
                        NormedSpace::weighted_euclidean({2.0, 1.0})}) {
    Engine rng = make_stream(5);
    for (int k = 0; k < 200; ++k) {
      Vec x = testing::random_vector(2, s->is_complex(), rng);
      if (k % 4 == 0) x[1] = 0.0;  // a face with more than one functional
      if (k % 4 == 1) x[1] = x[0];
      const Vec y = testing::random_vector(2, s->is_complex(), rng);
      CHECK(std::abs(s->face_support(x, y) - oracle::face_sup(*s, x, y)) <= 1e-9);
    }
  }
}

TEST_CASE("sample_sphere normalizes and is deterministic") {
  const SpacePtr s = NormedSpace::lp(3, kInf);
  const auto a = sample_sphere(*s, 1000, 42);
  const auto b = sample_sphere(*s, 1000, 42);
  REQUIRE(a.size() == 1000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(s->norm(a[i]) - 1.0) <= 1e-12);
    CHECK(a[i] == b[i]);
  }
  for (const auto& sp : assorted_spaces()) {
    const auto one = sample_sphere(*sp, 1, 3);
    REQUIRE(one.size() == 1);
    CHECK(std::abs(sp->norm(one[0]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("state pairs follow the descending lexicographic tie-break") {
  const StatePair h = state_pair_at(*NormedSpace::lp(2, 2.0), vec({2.0, 0.0}));
  CHECK(h.x == vec({1.0, 0.0}));
  CHECK((h.f - vec({1.0, 0.0})).norm() <= 1e-12);
  CHECK(h.exact());

  const StatePair l1 = state_pair_at(*NormedSpace::lp(2, 1.0), vec({1.0, 0.0}));
  CHECK(l1.f == vec({1.0, 1.0}));
  CHECK(l1.exact());

  const StatePair linf = state_pair_at(*NormedSpace::lp(2, kInf), vec({1.0, 1.0}));
  CHECK(linf.f == vec({1.0, 0.0}));
  CHECK(std::abs(pair(linf.f, linf.x) - 1.0) <= 1e-12);
  CHECK(std::abs(linf.f.cwiseAbs().sum() - 1.0) <= 1e-12);
}

TEST_CASE("complex state pairs pair to a real one") {
  for (const auto& s : assorted_spaces()) {
    if (!s->is_complex()) continue;
    for (const auto& x : sample_sphere(*s, 30, 8)) {
      const StatePair sp = state_pair_at(*s, x);
      CHECK(sp.exact());
      CHECK(std::abs(pair(sp.f, sp.x).imag()) <= 1e-9);
    }
  }
}

TEST_CASE("homogeneity, triangle inequality and Hoelder on samples") {
  for (const auto& s : assorted_spaces()) {
    Engine rng = make_stream(17);
    for (int k = 0; k < 300; ++k) {
      const Vec x = testing::random_vector(3, s->is_complex(), rng);
      const Vec y = testing::random_vector(3, s->is_complex(), rng);
      const double t = gaussian(rng) * 3.0;
      CHECK(std::abs(s->norm(t * x) - std::abs(t) * s->norm(x)) <= 1e-12 * std::abs(t) * s->norm(x) + 1e-15);
      CHECK(s->norm(x + y) <= s->norm(x) + s->norm(y) + 1e-12);
      CHECK(std::abs(pair(y, x)) <= s->dual_norm(y) * s->norm(x) + 1e-12);
    }
  }
}

TEST_CASE("Hoelder consistency on 10^4 pairs per lp space") {
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    for (Field field : {Field::real, Field::complex}) {
      const SpacePtr s = NormedSpace::lp(4, p, field);
      Engine rng = make_stream(23, {static_cast<std::uint64_t>(std::isinf(p) ? 99 : p * 10)});
      int violations = 0;
      for (int k = 0; k < 10'000; ++k) {
        const Vec x = testing::random_vector(4, s->is_complex(), rng);
        const Vec f = testing::random_vector(4, s->is_complex(), rng);
        violations += std::abs(pair(f, x)) > s->dual_norm(f) * s->norm(x) + 1e-12;
      }
      CHECK(violations == 0);
    }
  }
}

TEST_CASE("polyhedral spaces agree with the matching lp closed forms") {
  for (int dim : {2, 3, 4}) {
    const SpacePtr cross = cross_polytope(dim);
    const SpacePtr cube = hypercube(dim);
    const SpacePtr l1 = NormedSpace::lp(dim, 1.0);
    const SpacePtr linf = NormedSpace::lp(dim, kInf);
    Engine rng = make_stream(31, {static_cast<std::uint64_t>(dim)});
    for (int k = 0; k < 1000; ++k) {
      const Vec x = testing::random_vector(dim, false, rng);
      CHECK(std::abs(cross->norm(x) - l1->norm(x)) <= 1e-9);
      CHECK(std::abs(cross->dual_norm(x) - l1->dual_norm(x)) <= 1e-9);
      CHECK(std::abs(cube->norm(x) - linf->norm(x)) <= 1e-9);
      CHECK(std::abs(cube->dual_norm(x) - linf->dual_norm(x)) <= 1e-9);
    }
  }
}

TEST_CASE("weighted Euclidean norm matches its formula") {
  const SpacePtr s = NormedSpace::weighted_euclidean({1.0, 3.0}, Field::complex);
  const Vec x = vec({cd{1.0, 1.0}, cd{0.0, -2.0}});
  CHECK(std::abs(s->norm(x) - std::sqrt(2.0 + 3.0 * 4.0)) <= 1e-12);
  CHECK(std::abs(s->norm(x) - oracle::norm(*s, x)) <= 1e-12);
}

TEST_CASE("induced norms reproduce the ambient norm") {
  Engine rng = make_stream(41);
  for (const auto& ambient : {NormedSpace::lp(3, 1.0), NormedSpace::lp(3, 2.0),
                              NormedSpace::lp(3, kInf), NormedSpace::lp(3, 3.0),
                              NormedSpace::lp(3, 2.0, Field::complex)}) {
    const Mat basis = testing::random_matrix(3, ambient->is_complex(), rng).leftCols(2);
    const SpacePtr sub = NormedSpace::induced(ambient, basis);
    CHECK(sub->dim() == 2);
    for (int k = 0; k < 50; ++k) {
      const Vec c = testing::random_vector(2, ambient->is_complex(), rng);
      CHECK(std::abs(sub->norm(c) - ambient->norm(basis * c)) <= 1e-9 * ambient->norm(basis * c));
    }
  }
  // subspaces of Euclidean and real polytope spaces get closed-form kinds
  const Mat b = testing::random_matrix(3, false, rng).leftCols(2);
  CHECK(std::holds_alternative<GramNorm>(NormedSpace::induced(NormedSpace::lp(3, 2.0), b)->kind()));
  CHECK(std::holds_alternative<PolyhedralNorm>(NormedSpace::induced(NormedSpace::lp(3, 1.0), b)->kind()));
}

TEST_CASE("nearest norming functional on an l1 face") {
  const SpacePtr s = NormedSpace::lp(2, 1.0);
  const Vec x = vec({1.0, 0.0});
  const Vec target = vec({0.3, 0.4});
  const Vec f = s->nearest_norming_functional(x, target);
  // face {(1, t) : |t| <= 1}; the l-inf distance to the target is at least |1 - 0.3|
  CHECK(std::abs(f[0] - 1.0) <= 1e-12);
  CHECK(std::abs(s->dual_norm(target - f) - 0.7) <= 1e-9);
}

TEST_CASE("nearest norming functional is always norming") {
  for (const auto& s : assorted_spaces()) {
    Engine rng = make_stream(43);
    for (int k = 0; k < 20; ++k) {
      Vec x = testing::random_vector(3, s->is_complex(), rng);
      if (k % 2 == 0) x[2] = 0.0;
      const Vec target = testing::random_vector(3, s->is_complex(), rng);
      const Vec f = s->nearest_norming_functional(x, target);
      CHECK(std::abs(s->dual_norm(f) - 1.0) <= 1e-9);
      CHECK(std::abs(pair(f, x) - s->norm(x)) <= 1e-9 * s->norm(x));
    }
  }
}

}  // TEST_SUITE
