#include "banachlab/operator_calculus.hpp"

#include <algorithm>
#include <cmath>

#include "banachlab/errors.hpp"
#include "banachlab/hilbert_radius.hpp"
#include "banachlab/sphere_search.hpp"

namespace banachlab {

namespace {

constexpr double kActive = 1e-12;

void check_operator(const NormedSpace& space, const Mat& t) {
  space.check_matrix(t, "operator matrix");
  require(t.cols() == space.dim(), "operator matrix must be square");
}

Vec unit(int dim, int i) {
  Vec e = Vec::Zero(dim);
  e[i] = 1.0;
  return e;
}

BoundsCertificate l1_norm(const Mat& t) {
  Eigen::Index j = 0;
  const double value = t.cwiseAbs().colwise().sum().maxCoeff(&j);
  BoundsCertificate c = exact_value(value);
  c.witnesses.push_back(unit(static_cast<int>(t.rows()), static_cast<int>(j)));
  return c;
}

BoundsCertificate linf_norm(const Mat& t) {
  Eigen::Index i = 0;
  const double value = t.cwiseAbs().rowwise().sum().maxCoeff(&i);
  BoundsCertificate c = exact_value(value);
  Vec x(t.cols());
  for (Eigen::Index j = 0; j < t.cols(); ++j) {
    const cd ph = std::conj(phase(t(i, j)));
    x[j] = ph == 0.0 ? cd{1.0} : ph;
  }
  c.witnesses.push_back(x);
  return c;
}

BoundsCertificate euclidean_norm(const NormedSpace& space, const Mat& t) {
  const Mat& r = *space.euclidean_factor();
  const Mat& r_inv = *space.euclidean_factor_inverse();
  Eigen::JacobiSVD<Mat> svd(r * t * r_inv, Eigen::ComputeFullV);
  BoundsCertificate c = exact_value(svd.singularValues()[0]);
  c.witnesses.push_back(r_inv * svd.matrixV().col(0));
  return c;
}

BoundsCertificate polytope_norm(const NormedSpace& space, const Polytope& poly, const Mat& t) {
  BoundsCertificate c = exact_value(0.0, Method::extreme_point_enumeration);
  const Vec* best = &poly.vertices.front();
  for (const auto& v : poly.vertices) {
    const double value = space.norm(t * v);
    if (value > c.lower) {
      c.lower = value;
      best = &v;
    }
  }
  c.upper = c.lower;
  c.witnesses.push_back(*best);
  c.budget_used = static_cast<long>(poly.vertices.size());
  return c;
}

// |T|_p <= |T|_1^{1/p} |T|_inf^{1-1/p}
double interpolation_bound(const NormedSpace& space, const Mat& t) {
  const auto* lp = std::get_if<LpNorm>(&space.kind());
  if (lp == nullptr) return kInf;
  const double n1 = t.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = t.cwiseAbs().rowwise().sum().maxCoeff();
  return std::pow(n1, 1.0 / lp->p) * std::pow(ninf, 1.0 - 1.0 / lp->p);
}

BoundsCertificate multistart_norm(const NormedSpace& space, const Mat& t, SearchBudget budget,
                                  std::uint64_t seed) {
  CompassProblem problem = sphere_problem(space, [&](const Vec& x) { return space.norm(t * x); });
  const auto starts = coordinate_starts(space);
  const MultistartResult res = multistart_maximize(problem, budget, seed, starts);
  BoundsCertificate c;
  c.method = Method::multistart_heuristic;
  c.lower = res.best;
  c.upper = std::max(c.lower, std::min(c.lower * (1.0 + res.stagnation_slack()),
                                       interpolation_bound(space, t)));
  c.witnesses.push_back(unpack_vector(res.argbest, space.dim(), space.is_complex()));
  c.budget_used = res.evaluations;
  return c;
}

// Largest |g(T v)| over vertices v and dual vertices g active at v.
BoundsCertificate polytope_radius(const Polytope& poly, const Mat& t) {
  BoundsCertificate c = exact_value(0.0, Method::extreme_point_enumeration);
  const Vec* best_v = &poly.vertices.front();
  const Vec* best_g = &poly.dual_vertices.front();
  for (const auto& v : poly.vertices) {
    const Vec tv = t * v;
    for (const auto& g : poly.dual_vertices) {
      if (pair(g, v).real() < 1.0 - kActive) continue;
      const double value = std::abs(pair(g, tv));
      if (value > c.lower) {
        c.lower = value;
        best_v = &v;
        best_g = &g;
      }
    }
  }
  c.upper = c.lower;
  c.witnesses = {*best_v, *best_g};
  c.budget_used = static_cast<long>(poly.vertices.size() * poly.dual_vertices.size());
  return c;
}

// l1 face of e_j is {f : f_j = 1, |f_i| <= 1}; the sup over the face of
// |f(T e_j)| is |t_jj| + sum_{i != j} |t_ij|. l-inf is the transpose.
BoundsCertificate l1_radius(const Mat& t, bool transpose) {
  const int n = static_cast<int>(t.rows());
  BoundsCertificate c = exact_value(0.0, Method::extreme_point_enumeration);
  int best = 0;
  for (int j = 0; j < n; ++j) {
    double value = std::abs(t(j, j));
    for (int i = 0; i < n; ++i)
      if (i != j) value += std::abs(transpose ? t(j, i) : t(i, j));
    if (value > c.lower) {
      c.lower = value;
      best = j;
    }
  }
  c.upper = c.lower;
  c.witnesses = {unit(n, best)};
  c.budget_used = n;
  return c;
}

BoundsCertificate hilbert_radius(const NormedSpace& space, const Mat& t,
                                 const RadiusOptions& options) {
  const Mat& r = *space.euclidean_factor();
  const Mat& r_inv = *space.euclidean_factor_inverse();
  const Mat a = r * t * r_inv;
  HilbertRadius h;
  if (!space.is_complex()) h = real_hilbert_radius(a);
  else if (space.dim() == 2) h = ellipse_radius(a);
  else h = complex_hilbert_radius(a, options.hilbert_tolerance, options.hilbert_max_solves);
  BoundsCertificate c;
  c.lower = h.lower;
  c.upper = h.upper;
  c.method = h.upper - h.lower <= 1e-9 ? Method::exact_formula : Method::outer_approximation;
  const Vec x = r_inv * h.witness;
  c.witnesses = {x, space.norming_functionals(x).functionals.front()};
  c.budget_used = h.eigen_solves;
  return c;
}

MultistartResult radius_search(const NormedSpace& space, const Mat& t, SearchBudget budget,
                               std::uint64_t seed) {
  CompassProblem problem =
      sphere_problem(space, [&](const Vec& x) { return space.face_support(x, t * x); });
  const auto starts = coordinate_starts(space);
  return multistart_maximize(problem, budget, seed, starts);
}

}  // namespace

BoundsCertificate operator_norm(const NormedSpace& space, const Mat& t, SearchBudget budget,
                                std::uint64_t seed) {
  check_operator(space, t);
  if (space.dim() == 1) {
    BoundsCertificate c = exact_value(std::abs(t(0, 0)));
    c.witnesses.push_back(unit(1, 0) / space.norm(unit(1, 0)));
    return c;
  }
  if (space.is_lp(1.0)) return l1_norm(t);
  if (space.is_lp(kInf)) return linf_norm(t);
  if (space.euclidean_factor()) return euclidean_norm(space, t);
  if (const Polytope* poly = space.polytope()) return polytope_norm(space, *poly, t);
  return multistart_norm(space, t, budget, seed);
}

OperatorRep make_operator(SpacePtr space, Mat matrix, SearchBudget budget, std::uint64_t seed) {
  require(space != nullptr, "operator needs a space");
  OperatorRep op;
  op.norm_bounds = operator_norm(*space, matrix, budget, seed);
  op.space = std::move(space);
  op.matrix = std::move(matrix);
  return op;
}

std::vector<cd> numerical_range_samples(const OperatorRep& op, int count, std::uint64_t seed) {
  const NormedSpace& space = *op.space;
  check_operator(space, op.matrix);
  std::vector<cd> out;
  for (const auto& x : sample_sphere(space, count, seed)) {
    const StatePair sp = state_pair_at(space, x);
    out.push_back(pair(sp.f, op.matrix * sp.x));
  }
  if (const Polytope* poly = space.polytope()) {
    for (const auto& v : poly->vertices)
      for (const auto& g : poly->dual_vertices)
        if (pair(g, v).real() >= 1.0 - kActive) out.push_back(pair(g, op.matrix * v));
  }
  return out;
}

BoundsCertificate numerical_radius(const NormedSpace& space, const Mat& t,
                                   const RadiusOptions& options) {
  check_operator(space, t);
  if (space.dim() == 1) {
    BoundsCertificate c = exact_value(std::abs(t(0, 0)));
    const Vec x = unit(1, 0) / space.norm(unit(1, 0));
    c.witnesses = {x, space.norming_functionals(x).functionals.front()};
    return c;
  }
  if (options.allow_exact) {
    if (space.euclidean_factor()) return hilbert_radius(space, t, options);
    if (space.is_complex() && space.is_lp(1.0)) return l1_radius(t, false);
    if (space.is_complex() && space.is_lp(kInf)) return l1_radius(t, true);
    if (const Polytope* poly = space.polytope()) {
      BoundsCertificate c = polytope_radius(*poly, t);
      if (options.cross_check) {
        const MultistartResult res =
            radius_search(space, t, options.cross_check_budget, options.seed);
        c.budget_used += res.evaluations;
        if (res.best > c.upper + 1e-9 * std::max(1.0, c.upper)) {
          // the search beat the enumeration: report the search honestly
          c.method = Method::multistart_heuristic;
          c.lower = res.best;
          c.upper = std::max(res.best, operator_norm(space, t).upper);
          c.witnesses = {unpack_vector(res.argbest, space.dim(), space.is_complex())};
        }
      }
      return c;
    }
  }

  const MultistartResult res = radius_search(space, t, options.budget, options.seed);
  const BoundsCertificate norm = operator_norm(space, t, options.budget, options.seed);
  BoundsCertificate c;
  c.method = Method::multistart_heuristic;
  c.lower = res.best;
  c.upper = std::max(c.lower, std::min(norm.upper, c.lower * (1.0 + res.stagnation_slack())));
  const Vec x = unpack_vector(res.argbest, space.dim(), space.is_complex());
  c.witnesses = {x};
  c.budget_used = res.evaluations + norm.budget_used;
  return c;
}

OperatorRep conjugate_operator(const OperatorRep& t_on_z, const Subspace& z,
                               const InvertibleMap& c, const Subspace& y, SearchBudget budget,
                               std::uint64_t seed) {
  require(y.ambient->dim() == z.ambient->dim() && c.matrix.rows() == y.ambient->dim(),
          "conjugation needs subspaces and map in one ambient space");
  require(y.dim() == z.dim(), "conjugation needs subspaces of equal dimension");
  require(t_on_z.matrix.rows() == z.dim() && t_on_z.matrix.cols() == z.dim(),
          "operator does not act on Z");
  const Mat images = c.matrix * y.basis;
  const Mat m = z.basis.colPivHouseholderQr().solve(images);
  for (int j = 0; j < y.dim(); ++j) {
    const double scale = std::max(1.0, images.col(j).cwiseAbs().maxCoeff());
    require((z.basis * m.col(j) - images.col(j)).cwiseAbs().maxCoeff() <= 1e-9 * scale,
            "map does not carry Y into Z");
  }
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(1e-10);
  require(lu.isInvertible(), "map does not carry Y onto Z");
  Mat t_y = lu.inverse() * t_on_z.matrix * m;
  if (!y.induced->is_complex()) t_y = t_y.real().cast<cd>();
  return make_operator(y.induced, std::move(t_y), budget, seed);
}

LipschitzReport radius_lipschitz_check(const OperatorRep& s, const OperatorRep& t,
                                       const RadiusOptions& options) {
  require(s.space == t.space || (s.space->dim() == t.space->dim() &&
                                 s.space->label() == t.space->label()),
          "operators act on different spaces");
  LipschitzReport r;
  r.radius_s = numerical_radius(*s.space, s.matrix, options);
  r.radius_t = numerical_radius(*t.space, t.matrix, options);
  r.distance = operator_norm(*s.space, Mat(s.matrix - t.matrix), options.budget, options.seed);
  r.slack_st = r.distance.upper + 2e-9 - (r.radius_s.lower - r.radius_t.upper);
  r.slack_ts = r.distance.upper + 2e-9 - (r.radius_t.lower - r.radius_s.upper);
  r.passed = r.slack_st >= 0.0 && r.slack_ts >= 0.0;
  return r;
}

}  // namespace banachlab
