#include "banachlab/subspace_geometry.hpp"

#include <algorithm>
#include <cmath>

#include "banachlab/errors.hpp"
#include "banachlab/operator_calculus.hpp"
#include "banachlab/sphere_search.hpp"

namespace banachlab {

namespace {

constexpr double kRankThreshold = 1e-10;
constexpr double kMembership = 1e-9;

Eigen::MatrixXcd normalized_columns(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double n = out.col(j).norm();
    if (n > 0.0) out.col(j) /= n;
  }
  return out;
}

int numerical_rank(const Eigen::MatrixXcd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(normalized_columns(m));
  int rank = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    rank += svd.singularValues()[i] >= kRankThreshold;
  return rank;
}

// Coordinates used for least-squares steps: the Euclidean frame when the
// ambient norm has one, plain coordinates otherwise.
Mat frame(const NormedSpace& space, const Mat& m) {
  if (const Mat* r = space.euclidean_factor()) return (*r) * m;
  return m;
}

bool maps_into(const Mat& c, const Subspace& y, const Subspace& z) {
  const Mat images = c * y.basis;
  const Mat m = z.basis.colPivHouseholderQr().solve(images);
  for (int j = 0; j < y.dim(); ++j) {
    const double scale = std::max(1.0, images.col(j).cwiseAbs().maxCoeff());
    if ((z.basis * m.col(j) - images.col(j)).cwiseAbs().maxCoeff() > kMembership * scale)
      return false;
  }
  return true;
}

// Rotation carrying Y onto Z in each principal plane and fixing the
// orthogonal complement of Y + Z.
Mat direct_rotation(const Subspace& y, const Subspace& z) {
  const NormedSpace& space = *y.ambient;
  const int n = space.dim();
  const Mat ry = frame(space, y.basis);
  const Mat rz = frame(space, z.basis);
  const Mat qy = Eigen::HouseholderQR<Mat>(ry).householderQ() * Mat::Identity(n, y.dim());
  const Mat qz = Eigen::HouseholderQR<Mat>(rz).householderQ() * Mat::Identity(n, z.dim());
  Eigen::JacobiSVD<Mat> svd(qy.adjoint() * qz, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat rot = Mat::Identity(n, n);
  for (int i = 0; i < y.dim(); ++i) {
    const double cosine = std::min(1.0, svd.singularValues()[i]);
    const Vec u = qy * svd.matrixU().col(i);
    const Vec w = qz * svd.matrixV().col(i);
    Vec e = w - cosine * u;
    const double sine = e.norm();
    if (sine <= 1e-15) continue;
    e /= sine;
    rot += (cosine - 1.0) * (u * u.adjoint() + e * e.adjoint()) +
           sine * (e * u.adjoint() - u * e.adjoint());
  }
  Mat c = rot;
  if (const Mat* r = space.euclidean_factor()) c = (*space.euclidean_factor_inverse()) * rot * (*r);
  if (!space.is_complex()) c = c.real().cast<cd>();
  return c;
}

Mat left_inverse(const Mat& b) { return (b.adjoint() * b).inverse() * b.adjoint(); }

Mat basis_exchange(const Mat& yb, const Mat& zb, const NormedSpace& space) {
  const Mat g = left_inverse(frame(space, yb)) * frame(space, Mat::Identity(yb.rows(), yb.rows()));
  Mat c = Mat::Identity(yb.rows(), yb.rows()) + (zb - yb) * g;
  if (!space.is_complex()) c = c.real().cast<cd>();
  return c;
}

struct Candidate {
  std::string name;
  InvertibleMap map;
};

std::vector<Candidate> builtin_candidates(const Subspace& y, const Subspace& z,
                                          SearchBudget budget, std::uint64_t seed) {
  const NormedSpace& space = *y.ambient;
  std::vector<std::pair<std::string, Mat>> raw;
  if (space.euclidean_factor()) raw.emplace_back("direct_rotation", direct_rotation(y, z));
  raw.emplace_back("basis_exchange", basis_exchange(y.basis, z.basis, space));
  const Mat align = left_inverse(frame(space, z.basis)) * frame(space, y.basis);
  if (Eigen::FullPivLU<Mat>(align).isInvertible())
    raw.emplace_back("aligned_basis_exchange", basis_exchange(y.basis, Mat(z.basis * align), space));

  std::vector<Candidate> out;
  for (auto& [name, m] : raw) {
    if (!m.allFinite() || !maps_into(m, y, z)) continue;
    try {
      out.push_back({name, make_invertible_map(y.ambient, m, budget, seed)});
    } catch (const InputError&) {
      // singular exchange map: not a candidate
    }
  }
  return out;
}

BoundsCertificate point_result(double value, Method method, const Vec& witness) {
  BoundsCertificate c = exact_value(value, method);
  c.witnesses.push_back(witness);
  return c;
}

// Orthonormal basis (in the Euclidean frame) of span(basis).
Mat frame_basis(const NormedSpace& space, const Mat& basis) {
  const int n = space.dim();
  return Eigen::HouseholderQR<Mat>(frame(space, basis)).householderQ() *
         Mat::Identity(n, basis.cols());
}

// Euclidean norms: the nearest point of S_Z to a unit y is P y / |P y| in
// the frame, at distance |y - P y / |P y||.
BoundsCertificate euclidean_dist(const Vec& y, const Subspace& z) {
  const NormedSpace& space = *z.ambient;
  const Mat& r_inv = *space.euclidean_factor_inverse();
  const Mat qz = frame_basis(space, z.basis);
  const Vec p = qz.adjoint() * frame(space, Mat(y));
  Vec nearest = p.norm() > 1e-15 ? Vec(qz * (p / p.norm())) : Vec(qz.col(0));
  nearest = r_inv * nearest;
  if (!space.is_complex()) nearest = nearest.real().cast<cd>();
  return point_result(space.norm(y - nearest), Method::exact_formula, nearest);
}

// The unit y of Y farthest from S_Z minimizes |P_Z y|: the smallest
// singular direction of Q_Z* Q_Y.
Vec euclidean_farthest(const Subspace& y, const Subspace& z) {
  const NormedSpace& space = *y.ambient;
  const Mat qy = frame_basis(space, y.basis);
  const Mat qz = frame_basis(space, z.basis);
  Vec dir;
  if (y.dim() > z.dim()) {
    // some unit y is orthogonal to Z
    Eigen::FullPivLU<Mat> lu(Mat(qz.adjoint() * qy));
    dir = lu.kernel().col(0);
  } else {
    Eigen::JacobiSVD<Mat> svd(Mat(qz.adjoint() * qy), Eigen::ComputeFullV);
    dir = svd.matrixV().col(y.dim() - 1);
  }
  Vec point = (*space.euclidean_factor_inverse()) * (qy * dir);
  if (!space.is_complex()) point = point.real().cast<cd>();
  return point / space.norm(point);
}

bool canonical_before(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim()) return a.dim() < b.dim();
  for (Eigen::Index j = 0; j < a.basis.cols(); ++j)
    for (Eigen::Index i = 0; i < a.basis.rows(); ++i) {
      const cd x = a.basis(i, j);
      const cd w = b.basis(i, j);
      if (x.real() != w.real()) return x.real() < w.real();
      if (x.imag() != w.imag()) return x.imag() < w.imag();
    }
  return false;
}

}  // namespace

Subspace make_subspace(SpacePtr ambient, Mat basis, std::string label) {
  require(ambient != nullptr, "subspace needs an ambient space");
  ambient->check_matrix(basis, "subspace basis");
  require(basis.cols() >= 1 && basis.cols() <= ambient->dim(),
          "subspace basis needs between 1 and dim columns");
  require(basis.allFinite(), "subspace basis has non-finite entries");
  require(numerical_rank(basis) == basis.cols(), "subspace basis is rank deficient");
  Subspace s;
  s.induced = NormedSpace::induced(ambient, basis, label);
  s.label = s.induced->label();
  s.ambient = std::move(ambient);
  s.basis = std::move(basis);
  return s;
}

Subspace whole_space(SpacePtr ambient) {
  require(ambient != nullptr, "subspace needs an ambient space");
  Subspace s;
  s.basis = Mat::Identity(ambient->dim(), ambient->dim());
  s.induced = ambient;
  s.label = ambient->label();
  s.ambient = std::move(ambient);
  return s;
}

InvertibleMap make_invertible_map(SpacePtr ambient, Mat matrix, SearchBudget budget,
                                  std::uint64_t seed) {
  require(ambient != nullptr, "map needs an ambient space");
  ambient->check_matrix(matrix, "map matrix");
  require(matrix.cols() == ambient->dim(), "map matrix must be square");
  require(matrix.allFinite(), "map matrix has non-finite entries");
  Eigen::FullPivLU<Mat> lu(matrix);
  require(lu.isInvertible(), "map is not invertible");
  Mat inverse = lu.inverse();
  if (!ambient->is_complex()) inverse = inverse.real().cast<cd>();
  const Mat check = matrix * inverse - Mat::Identity(matrix.rows(), matrix.rows());
  require(max_abs_entry(check) <= 1e-10, "map inverse failed verification (ill-conditioned map)");
  InvertibleMap c;
  c.deviation = operator_norm(
      *ambient, Mat(matrix - Mat::Identity(matrix.rows(), matrix.rows())), budget, seed);
  c.ambient = std::move(ambient);
  c.matrix = std::move(matrix);
  c.inverse = std::move(inverse);
  return c;
}

InvertibleMap identity_map(SpacePtr ambient) {
  const int n = ambient->dim();
  return make_invertible_map(std::move(ambient), Mat::Identity(n, n));
}

InvertibleMap inverse_map(const InvertibleMap& c, SearchBudget budget, std::uint64_t seed) {
  return make_invertible_map(c.ambient, c.inverse, budget, seed);
}

bool same_ambient(const Subspace& a, const Subspace& b) {
  return a.ambient == b.ambient ||
         (a.ambient->dim() == b.ambient->dim() && a.ambient->field() == b.ambient->field() &&
          a.ambient->label() == b.ambient->label());
}

bool same_span(const Subspace& a, const Subspace& b) {
  if (a.dim() != b.dim() || a.basis.rows() != b.basis.rows()) return false;
  Eigen::MatrixXcd both(a.basis.rows(), a.dim() + b.dim());
  both << Eigen::MatrixXcd(a.basis), Eigen::MatrixXcd(b.basis);
  return numerical_rank(both) == a.dim();
}

BoundsCertificate dist_to_sphere(const Vec& y, const Subspace& z, SearchBudget budget,
                                 std::uint64_t seed) {
  const NormedSpace& ambient = *z.ambient;
  ambient.check_vector(y, "y");
  require(std::abs(ambient.norm(y) - 1.0) <= 1e-9, "dist_to_sphere needs a unit vector y");

  if (ambient.euclidean_factor()) return euclidean_dist(y, z);
  if (z.dim() == 1 && !ambient.is_complex()) {
    const Vec z0 = z.basis.col(0) / ambient.norm(z.basis.col(0));
    const double plus = ambient.norm(y - z0);
    const double minus = ambient.norm(y + z0);
    return point_result(std::min(plus, minus), Method::exact_formula,
                                plus <= minus ? z0 : Vec(-z0));
  }

  const NormedSpace& coeffs = *z.induced;
  CompassProblem problem =
      sphere_problem(coeffs, [&](const Vec& c) { return -ambient.norm(y - z.basis * c); });
  std::vector<Params> starts;
  const Vec projected = frame(ambient, z.basis).colPivHouseholderQr().solve(frame(ambient, Mat(y)));
  if (projected.cwiseAbs().maxCoeff() > 0.0) {
    Vec c = projected;
    if (!coeffs.is_complex()) c = c.real().cast<cd>();
    starts.push_back(pack_vector(c, coeffs.is_complex()));
  }
  for (auto& s : coordinate_starts(coeffs)) starts.push_back(std::move(s));
  const MultistartResult res = multistart_maximize(problem, budget, seed, starts);

  BoundsCertificate c;
  c.method = Method::multistart_heuristic;
  c.upper = -res.best;
  c.lower = std::max(0.0, c.upper * (1.0 - res.stagnation_slack()));
  c.witnesses.push_back(z.basis * unpack_vector(res.argbest, coeffs.dim(), coeffs.is_complex()));
  c.budget_used = res.evaluations;
  return c;
}

BoundsCertificate directed_gap(const Subspace& y, const Subspace& z, SearchBudget budget,
                               std::uint64_t seed) {
  require(same_ambient(y, z), "subspaces live in different ambient spaces");
  const NormedSpace& ambient = *y.ambient;
  const SearchBudget inner{std::max(2, budget.restarts / 8), std::max(50, budget.steps / 4)};

  // every unit vector of Y already lies on S_Z
  if (same_span(y, z)) {
    BoundsCertificate c = exact_value(0.0);
    c.witnesses.push_back(y.basis.col(0) / ambient.norm(y.basis.col(0)));
    return c;
  }

  if (ambient.euclidean_factor()) {
    const Vec far = euclidean_farthest(y, z);
    BoundsCertificate c = euclidean_dist(far, z);
    c.witnesses.insert(c.witnesses.begin(), far);
    return c;
  }

  // S_Y = {+-y0} for a real line and S_Z is symmetric, so one point decides.
  if (y.dim() == 1 && !ambient.is_complex()) {
    const Vec y0 = y.basis.col(0) / ambient.norm(y.basis.col(0));
    BoundsCertificate c = dist_to_sphere(y0, z, inner, seed);
    c.witnesses.insert(c.witnesses.begin(), y0);
    return c;
  }

  const NormedSpace& coeffs = *y.induced;
  CompassProblem problem = sphere_problem(coeffs, [&](const Vec& c) {
    const Vec point = y.basis * c;
    return dist_to_sphere(point / ambient.norm(point), z, inner, seed).upper;
  });
  const auto starts = coordinate_starts(coeffs);
  const MultistartResult res = multistart_maximize(problem, budget, seed, starts);
  const Vec best = y.basis * unpack_vector(res.argbest, coeffs.dim(), coeffs.is_complex());
  const BoundsCertificate at_best =
      dist_to_sphere(best / ambient.norm(best), z, inner.doubled(), seed);

  BoundsCertificate c;
  c.method = Method::multistart_heuristic;
  c.lower = std::min(at_best.lower, res.best);
  c.upper = std::max(res.best, at_best.upper) * (1.0 + res.stagnation_slack());
  c.witnesses = {best};
  c.budget_used = res.evaluations;
  return c;
}

BoundsCertificate gap_opening(const Subspace& y, const Subspace& z, SearchBudget budget,
                              std::uint64_t seed) {
  require(same_ambient(y, z), "subspaces live in different ambient spaces");
  const bool swap = canonical_before(z, y);
  const Subspace& a = swap ? z : y;
  const Subspace& b = swap ? y : z;
  const BoundsCertificate ab = directed_gap(a, b, budget, seed);
  const BoundsCertificate ba = directed_gap(b, a, budget, seed);
  BoundsCertificate c;
  c.lower = std::max(ab.lower, ba.lower);
  c.upper = std::max(ab.upper, ba.upper);
  c.method = ab.claims_exact() && ba.claims_exact() ? Method::exact_formula
                                                    : Method::multistart_heuristic;
  c.witnesses = ab.lower >= ba.lower ? ab.witnesses : ba.witnesses;
  c.budget_used = ab.budget_used + ba.budget_used;
  return c;
}

OpeningBound operator_opening_upper(const Subspace& y, const Subspace& z,
                                    std::span<const InvertibleMap> candidates,
                                    SearchBudget budget, std::uint64_t seed) {
  require(same_ambient(y, z), "subspaces live in different ambient spaces");
  OpeningBound out;
  if (y.dim() != z.dim()) {
    out.bound = exact_value(1.0);
    out.convention = true;
    out.best_candidate = "convention";
    return out;
  }
  for (const auto& c : candidates) {
    require(c.matrix.rows() == y.ambient->dim(), "candidate map has the wrong size");
    require(maps_into(c.matrix, y, z), "candidate map does not carry Y onto Z");
  }

  std::vector<Candidate> all = builtin_candidates(y, z, budget, seed);
  for (std::size_t i = 0; i < candidates.size(); ++i)
    all.push_back({"supplied_" + std::to_string(i), candidates[i]});
  require(!all.empty(), "no invertible candidate carries Y onto Z");

  const Candidate* best = &all.front();
  for (const auto& c : all) {
    out.candidates.emplace_back(c.name, c.map.deviation.upper);
    if (c.map.deviation.upper < best->map.deviation.upper) best = &c;
  }
  out.bound.lower = 0.0;
  out.bound.upper = best->map.deviation.upper;
  out.bound.method = Method::candidate_upper_bound;
  out.bound.budget_used = static_cast<long>(all.size());
  out.best_map = best->map.matrix;
  out.best_candidate = best->name;
  return out;
}

OpeningBound operator_opening(const Subspace& y, const Subspace& z,
                              std::span<const InvertibleMap> candidates, SearchBudget budget,
                              std::uint64_t seed) {
  const OpeningBound forward = operator_opening_upper(y, z, candidates, budget, seed);
  if (forward.convention) return forward;
  std::vector<InvertibleMap> inverted;
  for (const auto& c : candidates) inverted.push_back(inverse_map(c, budget, seed));
  const OpeningBound reverse = operator_opening_upper(z, y, inverted, budget, seed);
  return forward.bound.upper >= reverse.bound.upper ? forward : reverse;
}

Subspace perturb_subspace(const Subspace& x, const InvertibleMap& c) {
  require(c.matrix.rows() == x.ambient->dim(), "map and subspace live in different spaces");
  Mat basis = c.matrix * x.basis;
  if (!x.ambient->is_complex()) basis = basis.real().cast<cd>();
  return make_subspace(x.ambient, std::move(basis));
}

}  // namespace banachlab
