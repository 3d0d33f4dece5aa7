#include "banachlab/normed_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "banachlab/compass_search.hpp"
#include "banachlab/errors.hpp"

namespace banachlab {

namespace {

constexpr double kZeroRelative = 1e-12;
constexpr double kActiveRelative = 1e-12;
constexpr std::uint64_t kInducedDualSeed = 0x1d0a1;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

double lp_norm(const Vec& x, double p) {
  if (std::isinf(p)) return x.cwiseAbs().maxCoeff();
  if (p == 1.0) return x.cwiseAbs().sum();
  if (p == 2.0) return x.norm();
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]) / scale, p);
  return scale * std::pow(sum, 1.0 / p);
}

double conjugate_exponent(double p) {
  if (std::isinf(p)) return 1.0;
  if (p == 1.0) return kInf;
  return p / (p - 1.0);
}

Vec basis_vector(int dim, int i, cd value = {1.0, 0.0}) {
  Vec e = Vec::Zero(dim);
  e[i] = value;
  return e;
}

std::vector<Vec> sign_vectors(int dim) {
  std::vector<Vec> out;
  const int count = 1 << dim;
  out.reserve(count);
  for (int mask = 0; mask < count; ++mask) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v[i] = (mask >> i) & 1 ? -1.0 : 1.0;
    out.push_back(v);
  }
  std::sort(out.begin(), out.end(), lex_greater);
  return out;
}

std::vector<Vec> cross_vectors(int dim) {
  std::vector<Vec> out;
  for (int i = 0; i < dim; ++i) {
    out.push_back(basis_vector(dim, i));
    out.push_back(basis_vector(dim, i, {-1.0, 0.0}));
  }
  std::sort(out.begin(), out.end(), lex_greater);
  return out;
}

double zero_threshold(const Vec& x) { return kZeroRelative * x.cwiseAbs().maxCoeff(); }

// Active dual vertices g with g(x) = |x| (within the relative tolerance).
std::vector<const Vec*> active_dual_vertices(const Polytope& poly, const Vec& x,
                                             double norm_x, double relative) {
  std::vector<const Vec*> active;
  for (const auto& g : poly.dual_vertices)
    if (pair(g, x).real() >= norm_x * (1.0 - relative)) active.push_back(&g);
  return active;
}

// Minimizes a convex function over the simplex spanned by m points by
// exact line searches along pairwise mass transfers.
template <class F>
Eigen::VectorXd minimize_on_simplex(int m, const F& objective) {
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(m);
  int start = 0;
  double best = kInf;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
    e[j] = 1.0;
    const double value = objective(e);
    if (value < best) {
      best = value;
      start = j;
    }
  }
  lambda[start] = 1.0;
  if (m == 1) return lambda;

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 40; ++sweep) {
    bool improved = false;
    for (int j = 0; j < m; ++j) {
      for (int k = j + 1; k < m; ++k) {
        // move t from k to j, t in [-lambda_j, lambda_k]
        double lo = -lambda[j];
        double hi = lambda[k];
        if (hi - lo <= 0.0) continue;
        auto at = [&](double t) {
          Eigen::VectorXd l = lambda;
          l[j] += t;
          l[k] -= t;
          return objective(l);
        };
        double a = hi - golden * (hi - lo);
        double b = lo + golden * (hi - lo);
        double fa = at(a);
        double fb = at(b);
        for (int it = 0; it < 80 && hi - lo > 1e-14; ++it) {
          if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - golden * (hi - lo);
            fa = at(a);
          } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + golden * (hi - lo);
            fb = at(b);
          }
        }
        const double t = 0.5 * (lo + hi);
        const double value = at(t);
        if (value < best - 1e-15) {
          lambda[j] += t;
          lambda[k] -= t;
          lambda[j] = std::max(lambda[j], 0.0);
          lambda[k] = std::max(lambda[k], 0.0);
          best = value;
          improved = true;
        }
      }
    }
    if (!improved) break;
  }
  return lambda / lambda.sum();
}

Vec combine(const std::vector<Vec>& points, const Eigen::VectorXd& lambda) {
  Vec out = Vec::Zero(points.front().size());
  for (std::size_t j = 0; j < points.size(); ++j) out += lambda[j] * points[j];
  return out;
}

bool nearly_equal(const Vec& a, const Vec& b) {
  return (a - b).cwiseAbs().maxCoeff() <=
         1e-12 * std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
}

void push_unique(std::vector<Vec>& out, const Vec& v) {
  for (const auto& w : out)
    if (nearly_equal(w, v)) return;
  out.push_back(v);
}

}  // namespace

NormedSpace::NormedSpace(int dim, Field field, NormKind kind, std::string label)
    : dim_(dim), field_(field), kind_(std::move(kind)), label_(std::move(label)) {}

SpacePtr NormedSpace::lp(int dim, double p, Field field, std::string label) {
  require(dim >= 1 && dim <= kMaxDim,
          "space dimension must be between 1 and " + std::to_string(kMaxDim));
  require(p >= 1.0 && !std::isnan(p), "lp exponent must satisfy p >= 1");
  auto* raw = new NormedSpace(dim, field, LpNorm{p}, std::move(label));
  SpacePtr space(raw);
  if (field == Field::real && p == 1.0)
    raw->polytope_ = Polytope{cross_vectors(dim), sign_vectors(dim)};
  if (field == Field::real && std::isinf(p))
    raw->polytope_ = Polytope{sign_vectors(dim), cross_vectors(dim)};
  if (p == 2.0) {
    raw->factor_ = Mat::Identity(dim, dim);
    raw->factor_inverse_ = Mat::Identity(dim, dim);
  }
  raw->finish();
  return space;
}

SpacePtr NormedSpace::polyhedral(std::vector<Vec> ball_vertices, std::string label) {
  require(!ball_vertices.empty(), "polyhedral space needs vertices");
  const int dim = static_cast<int>(ball_vertices.front().size());
  require(dim >= 1 && dim <= kMaxDim,
          "space dimension must be between 1 and " + std::to_string(kMaxDim));
  for (const auto& v : ball_vertices) {
    require(v.size() == dim, "polyhedral vertices have inconsistent dimensions");
    require(is_real(v), "polyhedral vertices must be real");
  }
  for (const auto& v : ball_vertices) {
    const bool mirrored = std::any_of(ball_vertices.begin(), ball_vertices.end(),
                                      [&](const Vec& w) { return nearly_equal(w, Vec(-v)); });
    require(mirrored, "polyhedral vertex list must be symmetric (v present => -v present)");
  }
  Eigen::MatrixXcd stacked(dim, ball_vertices.size());
  for (std::size_t j = 0; j < ball_vertices.size(); ++j) stacked.col(j) = ball_vertices[j];
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(stacked);
  lu.setThreshold(1e-10);
  require(lu.rank() == dim, "polyhedral vertices must span the space");

  Polytope poly = polytope_from_vertices(ball_vertices, dim);
  auto* raw = new NormedSpace(dim, Field::real, PolyhedralNorm{std::move(ball_vertices)},
                              std::move(label));
  SpacePtr space(raw);
  raw->polytope_ = std::move(poly);
  raw->finish();
  return space;
}

SpacePtr NormedSpace::weighted_euclidean(std::vector<double> weights, Field field,
                                         std::string label) {
  const int dim = static_cast<int>(weights.size());
  require(dim >= 1 && dim <= kMaxDim,
          "space dimension must be between 1 and " + std::to_string(kMaxDim));
  for (double w : weights)
    require(w > 0.0 && std::isfinite(w), "weights must be positive and finite");
  Mat r = Mat::Zero(dim, dim);
  Mat r_inv = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) {
    r(i, i) = std::sqrt(weights[i]);
    r_inv(i, i) = 1.0 / std::sqrt(weights[i]);
  }
  auto* raw = new NormedSpace(dim, field, WeightedEuclideanNorm{std::move(weights)},
                              std::move(label));
  SpacePtr space(raw);
  raw->factor_ = r;
  raw->factor_inverse_ = r_inv;
  raw->finish();
  return space;
}

SpacePtr NormedSpace::gram(Mat gram, Field field, std::string label) {
  const int dim = static_cast<int>(gram.rows());
  require(dim >= 1 && dim <= kMaxDim && gram.cols() == dim, "gram matrix must be square");
  require(field == Field::complex || is_real(gram), "real space needs a real gram matrix");
  require((gram - gram.adjoint()).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, max_abs_entry(gram)),
          "gram matrix must be Hermitian");
  Mat hermitian = 0.5 * (gram + gram.adjoint());
  Eigen::LLT<Mat> llt(hermitian);
  require(llt.info() == Eigen::Success, "gram matrix must be positive definite");
  Mat r = llt.matrixL().adjoint();
  Mat r_inv = r.inverse();
  auto* raw = new NormedSpace(dim, field, GramNorm{hermitian}, std::move(label));
  SpacePtr space(raw);
  raw->factor_ = r;
  raw->factor_inverse_ = r_inv;
  raw->finish();
  return space;
}

SpacePtr NormedSpace::induced(const SpacePtr& ambient, const Mat& basis, std::string label) {
  require(ambient != nullptr, "induced space needs an ambient space");
  require(basis.rows() == ambient->dim(), "basis rows must match the ambient dimension");
  const int k = static_cast<int>(basis.cols());
  require(k >= 1, "basis must have at least one column");
  ambient->check_matrix(Mat(basis), "basis");
  if (label.empty()) label = "subspace^" + std::to_string(k) + " of " + ambient->label();

  if (const Mat* r = ambient->euclidean_factor()) {
    const Mat rb = (*r) * basis;
    return gram(rb.adjoint() * rb, ambient->field(), std::move(label));
  }
  if (const Polytope* poly = ambient->polytope()) {
    std::vector<Vec> generators;
    generators.reserve(poly->dual_vertices.size());
    for (const auto& g : poly->dual_vertices) generators.push_back(basis.transpose() * g);
    Polytope restricted = polytope_from_dual(generators, k);
    std::vector<Vec> vertices = restricted.vertices;
    auto* raw = new NormedSpace(k, Field::real, PolyhedralNorm{std::move(vertices)},
                                std::move(label));
    SpacePtr space(raw);
    raw->polytope_ = std::move(restricted);
    raw->finish();
    return space;
  }
  auto* raw = new NormedSpace(k, ambient->field(), InducedNorm{ambient, basis}, std::move(label));
  SpacePtr space(raw);
  raw->finish();
  return space;
}

void NormedSpace::finish() {
  if (!label_.empty()) return;
  std::ostringstream os;
  const char* field = is_complex() ? "complex" : "real";
  std::visit(overloaded{
                 [&](const LpNorm& n) {
                   os << "l";
                   if (std::isinf(n.p)) os << "inf";
                   else os << n.p;
                   os << "^" << dim_ << "(" << field << ")";
                 },
                 [&](const PolyhedralNorm& n) {
                   os << "polyhedral^" << dim_ << "[" << n.ball_vertices.size() << " vertices]";
                 },
                 [&](const WeightedEuclideanNorm&) {
                   os << "weighted_euclidean^" << dim_ << "(" << field << ")";
                 },
                 [&](const GramNorm&) { os << "gram^" << dim_ << "(" << field << ")"; },
                 [&](const InducedNorm& n) {
                   os << "induced^" << dim_ << " of " << n.ambient->label();
                 },
             },
             kind_);
  label_ = os.str();
}

bool NormedSpace::is_lp(double p) const {
  const auto* lp = std::get_if<LpNorm>(&kind_);
  return lp != nullptr && lp->p == p;
}

bool NormedSpace::is_smooth() const {
  if (factor_) return true;
  if (const auto* lp = std::get_if<LpNorm>(&kind_))
    return lp->p > 1.0 && !std::isinf(lp->p);
  if (const auto* ind = std::get_if<InducedNorm>(&kind_)) return ind->ambient->is_smooth();
  return dim_ == 1;
}

void NormedSpace::check_vector(const Vec& v, const char* what) const {
  require(v.size() == dim_, std::string(what) + " has dimension " + std::to_string(v.size()) +
                                ", expected " + std::to_string(dim_));
  require(is_complex() || is_real(v), std::string(what) + " has imaginary parts in a real space");
}

void NormedSpace::check_matrix(const Mat& m, const char* what) const {
  require(m.rows() == dim_, std::string(what) + " has " + std::to_string(m.rows()) +
                                " rows, expected " + std::to_string(dim_));
  require(is_complex() || is_real(m), std::string(what) + " has imaginary parts in a real space");
}

double NormedSpace::norm(const Vec& x) const {
  return std::visit(
      overloaded{
          [&](const LpNorm& n) { return lp_norm(x, n.p); },
          [&](const PolyhedralNorm&) {
            double best = 0.0;
            for (const auto& g : polytope_->dual_vertices)
              best = std::max(best, std::abs(pair(g, x)));
            return best;
          },
          [&](const WeightedEuclideanNorm&) { return ((*factor_) * x).norm(); },
          [&](const GramNorm&) { return ((*factor_) * x).norm(); },
          [&](const InducedNorm& n) { return n.ambient->norm(n.basis * x); },
      },
      kind_);
}

double NormedSpace::dual_norm(const Vec& f) const {
  return std::visit(
      overloaded{
          [&](const LpNorm& n) { return lp_norm(f, conjugate_exponent(n.p)); },
          [&](const PolyhedralNorm&) {
            double best = 0.0;
            for (const auto& v : polytope_->vertices) best = std::max(best, std::abs(pair(f, v)));
            return best;
          },
          [&](const WeightedEuclideanNorm&) {
            return Vec(factor_inverse_->transpose() * f).norm();
          },
          [&](const GramNorm&) { return Vec(factor_inverse_->transpose() * f).norm(); },
          [&](const InducedNorm&) {
            // sup |f(c)| over the unit sphere; no closed form, so search.
            if (f.cwiseAbs().maxCoeff() == 0.0) return 0.0;
            const bool complex = is_complex();
            CompassProblem problem;
            problem.parameters = complex ? 2 * dim_ : dim_;
            problem.project = [&](Params& p) {
              const Vec c = unpack_vector(p, dim_, complex);
              const double n = norm(c);
              if (!(n > 0.0) || !std::isfinite(n)) return false;
              p /= n;
              return true;
            };
            problem.objective = [&](const Params& p) {
              return std::abs(pair(f, unpack_vector(p, dim_, complex)));
            };
            problem.random_start = [&](Engine& rng) {
              return pack_vector(random_unit_vector(*this, rng), complex);
            };
            std::vector<Params> starts{pack_vector(Vec(f.conjugate()), complex)};
            return multistart_maximize(problem, {8, 200}, kInducedDualSeed, starts).best;
          },
      },
      kind_);
}

NormingFace NormedSpace::norming_functionals(const Vec& x, std::size_t cap) const {
  check_vector(x, "x");
  require(x.cwiseAbs().maxCoeff() > 0.0, "norming functionals need a nonzero vector");
  require(cap >= 1, "face enumeration cap must be positive");
  NormingFace face;
  auto& out = face.functionals;
  const double thr = zero_threshold(x);

  std::visit(
      overloaded{
          [&](const LpNorm& n) {
            if (n.p == 1.0) {
              Vec base = Vec::Zero(dim_);
              std::vector<int> zeros;
              for (int i = 0; i < dim_; ++i) {
                if (std::abs(x[i]) <= thr) zeros.push_back(i);
                else base[i] = std::conj(phase(x[i]));
              }
              const int z = static_cast<int>(zeros.size());
              // choices per free coordinate: signs (real) or roots of unity (complex)
              int choices = 2;
              if (is_complex() && z > 0) {
                choices = std::max(2, static_cast<int>(std::floor(
                                          std::pow(static_cast<double>(cap), 1.0 / z) + 1e-9)));
                face.truncated = true;
              }
              std::size_t total = 1;
              for (int i = 0; i < z; ++i) total *= choices;
              for (std::size_t code = 0; code < total; ++code) {
                Vec f = base;
                std::size_t c = code;
                for (int i = 0; i < z; ++i) {
                  const int pick = static_cast<int>(c % choices);
                  c /= choices;
                  if (is_complex())
                    f[zeros[i]] = std::polar(1.0, 2.0 * std::numbers::pi * pick / choices);
                  else
                    f[zeros[i]] = pick == 0 ? 1.0 : -1.0;
                }
                out.push_back(f);
              }
            } else if (std::isinf(n.p)) {
              const double top = x.cwiseAbs().maxCoeff();
              for (int i = 0; i < dim_; ++i)
                if (std::abs(x[i]) >= top * (1.0 - kActiveRelative))
                  out.push_back(basis_vector(dim_, i, std::conj(phase(x[i]))));
            } else if (factor_) {
              const Mat g = factor_->adjoint() * (*factor_);
              out.push_back(Vec((g * x).conjugate() / norm(x)));
            } else {
              const Vec xs = x / lp_norm(x, n.p);
              Vec f(dim_);
              for (int i = 0; i < dim_; ++i)
                f[i] = std::conj(phase(xs[i])) * std::pow(std::abs(xs[i]), n.p - 1.0);
              out.push_back(f);
            }
          },
          [&](const PolyhedralNorm&) {
            for (const Vec* g : active_dual_vertices(*polytope_, x, norm(x), kActiveRelative))
              out.push_back(*g);
          },
          [&](const WeightedEuclideanNorm&) {
            const Mat g = factor_->adjoint() * (*factor_);
            out.push_back(Vec((g * x).conjugate() / norm(x)));
          },
          [&](const GramNorm& n) { out.push_back(Vec((n.gram * x).conjugate() / norm(x))); },
          [&](const InducedNorm& n) {
            NormingFace amb = n.ambient->norming_functionals(n.basis * x, cap);
            face.truncated = amb.truncated;
            for (const auto& g : amb.functionals) push_unique(out, Vec(n.basis.transpose() * g));
          },
      },
      kind_);

  std::sort(out.begin(), out.end(), lex_greater);
  if (out.size() > cap) {
    out.resize(cap);
    face.truncated = true;
  }
  return face;
}

double NormedSpace::face_support(const Vec& x, const Vec& y) const {
  const double thr = zero_threshold(x);
  return std::visit(
      overloaded{
          [&](const LpNorm& n) -> double {
            if (n.p == 1.0) {
              cd fixed = 0.0;
              double free = 0.0;
              for (int i = 0; i < dim_; ++i) {
                if (std::abs(x[i]) <= thr) free += std::abs(y[i]);
                else fixed += std::conj(phase(x[i])) * y[i];
              }
              return std::abs(fixed) + free;
            }
            if (std::isinf(n.p)) {
              const double top = x.cwiseAbs().maxCoeff();
              double best = 0.0;
              for (int i = 0; i < dim_; ++i)
                if (std::abs(x[i]) >= top * (1.0 - kActiveRelative))
                  best = std::max(best, std::abs(y[i]));
              return best;
            }
            if (factor_) {
              const Vec rx = (*factor_) * x;
              return std::abs(rx.dot((*factor_) * y)) / rx.norm();
            }
            const Vec xs = x / lp_norm(x, n.p);
            cd value = 0.0;
            for (int i = 0; i < dim_; ++i)
              value += std::conj(phase(xs[i])) * std::pow(std::abs(xs[i]), n.p - 1.0) * y[i];
            return std::abs(value);
          },
          [&](const PolyhedralNorm&) {
            double best = 0.0;
            for (const Vec* g : active_dual_vertices(*polytope_, x, norm(x), kActiveRelative))
              best = std::max(best, std::abs(pair(*g, y)));
            return best;
          },
          [&](const WeightedEuclideanNorm&) {
            const Vec rx = (*factor_) * x;
            return std::abs(rx.dot((*factor_) * y)) / rx.norm();
          },
          [&](const GramNorm&) {
            const Vec rx = (*factor_) * x;
            return std::abs(rx.dot((*factor_) * y)) / rx.norm();
          },
          [&](const InducedNorm& n) {
            return n.ambient->face_support(n.basis * x, n.basis * y);
          },
      },
      kind_);
}

Vec NormedSpace::nearest_norming_functional(const Vec& x, const Vec& target) const {
  check_vector(target, "target functional");
  if (const auto* n = std::get_if<LpNorm>(&kind_)) {
    const double thr = zero_threshold(x);
    if (n->p == 1.0) {
      Vec f(dim_);
      for (int i = 0; i < dim_; ++i) {
        if (std::abs(x[i]) > thr) {
          f[i] = std::conj(phase(x[i]));
        } else {
          const double r = std::abs(target[i]);
          f[i] = r <= 1.0 ? target[i] : target[i] / r;
          if (!is_complex()) f[i] = f[i].real();
        }
      }
      return f;
    }
    if (std::isinf(n->p) && !is_complex()) {
      // l1 distance from target to the face: closed form on the simplex.
      const double top = x.cwiseAbs().maxCoeff();
      std::vector<int> active;
      for (int i = 0; i < dim_; ++i)
        if (std::abs(x[i]) >= top * (1.0 - kActiveRelative)) active.push_back(i);
      std::vector<double> a(active.size());
      double positive = 0.0;
      for (std::size_t j = 0; j < active.size(); ++j) {
        const int i = active[j];
        a[j] = target[i].real() * (x[i].real() > 0 ? 1.0 : -1.0);
        positive += std::max(a[j], 0.0);
      }
      std::vector<double> lambda(active.size(), 0.0);
      if (positive >= 1.0) {
        for (std::size_t j = 0; j < a.size(); ++j) lambda[j] = std::max(a[j], 0.0) / positive;
      } else {
        std::size_t receivers = 0;
        for (double v : a) receivers += v >= 0.0;
        const double extra = (1.0 - positive) / static_cast<double>(receivers ? receivers : 1);
        for (std::size_t j = 0; j < a.size(); ++j) {
          lambda[j] = std::max(a[j], 0.0);
          if (a[j] >= 0.0 || (receivers == 0 && j == 0)) lambda[j] += extra;
        }
      }
      Vec f = Vec::Zero(dim_);
      for (std::size_t j = 0; j < active.size(); ++j)
        f[active[j]] = lambda[j] * (x[active[j]].real() > 0 ? 1.0 : -1.0);
      return f;
    }
  }
  NormingFace face = norming_functionals(x);
  if (face.functionals.size() == 1) return face.functionals.front();
  const auto& pts = face.functionals;
  const Eigen::VectorXd lambda = minimize_on_simplex(
      static_cast<int>(pts.size()),
      [&](const Eigen::VectorXd& l) { return dual_norm(Vec(target - combine(pts, l))); });
  return combine(pts, lambda);
}

std::vector<Vec> NormedSpace::snap_candidates(const Vec& x) const {
  std::vector<Vec> out;
  static constexpr double kTaus[] = {1e-1, 1e-2, 1e-3, 1e-5, 1e-8};
  const double top = x.cwiseAbs().maxCoeff();
  if (top == 0.0) return out;
  auto emit = [&](Vec v) {
    const double n = norm(v);
    if (!(n > 0.0)) return;
    v /= n;
    if (!nearly_equal(v, x)) push_unique(out, v);
  };

  if (const auto* n = std::get_if<LpNorm>(&kind_)) {
    if (n->p == 1.0) {
      for (double tau : kTaus) {
        Vec v = x;
        for (int i = 0; i < dim_; ++i)
          if (std::abs(v[i]) <= tau * top) v[i] = 0.0;
        emit(v);
      }
    } else if (std::isinf(n->p)) {
      for (double tau : kTaus) {
        Vec v = x;
        for (int i = 0; i < dim_; ++i)
          if (std::abs(v[i]) >= (1.0 - tau) * top) v[i] = top * phase(v[i]);
        emit(v);
      }
    }
    return out;
  }
  if (polytope_) {
    const double nx = norm(x);
    for (double tau : kTaus) {
      const auto active = active_dual_vertices(*polytope_, x, nx, tau);
      if (active.size() < 2) continue;
      Eigen::MatrixXd g(active.size(), dim_);
      Eigen::VectorXd rhs(active.size());
      Eigen::VectorXd xr(dim_);
      for (int i = 0; i < dim_; ++i) xr[i] = x[i].real();
      for (std::size_t r = 0; r < active.size(); ++r) {
        for (int i = 0; i < dim_; ++i) g(r, i) = (*active[r])[i].real();
        rhs[r] = nx;
      }
      const Eigen::VectorXd residual = rhs - g * xr;
      const Eigen::VectorXd step =
          g.transpose() * (g * g.transpose()).completeOrthogonalDecomposition().solve(residual);
      Vec v(dim_);
      for (int i = 0; i < dim_; ++i) v[i] = xr[i] + step[i];
      if ((g * (xr + step) - rhs).cwiseAbs().maxCoeff() > 1e-9 * nx) continue;
      if (norm(v) > nx * (1.0 + 1e-9)) continue;
      emit(v);
    }
  }
  return out;
}

StatePair make_state_pair(const NormedSpace& space, Vec x, Vec f) {
  StatePair sp;
  sp.defect = std::abs(1.0 - pair(f, x));
  sp.primal_residual = std::abs(space.norm(x) - 1.0);
  sp.dual_residual = std::abs(space.dual_norm(f) - 1.0);
  sp.x = std::move(x);
  sp.f = std::move(f);
  return sp;
}

Vec random_unit_vector(const NormedSpace& space, Engine& rng) {
  const int dim = space.dim();
  for (;;) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) {
      const double re = gaussian(rng);
      const double im = space.is_complex() ? gaussian(rng) : 0.0;
      v[i] = {re, im};
    }
    const double n = space.norm(v);
    if (!(n > 0.0)) continue;
    v /= n;
    // one more pass absorbs the rounding of the first division
    const double again = space.norm(v);
    if (std::abs(again - 1.0) > 1e-14) v /= again;
    return v;
  }
}

std::vector<Vec> sample_sphere(const NormedSpace& space, int count, std::uint64_t seed) {
  require(count >= 1, "sample count must be positive");
  Engine rng = make_stream(seed, {0x5eed5});
  std::vector<Vec> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_unit_vector(space, rng));
  return out;
}

StatePair state_pair_at(const NormedSpace& space, const Vec& x) {
  space.check_vector(x, "x");
  const double n = space.norm(x);
  require(n > 0.0, "state pair needs a nonzero vector");
  Vec unit = x / n;
  Vec f = space.norming_functionals(unit).functionals.front();
  return make_state_pair(space, std::move(unit), std::move(f));
}

std::string describe(const NormedSpace& space) { return space.label(); }

}  // namespace banachlab
