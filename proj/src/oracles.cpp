#include "banachlab/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "banachlab/errors.hpp"

namespace banachlab::oracle {

namespace {

struct Point {
  double x;
  double y;
};

double cross(const Point& o, const Point& a, const Point& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Counter-clockwise hull of the symmetric point set, collinear points dropped.
std::vector<Point> ball_polygon(const NormedSpace& space) {
  require(space.dim() == 2 && !space.is_complex(), "polygon oracle needs a real plane");
  std::vector<Point> pts;
  if (space.is_lp(1.0)) {
    pts = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  } else if (space.is_lp(kInf)) {
    pts = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  } else if (const auto* poly = std::get_if<PolyhedralNorm>(&space.kind())) {
    for (const auto& v : poly->ball_vertices) {
      pts.push_back({v[0].real(), v[1].real()});
      pts.push_back({-v[0].real(), -v[1].real()});
    }
  } else {
    throw InputError("polygon oracle needs an l1, l-inf or polyhedral plane");
  }
  std::sort(pts.begin(), pts.end(),
            [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  std::vector<Point> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-14) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-14) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

// Facet functional of the edge a -> b: g(a) = g(b) = 1.
Point facet(const Point& a, const Point& b) {
  const double det = a.x * b.y - a.y * b.x;
  return {(b.y - a.y) / det, (a.x - b.x) / det};
}

struct Polygon {
  std::vector<Point> vertices;
  std::vector<Point> facets;  ///< facets[i] belongs to edge (i, i+1)
};

Polygon polygon(const NormedSpace& space) {
  Polygon p;
  p.vertices = ball_polygon(space);
  const std::size_t n = p.vertices.size();
  for (std::size_t i = 0; i < n; ++i) p.facets.push_back(facet(p.vertices[i], p.vertices[(i + 1) % n]));
  return p;
}

double lp_value(const Vec& x, double p) {
  double top = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) top = std::max(top, std::abs(x[i]));
  if (std::isinf(p) || top == 0.0) return top;
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x[i]) / top, p);
  return top * std::pow(s, 1.0 / p);
}

double polygon_gauge(const Polygon& poly, const Vec& x) {
  double best = 0.0;
  for (const auto& g : poly.facets) best = std::max(best, std::abs(g.x * x[0].real() + g.y * x[1].real()));
  return best;
}

double polygon_dual(const Polygon& poly, const Vec& f) {
  double best = 0.0;
  for (const auto& v : poly.vertices) best = std::max(best, std::abs(f[0].real() * v.x + f[1].real() * v.y));
  return best;
}

void for_each_grid_point(const NormedSpace& space, int points,
                         const std::function<void(const Vec&)>& fn) {
  require(space.dim() == 2, "grid oracle needs a 2-dimensional space");
  auto emit = [&](Vec x) {
    const double n = norm(space, x);
    fn(x / n);
  };
  if (!space.is_complex()) {
    for (int k = 0; k < points; ++k) {
      const double t = 2.0 * std::numbers::pi * k / points;
      Vec x(2);
      x << std::cos(t), std::sin(t);
      emit(x);
    }
    if (space.polytope() || space.is_lp(1.0) || space.is_lp(kInf)) {
      for (const auto& p : ball_polygon(space)) {
        Vec x(2);
        x << p.x, p.y;
        emit(x);
      }
    }
    Vec e(2);
    e << 1.0, 0.0;
    emit(e);
    e << 0.0, 1.0;
    emit(e);
    return;
  }
  // modulo a global phase: x = (cos a, sin a e^{i psi})
  const int side = std::max(2, static_cast<int>(std::sqrt(static_cast<double>(points))));
  std::vector<double> moduli;
  for (int i = 0; i < side; ++i) moduli.push_back(0.5 * std::numbers::pi * i / (side - 1));
  moduli.push_back(0.25 * std::numbers::pi);
  for (double a : moduli)
    for (int j = 0; j < side; ++j) {
      const double psi = 2.0 * std::numbers::pi * j / side;
      Vec x(2);
      x << std::cos(a), std::sin(a) * std::polar(1.0, psi);
      emit(x);
    }
}

}  // namespace

double norm(const NormedSpace& space, const Vec& x) {
  if (const auto* lp = std::get_if<LpNorm>(&space.kind())) return lp_value(x, lp->p);
  if (const auto* w = std::get_if<WeightedEuclideanNorm>(&space.kind())) {
    double s = 0.0;
    for (std::size_t i = 0; i < w->weights.size(); ++i) s += w->weights[i] * std::norm(x[i]);
    return std::sqrt(s);
  }
  if (std::holds_alternative<PolyhedralNorm>(space.kind())) return polygon_gauge(polygon(space), x);
  throw InputError("oracle supports lp, weighted Euclidean and polyhedral planes only");
}

double face_sup(const NormedSpace& space, const Vec& x, const Vec& y) {
  const int n = space.dim();
  double top = 0.0;
  for (int i = 0; i < n; ++i) top = std::max(top, std::abs(x[i]));
  if (const auto* lp = std::get_if<LpNorm>(&space.kind())) {
    if (lp->p == 1.0) {
      cd fixed = 0.0;
      double free = 0.0;
      for (int i = 0; i < n; ++i) {
        if (std::abs(x[i]) <= 1e-12 * top) free += std::abs(y[i]);
        else fixed += std::conj(x[i]) / std::abs(x[i]) * y[i];
      }
      return std::abs(fixed) + free;
    }
    if (std::isinf(lp->p)) {
      double best = 0.0;
      for (int i = 0; i < n; ++i)
        if (std::abs(x[i]) >= top * (1.0 - 1e-12)) best = std::max(best, std::abs(y[i]));
      return best;
    }
    const double nx = lp_value(x, lp->p);
    cd s = 0.0;
    for (int i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      s += std::conj(x[i]) / std::abs(x[i]) * std::pow(std::abs(x[i]) / nx, lp->p - 1.0) * y[i];
    }
    return std::abs(s);
  }
  if (const auto* w = std::get_if<WeightedEuclideanNorm>(&space.kind())) {
    cd s = 0.0;
    for (int i = 0; i < n; ++i) s += w->weights[i] * std::conj(x[i]) * y[i];
    return std::abs(s) / norm(space, x);
  }
  const Polygon poly = polygon(space);
  const double nx = polygon_gauge(poly, x);
  double best = 0.0;
  for (const auto& g : poly.facets) {
    const double gx = g.x * x[0].real() + g.y * x[1].real();
    if (std::abs(gx) >= nx * (1.0 - 1e-12))
      best = std::max(best, std::abs(g.x * y[0] + g.y * y[1]));
  }
  return best;
}

std::vector<Vec> sphere_grid(const NormedSpace& space, int points) {
  std::vector<Vec> out;
  for_each_grid_point(space, points, [&](const Vec& x) { out.push_back(x); });
  return out;
}

namespace {

// The norming functional of a unit vector x when its face is a single
// functional.
std::optional<Vec> unique_functional(const NormedSpace& space, const Vec& x) {
  const int n = space.dim();
  double top = 0.0;
  for (int i = 0; i < n; ++i) top = std::max(top, std::abs(x[i]));
  Vec f = Vec::Zero(n);
  if (const auto* lp = std::get_if<LpNorm>(&space.kind())) {
    if (lp->p == 1.0) {
      for (int i = 0; i < n; ++i) {
        if (std::abs(x[i]) <= 1e-12 * top) return std::nullopt;
        f[i] = std::conj(x[i]) / std::abs(x[i]);
      }
      return f;
    }
    if (std::isinf(lp->p)) {
      int hits = 0;
      for (int i = 0; i < n; ++i)
        if (std::abs(x[i]) >= top * (1.0 - 1e-12)) {
          f[i] = std::conj(x[i]) / std::abs(x[i]);
          ++hits;
        }
      if (hits != 1) return std::nullopt;
      return f;
    }
    const double nx = lp_value(x, lp->p);
    for (int i = 0; i < n; ++i)
      if (x[i] != 0.0)
        f[i] = std::conj(x[i]) / std::abs(x[i]) * std::pow(std::abs(x[i]) / nx, lp->p - 1.0);
    return f;
  }
  if (const auto* w = std::get_if<WeightedEuclideanNorm>(&space.kind())) {
    const double nx = norm(space, x);
    for (int i = 0; i < n; ++i) f[i] = w->weights[i] * std::conj(x[i]) / nx;
    return f;
  }
  const Polygon poly = polygon(space);
  const double nx = polygon_gauge(poly, x);
  int hits = 0;
  for (const auto& g : poly.facets) {
    const double gx = g.x * x[0].real() + g.y * x[1].real();
    if (gx >= nx * (1.0 - 1e-12)) {
      f << g.x, g.y;
      ++hits;
    }
  }
  if (hits != 1) return std::nullopt;
  return f;
}

}  // namespace

DenseGrid::DenseGrid(const NormedSpace& space, int points) : space_(&space) {
  for_each_grid_point(space, points, [&](const Vec& x) {
    if (const auto f = unique_functional(space, x)) {
      smooth_x_.push_back({x[0], x[1]});
      smooth_f_.push_back({(*f)[0], (*f)[1]});
    } else {
      special_.push_back(x);
    }
  });
}

double DenseGrid::radius(const Mat& t) const {
  const cd t00 = t(0, 0), t01 = t(0, 1), t10 = t(1, 0), t11 = t(1, 1);
  double best = 0.0;
  for (std::size_t k = 0; k < smooth_x_.size(); ++k) {
    const auto& x = smooth_x_[k];
    const auto& f = smooth_f_[k];
    const cd value = f[0] * (t00 * x[0] + t01 * x[1]) + f[1] * (t10 * x[0] + t11 * x[1]);
    best = std::max(best, std::norm(value));
  }
  best = std::sqrt(best);
  for (const auto& x : special_) best = std::max(best, face_sup(*space_, x, t * x));
  return best;
}

double dense_radius(const NormedSpace& space, const Mat& t, int points) {
  return DenseGrid(space, points).radius(t);
}

double dense_operator_norm(const NormedSpace& space, const Mat& t, int points) {
  double best = 0.0;
  for_each_grid_point(space, points,
                      [&](const Vec& x) { best = std::max(best, norm(space, Vec(t * x))); });
  return best;
}

double principal_angle_gap(const Mat& y_basis, const Mat& z_basis) {
  if (y_basis.cols() != z_basis.cols()) return std::numbers::sqrt2;
  const Eigen::MatrixXcd y = Eigen::MatrixXcd(y_basis).householderQr().householderQ() *
                             Eigen::MatrixXcd::Identity(y_basis.rows(), y_basis.cols());
  const Eigen::MatrixXcd z = Eigen::MatrixXcd(z_basis).householderQr().householderQ() *
                             Eigen::MatrixXcd::Identity(z_basis.rows(), z_basis.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(y.adjoint() * z);
  const double smallest = std::min(1.0, svd.singularValues().minCoeff());
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * smallest));
}

double bpb_optimum(const NormedSpace& space, const Vec& u, const Vec& u_star) {
  const Polygon poly = polygon(space);
  const std::size_t n = poly.vertices.size();
  auto vec = [](double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
  };
  // ternary search of a convex function on [0, 1]
  auto minimize = [](const std::function<double(double)>& f) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0;
      const double m2 = hi - (hi - lo) / 3.0;
      if (f(m1) <= f(m2)) hi = m2;
      else lo = m1;
    }
    return std::min({f(0.5 * (lo + hi)), f(0.0), f(1.0)});
  };
  double best = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = poly.vertices[i];
    const Point& b = poly.vertices[(i + 1) % n];
    const Point& g = poly.facets[i];
    const double dual = polygon_dual(poly, Vec(u_star - vec(g.x, g.y)));
    best = std::min(best, minimize([&](double t) {
      const Vec y = vec(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
      return std::max(polygon_gauge(poly, Vec(u - y)), dual);
    }));
    // vertex b sits between facets i and i+1
    const Point& h = poly.facets[(i + 1) % n];
    const double primal = polygon_gauge(poly, Vec(u - vec(b.x, b.y)));
    best = std::min(best, minimize([&](double s) {
      const Vec f = vec(g.x + s * (h.x - g.x), g.y + s * (h.y - g.y));
      return std::max(primal, polygon_dual(poly, Vec(u_star - f)));
    }));
  }
  return best;
}

}  // namespace banachlab::oracle
