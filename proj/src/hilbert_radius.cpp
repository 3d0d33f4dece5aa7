#include "banachlab/hilbert_radius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace banachlab {

namespace {

struct TopEigen {
  double value;
  Vec vector;
};

TopEigen top_eigen(const Mat& hermitian) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian);
  const auto n = hermitian.rows();
  return {solver.eigenvalues()[n - 1], solver.eigenvectors().col(n - 1)};
}

Mat rotated_real_part(const Mat& p, const Mat& q, double theta) {
  return std::cos(theta) * p + std::sin(theta) * q;
}

struct Sector {
  double modulus;
  double t1, l1, t2, l2;
  bool operator<(const Sector& other) const { return modulus < other.modulus; }
};

// Intersection of the supporting lines Re(e^{-i t} w) = l at t1 and t2.
double vertex_modulus(double t1, double l1, double t2, double l2) {
  const double det = std::sin(t2 - t1);
  const double x = (l1 * std::sin(t2) - l2 * std::sin(t1)) / det;
  const double y = (std::cos(t1) * l2 - std::cos(t2) * l1) / det;
  return std::hypot(x, y);
}

}  // namespace

HilbertRadius complex_hilbert_radius(const Mat& a, double tolerance, int max_solves) {
  const int n = static_cast<int>(a.rows());
  HilbertRadius out;
  out.witness = Vec::Zero(n);
  out.witness[0] = 1.0;
  if (max_abs_entry(a) == 0.0) return out;

  const Mat p = 0.5 * (a + a.adjoint());
  const Mat q = cd{0.0, -0.5} * (a - a.adjoint());
  auto sample = [&](double theta) {
    TopEigen e = top_eigen(rotated_real_part(p, q, theta));
    ++out.eigen_solves;
    const double w = std::abs(e.vector.dot(a * e.vector));
    if (w > out.lower) {
      out.lower = w;
      out.witness = e.vector;
    }
    return e.value;
  };

  constexpr int kInitial = 8;
  std::vector<double> lambdas(kInitial);
  for (int k = 0; k < kInitial; ++k)
    lambdas[k] = sample(2.0 * std::numbers::pi * k / kInitial);
  std::priority_queue<Sector> sectors;
  for (int k = 0; k < kInitial; ++k) {
    const double t1 = 2.0 * std::numbers::pi * k / kInitial;
    const double t2 = 2.0 * std::numbers::pi * (k + 1) / kInitial;
    const double l1 = lambdas[k];
    const double l2 = lambdas[(k + 1) % kInitial];
    sectors.push({vertex_modulus(t1, l1, t2, l2), t1, l1, t2, l2});
  }
  const double tol = tolerance * std::max(1.0, out.lower);
  while (out.eigen_solves < max_solves && sectors.top().modulus - out.lower > tol) {
    const Sector s = sectors.top();
    sectors.pop();
    const double tm = 0.5 * (s.t1 + s.t2);
    const double lm = sample(tm);
    sectors.push({vertex_modulus(s.t1, s.l1, tm, lm), s.t1, s.l1, tm, lm});
    sectors.push({vertex_modulus(tm, lm, s.t2, s.l2), tm, lm, s.t2, s.l2});
  }
  out.upper = std::max(sectors.top().modulus, out.lower);
  return out;
}

HilbertRadius ellipse_radius(const Mat& a) {
  HilbertRadius out;
  out.witness = Vec::Zero(2);
  out.witness[0] = 1.0;
  if (max_abs_entry(a) == 0.0) return out;

  const cd half_trace = 0.5 * (a(0, 0) + a(1, 1));
  const cd det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const cd disc = std::sqrt(half_trace * half_trace - det);
  const cd l1 = half_trace + disc;
  const cd l2 = half_trace - disc;
  const double minor2 =
      std::max(0.0, a.squaredNorm() - std::norm(l1) - std::norm(l2));
  const cd focal = l1 - l2;
  const cd axis = std::abs(focal) > 0.0 ? focal / std::abs(focal) : cd{1.0, 0.0};
  const double semi_major = 0.5 * std::sqrt(std::norm(focal) + minor2);
  const double semi_minor = 0.5 * std::sqrt(minor2);
  const cd centre = half_trace * std::conj(axis);
  const double px = centre.real();
  const double py = centre.imag();

  // squared modulus along the boundary c + axis (A cos t + i B sin t)
  auto g = [&](double t) {
    const double x = px + semi_major * std::cos(t);
    const double y = py + semi_minor * std::sin(t);
    return x * x + y * y;
  };
  constexpr int kGrid = 64;
  const double h = 2.0 * std::numbers::pi / kGrid;
  double best = -1.0;
  double best_t = 0.0;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = i * h;
    const double gi = g(t);
    if (gi < g(t - h) || gi < g(t + h)) continue;
    double lo = t - h;
    double hi = t + h;
    double x1 = hi - golden * (hi - lo);
    double x2 = lo + golden * (hi - lo);
    double f1 = g(x1);
    double f2 = g(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      if (f1 > f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - golden * (hi - lo);
        f1 = g(x1);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + golden * (hi - lo);
        f2 = g(x2);
      }
    }
    const double tm = 0.5 * (lo + hi);
    const double value = std::max(g(tm), gi);
    if (value > best) {
      best = value;
      best_t = g(tm) >= gi ? tm : t;
    }
  }
  const double radius = std::sqrt(best);
  out.lower = radius;
  out.upper = radius;

  // The top eigenvector at the angle of the extreme point attains it.
  const cd z = axis * cd{px + semi_major * std::cos(best_t), py + semi_minor * std::sin(best_t)};
  const double theta = std::arg(z);
  const Mat p = 0.5 * (a + a.adjoint());
  const Mat q = cd{0.0, -0.5} * (a - a.adjoint());
  out.witness = top_eigen(rotated_real_part(p, q, theta)).vector;
  out.eigen_solves = 1;
  return out;
}

HilbertRadius real_hilbert_radius(const Mat& a) {
  HilbertRadius out;
  const Mat sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  const auto& values = solver.eigenvalues();
  const auto n = sym.rows();
  const bool top = std::abs(values[n - 1]) >= std::abs(values[0]);
  out.lower = out.upper = top ? std::abs(values[n - 1]) : std::abs(values[0]);
  Vec w = solver.eigenvectors().col(top ? n - 1 : 0);
  // the eigenvector of a real symmetric matrix can be chosen real
  Eigen::Index k = 0;
  w.cwiseAbs().maxCoeff(&k);
  w *= std::conj(phase(w[k]));
  w = w.real().cast<cd>();
  w /= w.norm();
  out.witness = w;
  out.eigen_solves = 1;
  return out;
}

}  // namespace banachlab
