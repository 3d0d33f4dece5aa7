#include "banachlab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "banachlab/errors.hpp"

namespace banachlab {

namespace {

constexpr double kFeasibility = 1e-9;
constexpr double kSameVector = 1e-9;
constexpr double kMaxCombinations = 5e6;

bool close(const Vec& a, const Vec& b) {
  const double scale = std::max({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  return (a - b).cwiseAbs().maxCoeff() <= kSameVector * scale;
}

void push_unique(std::vector<Vec>& out, const Vec& v) {
  for (const auto& w : out)
    if (close(w, v)) return;
  out.push_back(v);
}

double combinations(int n, int k) {
  double c = 1.0;
  for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
  return c;
}

}  // namespace

bool lex_greater(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (a[i].real() != b[i].real()) return a[i].real() > b[i].real();
    if (a[i].imag() != b[i].imag()) return a[i].imag() > b[i].imag();
  }
  return a.size() > b.size();
}

std::vector<Vec> polar_vertices(std::span<const Vec> points, int dim) {
  require(dim >= 1, "polytope dimension must be positive");
  std::vector<Vec> cloud;
  for (const auto& p : points) {
    require(p.size() == dim, "polytope point has wrong dimension");
    require(is_real(p), "polytope points must be real");
    if (p.cwiseAbs().maxCoeff() == 0.0) continue;
    push_unique(cloud, p);
    push_unique(cloud, Vec(-p));
  }
  const int n = static_cast<int>(cloud.size());
  require(n >= dim, "polytope points do not span the space");
  require(combinations(n, dim) <= kMaxCombinations,
          "polytope too large for facet enumeration");

  Eigen::MatrixXd rows(n, dim);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < dim; ++j) rows(i, j) = cloud[i][j].real();

  std::vector<Vec> result;
  std::vector<int> pick(dim);
  std::iota(pick.begin(), pick.end(), 0);
  Eigen::MatrixXd system(dim, dim);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(dim);
  for (;;) {
    for (int r = 0; r < dim; ++r) system.row(r) = rows.row(pick[r]);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
    lu.setThreshold(1e-10);
    if (lu.rank() == dim) {
      const Eigen::VectorXd g = lu.solve(ones);
      const double worst = (rows * g).cwiseAbs().maxCoeff();
      if (worst <= 1.0 + kFeasibility) {
        Vec gv(dim);
        for (int j = 0; j < dim; ++j) gv[j] = cd{g[j], 0.0};
        push_unique(result, gv);
      }
    }
    // next combination
    int i = dim - 1;
    while (i >= 0 && pick[i] == n - dim + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < dim; ++j) pick[j] = pick[j - 1] + 1;
  }
  require(!result.empty(), "polytope points do not span the space");
  std::sort(result.begin(), result.end(), lex_greater);
  return result;
}

Polytope polytope_from_vertices(std::span<const Vec> generators, int dim) {
  Polytope p;
  p.dual_vertices = polar_vertices(generators, dim);
  p.vertices = polar_vertices(p.dual_vertices, dim);
  return p;
}

Polytope polytope_from_dual(std::span<const Vec> dual_generators, int dim) {
  Polytope p;
  p.vertices = polar_vertices(dual_generators, dim);
  p.dual_vertices = polar_vertices(p.vertices, dim);
  return p;
}

}  // namespace banachlab
