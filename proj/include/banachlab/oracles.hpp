#pragma once

#include <array>
#include <optional>
#include <vector>

#include "banachlab/linalg.hpp"
#include "banachlab/normed_space.hpp"
#include "banachlab/subspace.hpp"

// Brute-force reference computations for two-dimensional spaces. They
// re-derive norms, faces and polygons from the space description and share
// no search code with the library routines they check.
namespace banachlab::oracle {

/// Unit vectors of a 2-dimensional space: an angle grid (real) or a grid
/// over (modulus split, relative phase) (complex); ball vertices and the
/// coordinate axes are always included.
std::vector<Vec> sphere_grid(const NormedSpace& space, int points);

/// Norm evaluated from the space description.
double norm(const NormedSpace& space, const Vec& x);

/// sup over the whole norming face of x of |f(y)|.
double face_sup(const NormedSpace& space, const Vec& x, const Vec& y);

/// The sphere grid with each point's norming functional precomputed where
/// the face is a single functional; the remaining points keep the full face
/// evaluation. Built once per space and reused across operators.
class DenseGrid {
 public:
  DenseGrid(const NormedSpace& space, int points = 1'000'000);

  /// max over the grid of face_sup(x, Tx).
  double radius(const Mat& t) const;
  std::size_t size() const { return smooth_x_.size() + special_.size(); }

 private:
  const NormedSpace* space_;
  std::vector<std::array<cd, 2>> smooth_x_;
  std::vector<std::array<cd, 2>> smooth_f_;
  std::vector<Vec> special_;
};

/// max over the grid of face_sup(x, Tx).
double dense_radius(const NormedSpace& space, const Mat& t, int points = 1'000'000);

/// max over the grid of |Tx|.
double dense_operator_norm(const NormedSpace& space, const Mat& t, int points = 100'000);

/// Gap between subspaces of standard Euclidean space from principal
/// angles: 2 sin(theta_max / 2), or sqrt(2) when the dimensions differ.
double principal_angle_gap(const Mat& y_basis, const Mat& z_basis);

/// min over exact state pairs (y, y*) of max(|u - y|, |u* - y*|*) for a
/// real 2-dimensional polygonal ball (l1, l-inf or polyhedral), by walking
/// every edge (y on the edge, y* its facet functional) and every vertex
/// (y* on the segment of adjacent facet functionals).
double bpb_optimum(const NormedSpace& space, const Vec& u, const Vec& u_star);

}  // namespace banachlab::oracle
