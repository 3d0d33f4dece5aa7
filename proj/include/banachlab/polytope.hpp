#pragma once

#include <span>
#include <vector>

#include "banachlab/linalg.hpp"

namespace banachlab {

/// A centrally symmetric polytope ball given by both vertex lists: the
/// extreme points of the ball and the extreme points of the dual ball
/// (equivalently, the facet functionals of the ball). All coordinates real.
struct Polytope {
  std::vector<Vec> vertices;
  std::vector<Vec> dual_vertices;
};

/// Vertices of the polar {g : |g(p)| <= 1 for every p} of the symmetric
/// convex hull of `points`, which must span R^dim. Enumerates dim-subsets
/// of the symmetric point cloud, solves g(p) = 1 on each and keeps the
/// feasible solutions. Output is sorted lexicographically descending.
std::vector<Vec> polar_vertices(std::span<const Vec> points, int dim);

Polytope polytope_from_vertices(std::span<const Vec> generators, int dim);
Polytope polytope_from_dual(std::span<const Vec> dual_generators, int dim);

/// Descending lexicographic order on (re, im) of the coordinates.
bool lex_greater(const Vec& a, const Vec& b);

}  // namespace banachlab
