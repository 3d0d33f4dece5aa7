#pragma once

#include <functional>
#include <vector>

#include "banachlab/compass_search.hpp"
#include "banachlab/normed_space.hpp"

namespace banachlab {

/// Compass problem over the unit sphere of `space`: parameters are packed
/// coordinates, projection rescales to norm one, refinement snaps onto
/// lower-dimensional faces when the ball is not smooth.
CompassProblem sphere_problem(const NormedSpace& space,
                              std::function<double(const Vec&)> objective);

/// Normalized coordinate vectors, packed; the usual first restarts.
std::vector<Params> coordinate_starts(const NormedSpace& space);

}  // namespace banachlab
