#include "banachlab/sphere_search.hpp"

#include <cmath>
#include <utility>

namespace banachlab {

CompassProblem sphere_problem(const NormedSpace& space,
                              std::function<double(const Vec&)> objective) {
  const int dim = space.dim();
  const bool complex = space.is_complex();
  CompassProblem problem;
  problem.parameters = complex ? 2 * dim : dim;
  problem.project = [&space, dim, complex](Params& p) {
    const double n = space.norm(unpack_vector(p, dim, complex));
    if (!(n > 0.0) || !std::isfinite(n)) return false;
    p /= n;
    return true;
  };
  problem.objective = [f = std::move(objective), dim, complex](const Params& p) {
    return f(unpack_vector(p, dim, complex));
  };
  problem.random_start = [&space, complex](Engine& rng) {
    return pack_vector(random_unit_vector(space, rng), complex);
  };
  if (!space.is_smooth()) {
    problem.refine = [&space, dim, complex](const Params& p, std::vector<Params>& out) {
      for (const auto& v : space.snap_candidates(unpack_vector(p, dim, complex)))
        out.push_back(pack_vector(v, complex));
    };
  }
  return problem;
}

std::vector<Params> coordinate_starts(const NormedSpace& space) {
  std::vector<Params> starts;
  for (int i = 0; i < space.dim(); ++i) {
    Vec e = Vec::Zero(space.dim());
    e[i] = 1.0;
    e /= space.norm(e);
    starts.push_back(pack_vector(e, space.is_complex()));
  }
  return starts;
}

}  // namespace banachlab
