#pragma once

#include <cstdint>
#include <string>

#include "banachlab/certificate.hpp"
#include "banachlab/compass_search.hpp"
#include "banachlab/normed_space.hpp"

namespace banachlab {

/// span(basis) inside an ambient space. Coordinates on the subspace are
/// coefficient vectors c with norm |basis c| (carried by `induced`).
struct Subspace {
  SpacePtr ambient;
  Mat basis;
  SpacePtr induced;
  std::string label;

  int dim() const { return static_cast<int>(basis.cols()); }
  Vec embed(const Vec& c) const { return basis * c; }
};

/// Throws InputError unless the basis has full column rank (smallest
/// singular value >= 1e-10 after normalizing columns).
Subspace make_subspace(SpacePtr ambient, Mat basis, std::string label = {});
Subspace whole_space(SpacePtr ambient);

/// Invertible ambient map with a verified inverse and an operator-norm
/// certificate for |C - I|.
struct InvertibleMap {
  SpacePtr ambient;
  Mat matrix;
  Mat inverse;
  BoundsCertificate deviation;
};

InvertibleMap make_invertible_map(SpacePtr ambient, Mat matrix, SearchBudget budget = {},
                                  std::uint64_t seed = 0);
InvertibleMap identity_map(SpacePtr ambient);
/// The map C^{-1} with its own deviation certificate.
InvertibleMap inverse_map(const InvertibleMap& c, SearchBudget budget = {},
                          std::uint64_t seed = 0);

}  // namespace banachlab
