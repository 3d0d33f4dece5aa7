#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "banachlab/linalg.hpp"
#include "banachlab/polytope.hpp"
#include "banachlab/rng.hpp"

namespace banachlab {

enum class Field { real, complex };

class NormedSpace;
using SpacePtr = std::shared_ptr<const NormedSpace>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultFaceCap = 64;

struct LpNorm {
  double p = 2.0;  ///< +inf for the sup norm
};

struct PolyhedralNorm {
  std::vector<Vec> ball_vertices;  ///< symmetric list spanning the space
};

struct WeightedEuclideanNorm {
  std::vector<double> weights;
};

/// Euclidean norm sqrt(x^H G x) for a Hermitian positive definite G. Arises
/// as the induced norm of a subspace of a Euclidean space.
struct GramNorm {
  Mat gram;
};

/// Induced norm c -> |B c| of a subspace of an ambient space that has no
/// closed-form representation of its own.
struct InducedNorm {
  SpacePtr ambient;
  Mat basis;
};

using NormKind =
    std::variant<LpNorm, PolyhedralNorm, WeightedEuclideanNorm, GramNorm, InducedNorm>;

/// Extreme points of the norming face {f : |f|* = 1, f(x) = |x|}.
struct NormingFace {
  std::vector<Vec> functionals;
  bool truncated = false;
};

/// A finite-dimensional real or complex normed space. Immutable; shared
/// through SpacePtr.
class NormedSpace {
 public:
  static SpacePtr lp(int dim, double p, Field field = Field::real,
                     std::string label = {});
  static SpacePtr polyhedral(std::vector<Vec> ball_vertices, std::string label = {});
  static SpacePtr weighted_euclidean(std::vector<double> weights,
                                     Field field = Field::real,
                                     std::string label = {});
  static SpacePtr gram(Mat gram, Field field, std::string label = {});
  /// Space of coefficient vectors of span(basis) with the induced norm.
  /// Subspaces of Euclidean spaces become Gram spaces and subspaces of real
  /// polyhedral spaces become polyhedral; anything else is kept as an
  /// InducedNorm evaluated through the ambient space.
  static SpacePtr induced(const SpacePtr& ambient, const Mat& basis,
                          std::string label = {});

  int dim() const { return dim_; }
  Field field() const { return field_; }
  bool is_complex() const { return field_ == Field::complex; }
  const NormKind& kind() const { return kind_; }
  const std::string& label() const { return label_; }

  double norm(const Vec& x) const;
  double dual_norm(const Vec& f) const;

  /// Extreme points of the norming face of x, sorted lexicographically
  /// descending, truncated to `cap` entries. Complex l1 faces are
  /// continua; their phases are discretized and the result is flagged.
  NormingFace norming_functionals(const Vec& x, std::size_t cap = kDefaultFaceCap) const;

  /// max |f(y)| over the full norming face of x. Exact for every family.
  double face_support(const Vec& x, const Vec& y) const;

  /// A norming functional of x closest to `target` in the dual norm
  /// (exact for smooth and l1/l-inf faces, a local minimizer otherwise).
  Vec nearest_norming_functional(const Vec& x, const Vec& target) const;

  /// Unit vectors on lower-dimensional faces of the ball close to x (for
  /// non-smooth balls); empty for smooth ones.
  std::vector<Vec> snap_candidates(const Vec& x) const;

  /// Primal and dual vertex lists when the unit ball is a real polytope.
  const Polytope* polytope() const { return polytope_ ? &*polytope_ : nullptr; }

  /// R with |x| = |R x|_2 when the norm is Euclidean.
  const Mat* euclidean_factor() const { return factor_ ? &*factor_ : nullptr; }
  const Mat* euclidean_factor_inverse() const {
    return factor_inverse_ ? &*factor_inverse_ : nullptr;
  }

  bool is_lp(double p) const;
  bool is_smooth() const;

  /// Throws InputError on wrong length or imaginary parts in a real space.
  void check_vector(const Vec& v, const char* what = "vector") const;
  void check_matrix(const Mat& m, const char* what = "matrix") const;

 private:
  NormedSpace(int dim, Field field, NormKind kind, std::string label);
  void finish();

  int dim_;
  Field field_;
  NormKind kind_;
  std::string label_;
  std::optional<Polytope> polytope_;
  std::optional<Mat> factor_;
  std::optional<Mat> factor_inverse_;
};

/// (x, f) with |x| = |f|* = f(x) = 1 up to the recorded residuals.
struct StatePair {
  Vec x;
  Vec f;
  double defect = 0.0;           ///< |1 - f(x)|
  double primal_residual = 0.0;  ///< ||x| - 1|
  double dual_residual = 0.0;    ///< ||f|* - 1|

  bool exact(double tolerance = 1e-9) const {
    return defect <= tolerance && primal_residual <= tolerance &&
           dual_residual <= tolerance;
  }
};

StatePair make_state_pair(const NormedSpace& space, Vec x, Vec f);

/// Deterministic unit vectors: Gaussian coordinates (real and imaginary
/// parts independent in the complex case) normalized in the space norm.
std::vector<Vec> sample_sphere(const NormedSpace& space, int count, std::uint64_t seed);
Vec random_unit_vector(const NormedSpace& space, Engine& rng);

/// (x/|x|, first norming functional of x).
StatePair state_pair_at(const NormedSpace& space, const Vec& x);

std::string describe(const NormedSpace& space);

}  // namespace banachlab
