#pragma once

#include "banachlab/linalg.hpp"

namespace banachlab {

struct HilbertRadius {
  double lower = 0.0;
  double upper = 0.0;
  Vec witness;  ///< unit vector x with |x^H A x| = lower
  int eigen_solves = 0;
};

/// Numerical radius of a complex matrix for the standard inner product.
/// v(A) = max over theta of the top eigenvalue of Re(e^{-i theta} A); the
/// supporting lines at the sampled angles bound the numerical range by a
/// polygon whose farthest vertex gives the upper end. Angles are refined
/// until the enclosure closes to `tolerance` or `max_solves` is reached.
HilbertRadius complex_hilbert_radius(const Mat& a, double tolerance, int max_solves);

/// 2x2 case: the numerical range is an ellipse with the eigenvalues as foci
/// and minor axis sqrt(tr(A^H A) - |l1|^2 - |l2|^2); the radius is the
/// largest modulus on that ellipse.
HilbertRadius ellipse_radius(const Mat& a);

/// Real symmetric case: max |eigenvalue| of (A + A^T)/2.
HilbertRadius real_hilbert_radius(const Mat& a);

}  // namespace banachlab
