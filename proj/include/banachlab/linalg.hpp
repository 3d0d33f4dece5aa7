#pragma once

#include <complex>
#include <cstdint>

#include <Eigen/Dense>

namespace banachlab {

using cd = std::complex<double>;

// Spaces are desk scale; fixed maximum storage keeps the hot loops free of
// heap traffic.
inline constexpr int kMaxDim = 8;

using Vec = Eigen::Matrix<cd, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;
using Params = Eigen::VectorXd;

/// Two-tier tolerances: `exact` separates modeling error, `arithmetic`
/// absorbs floating-point noise.
struct Tolerances {
  double exact = 1e-9;
  double arithmetic = 1e-12;
};

/// Bilinear pairing f(x) = sum_i f_i x_i (no conjugation).
inline cd pair(const Vec& f, const Vec& x) {
  return (f.array() * x.array()).sum();
}

inline bool is_real(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i].imag() != 0.0) return false;
  return true;
}

inline bool is_real(const Mat& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (m(i, j).imag() != 0.0) return false;
  return true;
}

/// Unit complex number with the phase of z; zero maps to zero.
inline cd phase(cd z) {
  const double r = std::abs(z);
  return r == 0.0 ? cd{0.0, 0.0} : z / r;
}

inline double max_abs_entry(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Real parameter packing: (re_0..re_{n-1}) for real data,
// (re_0..re_{n-1}, im_0..im_{n-1}) for complex data.
inline Vec unpack_vector(const Params& p, int dim, bool complex) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i)
    v[i] = complex ? cd{p[i], p[dim + i]} : cd{p[i], 0.0};
  return v;
}

inline Params pack_vector(const Vec& v, bool complex) {
  const int n = static_cast<int>(v.size());
  Params p(complex ? 2 * n : n);
  for (int i = 0; i < n; ++i) {
    p[i] = v[i].real();
    if (complex) p[n + i] = v[i].imag();
  }
  return p;
}

inline Mat unpack_matrix(const Params& p, int dim, bool complex) {
  Mat m(dim, dim);
  const int n = dim * dim;
  for (int k = 0; k < n; ++k)
    m(k / dim, k % dim) = complex ? cd{p[k], p[n + k]} : cd{p[k], 0.0};
  return m;
}

inline Params pack_matrix(const Mat& m, bool complex) {
  const int dim = static_cast<int>(m.rows());
  const int n = dim * dim;
  Params p(complex ? 2 * n : n);
  for (int k = 0; k < n; ++k) {
    p[k] = m(k / dim, k % dim).real();
    if (complex) p[n + k] = m(k / dim, k % dim).imag();
  }
  return p;
}

}  // namespace banachlab
