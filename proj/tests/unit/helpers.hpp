#pragma once

#include <initializer_list>

#include "banachlab/linalg.hpp"
#include "banachlab/rng.hpp"

namespace testing {

using banachlab::cd;
using banachlab::Mat;
using banachlab::Vec;

inline Vec vec(std::initializer_list<cd> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (cd x : values) v[i++] = x;
  return v;
}

// Row-major entries.
inline Mat mat(int rows, int cols, std::initializer_list<cd> values) {
  Mat m(rows, cols);
  int k = 0;
  for (cd x : values) {
    m(k / cols, k % cols) = x;
    ++k;
  }
  return m;
}

inline Mat random_matrix(int n, bool complex, banachlab::Engine& rng) {
  Mat m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double re = banachlab::gaussian(rng);
      m(i, j) = {re, complex ? banachlab::gaussian(rng) : 0.0};
    }
  return m;
}

inline Vec random_vector(int n, bool complex, banachlab::Engine& rng) {
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    const double re = banachlab::gaussian(rng);
    v[i] = {re, complex ? banachlab::gaussian(rng) : 0.0};
  }
  return v;
}

}  // namespace testing
