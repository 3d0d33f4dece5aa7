#pragma once

#include <string>
#include <vector>

#include "banachlab/linalg.hpp"

namespace banachlab {

/// How a bound was obtained. exact_formula and extreme_point_enumeration
/// promise upper - lower <= 1e-9; the others only order the two ends.
enum class Method {
  exact_formula,
  extreme_point_enumeration,
  outer_approximation,  ///< rigorous enclosure that did not close to 1e-9
  multistart_heuristic,
  dense_sampling_oracle,
  candidate_upper_bound,  ///< infimum bounded by explicit candidates only
};

std::string to_string(Method method);
Method method_from_string(const std::string& name);

struct BoundsCertificate {
  double lower = 0.0;
  double upper = 0.0;
  Method method = Method::exact_formula;
  std::vector<Vec> witnesses;
  long budget_used = 0;

  double width() const { return upper - lower; }
  double midpoint() const { return 0.5 * (lower + upper); }
  bool claims_exact() const {
    return method == Method::exact_formula || method == Method::extreme_point_enumeration;
  }
};

inline BoundsCertificate exact_value(double value, Method method = Method::exact_formula) {
  BoundsCertificate c;
  c.lower = value;
  c.upper = value;
  c.method = method;
  return c;
}

}  // namespace banachlab
