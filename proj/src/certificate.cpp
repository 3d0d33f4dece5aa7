#include "banachlab/certificate.hpp"

#include <array>
#include <utility>

#include "banachlab/errors.hpp"

namespace banachlab {

namespace {

constexpr std::array<std::pair<Method, const char*>, 6> kNames{{
    {Method::exact_formula, "exact_formula"},
    {Method::extreme_point_enumeration, "extreme_point_enumeration"},
    {Method::outer_approximation, "outer_approximation"},
    {Method::multistart_heuristic, "multistart_heuristic"},
    {Method::dense_sampling_oracle, "dense_sampling_oracle"},
    {Method::candidate_upper_bound, "candidate_upper_bound"},
}};

}  // namespace

std::string to_string(Method method) {
  for (const auto& [m, name] : kNames)
    if (m == method) return name;
  return "unknown";
}

Method method_from_string(const std::string& name) {
  for (const auto& [m, n] : kNames)
    if (name == n) return m;
  throw InputError("unknown certificate method '" + name + "'");
}

}  // namespace banachlab
