#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "banachlab/io.hpp"

namespace banachlab {

/// One CLI invocation. `input` holds the command's record (parsed from
/// --config or --inline).
struct RunConfig {
  std::string command;
  Json input = Json::object();
  std::uint64_t seed = 0;
  /// Restart count of the command's main search; defaults per command.
  std::optional<int> budget;
  std::string format = "table";  ///< table | json | csv
  unsigned threads = 0;          ///< 0: hardware concurrency
  bool deterministic = false;    ///< suppress the timestamp (and timings)
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssertion = 2;

/// Runs the command and writes its report to `out`; diagnostics go to
/// `err`. Returns the process exit status.
int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err);

Json config_to_json(const RunConfig& config);

}  // namespace banachlab
