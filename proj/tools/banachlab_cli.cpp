#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "banachlab/cli.hpp"

int main(int argc, char** argv) {
  using banachlab::Json;
  CLI::App app{"Numerical index, numerical radius and subspace-opening experiments"};
  banachlab::RunConfig config;
  std::string config_path;
  std::string inline_json;
  int budget = 0;

  app.add_option("command", config.command,
                 "radius | opnorm | index | gap | opening | bpb | converge | verify-all")
      ->required();
  auto* path_opt = app.add_option("--config", config_path, "JSON input record file");
  app.add_option("--inline", inline_json, "JSON input record")->excludes(path_opt);
  app.add_option("--seed", config.seed, "random seed");
  auto* budget_opt = app.add_option("--budget", budget, "restarts of the main search");
  app.add_option("--format", config.format, "table | json | csv")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  app.add_option("--threads", config.threads, "worker threads (0: all cores)");
  app.add_flag("--deterministic", config.deterministic, "omit the timestamp and timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return banachlab::kExitUsage;
  }
  if (budget_opt->count() > 0) config.budget = budget;

  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return banachlab::kExitUsage;
      }
      config.input = Json::parse(in);
    } else if (!inline_json.empty()) {
      config.input = Json::parse(inline_json);
    }
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return banachlab::kExitUsage;
  }
  return banachlab::dispatch(config, std::cout, std::cerr);
}
