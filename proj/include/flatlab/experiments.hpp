#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace flatlab {

struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Everything in a report is a function of the name, the config and the seed;
/// no timings or absolute paths are recorded.
struct ExperimentReport {
  std::string id;
  nlohmann::ordered_json inputs;    // config after defaults are filled in
  nlohmann::ordered_json measured;
  std::vector<Assertion> assertions;
  std::vector<std::string> artifacts;  // file names relative to the output directory

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

std::vector<std::string> experiment_names();

/// Runs one named experiment. Unknown config keys or ill-typed values raise
/// ConfigInvalid; unknown names UnknownExperiment. With a non-empty out_dir
/// SVG and CSV artifacts are written there.
ExperimentReport run_experiment(const std::string& name, const nlohmann::json& config = nlohmann::json::object(),
                                const std::string& out_dir = "");

}  // namespace flatlab
