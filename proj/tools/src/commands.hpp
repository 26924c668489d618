#pragma once

#include <functional>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbclab/cli.hpp"

namespace pbclab {

using Json = nlohmann::ordered_json;

struct Result {
  Json body = Json::object();
  std::optional<std::string> csv;
  bool check_failed = false;
};

using Action = std::function<Result()>;

// Each registers its subcommands on `app` and stores the action of the one that runs in `action`.
void register_state_commands(CLI::App& app, const ExperimentConfig& config, Action& action);
void register_p2p_commands(CLI::App& app, const ExperimentConfig& config, Action& action);
void register_mac_commands(CLI::App& app, const ExperimentConfig& config, Action& action);
void register_check_commands(CLI::App& app, const ExperimentConfig& config, Action& action);

}  // namespace pbclab
