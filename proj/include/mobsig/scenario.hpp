#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobsig/environment.hpp"
#include "mobsig/flow_management.hpp"
#include "mobsig/mrrm.hpp"
#include "mobsig/path_selection.hpp"
#include "mobsig/protocols.hpp"

namespace mobsig {

/// Schema violation; `path()` names the offending field, e.g. "cells[1].radius_m".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& message);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct PathModelEntry {
  AccessId access;  // rat is left empty; paths are keyed by (network, cell)
  PathDescriptor descriptor;
};

struct ScenarioConfig {
  std::uint64_t seed = 0;
  Duration scan_period_us = 0;
  SimTime duration_us = 0;  // last periodic scan instant; defaults to the trajectory end
  std::vector<Cell> cells;
  Trajectory trajectory;
  MrrmPolicy policy;
  std::vector<PathModelEntry> path_models;
  ProtocolLatencies latencies;
  std::vector<FlowDeclaration> flows;

  PathModel path_model() const;
  FlowTable flow_table() const;
};

ScenarioConfig parse_scenario(const nlohmann::json& doc);
/// Throws ScenarioError for unreadable files, malformed JSON and schema violations.
ScenarioConfig load_scenario(const std::filesystem::path& file);

}  // namespace mobsig
