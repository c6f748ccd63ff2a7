#pragma once

// Shared helpers for the test binaries: programmatic scenarios and trace queries.

#include <algorithm>
#include <string>
#include <vector>

#include "mobsig/scenario.hpp"
#include "mobsig/simulation.hpp"

namespace testing_support {

using namespace mobsig;

struct Latencies {
  Duration teardown = 10'000;
  Duration setup = 50'000;
  Duration locator = 100'000;
  Duration rtt = 40'000;
  Duration oneway = 5'000;
};

/// A wide UMTS cell around the origin and a small WLAN hotspot at (600, 0);
/// the mobile walks from (400, 0) into the hotspot.
inline ScenarioConfig two_cells(bool mbb, bool fmip, Latencies lat = {}) {
  ScenarioConfig cfg;
  cfg.seed = 1;
  cfg.scan_period_us = 500'000;
  Cell umts{{"umts-1", "operator-3g", "umts"}, {0, 0}, 2000, lat.setup, lat.teardown, lat.locator,
            false, {384, 100}};
  Cell wlan{{"wlan-1", "hotspot", "wlan"}, {600, 0}, 100, lat.setup, lat.teardown, lat.locator,
            fmip, {11000, 20}};
  cfg.cells = {umts, wlan};
  cfg.trajectory = Trajectory(std::vector<Waypoint>{{0, {400, 0}}, {20'000'000, {600, 0}}});
  cfg.duration_us = 20'000'000;
  cfg.policy.min_radio_score = 0.05;
  cfg.policy.hysteresis = 0.1;
  cfg.policy.mbb_capable = mbb;
  cfg.path_models = {{{"umts-1", "operator-3g", ""}, {384, 80, true}},
                     {{"wlan-1", "hotspot", ""}, {20000, 30, true}}};
  cfg.latencies = {lat.rtt, lat.oneway, 0};
  cfg.flows = {{FlowId{1}, {1000, 100}, 0}};
  return cfg;
}

inline std::string scenario_path(const std::string& name) {
  return std::string(MOBSIG_SCENARIO_DIR) + "/" + name + ".json";
}

inline RunResult run_bundled(const std::string& name) { return simulate(load_scenario(scenario_path(name))); }

inline std::vector<std::size_t> indices_of(const std::vector<TraceRecord>& trace, const std::string& msg) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].msg == msg) out.push_back(i);
  }
  return out;
}

inline std::vector<std::string> primitive_names(const std::vector<TraceRecord>& trace) {
  std::vector<std::string> out;
  for (const auto& r : trace) {
    if (!r.is_annotation()) out.push_back(r.msg);
  }
  return out;
}

/// Names of the primitive records strictly between the first occurrence of
/// `from` at or after `start` and the next `to` (inclusive of both ends).
inline std::vector<std::string> names_between(const std::vector<TraceRecord>& trace, std::size_t start,
                                              const std::string& from, const std::string& to) {
  std::vector<std::string> out;
  bool on = false;
  for (std::size_t i = start; i < trace.size(); ++i) {
    if (trace[i].is_annotation()) continue;
    if (!on && trace[i].msg == from) on = true;
    if (on) out.push_back(trace[i].msg);
    if (on && trace[i].msg == to) break;
  }
  return out;
}

}  // namespace testing_support
