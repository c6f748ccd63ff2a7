#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobsig/handover_context.hpp"
#include "mobsig/scenario.hpp"
#include "mobsig/trace.hpp"

namespace mobsig {

struct HandoverMetrics {
  FlowId flow;
  std::string variant;
  Result result;
  std::optional<Duration> interruption_us;  // only for successful handovers
  std::size_t message_count = 0;            // primitives attributed to the context
  SimTime t_start_us = 0;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  std::vector<HandoverContext> contexts;  // as finished by HOLM
  std::vector<HandoverMetrics> handovers;
  std::optional<std::string> abort_reason;
  SimTime final_time_us = 0;

  bool aborted() const { return abort_reason.has_value(); }
  nlohmann::json metrics_json() const;
};

/// Build every entity from `config`, run to quiescence and collect metrics.
/// A handler failure is reported through abort_reason with the trace so far.
RunResult simulate(const ScenarioConfig& config);

}  // namespace mobsig
