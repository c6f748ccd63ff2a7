#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "mobsig/core.hpp"

namespace mobsig {

enum class Tool { mip_mbb, mip_bbm, fmip };

std::string_view tool_name(Tool tool);

enum class Phase {
  ToolSelected,
  Preparing,
  Prepared,
  PathPending,
  PathDone,
  LinkChanging,
  BindingUpdating,
  Done,
  Failed,
};

std::string_view phase_name(Phase phase);

/// State of one handover (or establishment) executed by HOLM.
struct HandoverContext {
  FlowId flow;
  std::optional<AccessId> current;
  AccessId target;
  Tool tool = Tool::mip_bbm;
  Phase phase = Phase::ToolSelected;
  QosSpec requested_qos;
  std::optional<Locator> old_locator;
  std::optional<Locator> new_locator;
  std::optional<SimTime> t_start;
  std::optional<SimTime> t_break;
  std::optional<SimTime> t_restore;
  std::vector<Phase> history{Phase::ToolSelected};
  Result outcome;

  bool establishment() const { return !current.has_value(); }
  /// "establishment", "mbb", "bbm" or "fmip".
  std::string_view variant() const;
};

}  // namespace mobsig
