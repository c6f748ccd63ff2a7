#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "mobsig/environment.hpp"
#include "mobsig/handover_context.hpp"
#include "mobsig/protocols.hpp"
#include "mobsig/simulator.hpp"

namespace mobsig {

/// mbb_flag wins; otherwise FMIP when the target offers it, else plain BBM.
Tool select_tool(const HOExecutionRequest& request, bool target_supports_fmip);

/// t_restore - t_break of a finished handover; 0 for make-before-break and
/// nullopt for an establishment. Throws std::logic_error unless ctx is Done.
std::optional<Duration> interruption_time(const HandoverContext& ctx);

/// Handover and Locator Management entity.
///
/// Runs one step program per handover context: link commands go to MRRM,
/// locator queries to Path Selection, binding and tunnelling to the daemon
/// chosen from the toolbox. Any failed step aborts the context and reports
/// HOComplete{failure}; nothing is rolled back.
class Holm : public Entity {
 public:
  Holm(Simulator& sim, Environment& env, Toolbox& toolbox, FlowTable flows);

  void on_primitive(const Envelope& envelope) override;

  /// Finished contexts (Done or Failed) in completion order.
  const std::vector<HandoverContext>& completed() const { return completed_; }
  const HandoverContext* active(FlowId flow) const;

 private:
  enum class Step { Prepare, Detach, Attach, Switch, PathSelect, TunnelStart, Bind, TunnelStop, Complete };

  struct Running {
    HandoverContext ctx;
    std::vector<Step> steps;
    std::size_t next = 0;
    HandoverDaemon* daemon = nullptr;
    std::string_view awaiting;  // response primitive the current step waits for
  };

  static std::vector<Step> program(const HandoverContext& ctx);

  void start(const Envelope& envelope, const HOExecutionRequest& request);
  void advance(FlowId flow);
  void run_step(Running& run, Step step);
  void on_response(FlowId flow, const Primitive& response);
  void enter(Running& run, Phase phase);
  void fail(FlowId flow, Result reason);
  void finish(FlowId flow);
  /// Completion callback for daemon operations; ignores stale contexts.
  Completion resume(FlowId flow, std::uint64_t generation, std::function<void(Running&)> on_success);

  Simulator& sim_;
  Environment& env_;
  Toolbox& toolbox_;
  FlowTable flows_;
  std::map<FlowId, Running> running_;
  std::map<FlowId, std::uint64_t> generation_;
  std::map<FlowId, Locator> bound_;  // locator of the last successful binding
  std::vector<HandoverContext> completed_;
};

}  // namespace mobsig
