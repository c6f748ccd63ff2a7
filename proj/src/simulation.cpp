#include "mobsig/simulation.hpp"

#include <map>
#include <memory>

#include "mobsig/conformance.hpp"
#include "mobsig/flow_management.hpp"
#include "mobsig/holm.hpp"
#include "mobsig/mrrm.hpp"
#include "mobsig/path_selection.hpp"
#include "mobsig/protocols.hpp"

namespace mobsig {

namespace {

struct World {
  Simulator sim;
  Environment env;
  NetworkAgents network;
  std::shared_ptr<MipDaemon> mip;
  std::shared_ptr<FmipDaemon> fmip;
  Toolbox toolbox;
  PathSelection path;
  Mrrm mrrm;
  Holm holm;
  FlowManagement flows;

  explicit World(const ScenarioConfig& cfg)
      : sim(cfg.seed),
        env(sim, cfg.cells, cfg.trajectory, cfg.latencies.jitter_us),
        network(sim, cfg.latencies),
        mip(std::make_shared<MipDaemon>(sim, env, network)),
        fmip(std::make_shared<FmipDaemon>(sim, env, network)),
        path(sim, env, cfg.path_model(), cfg.flow_table(),
             [this](FlowId f, const AccessId& a) { return fmip->prepared(f, a); }),
        mrrm(sim, env, cfg.policy, Mrrm::Options{cfg.scan_period_us, cfg.duration_us}),
        holm(sim, env, toolbox, cfg.flow_table()),
        flows(sim) {
    toolbox.add(std::string(tool_name(Tool::mip_mbb)), mip);
    toolbox.add(std::string(tool_name(Tool::mip_bbm)), mip);
    toolbox.add(std::string(tool_name(Tool::fmip)), fmip);
    sim.register_entity(std::string(fe::mrrm), mrrm);
    sim.register_entity(std::string(fe::holm), holm);
    sim.register_entity(std::string(fe::path_selection), path);
    sim.register_entity(std::string(fe::flow_management), flows);
    sim.register_entity(std::string(fe::env), network);
    sim.register_entity(std::string(fe::daemon), toolbox);
  }
};

}  // namespace

RunResult simulate(const ScenarioConfig& config) {
  auto world = std::make_unique<World>(config);
  RunResult out;
  for (const auto& f : config.flows) world->flows.setup_flow(f);
  world->mrrm.start();
  try {
    world->sim.run_until_quiescent();
  } catch (const SimulationAborted& e) {
    out.abort_reason = e.what();
  }
  world->sim.finish();

  out.trace = world->sim.trace();
  out.contexts = world->holm.completed();
  out.final_time_us = world->sim.now();

  // Pair HOLM's contexts with the trace segmentation, per flow in start order.
  const Segmentation seg = segment(out.trace);
  std::map<FlowId, std::vector<const TraceContext*>> segmented;
  for (const auto& c : seg.contexts) segmented[c.flow].push_back(&c);
  std::map<FlowId, std::size_t> seen;

  for (const auto& ctx : out.contexts) {
    HandoverMetrics m;
    m.flow = ctx.flow;
    m.variant = std::string(ctx.variant());
    m.result = ctx.outcome;
    m.t_start_us = ctx.t_start.value_or(0);
    if (ctx.phase == Phase::Done) m.interruption_us = interruption_time(ctx);
    const std::size_t n = seen[ctx.flow]++;
    const auto& mine = segmented[ctx.flow];
    if (n < mine.size()) {
      // Later scan cycles also land in the context; they are not part of the handover.
      for (std::size_t i : mine[n]->records) {
        const std::string& msg = out.trace[i].msg;
        const bool scan = msg == ConstraintRequest::name || msg == ConstraintResponse::name;
        if (!scan || i < mine[n]->request_index) ++m.message_count;
      }
    }
    out.handovers.push_back(std::move(m));
  }
  return out;
}

nlohmann::json RunResult::metrics_json() const {
  using nlohmann::json;
  json list = json::array();
  std::size_t handover_count = 0, failed = 0;
  Duration total_interruption = 0;
  for (const auto& h : handovers) {
    list.push_back({{"flow", h.flow},
                    {"variant", h.variant},
                    {"result", h.result},
                    {"interruption_us", h.interruption_us ? json(*h.interruption_us) : json(nullptr)},
                    {"message_count", h.message_count},
                    {"t_start_us", h.t_start_us}});
    if (h.variant != "establishment") ++handover_count;
    if (!h.result.ok()) ++failed;
    total_interruption += h.interruption_us.value_or(0);
  }
  std::size_t messages = 0;
  for (const auto& r : trace) messages += r.is_annotation() ? 0 : 1;

  json doc = {{"handovers", std::move(list)},
              {"totals",
               {{"contexts", handovers.size()},
                {"handovers", handover_count},
                {"failed", failed},
                {"messages", messages},
                {"trace_records", trace.size()},
                {"total_interruption_us", total_interruption},
                {"final_time_us", final_time_us}}}};
  if (abort_reason) doc["aborted"] = *abort_reason;
  return doc;
}

}  // namespace mobsig
