#include "mobsig/holm.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobsig {

std::string_view tool_name(Tool tool) {
  switch (tool) {
    case Tool::mip_mbb: return "mip_mbb";
    case Tool::mip_bbm: return "mip_bbm";
    case Tool::fmip: return "fmip";
  }
  return "?";
}

std::string_view phase_name(Phase phase) {
  switch (phase) {
    case Phase::ToolSelected: return "ToolSelected";
    case Phase::Preparing: return "Preparing";
    case Phase::Prepared: return "Prepared";
    case Phase::PathPending: return "PathPending";
    case Phase::PathDone: return "PathDone";
    case Phase::LinkChanging: return "LinkChanging";
    case Phase::BindingUpdating: return "BindingUpdating";
    case Phase::Done: return "Done";
    case Phase::Failed: return "Failed";
  }
  return "?";
}

std::string_view HandoverContext::variant() const {
  if (establishment()) return "establishment";
  switch (tool) {
    case Tool::mip_mbb: return "mbb";
    case Tool::mip_bbm: return "bbm";
    case Tool::fmip: return "fmip";
  }
  return "?";
}

Tool select_tool(const HOExecutionRequest& request, bool target_supports_fmip) {
  if (request.mbb_flag) return Tool::mip_mbb;
  return target_supports_fmip ? Tool::fmip : Tool::mip_bbm;
}

std::optional<Duration> interruption_time(const HandoverContext& ctx) {
  if (ctx.phase != Phase::Done) {
    throw std::logic_error("interruption_time: handover is " + std::string(phase_name(ctx.phase)));
  }
  if (ctx.establishment()) return std::nullopt;
  if (ctx.tool == Tool::mip_mbb) return 0;
  if (!ctx.t_break || !ctx.t_restore) throw std::logic_error("interruption_time: missing marks");
  return *ctx.t_restore - *ctx.t_break;
}

// ---------------------------------------------------------------------------

namespace {
const std::string kHolm(fe::holm);
const std::string kMrrm(fe::mrrm);
const std::string kPath(fe::path_selection);
}  // namespace

Holm::Holm(Simulator& sim, Environment& env, Toolbox& toolbox, FlowTable flows)
    : sim_(sim), env_(env), toolbox_(toolbox), flows_(std::move(flows)) {}

const HandoverContext* Holm::active(FlowId flow) const {
  auto it = running_.find(flow);
  return it == running_.end() ? nullptr : &it->second.ctx;
}

std::vector<Holm::Step> Holm::program(const HandoverContext& ctx) {
  using S = Step;
  // Communication establishment is the attach-first sequence with nothing to free.
  if (ctx.establishment()) return {S::Attach, S::PathSelect, S::Bind, S::Complete};
  switch (ctx.tool) {
    case Tool::mip_mbb: return {S::Attach, S::PathSelect, S::Bind, S::Detach, S::Complete};
    case Tool::mip_bbm: return {S::Detach, S::Attach, S::PathSelect, S::Bind, S::Complete};
    case Tool::fmip:
      return {S::Prepare, S::PathSelect, S::Switch, S::TunnelStart, S::Bind, S::TunnelStop, S::Complete};
  }
  return {};
}

void Holm::enter(Running& run, Phase phase) {
  auto& h = run.ctx.history;
  if (std::find(h.begin(), h.end(), phase) != h.end()) return;
  h.push_back(phase);
  run.ctx.phase = phase;
}

void Holm::on_primitive(const Envelope& envelope) {
  if (const auto* request = std::get_if<HOExecutionRequest>(&envelope.payload)) {
    start(envelope, *request);
    return;
  }
  if (!envelope.tag) {
    throw std::logic_error("HOLM: untagged " + std::string(primitive_name(envelope.payload)));
  }
  on_response(*envelope.tag, envelope.payload);
}

void Holm::start(const Envelope& envelope, const HOExecutionRequest& request) {
  if (running_.contains(request.flow)) {
    sim_.reply(envelope, 0, HOComplete{Result::failure("busy")});
    return;
  }
  auto qos = flows_.find(request.flow);
  if (qos == flows_.end()) {
    sim_.reply(envelope, 0, HOComplete{Result::failure("unknown_flow")});
    return;
  }

  HandoverContext ctx;
  ctx.flow = request.flow;
  ctx.current = request.current;
  ctx.target = request.target;
  ctx.requested_qos = qos->second;
  ctx.t_start = sim_.now();
  if (auto bound = bound_.find(request.flow); bound != bound_.end()) ctx.old_locator = bound->second;
  if (ctx.establishment()) {
    ctx.tool = request.mbb_flag ? Tool::mip_mbb : Tool::mip_bbm;
  } else {
    const Cell* cell = env_.find_cell(request.target);
    ctx.tool = select_tool(request, cell && cell->supports_fmip);
  }

  Running run;
  run.ctx = std::move(ctx);
  run.steps = program(run.ctx);
  if (!toolbox_.has(tool_name(run.ctx.tool))) {
    sim_.reply(envelope, 0, HOComplete{Result::failure("no_tool")});
    return;
  }
  run.daemon = &toolbox_.acquire(request.flow, tool_name(run.ctx.tool));
  ++generation_[request.flow];
  running_.emplace(request.flow, std::move(run));
  advance(request.flow);
}

void Holm::advance(FlowId flow) {
  auto it = running_.find(flow);
  if (it == running_.end()) return;
  Running& run = it->second;
  if (run.next >= run.steps.size()) throw std::logic_error("HOLM: step program overrun");
  run_step(run, run.steps[run.next++]);
}

Completion Holm::resume(FlowId flow, std::uint64_t generation,
                        std::function<void(Running&)> on_success) {
  return [this, flow, generation, on_success = std::move(on_success)](Result result) {
    auto it = running_.find(flow);
    if (it == running_.end() || generation_[flow] != generation) return;
    if (!result.ok()) return fail(flow, std::move(result));
    on_success(it->second);
    advance(flow);
  };
}

void Holm::run_step(Running& run, Step step) {
  HandoverContext& ctx = run.ctx;
  const FlowId flow = ctx.flow;
  const std::uint64_t gen = generation_[flow];

  switch (step) {
    case Step::Prepare:
      enter(run, Phase::Preparing);
      run.daemon->prepare(ctx, resume(flow, gen, [this](Running& r) { enter(r, Phase::Prepared); }));
      return;

    case Step::Detach:
      enter(run, Phase::LinkChanging);
      if (ctx.tool == Tool::mip_bbm) ctx.t_break = sim_.now();
      run.awaiting = LinkDetachResponse::name;
      sim_.send(0, kHolm, kMrrm, LinkDetachRequest{flow, *ctx.current});
      return;

    case Step::Attach:
      enter(run, Phase::LinkChanging);
      run.awaiting = LinkAttachResponse::name;
      sim_.send(0, kHolm, kMrrm, LinkAttachRequest{flow, ctx.target, ctx.requested_qos});
      return;

    case Step::Switch:
      enter(run, Phase::LinkChanging);
      ctx.t_break = sim_.now();
      run.awaiting = LinkSwitchResponse::name;
      sim_.send(0, kHolm, kMrrm, LinkSwitchRequest{flow, *ctx.current, ctx.target, ctx.requested_qos});
      return;

    case Step::PathSelect:
      enter(run, Phase::PathPending);
      run.awaiting = PathSelected::name;
      sim_.send(0, kHolm, kPath, PathSelect{flow, ctx.target, ctx.tool == Tool::fmip && !ctx.establishment()});
      return;

    case Step::TunnelStart: {
      Result r = run.daemon->tunnel(ctx, TunnelAction::start);
      if (!r.ok()) return fail(flow, std::move(r));
      ctx.t_restore = sim_.now();
      return advance(flow);
    }

    case Step::Bind:
      enter(run, Phase::BindingUpdating);
      run.daemon->update_binding(ctx, *ctx.new_locator, resume(flow, gen, [this](Running& r) {
        if (r.ctx.tool == Tool::fmip && !r.ctx.establishment()) return;
        if (r.ctx.tool == Tool::mip_mbb) r.ctx.t_break = sim_.now();
        r.ctx.t_restore = sim_.now();
      }));
      return;

    case Step::TunnelStop: {
      Result r = run.daemon->tunnel(ctx, TunnelAction::stop);
      if (!r.ok()) return fail(flow, std::move(r));
      return advance(flow);
    }

    case Step::Complete:
      enter(run, Phase::Done);
      ctx.outcome = Result::success();
      sim_.send(0, kHolm, kMrrm, HOComplete{Result::success()}, flow);
      return finish(flow);
  }
}

void Holm::on_response(FlowId flow, const Primitive& response) {
  auto it = running_.find(flow);
  if (it == running_.end()) {
    throw std::logic_error("HOLM: " + std::string(primitive_name(response)) + " for idle flow");
  }
  Running& run = it->second;
  if (primitive_name(response) != run.awaiting) {
    throw std::logic_error("HOLM: unexpected " + std::string(primitive_name(response)));
  }
  run.awaiting = {};

  Result result = std::visit(
      [](const auto& p) -> Result {
        if constexpr (requires { p.result; }) return p.result;
        else throw std::logic_error("HOLM: response without result");
      },
      response);
  if (!result.ok()) return fail(flow, std::move(result));

  if (const auto* selected = std::get_if<PathSelected>(&response)) {
    if (!selected->new_locator) return fail(flow, Result::failure("no_locator"));
    run.ctx.new_locator = selected->new_locator;
    enter(run, Phase::PathDone);
  }
  advance(flow);
}

void Holm::fail(FlowId flow, Result reason) {
  auto it = running_.find(flow);
  if (it == running_.end()) return;
  HandoverContext& ctx = it->second.ctx;
  ctx.phase = Phase::Failed;
  ctx.history.push_back(Phase::Failed);
  ctx.outcome = reason;
  sim_.send(0, kHolm, kMrrm, HOComplete{std::move(reason)}, flow);
  finish(flow);
}

void Holm::finish(FlowId flow) {
  auto it = running_.find(flow);
  const HandoverContext& ctx = it->second.ctx;
  if (ctx.phase == Phase::Done && ctx.new_locator) bound_[flow] = *ctx.new_locator;
  completed_.push_back(std::move(it->second.ctx));
  running_.erase(it);
  // Daemon deliveries still in flight (none on the happy path) would need the
  // routing; keep it until the next context of this flow replaces it.
}

}  // namespace mobsig
