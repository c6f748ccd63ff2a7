#include "mobsig/protocols.hpp"

#include <stdexcept>

namespace mobsig {

namespace {

const std::string kEnv(fe::env);
const std::string kDaemon(fe::daemon);

[[noreturn]] void unexpected(std::string_view who, const Envelope& envelope) {
  throw std::logic_error(std::string(who) + " cannot handle " +
                         std::string(primitive_name(envelope.payload)));
}

}  // namespace

NetworkAgents::NetworkAgents(Simulator& sim, ProtocolLatencies latencies)
    : sim_(sim), latencies_(latencies) {}

void NetworkAgents::solicit_proxy_advertisement(FlowId flow, const AccessId& target) {
  sim_.send(sim_.jittered(latencies_.fmip_oneway_us, latencies_.jitter_us), kEnv, kDaemon,
            ProxyRouterAdvertisement{flow, target});
}

void NetworkAgents::on_primitive(const Envelope& envelope) {
  const auto& p = envelope.payload;
  if (const auto* bu = std::get_if<BindingUpdate>(&p)) {
    bindings_[bu->flow] = bu->locator;
    sim_.reply(envelope, sim_.jittered(latencies_.binding_rtt_us, latencies_.jitter_us),
               BindingAck{bu->flow, Result::success()});
  } else if (const auto* fbu = std::get_if<FastBindingUpdate>(&p)) {
    // Pre-authentication and reservation between the access routers are
    // folded into this leg's latency.
    sim_.reply(envelope, sim_.jittered(latencies_.fmip_oneway_us, latencies_.jitter_us),
               FastBindingAck{fbu->flow, Result::success()});
  } else if (const auto* start = std::get_if<TunnelStart>(&p)) {
    tunnels_[start->flow] = true;
  } else if (const auto* stop = std::get_if<TunnelStop>(&p)) {
    tunnels_[stop->flow] = false;
  } else {
    unexpected("Env", envelope);
  }
}

std::optional<Locator> NetworkAgents::binding(FlowId flow) const {
  auto it = bindings_.find(flow);
  return it == bindings_.end() ? std::nullopt : std::optional<Locator>(it->second);
}

bool NetworkAgents::tunnel_active(FlowId flow) const {
  auto it = tunnels_.find(flow);
  return it != tunnels_.end() && it->second;
}

// ---------------------------------------------------------------------------

void HandoverDaemon::prepare(const HandoverContext&, Completion done) {
  done(Result::failure("preparation_unsupported"));
}

Result HandoverDaemon::tunnel(const HandoverContext&, TunnelAction) {
  return Result::failure("tunnel_unsupported");
}

MipDaemon::MipDaemon(Simulator& sim, Environment& env, NetworkAgents& network)
    : sim_(sim), env_(env), network_(network) {}

bool MipDaemon::locator_usable(FlowId, const Locator& locator) const {
  return env_.locator_valid(locator);
}

void MipDaemon::update_binding(const HandoverContext& ctx, const Locator& locator,
                               Completion done) {
  if (!locator_usable(ctx.flow, locator)) {
    sim_.schedule(0, [done] { done(Result::failure("stale_locator")); });
    return;
  }
  if (pending_bindings_.contains(ctx.flow)) {
    sim_.schedule(0, [done] { done(Result::failure("binding_in_progress")); });
    return;
  }
  pending_bindings_[ctx.flow] = std::move(done);
  sim_.send(0, kDaemon, kEnv, BindingUpdate{ctx.flow, locator});
}

void MipDaemon::on_primitive(const Envelope& envelope) {
  const auto* ack = std::get_if<BindingAck>(&envelope.payload);
  if (!ack) unexpected(tool_name(), envelope);
  auto it = pending_bindings_.find(ack->flow);
  if (it == pending_bindings_.end()) throw std::logic_error("BindingAck without BindingUpdate");
  Completion done = std::move(it->second);
  pending_bindings_.erase(it);
  if (ack->result.ok()) binding_acknowledged(ack->flow);
  done(ack->result);
}

// ---------------------------------------------------------------------------

void FmipDaemon::prepare(const HandoverContext& ctx, Completion done) {
  const Cell* target = env_.find_cell(ctx.target);
  if (!target || !target->supports_fmip) {
    sim_.schedule(0, [done] { done(Result::failure("fmip_unsupported")); });
    return;
  }
  if (!ctx.current || !env_.is_attached(ctx.flow, *ctx.current)) {
    sim_.schedule(0, [done] { done(Result::failure("not_attached")); });
    return;
  }
  states_[ctx.flow] = FmipState{};
  preparing_[ctx.flow] = Preparation{*ctx.current, ctx.target, std::move(done)};
  network_.solicit_proxy_advertisement(ctx.flow, ctx.target);
}

void FmipDaemon::on_primitive(const Envelope& envelope) {
  const auto& p = envelope.payload;
  const bool advert = std::holds_alternative<ProxyRouterAdvertisement>(p);
  const auto* fback = std::get_if<FastBindingAck>(&p);
  if (!advert && !fback) {
    MipDaemon::on_primitive(envelope);
    return;
  }

  const FlowId flow = *flow_of(p);
  auto it = preparing_.find(flow);
  if (it == preparing_.end()) throw std::logic_error("FMIP message outside preparation");
  Preparation& prep = it->second;

  auto finish = [&](Result result) {
    Completion done = std::move(prep.done);
    preparing_.erase(it);
    done(std::move(result));
  };

  // Preparation runs over the current link; it must still be up.
  if (!env_.is_attached(flow, prep.current)) return finish(Result::failure("link_lost"));

  if (advert) {
    sim_.send(sim_.jittered(network_.latencies().fmip_oneway_us, network_.latencies().jitter_us),
              kDaemon, kEnv, FastBindingUpdate{flow, prep.current, prep.target});
    return;
  }
  if (!fback->result.ok()) return finish(fback->result);
  states_[flow].prepared_for = prep.target;
  finish(Result::success());
}

Result FmipDaemon::tunnel(const HandoverContext& ctx, TunnelAction action) {
  FmipState& st = states_[ctx.flow];
  if (action == TunnelAction::start) {
    if (!st.prepared_for || *st.prepared_for != ctx.target) return Result::failure("not_prepared");
    if (!env_.is_attached(ctx.flow, ctx.target)) return Result::failure("not_attached");
    if (!ctx.current) return Result::failure("no_previous_access");
    st.tunnel_active = true;
    st.binding_acked = false;
    sim_.send(0, kDaemon, kEnv, TunnelStart{ctx.flow, *ctx.current, ctx.target});
    return Result::success();
  }
  if (!st.tunnel_active) return Result::failure("tunnel_inactive");
  if (!st.binding_acked) return Result::failure("binding_pending");
  st = FmipState{};
  sim_.send(0, kDaemon, kEnv, TunnelStop{ctx.flow});
  return Result::success();
}

bool FmipDaemon::prepared(FlowId flow, const AccessId& target) const {
  auto it = states_.find(flow);
  return it != states_.end() && it->second.prepared_for == target;
}

const FmipState* FmipDaemon::state(FlowId flow) const {
  auto it = states_.find(flow);
  return it == states_.end() ? nullptr : &it->second;
}

bool FmipDaemon::locator_usable(FlowId flow, const Locator& locator) const {
  if (MipDaemon::locator_usable(flow, locator)) return true;
  auto it = states_.find(flow);
  return it != states_.end() && it->second.tunnel_active;
}

void FmipDaemon::binding_acknowledged(FlowId flow) {
  auto it = states_.find(flow);
  if (it != states_.end()) it->second.binding_acked = true;
}

// ---------------------------------------------------------------------------

void Toolbox::add(std::string tool, std::shared_ptr<HandoverDaemon> daemon) {
  if (!daemon) throw std::invalid_argument("null daemon for " + tool);
  daemons_[std::move(tool)] = std::move(daemon);
}

bool Toolbox::has(std::string_view tool) const { return daemons_.find(tool) != daemons_.end(); }

HandoverDaemon& Toolbox::get(std::string_view tool) const {
  auto it = daemons_.find(tool);
  if (it == daemons_.end()) throw std::out_of_range("no daemon for tool " + std::string(tool));
  return *it->second;
}

HandoverDaemon& Toolbox::acquire(FlowId flow, std::string_view tool) {
  HandoverDaemon& daemon = get(tool);
  active_[flow] = &daemon;
  return daemon;
}

void Toolbox::release(FlowId flow) { active_.erase(flow); }

void Toolbox::on_primitive(const Envelope& envelope) {
  const auto flow = flow_of(envelope.payload);
  if (!flow) unexpected("Daemon", envelope);
  auto it = active_.find(*flow);
  if (it == active_.end()) {
    throw std::logic_error("no daemon serving flow " + std::to_string(flow->value));
  }
  it->second->on_primitive(envelope);
}

}  // namespace mobsig
