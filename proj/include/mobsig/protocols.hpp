#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "mobsig/environment.hpp"
#include "mobsig/handover_context.hpp"
#include "mobsig/simulator.hpp"

namespace mobsig {

using Completion = std::function<void(Result)>;

enum class TunnelAction { start, stop };

struct ProtocolLatencies {
  Duration binding_rtt_us = 0;
  Duration fmip_oneway_us = 0;
  Duration jitter_us = 0;
};

/// Network side of the mobility protocols (home agent and access routers),
/// addressed as the "Env" entity.
class NetworkAgents : public Entity {
 public:
  NetworkAgents(Simulator& sim, ProtocolLatencies latencies);

  /// The target's access router advertises itself to the mobile (one-way latency).
  void solicit_proxy_advertisement(FlowId flow, const AccessId& target);

  void on_primitive(const Envelope& envelope) override;

  std::optional<Locator> binding(FlowId flow) const;
  bool tunnel_active(FlowId flow) const;
  const ProtocolLatencies& latencies() const { return latencies_; }

 private:
  Simulator& sim_;
  ProtocolLatencies latencies_;
  std::map<FlowId, Locator> bindings_;
  std::map<FlowId, bool> tunnels_;
};

/// A handover protocol daemon of the mobility toolbox.
class HandoverDaemon {
 public:
  virtual ~HandoverDaemon() = default;

  virtual std::string_view tool_name() const = 0;
  virtual bool supports_preparation() const { return false; }

  /// Only meaningful when supports_preparation(); the default fails.
  virtual void prepare(const HandoverContext& ctx, Completion done);
  /// Rebind the flow to `locator`: BindingUpdate, then BindingAck one round trip later.
  virtual void update_binding(const HandoverContext& ctx, const Locator& locator,
                              Completion done) = 0;
  /// Only meaningful for tunnelling daemons; the default fails.
  virtual Result tunnel(const HandoverContext& ctx, TunnelAction action);

  /// Messages from the network side for a flow this daemon serves.
  virtual void on_primitive(const Envelope& envelope) = 0;
};

/// Mobile-IP-style binding update.
class MipDaemon : public HandoverDaemon {
 public:
  MipDaemon(Simulator& sim, Environment& env, NetworkAgents& network);

  std::string_view tool_name() const override { return "mip"; }
  void update_binding(const HandoverContext& ctx, const Locator& locator,
                      Completion done) override;
  void on_primitive(const Envelope& envelope) override;

 protected:
  virtual bool locator_usable(FlowId flow, const Locator& locator) const;
  virtual void binding_acknowledged(FlowId) {}

  Simulator& sim_;
  Environment& env_;
  NetworkAgents& network_;

 private:
  std::map<FlowId, Completion> pending_bindings_;
};

struct FmipState {
  std::optional<AccessId> prepared_for;
  bool tunnel_active = false;
  bool binding_acked = false;
};

/// Fast Mobile IP: preparation over the current link, then a forwarding
/// tunnel from the previous access router while the binding is updated.
class FmipDaemon : public MipDaemon {
 public:
  using MipDaemon::MipDaemon;

  std::string_view tool_name() const override { return "fmip"; }
  bool supports_preparation() const override { return true; }

  void prepare(const HandoverContext& ctx, Completion done) override;
  Result tunnel(const HandoverContext& ctx, TunnelAction action) override;
  void on_primitive(const Envelope& envelope) override;

  bool prepared(FlowId flow, const AccessId& target) const;
  const FmipState* state(FlowId flow) const;

 protected:
  bool locator_usable(FlowId flow, const Locator& locator) const override;
  void binding_acknowledged(FlowId flow) override;

 private:
  struct Preparation {
    AccessId current;
    AccessId target;
    Completion done;
  };

  std::map<FlowId, FmipState> states_;
  std::map<FlowId, Preparation> preparing_;
};

/// Registry of daemons keyed by tool name; also the "Daemon" entity, routing
/// deliveries to the daemon currently serving each flow.
class Toolbox : public Entity {
 public:
  void add(std::string tool, std::shared_ptr<HandoverDaemon> daemon);
  /// Throws std::out_of_range for unregistered tools.
  HandoverDaemon& get(std::string_view tool) const;
  bool has(std::string_view tool) const;

  /// Bind `flow` to the daemon registered for `tool`.
  HandoverDaemon& acquire(FlowId flow, std::string_view tool);
  void release(FlowId flow);

  void on_primitive(const Envelope& envelope) override;

 private:
  std::map<std::string, std::shared_ptr<HandoverDaemon>, std::less<>> daemons_;
  std::map<FlowId, HandoverDaemon*> active_;
};

}  // namespace mobsig
