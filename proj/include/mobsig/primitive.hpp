#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "mobsig/core.hpp"

namespace mobsig {

// Service primitives exchanged between the functional entities. Each case
// carries exactly the parameters of its SAP row; Locator/QosSpec/Result are
// the rendered parameter types.

// Constraint Selection SAP (MRRM <-> Path Selection)
struct ConstraintRequest {
  static constexpr std::string_view name = "ConstraintRequest";
  FlowId flow;
  std::vector<AccessId> candidates;
  friend bool operator==(const ConstraintRequest&, const ConstraintRequest&) = default;
};

struct ConstraintResponse {
  static constexpr std::string_view name = "ConstraintResponse";
  std::vector<PathRating> ratings;
  friend bool operator==(const ConstraintResponse&, const ConstraintResponse&) = default;
};

// HO Execution SAP (MRRM <-> HOLM)
struct HOExecutionRequest {
  static constexpr std::string_view name = "HOExecutionRequest";
  FlowId flow;
  std::optional<AccessId> current;  // absent for communication establishment
  AccessId target;
  bool mbb_flag = false;
  friend bool operator==(const HOExecutionRequest&, const HOExecutionRequest&) = default;
};

struct HOComplete {
  static constexpr std::string_view name = "HOComplete";
  Result result;
  friend bool operator==(const HOComplete&, const HOComplete&) = default;
};

struct LinkAttachRequest {
  static constexpr std::string_view name = "LinkAttachRequest";
  FlowId flow;
  AccessId target;
  QosSpec requested_qos;
  friend bool operator==(const LinkAttachRequest&, const LinkAttachRequest&) = default;
};

struct LinkSwitchRequest {
  static constexpr std::string_view name = "LinkSwitchRequest";
  FlowId flow;
  AccessId current;
  AccessId target;
  QosSpec requested_qos;
  friend bool operator==(const LinkSwitchRequest&, const LinkSwitchRequest&) = default;
};

struct LinkAttachResponse {
  static constexpr std::string_view name = "LinkAttachResponse";
  Result result;
  QosSpec granted_qos;
  friend bool operator==(const LinkAttachResponse&, const LinkAttachResponse&) = default;
};

struct LinkSwitchResponse {
  static constexpr std::string_view name = "LinkSwitchResponse";
  Result result;
  QosSpec granted_qos;
  friend bool operator==(const LinkSwitchResponse&, const LinkSwitchResponse&) = default;
};

struct LinkDetachRequest {
  static constexpr std::string_view name = "LinkDetachRequest";
  FlowId flow;
  AccessId current;
  friend bool operator==(const LinkDetachRequest&, const LinkDetachRequest&) = default;
};

struct LinkDetachResponse {
  static constexpr std::string_view name = "LinkDetachResponse";
  Result result;
  friend bool operator==(const LinkDetachResponse&, const LinkDetachResponse&) = default;
};

// Path Query SAP (HOLM <-> Path Selection)
struct PathSelect {
  static constexpr std::string_view name = "PathSelect";
  FlowId flow;
  AccessId target;
  bool fmip_flag = false;
  friend bool operator==(const PathSelect&, const PathSelect&) = default;
};

struct PathSelected {
  static constexpr std::string_view name = "PathSelected";
  Result result;
  std::optional<Locator> new_locator;  // present iff result is success
  friend bool operator==(const PathSelected&, const PathSelected&) = default;
};

// MRRM Services Interface SAP (MRRM <-> Flow Management)
struct AccessFlowSetup {
  static constexpr std::string_view name = "AccessFlowSetup";
  FlowId flow;
  QosSpec requested_qos;
  friend bool operator==(const AccessFlowSetup&, const AccessFlowSetup&) = default;
};

struct AccessFlowSetupResponse {
  static constexpr std::string_view name = "AccessFlowSetupResponse";
  Result result;
  QosSpec granted_qos;
  friend bool operator==(const AccessFlowSetupResponse&, const AccessFlowSetupResponse&) = default;
};

struct HandoverOccurred {
  static constexpr std::string_view name = "HandoverOccurred";
  FlowId flow;
  QosSpec provided_qos;
  friend bool operator==(const HandoverOccurred&, const HandoverOccurred&) = default;
};

struct HandoverOccurredResponse {
  static constexpr std::string_view name = "HandoverOccurredResponse";
  Result result;
  friend bool operator==(const HandoverOccurredResponse&, const HandoverOccurredResponse&) = default;
};

// Protocol-internal messages of the mobility daemons. These are extensions
// to the SAP vocabulary and always carry the flow they belong to.
struct ProxyRouterAdvertisement {
  static constexpr std::string_view name = "ProxyRouterAdvertisement";
  FlowId flow;
  AccessId target;
  friend bool operator==(const ProxyRouterAdvertisement&, const ProxyRouterAdvertisement&) = default;
};

struct FastBindingUpdate {
  static constexpr std::string_view name = "FastBindingUpdate";
  FlowId flow;
  AccessId current;
  AccessId target;
  friend bool operator==(const FastBindingUpdate&, const FastBindingUpdate&) = default;
};

struct FastBindingAck {
  static constexpr std::string_view name = "FastBindingAck";
  FlowId flow;
  Result result;
  friend bool operator==(const FastBindingAck&, const FastBindingAck&) = default;
};

struct BindingUpdate {
  static constexpr std::string_view name = "BindingUpdate";
  FlowId flow;
  Locator locator;
  friend bool operator==(const BindingUpdate&, const BindingUpdate&) = default;
};

struct BindingAck {
  static constexpr std::string_view name = "BindingAck";
  FlowId flow;
  Result result;
  friend bool operator==(const BindingAck&, const BindingAck&) = default;
};

struct TunnelStart {
  static constexpr std::string_view name = "TunnelStart";
  FlowId flow;
  AccessId previous;
  AccessId target;
  friend bool operator==(const TunnelStart&, const TunnelStart&) = default;
};

struct TunnelStop {
  static constexpr std::string_view name = "TunnelStop";
  FlowId flow;
  friend bool operator==(const TunnelStop&, const TunnelStop&) = default;
};

using Primitive =
    std::variant<ConstraintRequest, ConstraintResponse, HOExecutionRequest, HOComplete,
                 LinkAttachRequest, LinkSwitchRequest, LinkAttachResponse, LinkSwitchResponse,
                 LinkDetachRequest, LinkDetachResponse, PathSelect, PathSelected, AccessFlowSetup,
                 AccessFlowSetupResponse, HandoverOccurred, HandoverOccurredResponse,
                 ProxyRouterAdvertisement, FastBindingUpdate, FastBindingAck, BindingUpdate,
                 BindingAck, TunnelStart, TunnelStop>;

/// Canonical trace name of the primitive (its SAP spelling without spaces).
std::string_view primitive_name(const Primitive& p);

/// Flow parameter of the primitive, if its parameter list has one.
std::optional<FlowId> flow_of(const Primitive& p);

/// Every primitive name, SAP primitives first, in declaration order.
std::span<const std::string_view> all_primitive_names();
/// The sixteen SAP primitives (excludes the daemon-internal messages).
std::span<const std::string_view> sap_primitive_names();

bool is_primitive_name(std::string_view name);
bool is_sap_primitive(std::string_view name);
bool is_link_command(std::string_view name);

/// For a response primitive, the name of the request it answers.
std::optional<std::string_view> request_for(std::string_view response_name);

}  // namespace mobsig
