#include "mobsig/core.hpp"

#include <algorithm>
#include <array>

#include "mobsig/primitive.hpp"

namespace mobsig {

bool qos_satisfies(const QosSpec& granted, const QosSpec& requested) {
  return granted.bandwidth_kbps >= requested.bandwidth_kbps &&
         granted.max_latency_ms <= requested.max_latency_ms;
}

std::string_view to_string(LocatorKind kind) {
  switch (kind) {
    case LocatorKind::local: return "local";
    case LocatorKind::home: return "home";
    case LocatorKind::care_of: return "care_of";
  }
  return "care_of";
}

std::optional<LocatorKind> parse_locator_kind(std::string_view text) {
  if (text == "local") return LocatorKind::local;
  if (text == "home") return LocatorKind::home;
  if (text == "care_of") return LocatorKind::care_of;
  return std::nullopt;
}

bool AccessSets::nested() const {
  auto subset = [](const AccessSet& inner, const AccessSet& outer) {
    return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
  };
  return aas.size() <= 1 && subset(aas, cas) && subset(cas, das) && subset(das, scanned);
}

Result Result::failure(std::string reason) {
  if (reason.empty()) throw ContractViolation("failure result needs a reason");
  Result r;
  r.reason_ = std::move(reason);
  return r;
}

const std::string& Result::reason() const {
  static const std::string none;
  return reason_ ? *reason_ : none;
}

std::string Result::to_string() const {
  return ok() ? std::string("success") : "failure(" + *reason_ + ")";
}

std::optional<Result> Result::parse(std::string_view text) {
  if (text == "success") return success();
  constexpr std::string_view prefix = "failure(";
  if (text.size() > prefix.size() + 1 && text.substr(0, prefix.size()) == prefix &&
      text.back() == ')') {
    return failure(std::string(text.substr(prefix.size(), text.size() - prefix.size() - 1)));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

template <typename... Ts>
constexpr auto names_of(std::variant<Ts...>*) {
  return std::array<std::string_view, sizeof...(Ts)>{Ts::name...};
}

constexpr auto kAllNames = names_of(static_cast<Primitive*>(nullptr));
constexpr std::size_t kSapCount = 16;

constexpr std::array<std::pair<std::string_view, std::string_view>, 8> kResponseOf{{
    {"ConstraintResponse", "ConstraintRequest"},
    {"HOComplete", "HOExecutionRequest"},
    {"LinkAttachResponse", "LinkAttachRequest"},
    {"LinkSwitchResponse", "LinkSwitchRequest"},
    {"LinkDetachResponse", "LinkDetachRequest"},
    {"PathSelected", "PathSelect"},
    {"AccessFlowSetupResponse", "AccessFlowSetup"},
    {"HandoverOccurredResponse", "HandoverOccurred"},
}};

template <typename T>
concept HasFlow = requires(const T& t) { t.flow; };

}  // namespace

std::string_view primitive_name(const Primitive& p) {
  return std::visit([](const auto& m) { return std::decay_t<decltype(m)>::name; }, p);
}

std::optional<FlowId> flow_of(const Primitive& p) {
  return std::visit(
      [](const auto& m) -> std::optional<FlowId> {
        if constexpr (HasFlow<std::decay_t<decltype(m)>>) {
          return m.flow;
        } else {
          return std::nullopt;
        }
      },
      p);
}

std::span<const std::string_view> all_primitive_names() { return kAllNames; }

std::span<const std::string_view> sap_primitive_names() {
  return std::span<const std::string_view>(kAllNames).first(kSapCount);
}

bool is_primitive_name(std::string_view name) {
  return std::find(kAllNames.begin(), kAllNames.end(), name) != kAllNames.end();
}

bool is_sap_primitive(std::string_view name) {
  auto sap = sap_primitive_names();
  return std::find(sap.begin(), sap.end(), name) != sap.end();
}

bool is_link_command(std::string_view name) {
  return name == "LinkAttachRequest" || name == "LinkAttachResponse" ||
         name == "LinkSwitchRequest" || name == "LinkSwitchResponse" ||
         name == "LinkDetachRequest" || name == "LinkDetachResponse";
}

std::optional<std::string_view> request_for(std::string_view response_name) {
  for (const auto& [resp, req] : kResponseOf) {
    if (resp == response_name) return req;
  }
  return std::nullopt;
}

}  // namespace mobsig
