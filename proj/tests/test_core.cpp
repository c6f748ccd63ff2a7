#include <doctest.h>

#include <set>
#include <sstream>

#include "mobsig/primitive.hpp"
#include "mobsig/trace.hpp"

using namespace mobsig;

namespace {

const AccessId kA{"umts-1", "operator-3g", "umts"};
const AccessId kB{"wlan-1", "hotspot", "wlan"};
const Locator kLoc{"hotspot/wlan-1/3", kB, LocatorKind::care_of};

// One non-default sample per alternative; a missing overload fails to compile,
// which keeps the round-trip enumeration exhaustive.
Primitive sample(std::type_identity<ConstraintRequest>) { return ConstraintRequest{FlowId{3}, {kA, kB}}; }
Primitive sample(std::type_identity<ConstraintResponse>) {
  return ConstraintResponse{{{kA, 0.25}, {kB, 1.0}}};
}
Primitive sample(std::type_identity<HOExecutionRequest>) { return HOExecutionRequest{FlowId{3}, kA, kB, true}; }
Primitive sample(std::type_identity<HOComplete>) { return HOComplete{Result::failure("link_lost")}; }
Primitive sample(std::type_identity<LinkAttachRequest>) { return LinkAttachRequest{FlowId{3}, kB, {1000, 50}}; }
Primitive sample(std::type_identity<LinkSwitchRequest>) {
  return LinkSwitchRequest{FlowId{3}, kA, kB, {1000, 50}};
}
Primitive sample(std::type_identity<LinkAttachResponse>) {
  return LinkAttachResponse{Result::success(), {384, 100}};
}
Primitive sample(std::type_identity<LinkSwitchResponse>) {
  return LinkSwitchResponse{Result::failure("out_of_coverage"), {}};
}
Primitive sample(std::type_identity<LinkDetachRequest>) { return LinkDetachRequest{FlowId{3}, kA}; }
Primitive sample(std::type_identity<LinkDetachResponse>) { return LinkDetachResponse{Result::success()}; }
Primitive sample(std::type_identity<PathSelect>) { return PathSelect{FlowId{3}, kB, true}; }
Primitive sample(std::type_identity<PathSelected>) { return PathSelected{Result::success(), kLoc}; }
Primitive sample(std::type_identity<AccessFlowSetup>) { return AccessFlowSetup{FlowId{3}, {64, 300}}; }
Primitive sample(std::type_identity<AccessFlowSetupResponse>) {
  return AccessFlowSetupResponse{Result::success(), {64, 300}};
}
Primitive sample(std::type_identity<HandoverOccurred>) { return HandoverOccurred{FlowId{3}, {1000, 20}}; }
Primitive sample(std::type_identity<HandoverOccurredResponse>) {
  return HandoverOccurredResponse{Result::failure("unknown_flow")};
}
Primitive sample(std::type_identity<ProxyRouterAdvertisement>) { return ProxyRouterAdvertisement{FlowId{3}, kB}; }
Primitive sample(std::type_identity<FastBindingUpdate>) { return FastBindingUpdate{FlowId{3}, kA, kB}; }
Primitive sample(std::type_identity<FastBindingAck>) { return FastBindingAck{FlowId{3}, Result::success()}; }
Primitive sample(std::type_identity<BindingUpdate>) { return BindingUpdate{FlowId{3}, kLoc}; }
Primitive sample(std::type_identity<BindingAck>) { return BindingAck{FlowId{3}, Result::success()}; }
Primitive sample(std::type_identity<TunnelStart>) { return TunnelStart{FlowId{3}, kA, kB}; }
Primitive sample(std::type_identity<TunnelStop>) { return TunnelStop{FlowId{3}}; }

template <std::size_t... I>
std::vector<Primitive> all_samples(std::index_sequence<I...>) {
  return {sample(std::type_identity<std::variant_alternative_t<I, Primitive>>{})...};
}

std::vector<Primitive> every_primitive() {
  return all_samples(std::make_index_sequence<std::variant_size_v<Primitive>>{});
}

}  // namespace

TEST_CASE("qos_satisfies compares both dimensions") {
  CHECK(qos_satisfies({1000, 50}, {1000, 50}));
  CHECK_FALSE(qos_satisfies({500, 50}, {1000, 50}));
  CHECK(qos_satisfies({2000, 20}, {1000, 50}));
  CHECK_FALSE(qos_satisfies({2000, 60}, {1000, 50}));
}

TEST_CASE("Result text form") {
  CHECK(Result::success().to_string() == "success");
  CHECK(Result::failure("busy").to_string() == "failure(busy)");
  CHECK(Result::parse("failure(not_attached)") == Result::failure("not_attached"));
  CHECK(Result::parse("success") == Result::success());
  CHECK_FALSE(Result::parse("failure()").has_value());
  CHECK_FALSE(Result::parse("ok").has_value());
  CHECK_THROWS_AS(Result::failure(""), ContractViolation);
}

TEST_CASE("AccessId ordering is network first, then cell") {
  const AccessId a{"z", "alpha", "wlan"};
  const AccessId b{"a", "beta", "wlan"};
  CHECK(a < b);
  CHECK(kA.label() == "operator-3g/umts-1");
  CHECK_FALSE(AccessId{"", "n", "r"}.valid());
}

TEST_CASE("primitive names") {
  CHECK(primitive_name(HOComplete{Result::success()}) == "HOComplete");
  CHECK(primitive_name(PathSelect{FlowId{1}, kA, false}) == "PathSelect");
  CHECK(primitive_name(LinkDetachResponse{Result::success()}) == "LinkDetachResponse");

  CHECK(all_primitive_names().size() == std::variant_size_v<Primitive>);
  CHECK(sap_primitive_names().size() == 16);
  std::set<std::string_view> unique(all_primitive_names().begin(), all_primitive_names().end());
  CHECK(unique.size() == all_primitive_names().size());
  for (auto n : sap_primitive_names()) {
    CHECK(is_sap_primitive(n));
    CHECK(n.find(' ') == std::string_view::npos);
  }
  CHECK_FALSE(is_sap_primitive("BindingUpdate"));
  CHECK(is_primitive_name("BindingUpdate"));
  CHECK_FALSE(is_primitive_name("AccessSets"));
}

TEST_CASE("request_for pairs each response with its request") {
  CHECK(request_for("HOComplete") == "HOExecutionRequest");
  CHECK(request_for("PathSelected") == "PathSelect");
  CHECK(request_for("LinkSwitchResponse") == "LinkSwitchRequest");
  CHECK(request_for("AccessFlowSetupResponse") == "AccessFlowSetup");
  CHECK(request_for("HandoverOccurredResponse") == "HandoverOccurred");
  CHECK_FALSE(request_for("BindingAck").has_value());
  CHECK_FALSE(request_for("PathSelect").has_value());
}

TEST_CASE("link commands") {
  for (auto n : {"LinkAttachRequest", "LinkSwitchRequest", "LinkDetachRequest", "LinkAttachResponse",
                 "LinkSwitchResponse", "LinkDetachResponse"}) {
    CHECK(is_link_command(n));
  }
  CHECK_FALSE(is_link_command("PathSelect"));
}

TEST_CASE("flow_of follows the parameter list") {
  CHECK(flow_of(LinkDetachRequest{FlowId{9}, kA}) == FlowId{9});
  CHECK_FALSE(flow_of(HOComplete{Result::success()}).has_value());
  CHECK(flow_of(TunnelStop{FlowId{4}}) == FlowId{4});
}

TEST_CASE("every primitive survives encode/decode and a trace line round trip") {
  const auto all = every_primitive();
  REQUIRE(all.size() == std::variant_size_v<Primitive>);
  for (std::size_t i = 0; i < all.size(); ++i) {
    const Primitive& p = all[i];
    CAPTURE(primitive_name(p));
    CHECK(p.index() == i);
    CHECK(decode_primitive(primitive_name(p), encode_params(p)) == p);

    const TraceRecord rec = make_record(1234, "HOLM", "MRRM", p);
    const std::string line = to_jsonl_line(rec);
    const TraceRecord back = parse_trace_line(line, 1);
    CHECK(back == rec);
    CHECK(to_jsonl_line(back) == line);
  }
}

TEST_CASE("trace lines have exactly the five fields in fixed order") {
  const TraceRecord rec = make_record(7, "MRRM", "HOLM", HOExecutionRequest{FlowId{1}, std::nullopt, kB, false});
  const std::string line = to_jsonl_line(rec);
  CHECK(line.rfind(R"({"t":7,"from":"MRRM","to":"HOLM","msg":"HOExecutionRequest","params":{)", 0) == 0);
  CHECK(line.find(R"("current":null)") != std::string::npos);
  // Keys inside params are sorted.
  CHECK(line.find("\"current\"") < line.find("\"flow\""));
  CHECK(line.find("\"flow\"") < line.find("\"mbb_flag\""));
  CHECK(line.find("\"mbb_flag\"") < line.find("\"target\""));
}

TEST_CASE("trace parsing rejects malformed lines with their line number") {
  CHECK_THROWS_AS(parse_trace_line("not json", 4), TraceParseError);
  CHECK_THROWS_AS(parse_trace_line(R"({"t":1,"from":"a","to":"b","msg":"m"})", 2), TraceParseError);
  CHECK_THROWS_AS(parse_trace_line(R"({"t":1,"from":"a","to":"b","msg":"m","params":{},"x":1})", 2),
                  TraceParseError);
  CHECK_THROWS_AS(parse_trace_line(R"({"t":-1,"from":"a","to":"b","msg":"m","params":{}})", 2),
                  TraceParseError);

  std::istringstream in(std::string(R"({"t":1,"from":"a","to":"b","msg":"m","params":{}})") + "\n\nbad\n");
  try {
    read_trace(in);
    FAIL("expected a parse error");
  } catch (const TraceParseError& e) {
    CHECK(e.line() == 2);
  }

  std::istringstream ok(std::string(R"({"t":1,"from":"a","to":"b","msg":"m","params":{}})") + "\n");
  CHECK(read_trace(ok).size() == 1);
}

TEST_CASE("decode rejects unknown names and missing parameters") {
  CHECK_THROWS_AS(decode_primitive("Teleport", nlohmann::json::object()), std::invalid_argument);
  CHECK_THROWS_AS(decode_primitive("LinkDetachRequest", {{"flow", 1}}), std::invalid_argument);
}
