#include "mobsig/trace.hpp"

#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mobsig {

using nlohmann::json;

TraceParseError::TraceParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

void to_json(json& j, const FlowId& f) { j = f.value; }
void from_json(const json& j, FlowId& f) { f.value = j.get<std::uint64_t>(); }

void to_json(json& j, const AccessId& a) {
  j = json{{"cell", a.cell_id}, {"network", a.network_id}, {"rat", a.rat}};
}
void from_json(const json& j, AccessId& a) {
  a.cell_id = j.at("cell").get<std::string>();
  a.network_id = j.at("network").get<std::string>();
  a.rat = j.at("rat").get<std::string>();
}

void to_json(json& j, const QosSpec& q) {
  j = json{{"bandwidth_kbps", q.bandwidth_kbps}, {"max_latency_ms", q.max_latency_ms}};
}
void from_json(const json& j, QosSpec& q) {
  q.bandwidth_kbps = j.at("bandwidth_kbps").get<std::uint64_t>();
  q.max_latency_ms = j.at("max_latency_ms").get<std::uint64_t>();
}

void to_json(json& j, const Locator& l) {
  j = json{{"address", l.address}, {"access", l.access}, {"kind", std::string(to_string(l.kind))}};
}
void from_json(const json& j, Locator& l) {
  l.address = j.at("address").get<std::string>();
  l.access = j.at("access").get<AccessId>();
  auto kind = parse_locator_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("bad locator kind");
  l.kind = *kind;
}

void to_json(json& j, const Result& r) { j = r.to_string(); }
void from_json(const json& j, Result& r) {
  auto parsed = Result::parse(j.get<std::string>());
  if (!parsed) throw std::invalid_argument("bad result: " + j.dump());
  r = *parsed;
}

namespace {

json path_rating_to(const PathRating& r) { return json{{"access", r.access}, {"rating", r.score}}; }

PathRating path_rating_from(const json& j) {
  return PathRating{j.at("access").get<AccessId>(), j.at("rating").get<double>()};
}

template <typename T>
std::optional<T> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<T>();
}

json optional_to(const auto& value) { return value ? json(*value) : json(nullptr); }

json encode(const ConstraintRequest& m) {
  return {{"flow", m.flow}, {"candidates", m.candidates}};
}
json encode(const ConstraintResponse& m) {
  json ratings = json::array();
  for (const auto& r : m.ratings) ratings.push_back(path_rating_to(r));
  return {{"ratings", ratings}};
}
json encode(const HOExecutionRequest& m) {
  return {{"flow", m.flow},
          {"current", optional_to(m.current)},
          {"target", m.target},
          {"mbb_flag", m.mbb_flag}};
}
json encode(const HOComplete& m) { return {{"result", m.result}}; }
json encode(const LinkAttachRequest& m) {
  return {{"flow", m.flow}, {"target", m.target}, {"requested_qos", m.requested_qos}};
}
json encode(const LinkSwitchRequest& m) {
  return {{"flow", m.flow},
          {"current", m.current},
          {"target", m.target},
          {"requested_qos", m.requested_qos}};
}
json encode(const LinkAttachResponse& m) {
  return {{"result", m.result}, {"granted_qos", m.granted_qos}};
}
json encode(const LinkSwitchResponse& m) {
  return {{"result", m.result}, {"granted_qos", m.granted_qos}};
}
json encode(const LinkDetachRequest& m) { return {{"flow", m.flow}, {"current", m.current}}; }
json encode(const LinkDetachResponse& m) { return {{"result", m.result}}; }
json encode(const PathSelect& m) {
  return {{"flow", m.flow}, {"target", m.target}, {"fmip_flag", m.fmip_flag}};
}
json encode(const PathSelected& m) {
  return {{"result", m.result}, {"new_locator", optional_to(m.new_locator)}};
}
json encode(const AccessFlowSetup& m) {
  return {{"flow", m.flow}, {"requested_qos", m.requested_qos}};
}
json encode(const AccessFlowSetupResponse& m) {
  return {{"result", m.result}, {"granted_qos", m.granted_qos}};
}
json encode(const HandoverOccurred& m) {
  return {{"flow", m.flow}, {"provided_qos", m.provided_qos}};
}
json encode(const HandoverOccurredResponse& m) { return {{"result", m.result}}; }
json encode(const ProxyRouterAdvertisement& m) {
  return {{"flow", m.flow}, {"target", m.target}};
}
json encode(const FastBindingUpdate& m) {
  return {{"flow", m.flow}, {"current", m.current}, {"target", m.target}};
}
json encode(const FastBindingAck& m) { return {{"flow", m.flow}, {"result", m.result}}; }
json encode(const BindingUpdate& m) { return {{"flow", m.flow}, {"locator", m.locator}}; }
json encode(const BindingAck& m) { return {{"flow", m.flow}, {"result", m.result}}; }
json encode(const TunnelStart& m) {
  return {{"flow", m.flow}, {"previous", m.previous}, {"target", m.target}};
}
json encode(const TunnelStop& m) { return {{"flow", m.flow}}; }

using Decoder = std::function<Primitive(const json&)>;

const std::map<std::string_view, Decoder>& decoders() {
  static const std::map<std::string_view, Decoder> table{
      {ConstraintRequest::name,
       [](const json& p) -> Primitive {
         return ConstraintRequest{p.at("flow").get<FlowId>(),
                                  p.at("candidates").get<std::vector<AccessId>>()};
       }},
      {ConstraintResponse::name,
       [](const json& p) -> Primitive {
         ConstraintResponse m;
         for (const auto& r : p.at("ratings")) m.ratings.push_back(path_rating_from(r));
         return m;
       }},
      {HOExecutionRequest::name,
       [](const json& p) -> Primitive {
         return HOExecutionRequest{p.at("flow").get<FlowId>(),
                                   optional_from<AccessId>(p.at("current")),
                                   p.at("target").get<AccessId>(), p.at("mbb_flag").get<bool>()};
       }},
      {HOComplete::name,
       [](const json& p) -> Primitive { return HOComplete{p.at("result").get<Result>()}; }},
      {LinkAttachRequest::name,
       [](const json& p) -> Primitive {
         return LinkAttachRequest{p.at("flow").get<FlowId>(), p.at("target").get<AccessId>(),
                                  p.at("requested_qos").get<QosSpec>()};
       }},
      {LinkSwitchRequest::name,
       [](const json& p) -> Primitive {
         return LinkSwitchRequest{p.at("flow").get<FlowId>(), p.at("current").get<AccessId>(),
                                  p.at("target").get<AccessId>(),
                                  p.at("requested_qos").get<QosSpec>()};
       }},
      {LinkAttachResponse::name,
       [](const json& p) -> Primitive {
         return LinkAttachResponse{p.at("result").get<Result>(),
                                   p.at("granted_qos").get<QosSpec>()};
       }},
      {LinkSwitchResponse::name,
       [](const json& p) -> Primitive {
         return LinkSwitchResponse{p.at("result").get<Result>(),
                                   p.at("granted_qos").get<QosSpec>()};
       }},
      {LinkDetachRequest::name,
       [](const json& p) -> Primitive {
         return LinkDetachRequest{p.at("flow").get<FlowId>(), p.at("current").get<AccessId>()};
       }},
      {LinkDetachResponse::name,
       [](const json& p) -> Primitive {
         return LinkDetachResponse{p.at("result").get<Result>()};
       }},
      {PathSelect::name,
       [](const json& p) -> Primitive {
         return PathSelect{p.at("flow").get<FlowId>(), p.at("target").get<AccessId>(),
                           p.at("fmip_flag").get<bool>()};
       }},
      {PathSelected::name,
       [](const json& p) -> Primitive {
         return PathSelected{p.at("result").get<Result>(),
                             optional_from<Locator>(p.at("new_locator"))};
       }},
      {AccessFlowSetup::name,
       [](const json& p) -> Primitive {
         return AccessFlowSetup{p.at("flow").get<FlowId>(), p.at("requested_qos").get<QosSpec>()};
       }},
      {AccessFlowSetupResponse::name,
       [](const json& p) -> Primitive {
         return AccessFlowSetupResponse{p.at("result").get<Result>(),
                                        p.at("granted_qos").get<QosSpec>()};
       }},
      {HandoverOccurred::name,
       [](const json& p) -> Primitive {
         return HandoverOccurred{p.at("flow").get<FlowId>(), p.at("provided_qos").get<QosSpec>()};
       }},
      {HandoverOccurredResponse::name,
       [](const json& p) -> Primitive {
         return HandoverOccurredResponse{p.at("result").get<Result>()};
       }},
      {ProxyRouterAdvertisement::name,
       [](const json& p) -> Primitive {
         return ProxyRouterAdvertisement{p.at("flow").get<FlowId>(),
                                         p.at("target").get<AccessId>()};
       }},
      {FastBindingUpdate::name,
       [](const json& p) -> Primitive {
         return FastBindingUpdate{p.at("flow").get<FlowId>(), p.at("current").get<AccessId>(),
                                  p.at("target").get<AccessId>()};
       }},
      {FastBindingAck::name,
       [](const json& p) -> Primitive {
         return FastBindingAck{p.at("flow").get<FlowId>(), p.at("result").get<Result>()};
       }},
      {BindingUpdate::name,
       [](const json& p) -> Primitive {
         return BindingUpdate{p.at("flow").get<FlowId>(), p.at("locator").get<Locator>()};
       }},
      {BindingAck::name,
       [](const json& p) -> Primitive {
         return BindingAck{p.at("flow").get<FlowId>(), p.at("result").get<Result>()};
       }},
      {TunnelStart::name,
       [](const json& p) -> Primitive {
         return TunnelStart{p.at("flow").get<FlowId>(), p.at("previous").get<AccessId>(),
                            p.at("target").get<AccessId>()};
       }},
      {TunnelStop::name,
       [](const json& p) -> Primitive { return TunnelStop{p.at("flow").get<FlowId>()}; }},
  };
  return table;
}

}  // namespace

json encode_params(const Primitive& p) {
  return std::visit([](const auto& m) { return encode(m); }, p);
}

Primitive decode_primitive(std::string_view name, const json& params) {
  const auto& table = decoders();
  auto it = table.find(name);
  if (it == table.end()) throw std::invalid_argument("unknown primitive " + std::string(name));
  try {
    return it->second(params);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string(name) + ": " + e.what());
  }
}

TraceRecord make_record(SimTime at, std::string_view from, std::string_view to,
                        const Primitive& p) {
  return TraceRecord{at, std::string(from), std::string(to), std::string(primitive_name(p)),
                     encode_params(p)};
}

std::string to_jsonl_line(const TraceRecord& r) {
  std::string line = "{\"t\":" + std::to_string(r.at);
  line += ",\"from\":" + json(r.from).dump();
  line += ",\"to\":" + json(r.to).dump();
  line += ",\"msg\":" + json(r.msg).dump();
  line += ",\"params\":" + r.params.dump();
  line += '}';
  return line;
}

TraceRecord parse_trace_line(std::string_view line, std::size_t line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TraceParseError(line_no, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || j.size() != 5) {
    throw TraceParseError(line_no, "record must be an object with exactly t, from, to, msg, params");
  }
  for (const char* key : {"t", "from", "to", "msg", "params"}) {
    if (!j.contains(key)) throw TraceParseError(line_no, std::string("missing field ") + key);
  }
  if (!j["t"].is_number_unsigned()) throw TraceParseError(line_no, "t must be a non-negative integer");
  for (const char* key : {"from", "to", "msg"}) {
    if (!j[key].is_string()) throw TraceParseError(line_no, std::string(key) + " must be a string");
  }
  if (!j["params"].is_object()) throw TraceParseError(line_no, "params must be an object");
  return TraceRecord{j["t"].get<SimTime>(), j["from"].get<std::string>(),
                     j["to"].get<std::string>(), j["msg"].get<std::string>(), j["params"]};
}

void write_trace(std::ostream& out, std::span<const TraceRecord> records) {
  for (const auto& r : records) out << to_jsonl_line(r) << '\n';
}

std::vector<TraceRecord> read_trace(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();

  std::vector<TraceRecord> records;
  records.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    records.push_back(parse_trace_line(lines[i], i + 1));
  }
  return records;
}

}  // namespace mobsig
