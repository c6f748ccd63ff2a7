#include "mobsig/scenario.hpp"

#include <fstream>
#include <set>

namespace mobsig {

ScenarioError::ScenarioError(std::string path, const std::string& message)
    : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

PathModel ScenarioConfig::path_model() const {
  PathModel model;
  for (const auto& e : path_models) model.set(e.access, e.descriptor);
  return model;
}

FlowTable ScenarioConfig::flow_table() const {
  FlowTable table;
  for (const auto& f : flows) table[f.id] = f.requested;
  return table;
}

namespace {

using nlohmann::json;

/// A JSON node together with its path from the document root.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& message) const { throw ScenarioError(path_, message); }

  const json& raw() const { return value_; }
  const std::string& path() const { return path_; }

  Node field(const char* name) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(name);
    if (it == value_.end()) throw ScenarioError(join(name), "missing required field");
    return Node(*it, join(name));
  }
  std::optional<Node> optional_field(const char* name) const {
    if (!value_.is_object()) fail("expected an object");
    auto it = value_.find(name);
    if (it == value_.end()) return std::nullopt;
    return Node(*it, join(name));
  }
  std::vector<Node> items() const {
    if (!value_.is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < value_.size(); ++i) {
      out.emplace_back(value_[i], path_ + "[" + std::to_string(i) + "]");
    }
    return out;
  }

  std::uint64_t uint() const {
    if (!value_.is_number_unsigned()) fail("expected a non-negative integer");
    return value_.get<std::uint64_t>();
  }
  double number() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }
  bool boolean() const {
    if (!value_.is_boolean()) fail("expected a boolean");
    return value_.get<bool>();
  }
  std::string text() const {
    if (!value_.is_string()) fail("expected a string");
    std::string s = value_.get<std::string>();
    if (s.empty()) fail("must not be empty");
    return s;
  }

 private:
  std::string join(const char* name) const { return path_.empty() ? name : path_ + "." + name; }

  const json& value_;
  std::string path_;
};

Position position(const Node& n) {
  auto xy = n.items();
  if (xy.size() != 2) n.fail("expected [x, y]");
  return {xy[0].number(), xy[1].number()};
}

QosSpec qos(const Node& n) {
  return {n.field("bandwidth_kbps").uint(), n.field("max_latency_ms").uint()};
}

Cell cell(const Node& n) {
  Cell c;
  c.access = {n.field("cell_id").text(), n.field("network_id").text(), n.field("rat").text()};
  c.center = position(n.field("center"));
  c.radius_m = n.field("radius_m").number();
  if (!(c.radius_m > 0.0)) n.field("radius_m").fail("must be positive");
  c.link_setup_us = n.field("link_setup_us").uint();
  c.link_teardown_us = n.field("link_teardown_us").uint();
  c.locator_config_us = n.field("locator_config_us").uint();
  c.supports_fmip = n.field("supports_fmip").boolean();
  c.capacity_qos = qos(n.field("capacity"));
  return c;
}

MrrmPolicy policy(const Node& n) {
  MrrmPolicy p;
  if (auto f = n.optional_field("forbidden_networks")) {
    for (const auto& item : f->items()) p.forbidden_networks.insert(item.text());
  }
  auto unit = [](const Node& v) {
    const double d = v.number();
    if (d < 0.0 || d > 1.0) v.fail("must lie in [0, 1]");
    return d;
  };
  if (auto f = n.optional_field("min_radio_score")) p.min_radio_score = unit(*f);
  if (auto f = n.optional_field("hysteresis")) {
    p.hysteresis = f->number();
    if (p.hysteresis < 0.0) f->fail("must be >= 0");
  }
  if (auto f = n.optional_field("weight_radio")) p.weight_radio = unit(*f);
  if (auto f = n.optional_field("weight_path")) p.weight_path = unit(*f);
  if (auto f = n.optional_field("mbb_capable")) p.mbb_capable = f->boolean();
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    n.fail(e.what());
  }
  return p;
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  const Node root(doc, "");
  if (!doc.is_object()) throw ScenarioError("$", "scenario must be a JSON object");

  ScenarioConfig cfg;
  cfg.seed = root.field("seed").uint();
  cfg.scan_period_us = root.field("scan_period_us").uint();
  if (cfg.scan_period_us == 0) root.field("scan_period_us").fail("must be positive");

  std::set<std::pair<std::string, std::string>> seen;
  const Node cells = root.field("cells");
  for (const auto& item : cells.items()) {
    Cell c = cell(item);
    if (!seen.insert({c.access.network_id, c.access.cell_id}).second) {
      item.fail("duplicate access " + c.access.label());
    }
    cfg.cells.push_back(std::move(c));
  }
  if (cfg.cells.empty()) cells.fail("at least one cell is required");

  std::vector<Waypoint> waypoints;
  const Node trajectory = root.field("trajectory");
  for (const auto& item : trajectory.items()) {
    Waypoint w{item.field("t_us").uint(), position(item.field("pos"))};
    if (!waypoints.empty() && w.at <= waypoints.back().at) {
      item.field("t_us").fail("waypoint times must strictly increase");
    }
    waypoints.push_back(w);
  }
  if (waypoints.empty()) trajectory.fail("at least one waypoint is required");
  cfg.trajectory = Trajectory(std::move(waypoints));

  cfg.duration_us = cfg.trajectory.end_time();
  if (auto d = root.optional_field("duration_us")) cfg.duration_us = d->uint();

  cfg.policy = policy(root.field("policy"));

  std::set<std::pair<std::string, std::string>> modelled;
  for (const auto& item : root.field("path_models").items()) {
    PathModelEntry e;
    e.access.cell_id = item.field("cell_id").text();
    e.access.network_id = item.field("network_id").text();
    const auto key = std::pair{e.access.network_id, e.access.cell_id};
    if (!seen.contains(key)) item.fail("path model for undefined access " + e.access.label());
    if (!modelled.insert(key).second) item.fail("duplicate path model for " + e.access.label());
    e.descriptor.bottleneck_bandwidth_kbps = item.field("bottleneck_bandwidth_kbps").uint();
    e.descriptor.path_latency_ms = item.field("path_latency_ms").uint();
    if (auto allowed = item.optional_field("policy_allowed")) e.descriptor.policy_allowed = allowed->boolean();
    cfg.path_models.push_back(std::move(e));
  }

  const Node lat = root.field("latencies");
  cfg.latencies.binding_rtt_us = lat.field("binding_rtt_us").uint();
  cfg.latencies.fmip_oneway_us = lat.field("fmip_oneway_us").uint();
  if (auto j = lat.optional_field("jitter_us")) cfg.latencies.jitter_us = j->uint();

  std::set<std::uint64_t> ids;
  const Node flows = root.field("flows");
  for (const auto& item : flows.items()) {
    FlowDeclaration f;
    f.id = FlowId{item.field("id").uint()};
    if (!ids.insert(f.id.value).second) item.field("id").fail("duplicate flow id");
    f.requested = qos(item.field("qos"));
    if (auto s = item.optional_field("start_us")) f.start = s->uint();
    cfg.flows.push_back(f);
  }
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ScenarioError("$", "cannot read " + file.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("$", std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

}  // namespace mobsig
