#include "mobsig/conformance.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <stdexcept>
#include <tuple>

namespace mobsig {

namespace {

std::vector<OrderRule> common_rules() {
  return {
      {"common.constraints_before_execution", "ConstraintResponse", "HOExecutionRequest"},
      {"common.execution_before_path", "HOExecutionRequest", "PathSelect"},
      {"common.path_request_before_answer", "PathSelect", "PathSelected"},
      {"common.locator_before_binding", "PathSelected", "BindingUpdate"},
      {"common.binding_acknowledged", "BindingUpdate", "BindingAck"},
      {"common.binding_before_complete", "BindingAck", "HOComplete"},
      {"common.complete_before_indication", "HOComplete", "HandoverOccurred"},
      {"common.indication_answered", "HandoverOccurred", "HandoverOccurredResponse"},
  };
}

const std::set<std::string> kFmipMessages = {"ProxyRouterAdvertisement", "FastBindingUpdate",
                                             "FastBindingAck", "TunnelStart", "TunnelStop"};

SequenceTemplate make(std::string name, std::vector<OrderRule> extra,
                      std::set<std::string> forbidden) {
  SequenceTemplate t{std::move(name), common_rules(), {}, std::move(forbidden)};
  t.rules.insert(t.rules.end(), extra.begin(), extra.end());
  return t;
}

std::map<std::string, SequenceTemplate, std::less<>> build_templates() {
  std::map<std::string, SequenceTemplate, std::less<>> all;

  SequenceTemplate generic{"generic", common_rules(), {}, {}};
  generic.exempt = {"LinkAttachRequest", "LinkAttachResponse", "LinkSwitchRequest",
                    "LinkSwitchResponse", "LinkDetachRequest", "LinkDetachResponse"};
  all.emplace("generic", std::move(generic));

  std::set<std::string> no_switch = kFmipMessages;
  no_switch.insert({"LinkSwitchRequest", "LinkSwitchResponse"});

  all.emplace("mbb", make("mbb",
                          {{"mbb.execution_before_attach", "HOExecutionRequest", "LinkAttachRequest"},
                           {"mbb.attach_before_path", "LinkAttachResponse", "PathSelect"},
                           {"mbb.attach_before_detach", "LinkAttachResponse", "LinkDetachRequest"},
                           {"mbb.bound_before_release", "BindingAck", "LinkDetachRequest"},
                           {"mbb.released_before_complete", "LinkDetachResponse", "HOComplete"}},
                          no_switch));

  all.emplace("bbm", make("bbm",
                          {{"bbm.execution_before_detach", "HOExecutionRequest", "LinkDetachRequest"},
                           {"bbm.freed_before_attaching", "LinkDetachResponse", "LinkAttachRequest"},
                           {"bbm.attach_before_path", "LinkAttachResponse", "PathSelect"}},
                          no_switch));

  all.emplace("fmip",
              make("fmip",
                   {{"fmip.execution_before_advertisement", "HOExecutionRequest", "ProxyRouterAdvertisement"},
                    {"fmip.advertisement_before_fbu", "ProxyRouterAdvertisement", "FastBindingUpdate"},
                    {"fmip.fbu_before_fback", "FastBindingUpdate", "FastBindingAck"},
                    {"fmip.prepared_before_path", "FastBindingAck", "PathSelect"},
                    {"fmip.prepared_before_switch", "FastBindingAck", "LinkSwitchRequest"},
                    {"fmip.locator_before_switch", "PathSelected", "LinkSwitchRequest"},
                    {"fmip.switched_before_tunnel", "LinkSwitchResponse", "TunnelStart"},
                    {"fmip.tunnel_before_binding", "TunnelStart", "BindingUpdate"},
                    {"fmip.binding_before_tunnel_stop", "BindingAck", "TunnelStop"},
                    {"fmip.tunnel_stop_before_complete", "TunnelStop", "HOComplete"}},
                   {"LinkAttachRequest", "LinkAttachResponse", "LinkDetachRequest",
                    "LinkDetachResponse"}));

  std::set<std::string> no_release = no_switch;
  no_release.insert({"LinkDetachRequest", "LinkDetachResponse"});
  all.emplace("establishment",
              make("establishment",
                   {{"establishment.setup_before_constraints", "AccessFlowSetup", "ConstraintRequest"},
                    {"establishment.execution_before_attach", "HOExecutionRequest", "LinkAttachRequest"},
                    {"establishment.attach_before_path", "LinkAttachResponse", "PathSelect"},
                    {"establishment.complete_before_setup_response", "HOComplete",
                     "AccessFlowSetupResponse"}},
                   no_release));
  return all;
}

const auto& templates() {
  static const auto all = build_templates();
  return all;
}

constexpr std::array<std::string_view, 5> kTemplateNames = {"generic", "mbb", "bbm", "fmip",
                                                            "establishment"};

std::optional<FlowId> record_flow(const TraceRecord& r) {
  auto it = r.params.find("flow");
  if (it == r.params.end() || !it->is_number_unsigned()) return std::nullopt;
  return FlowId{it->get<std::uint64_t>()};
}

bool reports_failure(const TraceRecord& r) {
  auto it = r.params.find("result");
  return it != r.params.end() && it->is_string() && it->get<std::string>() != "success";
}

bool is_discovery(std::string_view msg) {
  return msg == ConstraintRequest::name || msg == ConstraintResponse::name ||
         msg == AccessFlowSetup::name || msg == AccessFlowSetupResponse::name;
}

}  // namespace

std::span<const std::string_view> template_names() { return kTemplateNames; }

const SequenceTemplate& template_named(std::string_view name) {
  auto it = templates().find(name);
  if (it == templates().end()) throw std::invalid_argument("unknown template: " + std::string(name));
  return it->second;
}

bool is_acyclic(const SequenceTemplate& tmpl) {
  std::map<std::string, std::vector<std::string>> edges;
  std::map<std::string, int> indegree;
  for (const auto& r : tmpl.rules) {
    edges[r.before].push_back(r.after);
    indegree[r.after] += 1;
    indegree.try_emplace(r.before, 0);
  }
  std::deque<std::string> ready;
  for (const auto& [name, deg] : indegree) {
    if (deg == 0) ready.push_back(name);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::string n = ready.front();
    ready.pop_front();
    ++visited;
    for (const auto& m : edges[n]) {
      if (--indegree[m] == 0) ready.push_back(m);
    }
  }
  return visited == indegree.size();
}

// ---------------------------------------------------------------------------

Segmentation segment(std::span<const TraceRecord> trace) {
  Segmentation seg;
  seg.context_of.assign(trace.size(), std::nullopt);

  std::set<std::string_view> request_names;
  for (auto name : all_primitive_names()) {
    if (auto req = request_for(name)) request_names.insert(*req);
  }

  // Pass 1: flow of every primitive record, pairing responses with requests.
  std::vector<std::optional<FlowId>> flow(trace.size());
  std::vector<std::optional<std::size_t>> answers(trace.size());  // response -> request
  std::map<std::tuple<std::string, std::string, std::string>, std::deque<std::size_t>> open;

  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRecord& r = trace[i];
    if (r.is_annotation()) continue;
    if (!is_primitive_name(r.msg)) {
      seg.violations.push_back({i, "trace.unknown_primitive", r.msg});
      continue;
    }
    if (auto req = request_for(r.msg)) {
      auto& queue = open[{std::string(*req), r.to, r.from}];
      if (queue.empty()) {
        seg.violations.push_back({i, "trace.unmatched_response",
                                  r.msg + " answers no open " + std::string(*req)});
        continue;
      }
      answers[i] = queue.front();
      flow[i] = flow[queue.front()];
      queue.pop_front();
      continue;
    }
    flow[i] = record_flow(r);
    if (!flow[i]) {
      seg.violations.push_back({i, "trace.missing_flow", r.msg});
      continue;
    }
    if (request_names.contains(r.msg)) open[{r.msg, r.from, r.to}].push_back(i);
  }

  // Contexts and their prologues.
  std::map<FlowId, std::vector<std::size_t>> contexts_of_flow;
  std::vector<bool> claimed(trace.size(), false);
  auto claim = [&](std::size_t i, std::size_t ctx) {
    claimed[i] = true;
    seg.context_of[i] = ctx;
  };

  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (trace[i].msg != HOExecutionRequest::name || !flow[i]) continue;
    const FlowId f = *flow[i];
    auto& mine = contexts_of_flow[f];

    TraceContext ctx;
    ctx.flow = f;
    ctx.ordinal = mine.size();
    ctx.request_index = i;
    auto cur = trace[i].params.find("current");
    ctx.has_current = cur != trace[i].params.end() && !cur->is_null();
    const std::size_t id = seg.contexts.size();
    const std::size_t floor = mine.empty() ? 0 : seg.contexts[mine.back()].request_index + 1;
    seg.contexts.push_back(std::move(ctx));
    mine.push_back(id);
    claim(i, id);

    for (std::size_t j = i; j-- > floor;) {
      if (trace[j].msg == ConstraintRequest::name && flow[j] == f && !claimed[j]) {
        claim(j, id);
        for (std::size_t k = j + 1; k < trace.size(); ++k) {
          if (answers[k] == j) {
            claim(k, id);
            break;
          }
        }
        break;
      }
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (trace[j].msg == AccessFlowSetup::name && flow[j] == f && !claimed[j]) {
        claim(j, id);
        break;
      }
    }
  }

  // Everything else joins the latest context of its flow; responses follow their request.
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (claimed[i] || !flow[i]) continue;
    if (answers[i]) {
      seg.context_of[i] = seg.context_of[*answers[i]];
      if (seg.context_of[i]) {
        const auto& mine = contexts_of_flow[*flow[i]];
        const std::size_t own = *seg.context_of[i];
        for (std::size_t other : mine) {
          const std::size_t start = seg.contexts[other].request_index;
          if (start > seg.contexts[own].request_index && start < i) {
            seg.violations.push_back({i, "trace.context_closed",
                                      trace[i].msg + " arrives after the next handover started"});
            break;
          }
        }
      }
      continue;
    }
    std::optional<std::size_t> latest;
    for (std::size_t c : contexts_of_flow[*flow[i]]) {
      if (seg.contexts[c].request_index <= i) latest = c;
    }
    if (latest) {
      seg.context_of[i] = latest;
    } else if (!is_discovery(trace[i].msg)) {
      seg.violations.push_back({i, "trace.outside_context",
                                trace[i].msg + " before any HOExecutionRequest of its flow"});
    }
  }

  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!seg.context_of[i]) continue;
    TraceContext& ctx = seg.contexts[*seg.context_of[i]];
    ctx.records.push_back(i);
    if (trace[i].msg == HOComplete::name && reports_failure(trace[i])) ctx.failed = true;
  }
  return seg;
}

std::string infer_variant(const TraceContext& ctx, std::span<const TraceRecord> trace) {
  std::optional<std::size_t> attach, detach;
  for (std::size_t i : ctx.records) {
    const std::string& msg = trace[i].msg;
    if (msg == FastBindingUpdate::name) return "fmip";
    if (msg == LinkAttachRequest::name && !attach) attach = i;
    if (msg == LinkDetachRequest::name && !detach) detach = i;
  }
  if (attach && detach) return *detach < *attach ? "bbm" : "mbb";
  if (!ctx.has_current) return "establishment";
  return "unclassified";
}

namespace {

void check_link_rule(std::span<const TraceRecord> trace, std::vector<Violation>& out) {
  std::set<std::pair<std::string, std::string>> attached;
  auto key = [](const TraceRecord& r, const char* field) {
    return std::pair{r.params.value("flow", nlohmann::json()).dump(),
                     r.params.value(field, nlohmann::json()).dump()};
  };
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const TraceRecord& r = trace[i];
    if (r.msg == LinkAttachRequest::name) {
      attached.insert(key(r, "target"));
    } else if (r.msg == LinkDetachRequest::name || r.msg == LinkSwitchRequest::name) {
      if (attached.erase(key(r, "current")) == 0) {
        out.push_back({i, std::string(kLinkRule), r.msg + " of an access never attached"});
      }
      if (r.msg == LinkSwitchRequest::name) attached.insert(key(r, "target"));
    }
  }
}

void check_context(std::span<const TraceRecord> trace, const TraceContext& ctx,
                   const SequenceTemplate& tmpl, std::vector<Violation>& out) {
  std::map<std::string_view, std::size_t> first;
  for (std::size_t i : ctx.records) {
    const std::string& msg = trace[i].msg;
    first.try_emplace(msg, i);
    if (tmpl.forbidden.contains(msg)) {
      out.push_back({i, tmpl.name + ".forbidden", msg + " has no place in a " + tmpl.name + " sequence"});
    }
  }
  for (const auto& rule : tmpl.rules) {
    if (tmpl.exempt.contains(rule.before) || tmpl.exempt.contains(rule.after)) continue;
    auto b = first.find(rule.after);
    if (b == first.end()) continue;
    auto a = first.find(rule.before);
    // A failed handover stops early, so missing predecessors are tolerated there.
    if (a == first.end() && ctx.failed) continue;
    if (a == first.end() || a->second > b->second) {
      out.push_back({b->second, rule.name, rule.before + " must precede " + rule.after});
    }
  }
}

Verdict finish(std::vector<Violation> violations, std::vector<ContextVerdict> checked) {
  Verdict v;
  v.checked = std::move(checked);
  auto lowest = std::min_element(violations.begin(), violations.end(),
                                 [](const Violation& a, const Violation& b) { return a.index < b.index; });
  if (lowest != violations.end()) v.violation = *lowest;
  return v;
}

template <typename Pick>
Verdict run_check(std::span<const TraceRecord> trace, Pick pick) {
  Segmentation seg = segment(trace);
  std::vector<Violation> violations = std::move(seg.violations);
  check_link_rule(trace, violations);
  std::vector<ContextVerdict> checked;
  for (std::size_t c = 0; c < seg.contexts.size(); ++c) {
    const SequenceTemplate& tmpl = pick(seg.contexts[c]);
    checked.push_back({c, tmpl.name});
    check_context(trace, seg.contexts[c], tmpl, violations);
  }
  return finish(std::move(violations), std::move(checked));
}

}  // namespace

Verdict check(std::span<const TraceRecord> trace, const SequenceTemplate& tmpl) {
  return run_check(trace, [&](const TraceContext& ctx) -> const SequenceTemplate& {
    if (tmpl.name == "generic") return tmpl;
    if (tmpl.name == "establishment") return ctx.has_current ? template_named("generic") : tmpl;
    return ctx.has_current ? tmpl : template_named("establishment");
  });
}

Verdict check_auto(std::span<const TraceRecord> trace) {
  return run_check(trace, [&](const TraceContext& ctx) -> const SequenceTemplate& {
    const std::string variant = infer_variant(ctx, trace);
    return template_named(variant == "unclassified" ? "generic" : variant);
  });
}

}  // namespace mobsig
