#include "mobsig/mrrm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobsig {

void MrrmPolicy::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(min_radio_score)) throw std::invalid_argument("min_radio_score must lie in [0,1]");
  if (!(hysteresis >= 0.0)) throw std::invalid_argument("hysteresis must be >= 0");
  if (weight_radio < 0.0 || weight_path < 0.0) throw std::invalid_argument("weights must be >= 0");
  if (std::abs(weight_radio + weight_path - 1.0) > 1e-9) {
    throw std::invalid_argument("weight_radio + weight_path must equal 1");
  }
}

AccessSets build_das(std::span<const ScanEntry> scan, const MrrmPolicy& policy) {
  AccessSets sets;
  for (const auto& entry : scan) {
    sets.scanned.insert(entry.access);
    if (policy.forbidden_networks.contains(entry.access.network_id)) continue;
    if (entry.radio_score < policy.min_radio_score) continue;
    sets.das.insert(entry.access);
  }
  return sets;
}

double combined_score(const Rating& rating, const MrrmPolicy& policy) {
  return policy.weight_radio * rating.radio_score + policy.weight_path * rating.path_score;
}

Selection select_cas_aas(const AccessSets& das, std::span<const Rating> ratings,
                         const MrrmPolicy& policy) {
  Selection sel;
  sel.sets.scanned = das.scanned;
  sel.sets.das = das.das;
  for (const auto& r : ratings) {
    if (!das.das.contains(r.access)) {
      throw ContractViolation("rating for access outside the DAS: " + r.access.label());
    }
    sel.combined[r.access] = combined_score(r, policy);
    if (r.path_score > 0.0) sel.sets.cas.insert(r.access);
  }
  // cas iterates in (network_id, cell_id) order, so strict > keeps the
  // smallest access on ties.
  std::optional<AccessId> best;
  double best_score = 0.0;
  for (const auto& access : sel.sets.cas) {
    const double score = sel.combined.at(access);
    if (!best || score > best_score) {
      best = access;
      best_score = score;
    }
  }
  if (best) sel.sets.aas.insert(*best);
  return sel;
}

std::optional<HOExecutionRequest> decide_handover(FlowId flow, const AccessSets& previous,
                                                  const Selection& next,
                                                  const MrrmPolicy& policy) {
  if (next.sets.aas.empty()) return std::nullopt;
  const AccessId& winner = *next.sets.aas.begin();
  if (previous.aas.empty()) {
    return HOExecutionRequest{flow, std::nullopt, winner, policy.mbb_capable};
  }
  const AccessId& incumbent = *previous.aas.begin();
  if (winner == incumbent) return std::nullopt;

  bool hand_over = !next.sets.das.contains(incumbent);
  if (!hand_over) {
    auto it = next.combined.find(incumbent);
    const double incumbent_score = it == next.combined.end() ? 0.0 : it->second;
    hand_over = next.combined.at(winner) - incumbent_score > policy.hysteresis;
  }
  if (!hand_over) return std::nullopt;
  return HOExecutionRequest{flow, incumbent, winner, policy.mbb_capable};
}

std::optional<HandoverOccurred> notify_flow_management(FlowId flow, const Result& ho_result,
                                                       const QosSpec& before,
                                                       const QosSpec& provided) {
  if (!ho_result.ok() || before == provided) return std::nullopt;
  return HandoverOccurred{flow, provided};
}

// ---------------------------------------------------------------------------

Mrrm::Mrrm(Simulator& sim, Environment& env, MrrmPolicy policy, Options options)
    : sim_(sim), env_(env), policy_(std::move(policy)), options_(options) {
  policy_.validate();
  if (options_.scan_period_us == 0) throw std::invalid_argument("scan period must be positive");
}

void Mrrm::start() {
  if (options_.scan_period_us <= options_.scan_until) {
    sim_.schedule(options_.scan_period_us, [this] { periodic_scan(); });
  }
}

Mrrm::FlowState& Mrrm::state(FlowId flow) {
  auto it = flows_.find(flow);
  if (it == flows_.end()) throw std::logic_error("MRRM: unknown flow " + std::to_string(flow.value));
  return it->second;
}

std::optional<AccessId> Mrrm::current_access(FlowId flow) const {
  auto it = flows_.find(flow);
  return it == flows_.end() ? std::nullopt : it->second.current;
}

std::optional<QosSpec> Mrrm::granted_qos(FlowId flow) const {
  auto it = flows_.find(flow);
  if (it == flows_.end() || it->second.establishing) return std::nullopt;
  return it->second.granted;
}

const AccessSets* Mrrm::last_sets(FlowId flow) const {
  auto it = flows_.find(flow);
  return it == flows_.end() || !it->second.last_sets ? nullptr : &*it->second.last_sets;
}

void Mrrm::periodic_scan() {
  const auto scan = env_.scan(sim_.now());
  for (auto& [flow, st] : flows_) {
    if (st.phase == Phase::active && !st.awaiting_constraints) run_cycle(flow, st, scan);
  }
  if (sim_.now() + options_.scan_period_us <= options_.scan_until) {
    sim_.schedule(options_.scan_period_us, [this] { periodic_scan(); });
  }
}

void Mrrm::snapshot(FlowId flow, const AccessSets& sets) {
  auto list = [](const AccessSet& s) { return nlohmann::json(std::vector<AccessId>(s.begin(), s.end())); };
  sim_.annotate(std::string(fe::mrrm), "AccessSets",
                {{"flow", flow},
                 {"scanned", list(sets.scanned)},
                 {"das", list(sets.das)},
                 {"cas", list(sets.cas)},
                 {"aas", list(sets.aas)}});
}

void Mrrm::run_cycle(FlowId flow, FlowState& st, std::vector<ScanEntry> scan) {
  AccessSets sets = build_das(scan, policy_);
  if (sets.das.empty()) {
    snapshot(flow, sets);
    st.last_sets = sets;
    ++cycles_completed_;
    if (st.phase == Phase::establishing) establishment_failed(flow, Result::failure("no_access"));
    return;
  }
  st.scan = std::move(scan);
  st.awaiting_constraints = true;
  sim_.send(0, std::string(fe::mrrm), std::string(fe::path_selection),
            ConstraintRequest{flow, std::vector<AccessId>(sets.das.begin(), sets.das.end())});
}

void Mrrm::on_constraints(FlowId flow, const ConstraintResponse& response) {
  FlowState& st = state(flow);
  if (!st.awaiting_constraints) throw std::logic_error("MRRM: unsolicited ConstraintResponse");
  st.awaiting_constraints = false;

  const AccessSets das = build_das(st.scan, policy_);
  std::vector<Rating> ratings;
  for (const auto& pr : response.ratings) {
    auto scanned = std::find_if(st.scan.begin(), st.scan.end(),
                                [&](const ScanEntry& e) { return e.access == pr.access; });
    ratings.push_back({pr.access, pr.score, scanned == st.scan.end() ? 0.0 : scanned->radio_score});
  }
  const Selection sel = select_cas_aas(das, ratings, policy_);
  snapshot(flow, sel.sets);
  st.last_sets = sel.sets;
  ++cycles_completed_;

  if (st.phase == Phase::establishing && sel.sets.aas.empty()) {
    establishment_failed(flow, Result::failure("no_access"));
    return;
  }
  AccessSets previous;
  if (st.current) previous.aas.insert(*st.current);
  if (auto request = decide_handover(flow, previous, sel, policy_)) {
    st.phase = Phase::handing_over;
    st.in_flight = *request;
    st.new_grant.reset();
    ++handovers_requested_;
    sim_.send(0, std::string(fe::mrrm), std::string(fe::holm), *request);
  }
}

void Mrrm::establishment_failed(FlowId flow, const Result& result) {
  sim_.send(0, std::string(fe::mrrm), std::string(fe::flow_management),
            AccessFlowSetupResponse{result, QosSpec{}}, flow);
  flows_.erase(flow);
}

void Mrrm::on_complete(FlowId flow, const HOComplete& complete) {
  FlowState& st = state(flow);
  if (!st.in_flight) throw std::logic_error("MRRM: HOComplete without a handover in flight");
  const HOExecutionRequest request = *st.in_flight;
  st.in_flight.reset();

  if (complete.result.ok()) {
    const QosSpec before = st.granted;
    st.current = request.target;
    if (st.new_grant) st.granted = *st.new_grant;
    st.phase = Phase::active;
    if (st.establishing) {
      st.establishing = false;
      sim_.send(0, std::string(fe::mrrm), std::string(fe::flow_management),
                AccessFlowSetupResponse{Result::success(), st.granted}, flow);
    } else if (auto ind = notify_flow_management(flow, complete.result, before, st.granted)) {
      sim_.send(0, std::string(fe::mrrm), std::string(fe::flow_management), *ind);
    }
    return;
  }

  if (st.establishing) {
    establishment_failed(flow, complete.result);
    return;
  }
  // No rollback: keep whatever link survived and let the next cycle recover.
  if (request.current && env_.is_attached(flow, *request.current)) {
    st.current = request.current;
  } else if (env_.is_attached(flow, request.target)) {
    st.current = request.target;
  } else {
    st.current.reset();
  }
  st.phase = Phase::active;
}

void Mrrm::handle_link_command(const Envelope& envelope) {
  const Envelope request = envelope;
  if (const auto* attach = std::get_if<LinkAttachRequest>(&envelope.payload)) {
    const FlowId flow = attach->flow;
    env_.link_attach(flow, attach->target, attach->requested_qos,
                     [this, request, flow](Result result, QosSpec granted) {
                       if (result.ok()) state(flow).new_grant = granted;
                       sim_.reply(request, 0, LinkAttachResponse{std::move(result), granted});
                     });
  } else if (const auto* detach = std::get_if<LinkDetachRequest>(&envelope.payload)) {
    env_.link_detach(detach->flow, detach->current, [this, request](Result result) {
      sim_.reply(request, 0, LinkDetachResponse{std::move(result)});
    });
  } else if (const auto* sw = std::get_if<LinkSwitchRequest>(&envelope.payload)) {
    const LinkSwitchRequest cmd = *sw;
    env_.link_detach(cmd.flow, cmd.current, [this, request, cmd](Result detached) {
      if (!detached.ok()) {
        sim_.reply(request, 0, LinkSwitchResponse{std::move(detached), QosSpec{}});
        return;
      }
      env_.link_attach(cmd.flow, cmd.target, cmd.requested_qos,
                       [this, request, flow = cmd.flow](Result result, QosSpec granted) {
                         if (result.ok()) state(flow).new_grant = granted;
                         sim_.reply(request, 0, LinkSwitchResponse{std::move(result), granted});
                       });
    });
  }
}

void Mrrm::on_primitive(const Envelope& envelope) {
  const auto& p = envelope.payload;
  if (const auto* setup = std::get_if<AccessFlowSetup>(&p)) {
    if (flows_.contains(setup->flow)) {
      sim_.reply(envelope, 0, AccessFlowSetupResponse{Result::failure("already_setup"), QosSpec{}});
      return;
    }
    FlowState& st = flows_[setup->flow];
    st.requested = setup->requested_qos;
    run_cycle(setup->flow, st, env_.scan(sim_.now()));
  } else if (const auto* response = std::get_if<ConstraintResponse>(&p)) {
    if (!envelope.tag) throw std::logic_error("MRRM: untagged ConstraintResponse");
    on_constraints(*envelope.tag, *response);
  } else if (const auto* complete = std::get_if<HOComplete>(&p)) {
    if (!envelope.tag) throw std::logic_error("MRRM: untagged HOComplete");
    on_complete(*envelope.tag, *complete);
  } else if (is_link_command(primitive_name(p))) {
    handle_link_command(envelope);
  } else if (std::holds_alternative<HandoverOccurredResponse>(p)) {
    // Flow Management acknowledged the QoS change; nothing further to do.
  } else {
    throw std::logic_error("MRRM cannot handle " + std::string(primitive_name(p)));
  }
}

}  // namespace mobsig
