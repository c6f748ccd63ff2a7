#include "mobsig/flow_management.hpp"

#include <stdexcept>

namespace mobsig {

FlowManagement::FlowManagement(Simulator& sim) : sim_(sim) {}

void FlowManagement::setup_flow(const FlowDeclaration& decl) {
  if (flows_.contains(decl.id)) {
    throw std::invalid_argument("flow " + std::to_string(decl.id.value) + " declared twice");
  }
  flows_[decl.id].requested = decl.requested;
  const Duration delay = decl.start > sim_.now() ? decl.start - sim_.now() : 0;
  sim_.schedule(delay, [this, decl] {
    sim_.send(0, std::string(fe::flow_management), std::string(fe::mrrm),
              AccessFlowSetup{decl.id, decl.requested});
  });
}

const FlowManagement::FlowRecord* FlowManagement::flow(FlowId id) const {
  auto it = flows_.find(id);
  return it == flows_.end() ? nullptr : &it->second;
}

void FlowManagement::on_primitive(const Envelope& envelope) {
  const auto& p = envelope.payload;
  received_.emplace_back(primitive_name(p));

  if (const auto* response = std::get_if<AccessFlowSetupResponse>(&p)) {
    if (!envelope.tag) throw std::logic_error("FlowMng: untagged AccessFlowSetupResponse");
    auto it = flows_.find(*envelope.tag);
    if (it == flows_.end()) throw std::logic_error("FlowMng: setup response for undeclared flow");
    FlowRecord& rec = it->second;
    rec.setup_result = response->result;
    if (response->result.ok()) {
      rec.state = State::active;
      rec.provided = response->granted_qos;
    } else {
      rec.state = State::rejected;
    }
    return;
  }

  if (const auto* ind = std::get_if<HandoverOccurred>(&p)) {
    auto it = flows_.find(ind->flow);
    if (it == flows_.end() || it->second.state != State::active) {
      sim_.reply(envelope, 0, HandoverOccurredResponse{Result::failure("unknown_flow")});
      return;
    }
    it->second.provided = ind->provided_qos;
    // No application model: adapting the service is just recorded.
    sim_.annotate(std::string(fe::flow_management), "ServiceAdapted",
                  {{"flow", ind->flow}, {"provided_qos", ind->provided_qos}});
    sim_.reply(envelope, 0, HandoverOccurredResponse{Result::success()});
    return;
  }

  throw std::logic_error("FlowMng cannot handle " + std::string(primitive_name(p)));
}

}  // namespace mobsig
