#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mobsig/simulator.hpp"

namespace mobsig {

struct FlowDeclaration {
  FlowId id;
  QosSpec requested;
  SimTime start = 0;
};

/// Flow Management entity: requests radio resources for application flows
/// and absorbs QoS change indications. It only ever sees the MRRM services
/// interface, never link or path primitives.
class FlowManagement : public Entity {
 public:
  enum class State { requested, active, rejected };

  struct FlowRecord {
    QosSpec requested;
    State state = State::requested;
    std::optional<QosSpec> provided;
    std::optional<Result> setup_result;
  };

  explicit FlowManagement(Simulator& sim);

  /// Sends AccessFlowSetup to MRRM at `decl.start`. Throws std::invalid_argument
  /// when the flow was already declared.
  void setup_flow(const FlowDeclaration& decl);

  void on_primitive(const Envelope& envelope) override;

  const FlowRecord* flow(FlowId id) const;
  /// Names of every primitive delivered here, in arrival order.
  const std::vector<std::string>& received() const { return received_; }

 private:
  Simulator& sim_;
  std::map<FlowId, FlowRecord> flows_;
  std::vector<std::string> received_;
};

}  // namespace mobsig
