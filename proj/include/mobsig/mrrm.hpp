#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mobsig/environment.hpp"
#include "mobsig/primitive.hpp"
#include "mobsig/simulator.hpp"

namespace mobsig {

struct MrrmPolicy {
  std::set<std::string> forbidden_networks;
  double min_radio_score = 0.0;  // DAS admission floor
  double hysteresis = 0.1;       // margin a challenger must exceed
  double weight_radio = 0.5;
  double weight_path = 0.5;
  bool mbb_capable = false;  // device can keep two radios up at once

  /// Throws std::invalid_argument when out of range or weights do not sum to 1.
  void validate() const;
};

/// scanned = every entry; das = those not forbidden and at or above the floor.
AccessSets build_das(std::span<const ScanEntry> scan, const MrrmPolicy& policy);

struct Selection {
  AccessSets sets;
  /// Weighted score of every rated DAS member.
  std::map<AccessId, double> combined;
};

double combined_score(const Rating& rating, const MrrmPolicy& policy);

/// cas = rated DAS members with path_score > 0; aas = best combined score in
/// cas, ties to the smallest (network_id, cell_id). Throws ContractViolation
/// for a rating outside the DAS.
Selection select_cas_aas(const AccessSets& das, std::span<const Rating> ratings,
                         const MrrmPolicy& policy);

/// Handover request when the new winner beats the incumbent by strictly more
/// than the hysteresis, or the incumbent has left the DAS. With no incumbent
/// the request has no current access (communication establishment).
std::optional<HOExecutionRequest> decide_handover(FlowId flow, const AccessSets& previous,
                                                  const Selection& next,
                                                  const MrrmPolicy& policy);

/// HandoverOccurred only after a successful handover that changed the QoS.
std::optional<HandoverOccurred> notify_flow_management(FlowId flow, const Result& ho_result,
                                                       const QosSpec& before,
                                                       const QosSpec& provided);

/// Multi-Radio Resource Management entity.
///
/// Periodically scans, narrows the access sets with Path Selection's
/// constraints, decides handovers and executes HOLM's link commands through
/// the environment. One handover per flow is in flight at a time; scan cycles
/// for a flow are skipped while its handover runs.
class Mrrm : public Entity {
 public:
  struct Options {
    Duration scan_period_us = 100'000;
    SimTime scan_until = 0;  // last instant a periodic scan may start
  };

  Mrrm(Simulator& sim, Environment& env, MrrmPolicy policy, Options options);

  /// Schedule the periodic scans (first one at scan_period_us).
  void start();
  void on_primitive(const Envelope& envelope) override;

  std::optional<AccessId> current_access(FlowId flow) const;
  std::optional<QosSpec> granted_qos(FlowId flow) const;
  /// Sets produced by the most recent completed cycle of `flow`.
  const AccessSets* last_sets(FlowId flow) const;
  std::size_t cycles_completed() const { return cycles_completed_; }
  std::size_t handovers_requested() const { return handovers_requested_; }
  const MrrmPolicy& policy() const { return policy_; }

 private:
  enum class Phase { establishing, active, handing_over };

  struct FlowState {
    QosSpec requested;
    QosSpec granted;
    std::optional<AccessId> current;
    Phase phase = Phase::establishing;
    bool establishing = true;       // the running handover is the flow's establishment
    bool awaiting_constraints = false;
    std::vector<ScanEntry> scan;    // scan of the cycle waiting for constraints
    std::optional<AccessSets> last_sets;
    std::optional<HOExecutionRequest> in_flight;
    std::optional<QosSpec> new_grant;
  };

  void periodic_scan();
  void run_cycle(FlowId flow, FlowState& state, std::vector<ScanEntry> scan);
  void on_constraints(FlowId flow, const ConstraintResponse& response);
  void on_complete(FlowId flow, const HOComplete& complete);
  void handle_link_command(const Envelope& envelope);
  void snapshot(FlowId flow, const AccessSets& sets);
  void establishment_failed(FlowId flow, const Result& result);
  FlowState& state(FlowId flow);

  Simulator& sim_;
  Environment& env_;
  MrrmPolicy policy_;
  Options options_;
  std::map<FlowId, FlowState> flows_;
  std::size_t cycles_completed_ = 0;
  std::size_t handovers_requested_ = 0;
};

}  // namespace mobsig
