#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>

#include "mobsig/environment.hpp"
#include "mobsig/primitive.hpp"
#include "mobsig/simulator.hpp"

namespace mobsig {

/// End-to-end characteristics of the path behind one access.
struct PathDescriptor {
  std::uint64_t bottleneck_bandwidth_kbps = 0;
  std::uint64_t path_latency_ms = 0;
  bool policy_allowed = true;
};

class PathModel {
 public:
  void set(const AccessId& access, PathDescriptor descriptor);
  const PathDescriptor* find(const AccessId& access) const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, PathDescriptor> entries_;
};

/// Rating in [0,1]: 0 when policy forbids the access or the path latency
/// exceeds the flow's bound, otherwise min(1, bottleneck / requested bandwidth).
double path_score(const PathDescriptor& path, const QosSpec& requested);

struct RatingOutcome {
  ConstraintResponse response;
  /// Candidates without a path descriptor; each is rated 0.
  std::vector<AccessId> unknown;
};

/// Pure: one rating per candidate, in candidate order.
RatingOutcome rate_accesses(const ConstraintRequest& request, const PathModel& model,
                            const QosSpec& requested);

/// Path Selection entity. Answers ConstraintRequest from MRRM and PathSelect
/// from HOLM; locators are obtained from the environment.
class PathSelection : public Entity {
 public:
  /// Whether FMIP preparation for (flow, target) has completed.
  using PreparedQuery = std::function<bool(FlowId, const AccessId&)>;

  PathSelection(Simulator& sim, Environment& env, PathModel model, FlowTable flows,
                PreparedQuery prepared);

  void on_primitive(const Envelope& envelope) override;

  const PathModel& model() const { return model_; }

 private:
  void handle(const Envelope& envelope, const ConstraintRequest& request);
  void handle(const Envelope& envelope, const PathSelect& request);

  Simulator& sim_;
  Environment& env_;
  PathModel model_;
  FlowTable flows_;
  PreparedQuery prepared_;
};

}  // namespace mobsig
