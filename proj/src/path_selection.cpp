#include "mobsig/path_selection.hpp"

#include <algorithm>
#include <stdexcept>

namespace mobsig {

void PathModel::set(const AccessId& access, PathDescriptor descriptor) {
  entries_[{access.network_id, access.cell_id}] = descriptor;
}

const PathDescriptor* PathModel::find(const AccessId& access) const {
  auto it = entries_.find({access.network_id, access.cell_id});
  return it == entries_.end() ? nullptr : &it->second;
}

double path_score(const PathDescriptor& path, const QosSpec& requested) {
  if (!path.policy_allowed) return 0.0;
  if (path.path_latency_ms > requested.max_latency_ms) return 0.0;
  if (requested.bandwidth_kbps == 0) return 1.0;
  const double ratio = static_cast<double>(path.bottleneck_bandwidth_kbps) /
                       static_cast<double>(requested.bandwidth_kbps);
  return std::min(1.0, ratio);
}

RatingOutcome rate_accesses(const ConstraintRequest& request, const PathModel& model,
                            const QosSpec& requested) {
  RatingOutcome out;
  out.response.ratings.reserve(request.candidates.size());
  for (const auto& access : request.candidates) {
    const PathDescriptor* path = model.find(access);
    if (!path) out.unknown.push_back(access);
    out.response.ratings.push_back({access, path ? path_score(*path, requested) : 0.0});
  }
  return out;
}

PathSelection::PathSelection(Simulator& sim, Environment& env, PathModel model, FlowTable flows,
                             PreparedQuery prepared)
    : sim_(sim), env_(env), model_(std::move(model)), flows_(std::move(flows)),
      prepared_(std::move(prepared)) {}

void PathSelection::on_primitive(const Envelope& envelope) {
  if (const auto* req = std::get_if<ConstraintRequest>(&envelope.payload)) {
    handle(envelope, *req);
  } else if (const auto* sel = std::get_if<PathSelect>(&envelope.payload)) {
    handle(envelope, *sel);
  } else {
    throw std::logic_error("PathSelect cannot handle " +
                           std::string(primitive_name(envelope.payload)));
  }
}

void PathSelection::handle(const Envelope& envelope, const ConstraintRequest& request) {
  auto flow = flows_.find(request.flow);
  const QosSpec requested = flow == flows_.end() ? QosSpec{} : flow->second;
  RatingOutcome outcome = rate_accesses(request, model_, requested);
  for (const auto& access : outcome.unknown) {
    sim_.annotate(std::string(fe::path_selection), "RatingFailure",
                  {{"flow", request.flow}, {"access", access}, {"reason", "unknown_access"}});
  }
  sim_.reply(envelope, 0, std::move(outcome.response));
}

void PathSelection::handle(const Envelope& envelope, const PathSelect& request) {
  auto fail = [&](const char* reason) {
    sim_.reply(envelope, 0, PathSelected{Result::failure(reason), std::nullopt});
  };
  const Cell* cell = env_.find_cell(request.target);
  if (!cell) return fail("unknown_access");
  if (request.fmip_flag) {
    if (!cell->supports_fmip) return fail("fmip_unsupported");
    if (!prepared_ || !prepared_(request.flow, request.target)) return fail("not_prepared");
  } else if (!env_.is_attached(request.flow, request.target)) {
    return fail("not_attached");
  }

  const Envelope reply_to = envelope;
  env_.allocate_locator(request.flow, request.target, request.fmip_flag,
                        [this, reply_to](Result result, std::optional<Locator> locator) {
                          sim_.reply(reply_to, 0, PathSelected{std::move(result), std::move(locator)});
                        });
}

}  // namespace mobsig
