#include "mobsig/environment.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mobsig {

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw std::invalid_argument("trajectory needs at least one waypoint");
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    if (waypoints_[i].at <= waypoints_[i - 1].at) {
      throw std::invalid_argument("waypoint times must be strictly increasing");
    }
  }
}

Position Trajectory::position_at(SimTime at) const {
  if (waypoints_.empty()) return {};
  if (at <= waypoints_.front().at) return waypoints_.front().position;
  if (at >= waypoints_.back().at) return waypoints_.back().position;
  auto next = std::upper_bound(waypoints_.begin(), waypoints_.end(), at,
                               [](SimTime t, const Waypoint& w) { return t < w.at; });
  const Waypoint& b = *next;
  const Waypoint& a = *(next - 1);
  const double f = static_cast<double>(at - a.at) / static_cast<double>(b.at - a.at);
  return {a.position.x + f * (b.position.x - a.position.x),
          a.position.y + f * (b.position.y - a.position.y)};
}

SimTime Trajectory::end_time() const { return waypoints_.empty() ? 0 : waypoints_.back().at; }

QosSpec grant_qos(const QosSpec& requested, const QosSpec& capacity) {
  return {std::min(requested.bandwidth_kbps, capacity.bandwidth_kbps),
          std::max(requested.max_latency_ms, capacity.max_latency_ms)};
}

std::optional<double> radio_score(const Cell& cell, const Position& where) {
  const double d = std::hypot(where.x - cell.center.x, where.y - cell.center.y);
  if (d > cell.radius_m) return std::nullopt;
  return 1.0 - d / cell.radius_m;
}

Environment::Environment(Simulator& sim, std::vector<Cell> cells, Trajectory trajectory,
                         Duration jitter_us)
    : sim_(sim), cells_(std::move(cells)), trajectory_(std::move(trajectory)),
      jitter_us_(jitter_us) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    if (!c.access.valid()) throw std::invalid_argument("cell with empty cell_id or network_id");
    if (!(c.radius_m > 0.0)) throw std::invalid_argument("cell radius must be positive");
    for (std::size_t j = 0; j < i; ++j) {
      if (cells_[j].access.cell_id == c.access.cell_id &&
          cells_[j].access.network_id == c.access.network_id) {
        throw std::invalid_argument("duplicate access " + c.access.label());
      }
    }
  }
}

std::vector<ScanEntry> Environment::scan(SimTime at) const {
  const Position where = trajectory_.position_at(at);
  std::vector<ScanEntry> out;
  for (const auto& c : cells_) {
    if (auto score = radio_score(c, where)) out.push_back({c.access, *score});
  }
  std::sort(out.begin(), out.end(), [](const ScanEntry& a, const ScanEntry& b) {
    return std::tie(a.access.cell_id, a.access.network_id) <
           std::tie(b.access.cell_id, b.access.network_id);
  });
  return out;
}

const Cell* Environment::find_cell(const AccessId& access) const {
  for (const auto& c : cells_) {
    if (c.access.cell_id == access.cell_id && c.access.network_id == access.network_id) return &c;
  }
  return nullptr;
}

const Cell& Environment::cell(const AccessId& access) const {
  if (const Cell* c = find_cell(access)) return *c;
  throw std::out_of_range("unknown access " + access.label());
}

bool Environment::in_coverage(const AccessId& access, SimTime at) const {
  const Cell* c = find_cell(access);
  return c && radio_score(*c, trajectory_.position_at(at)).has_value();
}

Environment::LinkKey Environment::key(FlowId flow, const AccessId& access) {
  return {flow, {access.network_id, access.cell_id}};
}

bool Environment::is_attached(FlowId flow, const AccessId& access) const {
  auto it = links_.find(key(flow, access));
  return it != links_.end() && it->second == LinkState::attached;
}

void Environment::link_annotation(const char* name, FlowId flow, const AccessId& access) {
  sim_.annotate(std::string(fe::env), name, {{"flow", flow}, {"access", access}});
}

void Environment::link_attach(FlowId flow, const AccessId& target, const QosSpec& requested,
                              AttachDone done) {
  const Cell* c = find_cell(target);
  if (!c) {
    sim_.schedule(0, [done] { done(Result::failure("unknown_access"), QosSpec{}); });
    return;
  }
  const auto k = key(flow, target);
  if (links_.contains(k)) {
    sim_.schedule(0, [done] { done(Result::failure("already_attached"), QosSpec{}); });
    return;
  }
  links_[k] = LinkState::attaching;
  const QosSpec granted = grant_qos(requested, c->capacity_qos);
  sim_.schedule(sim_.jittered(c->link_setup_us, jitter_us_),
                [this, k, flow, target, granted, done] {
                  // Coverage is judged when the link would come up.
                  if (!in_coverage(target, sim_.now())) {
                    links_.erase(k);
                    done(Result::failure("out_of_coverage"), QosSpec{});
                    return;
                  }
                  links_[k] = LinkState::attached;
                  link_annotation("LinkUp", flow, target);
                  done(Result::success(), granted);
                });
}

void Environment::link_detach(FlowId flow, const AccessId& current, DetachDone done) {
  const auto k = key(flow, current);
  if (!is_attached(flow, current)) {
    sim_.schedule(0, [done] { done(Result::failure("not_attached")); });
    return;
  }
  links_[k] = LinkState::releasing;
  const Cell& c = cell(current);
  sim_.schedule(sim_.jittered(c.link_teardown_us, jitter_us_), [this, k, flow, current, done] {
    links_.erase(k);
    invalidate_locators(flow, current);
    link_annotation("LinkDown", flow, current);
    done(Result::success());
  });
}

void Environment::drop_link(FlowId flow, const AccessId& access) {
  if (links_.erase(key(flow, access)) == 0) return;
  invalidate_locators(flow, access);
  link_annotation("LinkDown", flow, access);
}

void Environment::invalidate_locators(FlowId flow, const AccessId& access) {
  for (auto& [address, entry] : locators_) {
    if (entry.flow == flow && !entry.proactive && entry.access.cell_id == access.cell_id &&
        entry.access.network_id == access.network_id) {
      entry.valid = false;
    }
  }
}

void Environment::allocate_locator(FlowId flow, const AccessId& access, bool proactive,
                                   LocatorDone done) {
  const Cell* c = find_cell(access);
  if (!c) {
    sim_.schedule(0, [done] { done(Result::failure("unknown_access"), std::nullopt); });
    return;
  }
  if (proactive && !c->supports_fmip) {
    sim_.schedule(0, [done] { done(Result::failure("fmip_unsupported"), std::nullopt); });
    return;
  }
  if (!proactive && !is_attached(flow, access)) {
    sim_.schedule(0, [done] { done(Result::failure("not_attached"), std::nullopt); });
    return;
  }
  const Duration delay = proactive ? 0 : sim_.jittered(c->locator_config_us, jitter_us_);
  const AccessId resolved = c->access;
  sim_.schedule(delay, [this, flow, resolved, proactive, done] {
    if (!proactive && !is_attached(flow, resolved)) {
      done(Result::failure("not_attached"), std::nullopt);
      return;
    }
    Locator loc{resolved.label() + "/" + std::to_string(++locator_counter_), resolved,
                LocatorKind::care_of};
    locators_[loc.address] = LocatorEntry{flow, resolved, proactive, true};
    done(Result::success(), loc);
  });
}

bool Environment::locator_valid(const Locator& locator) const {
  auto it = locators_.find(locator.address);
  if (it == locators_.end() || !it->second.valid) return false;
  return it->second.proactive || is_attached(it->second.flow, it->second.access);
}

}  // namespace mobsig
