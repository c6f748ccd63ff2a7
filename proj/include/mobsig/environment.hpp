#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "mobsig/core.hpp"
#include "mobsig/simulator.hpp"

namespace mobsig {

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

struct Cell {
  AccessId access;
  Position center;
  double radius_m = 1.0;
  Duration link_setup_us = 0;
  Duration link_teardown_us = 0;
  Duration locator_config_us = 0;  // address configuration: DHCP / autoconf
  bool supports_fmip = false;
  QosSpec capacity_qos;  // best QoS the access can grant
};

struct Waypoint {
  SimTime at = 0;
  Position position;
};

/// Piecewise-linear path of the mobile node, clamped at both ends.
class Trajectory {
 public:
  Trajectory() = default;
  /// Throws std::invalid_argument when empty or times are not strictly increasing.
  explicit Trajectory(std::vector<Waypoint> waypoints);

  Position position_at(SimTime at) const;
  SimTime end_time() const;
  const std::vector<Waypoint>& waypoints() const { return waypoints_; }

 private:
  std::vector<Waypoint> waypoints_;
};

struct ScanEntry {
  AccessId access;
  double radio_score = 0.0;
  friend bool operator==(const ScanEntry&, const ScanEntry&) = default;
};

/// Grant rule: bandwidth capped by capacity, latency floored at the capacity's.
QosSpec grant_qos(const QosSpec& requested, const QosSpec& capacity);

/// Linear signal model: 1 - d/radius inside the cell, nothing outside.
std::optional<double> radio_score(const Cell& cell, const Position& where);

/// Simulated radio environment and generic link layer: coverage, link
/// attachment with per-cell latencies, and locator allocation.
///
/// Operations are deferred: the callback runs from a scheduled event, never
/// synchronously, even for immediate failures.
class Environment {
 public:
  using AttachDone = std::function<void(Result, QosSpec)>;
  using DetachDone = std::function<void(Result)>;
  using LocatorDone = std::function<void(Result, std::optional<Locator>)>;

  /// Throws std::invalid_argument on duplicate accesses or non-positive radii.
  Environment(Simulator& sim, std::vector<Cell> cells, Trajectory trajectory,
              Duration jitter_us = 0);

  /// Cells covering the mobile at `at`, sorted by (cell_id, network_id).
  std::vector<ScanEntry> scan(SimTime at) const;

  void link_attach(FlowId flow, const AccessId& target, const QosSpec& requested,
                   AttachDone done);
  void link_detach(FlowId flow, const AccessId& current, DetachDone done);
  /// proactive = true is the FMIP pre-attachment allocation (no config delay).
  void allocate_locator(FlowId flow, const AccessId& access, bool proactive, LocatorDone done);

  /// Radio loss outside any command: the link is gone at once.
  void drop_link(FlowId flow, const AccessId& access);

  bool is_attached(FlowId flow, const AccessId& access) const;
  bool locator_valid(const Locator& locator) const;
  bool in_coverage(const AccessId& access, SimTime at) const;

  const Cell* find_cell(const AccessId& access) const;
  /// Throws std::out_of_range for unknown accesses.
  const Cell& cell(const AccessId& access) const;
  const std::vector<Cell>& cells() const { return cells_; }
  const Trajectory& trajectory() const { return trajectory_; }

 private:
  enum class LinkState { attaching, attached, releasing };
  using LinkKey = std::pair<FlowId, std::pair<std::string, std::string>>;

  struct LocatorEntry {
    FlowId flow;
    AccessId access;
    bool proactive = false;
    bool valid = true;
  };

  static LinkKey key(FlowId flow, const AccessId& access);
  void invalidate_locators(FlowId flow, const AccessId& access);
  void link_annotation(const char* name, FlowId flow, const AccessId& access);

  Simulator& sim_;
  std::vector<Cell> cells_;
  Trajectory trajectory_;
  Duration jitter_us_;
  std::map<LinkKey, LinkState> links_;
  std::map<std::string, LocatorEntry> locators_;
  std::uint64_t locator_counter_ = 0;
};

}  // namespace mobsig
