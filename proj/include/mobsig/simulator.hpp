#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "mobsig/primitive.hpp"
#include "mobsig/trace.hpp"

namespace mobsig {

using FeId = std::string;

/// A primitive in flight between two functional entities.
struct Envelope {
  SimTime at = 0;
  std::uint64_t seq = 0;
  FeId sender;
  FeId receiver;
  Primitive payload;
  /// Flow the exchange belongs to. Not part of the trace: responses on the
  /// SAPs carry no Flow ID, so entities use the tag to demultiplex them.
  std::optional<FlowId> tag;
};

class Entity {
 public:
  virtual ~Entity() = default;
  virtual void on_primitive(const Envelope& envelope) = 0;
  /// Copies of primitives addressed to others, for subscribed observers.
  virtual void on_observed(const Envelope&) {}
};

/// Bad wiring: unknown receiver, duplicate entity id, scheduling after finish.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A handler threw; the run stops. `record()` is the delivery being handled,
/// absent when the failing event was an internal timer.
class SimulationAborted : public std::runtime_error {
 public:
  SimulationAborted(std::optional<TraceRecord> record, const std::string& what);
  const std::optional<TraceRecord>& record() const { return record_; }

 private:
  std::optional<TraceRecord> record_;
};

/// Single-threaded discrete-event kernel shared by all functional entities.
///
/// Events execute in (at, seq) order where seq is a global insertion counter,
/// so same-instant events run in the order they were scheduled. Every
/// delivered primitive is appended to the trace at delivery time.
class Simulator {
 public:
  using Filter = std::function<bool(std::string_view primitive_name)>;
  using SubscriptionId = std::uint64_t;

  static constexpr SimTime kForever = std::numeric_limits<SimTime>::max();

  explicit Simulator(std::uint64_t seed = 0);

  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  void register_entity(const FeId& id, Entity& entity);
  bool has_entity(const FeId& id) const;

  /// Deliver `payload` to `to` at now + delay. The tag defaults to the
  /// primitive's own flow parameter.
  void send(Duration delay, const FeId& from, const FeId& to, Primitive payload,
            std::optional<FlowId> tag = std::nullopt);
  /// Reply on the same exchange as `request` (same tag, reversed endpoints).
  void reply(const Envelope& request, Duration delay, Primitive payload);

  /// Internal (untraced) event, e.g. a link-layer timer.
  void schedule(Duration delay, std::function<void()> action);

  /// Append an annotation record at the current time.
  void annotate(const FeId& from, std::string name, nlohmann::json params);

  /// `fe` starts receiving copies of primitives whose name passes `filter`
  /// and that are addressed to some other entity.
  SubscriptionId subscribe(const FeId& fe, Filter filter);
  void unsubscribe(SubscriptionId id);

  /// Process events in order until the queue drains or the next event lies
  /// beyond `limit`. Returns the time of the last processed event, or `limit`
  /// when events remain queued past it.
  SimTime run_until_quiescent(SimTime limit = kForever);

  /// After finish() (or an abort), scheduling throws ConfigError.
  void finish() { finished_ = true; }
  bool finished() const { return finished_; }

  SimTime now() const { return now_; }
  std::size_t pending() const { return queue_.size(); }
  const std::vector<TraceRecord>& trace() const { return trace_; }

  /// base + uniform integer in [0, max_extra], drawn from the seeded engine.
  Duration jittered(Duration base, Duration max_extra);

 private:
  struct Event {
    SimTime at;
    std::uint64_t seq;
    std::variant<Envelope, std::function<void()>> body;
  };
  struct Subscription {
    SubscriptionId id;
    FeId fe;
    Filter filter;
  };

  void push(Duration delay, std::variant<Envelope, std::function<void()>> body);
  Entity& entity(const FeId& id) const;

  std::map<FeId, Entity*> entities_;
  std::vector<Event> queue_;  // min-heap on (at, seq)
  std::vector<Subscription> subscriptions_;
  std::vector<TraceRecord> trace_;
  std::mt19937_64 rng_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  SubscriptionId next_subscription_ = 1;
  bool finished_ = false;
};

}  // namespace mobsig
