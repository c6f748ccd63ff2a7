#include "mobsig/simulator.hpp"

#include <algorithm>

namespace mobsig {

namespace {

struct LaterFirst {
  template <typename E>
  bool operator()(const E& a, const E& b) const {
    return a.at != b.at ? a.at > b.at : a.seq > b.seq;
  }
};

}  // namespace

SimulationAborted::SimulationAborted(std::optional<TraceRecord> record, const std::string& what)
    : std::runtime_error(what), record_(std::move(record)) {}

Simulator::Simulator(std::uint64_t seed) : rng_(seed) {}

void Simulator::register_entity(const FeId& id, Entity& entity) {
  if (!entities_.emplace(id, &entity).second) {
    throw ConfigError("entity registered twice: " + id);
  }
}

bool Simulator::has_entity(const FeId& id) const { return entities_.contains(id); }

Entity& Simulator::entity(const FeId& id) const {
  auto it = entities_.find(id);
  if (it == entities_.end()) throw ConfigError("unknown entity: " + id);
  return *it->second;
}

void Simulator::push(Duration delay, std::variant<Envelope, std::function<void()>> body) {
  if (finished_) throw ConfigError("simulation already finished");
  Event ev{now_ + delay, next_seq_++, std::move(body)};
  if (auto* env = std::get_if<Envelope>(&ev.body)) {
    env->at = ev.at;
    env->seq = ev.seq;
  }
  queue_.push_back(std::move(ev));
  std::push_heap(queue_.begin(), queue_.end(), LaterFirst{});
}

void Simulator::send(Duration delay, const FeId& from, const FeId& to, Primitive payload,
                     std::optional<FlowId> tag) {
  if (!has_entity(to)) throw ConfigError("unknown receiver: " + to);
  if (!tag) tag = flow_of(payload);
  push(delay, Envelope{0, 0, from, to, std::move(payload), tag});
}

void Simulator::reply(const Envelope& request, Duration delay, Primitive payload) {
  send(delay, request.receiver, request.sender, std::move(payload), request.tag);
}

void Simulator::schedule(Duration delay, std::function<void()> action) {
  push(delay, std::move(action));
}

void Simulator::annotate(const FeId& from, std::string name, nlohmann::json params) {
  trace_.push_back(
      TraceRecord{now_, from, std::string(fe::annotation), std::move(name), std::move(params)});
}

Simulator::SubscriptionId Simulator::subscribe(const FeId& fe, Filter filter) {
  entity(fe);  // must be registered
  subscriptions_.push_back(Subscription{next_subscription_, fe, std::move(filter)});
  return next_subscription_++;
}

void Simulator::unsubscribe(SubscriptionId id) {
  std::erase_if(subscriptions_, [id](const Subscription& s) { return s.id == id; });
}

SimTime Simulator::run_until_quiescent(SimTime limit) {
  while (!queue_.empty()) {
    if (queue_.front().at > limit) {
      now_ = limit;
      return limit;
    }
    std::pop_heap(queue_.begin(), queue_.end(), LaterFirst{});
    Event ev = std::move(queue_.back());
    queue_.pop_back();
    now_ = ev.at;

    if (auto* action = std::get_if<std::function<void()>>(&ev.body)) {
      try {
        (*action)();
      } catch (const std::exception& e) {
        finished_ = true;
        throw SimulationAborted(std::nullopt, std::string("internal event failed: ") + e.what());
      }
      continue;
    }

    const Envelope& env = std::get<Envelope>(ev.body);
    trace_.push_back(make_record(now_, env.sender, env.receiver, env.payload));
    const std::size_t record_index = trace_.size() - 1;
    try {
      entity(env.receiver).on_primitive(env);
      const auto name = primitive_name(env.payload);
      // Copy: an observer may subscribe or unsubscribe while being notified.
      const auto subscriptions = subscriptions_;
      for (const auto& sub : subscriptions) {
        if (sub.fe != env.receiver && sub.filter(name)) entity(sub.fe).on_observed(env);
      }
    } catch (const std::exception& e) {
      finished_ = true;
      const TraceRecord record = trace_[record_index];
      throw SimulationAborted(record, "handling " + record.msg + " at " + env.receiver +
                                          " failed: " + e.what());
    }
  }
  return now_;
}

Duration Simulator::jittered(Duration base, Duration max_extra) {
  if (max_extra == 0) return base;
  return base + rng_() % (max_extra + 1);
}

}  // namespace mobsig
