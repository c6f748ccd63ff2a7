#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mobsig {

/// Simulation clock value, integer microseconds since the start of a run.
using SimTime = std::uint64_t;
/// Latency or interval in microseconds.
using Duration = std::uint64_t;

/// Raised when a caller breaks a documented precondition of a pure function.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct FlowId {
  std::uint64_t value = 0;

  friend auto operator<=>(const FlowId&, const FlowId&) = default;
};

/// A radio access: one cell of one network. (cell_id, network_id) identifies it
/// within a scenario; rat is descriptive only.
struct AccessId {
  std::string cell_id;
  std::string network_id;
  std::string rat;

  /// "network/cell", used in locator addresses and human-readable output.
  std::string label() const { return network_id + "/" + cell_id; }

  bool valid() const { return !cell_id.empty() && !network_id.empty(); }

  friend bool operator==(const AccessId&, const AccessId&) = default;
  // Ordered by (network_id, cell_id); this is the selection tie-break order.
  friend std::strong_ordering operator<=>(const AccessId& a, const AccessId& b) {
    if (auto c = a.network_id <=> b.network_id; c != 0) return c;
    if (auto c = a.cell_id <=> b.cell_id; c != 0) return c;
    return a.rat <=> b.rat;
  }
};

struct QosSpec {
  std::uint64_t bandwidth_kbps = 0;
  std::uint64_t max_latency_ms = 0;

  friend bool operator==(const QosSpec&, const QosSpec&) = default;
};

/// True iff `granted` is at least as good as `requested` in both dimensions.
bool qos_satisfies(const QosSpec& granted, const QosSpec& requested);

enum class LocatorKind { local, home, care_of };

std::string_view to_string(LocatorKind kind);
std::optional<LocatorKind> parse_locator_kind(std::string_view text);

struct Locator {
  std::string address;
  AccessId access;
  LocatorKind kind = LocatorKind::care_of;

  friend bool operator==(const Locator&, const Locator&) = default;
};

using AccessSet = std::set<AccessId>;

/// Per-flow view of the access sets; each set narrows the previous one.
struct AccessSets {
  AccessSet scanned;
  AccessSet das;
  AccessSet cas;
  AccessSet aas;

  /// aas ⊆ cas ⊆ das ⊆ scanned and |aas| <= 1.
  bool nested() const;

  friend bool operator==(const AccessSets&, const AccessSets&) = default;
};

/// Combined view of one access used by access selection.
struct Rating {
  AccessId access;
  double path_score = 0.0;
  double radio_score = 0.0;

  friend bool operator==(const Rating&, const Rating&) = default;
};

/// End-to-end rating of one candidate as reported by Path Selection.
struct PathRating {
  AccessId access;
  double score = 0.0;

  friend bool operator==(const PathRating&, const PathRating&) = default;
};

class Result {
 public:
  static Result success() { return Result{}; }
  /// Throws ContractViolation when `reason` is empty.
  static Result failure(std::string reason);

  bool ok() const { return !reason_.has_value(); }
  explicit operator bool() const { return ok(); }
  /// Empty for success.
  const std::string& reason() const;

  /// "success" or "failure(<reason>)".
  std::string to_string() const;
  /// Inverse of to_string; nullopt for malformed text.
  static std::optional<Result> parse(std::string_view text);

  friend bool operator==(const Result&, const Result&) = default;

 private:
  std::optional<std::string> reason_;
};

/// Requested QoS per declared flow, shared read-only by the entities that need it.
using FlowTable = std::map<FlowId, QosSpec>;

}  // namespace mobsig
