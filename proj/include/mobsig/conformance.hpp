#pragma once

#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mobsig/trace.hpp"

namespace mobsig {

/// "before must precede after" within one handover context.
struct OrderRule {
  std::string name;
  std::string before;
  std::string after;
};

struct SequenceTemplate {
  std::string name;
  std::vector<OrderRule> rules;
  /// Names left unconstrained by the rules (only the per-access link rule applies).
  std::set<std::string> exempt;
  /// Names that must not occur in a context checked against this template.
  std::set<std::string> forbidden;
};

/// generic, mbb, bbm, fmip, establishment.
std::span<const std::string_view> template_names();
/// Throws std::invalid_argument for an unknown name.
const SequenceTemplate& template_named(std::string_view name);

/// The rules, read as edges between message names, contain no cycle.
bool is_acyclic(const SequenceTemplate& tmpl);

/// Rule that every detach or switch-away of (flow, access) follows an attach to it.
inline constexpr std::string_view kLinkRule = "link.attach_before_detach";

struct Violation {
  std::size_t index = 0;  // record index; the trace line is index + 1
  std::string rule;
  std::string detail;
  std::size_t line() const { return index + 1; }
};

/// One handover (or establishment), keyed by flow and HOExecutionRequest occurrence.
struct TraceContext {
  FlowId flow;
  std::size_t ordinal = 0;         // nth HOExecutionRequest of this flow
  std::size_t request_index = 0;   // index of that HOExecutionRequest
  bool has_current = false;
  bool failed = false;             // its HOComplete reports a failure
  std::vector<std::size_t> records;  // ascending record indices, prologue included
};

struct Segmentation {
  std::vector<TraceContext> contexts;
  /// Context of each trace record; nullopt for annotations and discovery
  /// exchanges that precede a flow's first context.
  std::vector<std::optional<std::size_t>> context_of;
  /// Structural problems: unmatched responses, unknown names, orphan records.
  std::vector<Violation> violations;
};

/// Split a trace into handover contexts. Responses carry no flow, so each is
/// paired with the oldest unanswered request of the same kind on the reverse
/// channel. The last constraint exchange before a HOExecutionRequest (and the
/// flow's AccessFlowSetup, if still unclaimed) opens that context; every other
/// record of the flow belongs to the latest context started before it.
Segmentation segment(std::span<const TraceRecord> trace);

/// "fmip", "bbm", "mbb", "establishment" or "unclassified".
std::string infer_variant(const TraceContext& ctx, std::span<const TraceRecord> trace);

struct ContextVerdict {
  std::size_t context = 0;
  std::string template_name;
};

struct Verdict {
  std::optional<Violation> violation;  // the one at the lowest record index
  std::vector<ContextVerdict> checked;
  bool ok() const { return !violation; }
};

/// A handover template (mbb, bbm, fmip) checks establishment contexts against
/// "establishment"; the establishment template checks handovers against
/// "generic".
Verdict check(std::span<const TraceRecord> trace, const SequenceTemplate& tmpl);
/// Each context against its inferred template; unclassified ones against generic.
Verdict check_auto(std::span<const TraceRecord> trace);

}  // namespace mobsig
