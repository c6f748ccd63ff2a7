#pragma once

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobsig/core.hpp"
#include "mobsig/primitive.hpp"

namespace mobsig {

/// Functional entity identifiers as they appear in traces.
namespace fe {
inline constexpr std::string_view mrrm = "MRRM";
inline constexpr std::string_view holm = "HOLM";
inline constexpr std::string_view path_selection = "PathSelect";
inline constexpr std::string_view flow_management = "FlowMng";
inline constexpr std::string_view env = "Env";
inline constexpr std::string_view daemon = "Daemon";
/// Receiver of annotation records (set snapshots, link state changes).
inline constexpr std::string_view annotation = "*";
}  // namespace fe

/// One line of a trace. Primitive records name a primitive in `msg`;
/// annotation records are addressed to "*" and carry simulator observations.
struct TraceRecord {
  SimTime at = 0;
  std::string from;
  std::string to;
  std::string msg;
  nlohmann::json params = nlohmann::json::object();

  bool is_annotation() const { return to == fe::annotation; }

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what);
  /// 1-based line number in the trace file.
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// JSON encodings of the parameter types.
void to_json(nlohmann::json& j, const FlowId& f);
void from_json(const nlohmann::json& j, FlowId& f);
void to_json(nlohmann::json& j, const AccessId& a);
void from_json(const nlohmann::json& j, AccessId& a);
void to_json(nlohmann::json& j, const QosSpec& q);
void from_json(const nlohmann::json& j, QosSpec& q);
void to_json(nlohmann::json& j, const Locator& l);
void from_json(const nlohmann::json& j, Locator& l);
void to_json(nlohmann::json& j, const Result& r);
void from_json(const nlohmann::json& j, Result& r);

nlohmann::json encode_params(const Primitive& p);
/// Throws std::invalid_argument for unknown names or malformed params.
Primitive decode_primitive(std::string_view name, const nlohmann::json& params);

TraceRecord make_record(SimTime at, std::string_view from, std::string_view to,
                        const Primitive& p);

/// Exactly {"t","from","to","msg","params"} in that order; params keys sorted.
std::string to_jsonl_line(const TraceRecord& record);
TraceRecord parse_trace_line(std::string_view line, std::size_t line_no);

void write_trace(std::ostream& out, std::span<const TraceRecord> records);
/// Throws TraceParseError on the first malformed line. A trailing newline is
/// accepted; blank lines elsewhere are not.
std::vector<TraceRecord> read_trace(std::istream& in);

}  // namespace mobsig
