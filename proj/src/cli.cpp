#include "mobsig/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "mobsig/conformance.hpp"
#include "mobsig/diagram.hpp"
#include "mobsig/scenario.hpp"
#include "mobsig/simulation.hpp"

namespace mobsig {

namespace {

struct LoadedTrace {
  std::vector<TraceRecord> records;
  std::optional<TraceParseError> parse_error;
};

/// nullopt when the file cannot be opened.
std::optional<LoadedTrace> load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  LoadedTrace t;
  try {
    t.records = read_trace(in);
  } catch (const TraceParseError& e) {
    t.parse_error = e;
  }
  return t;
}

bool write_file(const std::string& path, const std::string& content, std::ostream& err) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) {
    err << "error: cannot write " << path << '\n';
    return false;
  }
  return true;
}

int cmd_run(const std::string& scenario, const std::string& trace_path,
            const std::string& metrics_path, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err) {
  ScenarioConfig cfg;
  try {
    cfg = load_scenario(scenario);
  } catch (const ScenarioError& e) {
    err << "error: scenario " << e.what() << '\n';
    return kExitInput;
  }
  if (seed) cfg.seed = *seed;

  const RunResult result = simulate(cfg);

  if (!trace_path.empty()) {
    std::ostringstream buf;
    write_trace(buf, result.trace);
    if (!write_file(trace_path, buf.str(), err)) return kExitInput;
  }
  if (!metrics_path.empty()) {
    if (!write_file(metrics_path, result.metrics_json().dump(2) + "\n", err)) return kExitInput;
  }

  for (const auto& h : result.handovers) {
    out << "flow " << h.flow.value << ' ' << h.variant << " at " << h.t_start_us << "us: "
        << h.result.to_string();
    if (h.interruption_us) out << ", interruption " << *h.interruption_us << "us";
    out << ", " << h.message_count << " messages\n";
  }
  out << result.trace.size() << " trace records, final time " << result.final_time_us << "us\n";
  if (result.aborted()) {
    err << "error: simulation aborted: " << *result.abort_reason << '\n';
    return kExitAborted;
  }
  return kExitOk;
}

int cmd_check(const std::string& trace_path, const std::string& template_name,
              std::ostream& out, std::ostream& err) {
  const SequenceTemplate* tmpl = nullptr;
  if (template_name != "auto") {
    try {
      tmpl = &template_named(template_name);
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << '\n';
      return kExitInput;
    }
  }
  auto trace = load_trace(trace_path);
  if (!trace) {
    err << "error: cannot read " << trace_path << '\n';
    return kExitInput;
  }
  if (trace->parse_error) {
    out << "FAIL line " << trace->parse_error->line() << ": trace.parse: "
        << trace->parse_error->what() << '\n';
    return kExitCheckFailed;
  }

  const Verdict v = tmpl ? check(trace->records, *tmpl) : check_auto(trace->records);
  const Segmentation seg = segment(trace->records);
  for (const auto& c : v.checked) {
    const auto& ctx = seg.contexts[c.context];
    out << "context " << c.context << " (flow " << ctx.flow.value << ", line "
        << ctx.request_index + 1 << "): " << c.template_name << '\n';
  }
  if (v.violation) {
    const Violation& bad = *v.violation;
    out << "FAIL line " << bad.line() << ": " << bad.rule << ": " << bad.detail << '\n';
    out << "  " << to_jsonl_line(trace->records[bad.index]) << '\n';
    return kExitCheckFailed;
  }
  out << "PASS " << v.checked.size() << " context(s)\n";
  return kExitOk;
}

int cmd_diagram(const std::string& trace_path, std::ostream& out, std::ostream& err) {
  auto trace = load_trace(trace_path);
  if (!trace) {
    err << "error: cannot read " << trace_path << '\n';
    return kExitInput;
  }
  if (trace->parse_error) {
    err << "error: line " << trace->parse_error->line() << ": " << trace->parse_error->what() << '\n';
    return kExitInput;
  }
  out << render_diagram(trace->records);
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mobility signaling simulator for heterogeneous wireless access", "mobsig"};
  app.require_subcommand(1);

  std::string scenario, trace_path, metrics_path, template_name = "auto";
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "simulate a scenario");
  run->add_option("--scenario", scenario, "scenario JSON file")->required();
  run->add_option("--trace", trace_path, "write the JSON-Lines trace here");
  run->add_option("--metrics", metrics_path, "write metrics JSON here");
  run->add_option("--seed", seed, "override the scenario seed");

  auto* chk = app.add_subcommand("check", "check a trace against a sequence template");
  chk->add_option("--trace", trace_path, "JSON-Lines trace")->required();
  chk->add_option("--template", template_name,
                  "generic, mbb, bbm, fmip, establishment or auto")
      ->capture_default_str();

  auto* dia = app.add_subcommand("diagram", "print a trace as an ASCII sequence diagram");
  dia->add_option("--trace", trace_path, "JSON-Lines trace")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  if (run->parsed()) return cmd_run(scenario, trace_path, metrics_path, seed, out, err);
  if (chk->parsed()) return cmd_check(trace_path, template_name, out, err);
  return cmd_diagram(trace_path, out, err);
}

}  // namespace mobsig
