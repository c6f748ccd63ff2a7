#include <doctest.h>

#include "mobsig/conformance.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace mobsig;
using namespace testing_support;

namespace {

std::vector<std::string> kinds_of(const RunResult& r) {
  std::vector<std::string> out;
  for (const auto& c : r.contexts) out.emplace_back(c.variant());
  return out;
}

void swap_records(std::vector<TraceRecord>& t, std::size_t a, std::size_t b) { std::swap(t[a], t[b]); }

}  // namespace

TEST_CASE("every template is a partial order") {
  for (auto name : template_names()) {
    CAPTURE(name);
    CHECK(is_acyclic(template_named(name)));
  }
  SequenceTemplate loop{"loop", {{"a", "X", "Y"}, {"b", "Y", "Z"}, {"c", "Z", "X"}}, {}, {}};
  CHECK_FALSE(is_acyclic(loop));
  CHECK_THROWS_AS(template_named("hip"), std::invalid_argument);
}

TEST_CASE("an empty trace passes every template") {
  for (auto name : template_names()) {
    const Verdict v = check({}, template_named(name));
    CHECK(v.ok());
    CHECK(v.checked.empty());
  }
  CHECK(check_auto({}).ok());
}

TEST_CASE("bundled traces pass their own templates") {
  for (std::string name : {"mbb", "bbm", "fmip"}) {
    CAPTURE(name);
    const RunResult r = run_bundled(name);
    const Verdict v = check(r.trace, template_named(name));
    CHECK(v.ok());
    REQUIRE(v.checked.size() == 2);
    CHECK(v.checked[0].template_name == "establishment");
    CHECK(v.checked[1].template_name == name);
  }
}

TEST_CASE("swapping detach and attach in a break-before-make trace is rejected") {
  std::vector<TraceRecord> t = without_annotations(run_bundled("bbm").trace);
  const std::size_t second = indices_of(t, "HOExecutionRequest").at(1);
  std::size_t detach = 0, attach = 0;
  for (std::size_t i = second; i < t.size(); ++i) {
    if (!detach && t[i].msg == "LinkDetachRequest") detach = i;
    if (!attach && t[i].msg == "LinkAttachRequest") attach = i;
  }
  REQUIRE(detach < attach);
  REQUIRE(attach - detach == 2);
  // Move each request together with its response.
  swap_records(t, detach, attach);
  swap_records(t, detach + 1, attach + 1);
  const Verdict v = check(t, template_named("bbm"));
  REQUIRE(v.violation);
  CHECK(v.violation->rule == "bbm.freed_before_attaching");
  CHECK(v.violation->index == detach);  // where the attach request now sits
}

TEST_CASE("structural violations") {
  const std::vector<TraceRecord> base = without_annotations(run_bundled("mbb").trace);
  SUBCASE("unknown name") {
    auto t = base;
    t[3].msg = "Teleport";
    const auto v = check_auto(t).violation;
    REQUIRE(v);
    CHECK(v->rule == "trace.unknown_primitive");
  }
  SUBCASE("response with no request") {
    auto t = base;
    t.erase(t.begin() + static_cast<std::ptrdiff_t>(indices_of(t, "PathSelect")[0]));
    const auto v = check_auto(t).violation;
    REQUIRE(v);
    CHECK(v->rule == "trace.unmatched_response");
  }
  SUBCASE("request without flow") {
    auto t = base;
    const std::size_t i = indices_of(t, "PathSelect")[0];
    t[i].params.erase("flow");
    const auto v = check_auto(t).violation;
    REQUIRE(v);
    CHECK(v->rule == "trace.missing_flow");
    CHECK(v->line() == i + 1);
  }
  SUBCASE("link command before any handover") {
    auto t = base;
    t.insert(t.begin(), make_record(0, "HOLM", "MRRM", LinkDetachRequest{FlowId{1}, {"x", "y", "z"}}));
    const auto v = check_auto(t).violation;
    REQUIRE(v);
    CHECK(v->rule == "trace.outside_context");
  }
  SUBCASE("detach of an access never attached") {
    auto t = base;
    for (auto& r : t) {
      if (r.msg == "LinkDetachRequest") r.params["current"]["cell_id"] = "ghost";
    }
    const auto v = check_auto(t).violation;
    REQUIRE(v);
    CHECK(v->rule == kLinkRule);
  }
  SUBCASE("forbidden message") {
    auto t = base;
    const std::size_t i = indices_of(t, "BindingAck").back();
    t.insert(t.begin() + static_cast<std::ptrdiff_t>(i) + 1, make_record(t[i].at, "Daemon", "Env", TunnelStop{FlowId{1}}));
    const auto v = check(t, template_named("mbb")).violation;
    REQUIRE(v);
    CHECK(v->rule == "mbb.forbidden");
  }
}

TEST_CASE("a failed context tolerates missing later steps") {
  auto t = without_annotations(run_bundled("bbm").trace);
  const std::size_t second = indices_of(t, "HOExecutionRequest").at(1);
  const std::size_t attach_resp = indices_of(t, "LinkAttachResponse").back();
  REQUIRE(attach_resp > second);
  t[attach_resp].params["result"] = "failure(out_of_coverage)";
  std::vector<TraceRecord> cut(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(attach_resp) + 1);
  cut.push_back(make_record(t[attach_resp].at, "HOLM", "MRRM", HOComplete{Result::failure("out_of_coverage")}));
  CHECK(check(cut, template_named("bbm")).ok());
  cut.back().params["result"] = "success";
  const auto v = check(cut, template_named("bbm")).violation;
  REQUIRE(v);
  CHECK(v->rule == "common.binding_before_complete");
}

TEST_CASE("variant inference") {
  for (std::string name : {"mbb", "bbm", "fmip"}) {
    const RunResult r = run_bundled(name);
    const std::vector<TraceRecord> t = r.trace;
    const Segmentation seg = segment(t);
    REQUIRE(seg.violations.empty());
    REQUIRE(seg.contexts.size() == 2);
    CHECK(infer_variant(seg.contexts[0], t) == "establishment");
    CHECK(infer_variant(seg.contexts[1], t) == name);
  }
  TraceContext odd;
  odd.has_current = true;
  CHECK(infer_variant(odd, {}) == "unclassified");
}

TEST_CASE("auto checks each context of a mixed trace against its own kind") {
  const RunResult r = run_bundled("multi");
  const Verdict v = check_auto(r.trace);
  CHECK(v.ok());
  REQUIRE(v.checked.size() == r.contexts.size());
  for (std::size_t c = 0; c < r.contexts.size(); ++c) CHECK(v.checked[c].template_name == r.contexts[c].variant());
  // A single handover template cannot describe it.
  CHECK_FALSE(check(r.trace, template_named("bbm")).ok());
  CHECK_FALSE(check(r.trace, template_named("fmip")).ok());
}

TEST_CASE("segmentation gives each record of a mixed trace to its handover") {
  const RunResult r = run_bundled("multi");
  const auto t = without_annotations(r.trace);
  const Segmentation seg = segment(t);
  const auto labels = context_labels(t);
  REQUIRE(seg.contexts.size() == r.contexts.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    REQUIRE(seg.context_of[i]);
    CHECK(*seg.context_of[i] == labels[i]);
  }
}

TEST_CASE("adjacent-swap mutations agree with the partial-order oracle") {
  for (std::string name : {"mbb", "bbm", "fmip"}) {
    CAPTURE(name);
    const RunResult r = run_bundled(name);
    const auto canonical = without_annotations(r.trace);
    const auto kinds = kinds_of(r);

    const auto strict = run_mutations(canonical, kinds, false, [&](const std::vector<TraceRecord>& t) {
      return check(t, template_named(name)).ok();
    });
    CHECK(strict.disagreements == std::vector<std::string>{});
    CHECK(strict.rejected > 10);
    CHECK(strict.accepted > 0);

    const auto relaxed = run_mutations(canonical, kinds, true, [&](const std::vector<TraceRecord>& t) {
      return check(t, template_named("generic")).ok();
    });
    CHECK(relaxed.disagreements == std::vector<std::string>{});
    CHECK(relaxed.accepted > strict.accepted);
  }
}

TEST_CASE("mutations of the mixed trace agree with the oracle under auto") {
  const RunResult r = run_bundled("multi");
  const auto canonical = without_annotations(r.trace);
  const auto rep = run_mutations(canonical, kinds_of(r), false,
                                 [](const std::vector<TraceRecord>& t) { return check_auto(t).ok(); });
  CHECK(rep.disagreements == std::vector<std::string>{});
  CHECK(rep.swaps + 1 == canonical.size());
}

TEST_CASE("check is pure") {
  const auto t = run_bundled("fmip").trace;
  const Verdict a = check(t, template_named("fmip"));
  const Verdict b = check(t, template_named("fmip"));
  CHECK(a.ok() == b.ok());
  CHECK(a.checked.size() == b.checked.size());
}
