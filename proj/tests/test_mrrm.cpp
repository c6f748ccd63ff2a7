#include <doctest.h>

#include <random>

#include "mobsig/mrrm.hpp"

using namespace mobsig;

namespace {

AccessId acc(int i) { return {"cell-" + std::to_string(i), "net-" + std::to_string(i % 3), "wlan"}; }

MrrmPolicy policy(double hysteresis = 0.1) {
  MrrmPolicy p;
  p.min_radio_score = 0.1;
  p.hysteresis = hysteresis;
  return p;
}

}  // namespace

TEST_CASE("policy validation") {
  MrrmPolicy p;
  CHECK_NOTHROW(p.validate());
  p.weight_radio = 0.7;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.hysteresis = -0.1;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = {};
  p.min_radio_score = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("DAS drops forbidden networks and weak signals") {
  MrrmPolicy p = policy();
  p.forbidden_networks = {"net-1"};
  const std::vector<ScanEntry> scan = {{acc(0), 0.9}, {acc(1), 0.9}, {acc(2), 0.05}, {acc(3), 0.1}};
  const AccessSets s = build_das(scan, p);
  CHECK(s.scanned.size() == 4);
  CHECK(s.das == AccessSet{acc(0), acc(3)});
}

TEST_CASE("CAS keeps positive path ratings and AAS takes the best") {
  const AccessSets das = build_das(std::vector<ScanEntry>{{acc(0), 0.9}, {acc(1), 0.5}, {acc(2), 0.4}}, policy());
  const std::vector<Rating> ratings = {{acc(0), 0.0, 0.9}, {acc(1), 0.5, 0.5}, {acc(2), 1.0, 0.4}};
  const Selection sel = select_cas_aas(das, ratings, policy());
  CHECK(sel.sets.cas == AccessSet{acc(1), acc(2)});
  CHECK(sel.sets.aas == AccessSet{acc(2)});  // 0.7 beats 0.5
  CHECK(sel.sets.nested());
}

TEST_CASE("AAS ties go to the smallest access") {
  const AccessId a{"b", "alpha", "wlan"}, b{"a", "beta", "wlan"};
  const AccessSets das = build_das(std::vector<ScanEntry>{{a, 0.5}, {b, 0.5}}, policy());
  const Selection sel = select_cas_aas(das, std::vector<Rating>{{b, 0.5, 0.5}, {a, 0.5, 0.5}}, policy());
  CHECK(sel.sets.aas == AccessSet{a});
}

TEST_CASE("ratings outside the DAS break the contract") {
  const AccessSets das = build_das(std::vector<ScanEntry>{{acc(0), 0.9}}, policy());
  CHECK_THROWS_AS(select_cas_aas(das, std::vector<Rating>{{acc(1), 1.0, 1.0}}, policy()), ContractViolation);
}

TEST_CASE("random cycles always produce nested sets with the oracle's winner") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const MrrmPolicy p = policy();
  for (int round = 0; round < 500; ++round) {
    std::vector<ScanEntry> scan;
    const int n = static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) scan.push_back({acc(i), u(rng)});
    const AccessSets das = build_das(scan, p);
    std::vector<Rating> ratings;
    for (const auto& e : scan) {
      if (!das.das.contains(e.access)) continue;
      ratings.push_back({e.access, rng() % 4 == 0 ? 0.0 : u(rng), e.radio_score});
    }
    const Selection sel = select_cas_aas(das, ratings, p);
    CHECK(sel.sets.nested());

    // Oracle: best weighted score among positive path ratings; smallest access on ties.
    std::optional<AccessId> best;
    double best_score = -1;
    for (const auto& r : ratings) {
      if (r.path_score <= 0) continue;
      const double s = 0.5 * r.radio_score + 0.5 * r.path_score;
      if (s > best_score || (s == best_score && r.access < *best)) {
        best = r.access;
        best_score = s;
      }
    }
    CHECK(sel.sets.aas == (best ? AccessSet{*best} : AccessSet{}));
  }
}

TEST_CASE("without an incumbent the request has no current access") {
  Selection next;
  next.sets.das = {acc(0)};
  next.sets.cas = next.sets.aas = {acc(0)};
  next.combined[acc(0)] = 0.4;
  auto req = decide_handover(FlowId{5}, AccessSets{}, next, policy());
  REQUIRE(req);
  CHECK_FALSE(req->current.has_value());
  CHECK(req->target == acc(0));
}

TEST_CASE("hysteresis: hand over only beyond the margin or when the incumbent left") {
  // Oracle written from the rule, checked against random score pairs.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int round = 0; round < 2000; ++round) {
    const double h = u(rng) * 0.3;
    const double incumbent = u(rng), challenger = u(rng);
    const bool incumbent_detected = rng() % 5 != 0;

    Selection next;
    next.sets.das = {acc(1)};
    if (incumbent_detected) next.sets.das.insert(acc(0));
    next.sets.cas = next.sets.das;
    next.combined[acc(1)] = challenger;
    if (incumbent_detected) next.combined[acc(0)] = incumbent;
    const bool challenger_wins = !incumbent_detected || challenger > incumbent;
    next.sets.aas = {challenger_wins ? acc(1) : acc(0)};

    AccessSets prev;
    prev.aas = {acc(0)};
    const auto req = decide_handover(FlowId{1}, prev, next, policy(h));
    const bool expected = challenger_wins && (!incumbent_detected || challenger - incumbent > h);
    CHECK(req.has_value() == expected);
    if (req) {
      CHECK(req->current == acc(0));
      CHECK(req->target == acc(1));
    }
  }
}

TEST_CASE("a stable environment never triggers handovers") {
  Selection next;
  next.sets.das = next.sets.cas = {acc(0), acc(1)};
  next.sets.aas = {acc(1)};
  next.combined = {{acc(0), 0.50}, {acc(1), 0.55}};
  AccessSets prev;
  prev.aas = {acc(0)};
  for (int i = 0; i < 10; ++i) CHECK_FALSE(decide_handover(FlowId{1}, prev, next, policy(0.1)));
}

TEST_CASE("flow management is told only about successful QoS changes") {
  CHECK_FALSE(notify_flow_management(FlowId{1}, Result::success(), {1, 1}, {1, 1}));
  CHECK_FALSE(notify_flow_management(FlowId{1}, Result::failure("x"), {1, 1}, {2, 1}));
  auto ind = notify_flow_management(FlowId{1}, Result::success(), {1, 1}, {2, 1});
  REQUIRE(ind);
  CHECK(ind->provided_qos == QosSpec{2, 1});
}
