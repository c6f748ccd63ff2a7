#include <doctest.h>

#include "mobsig/environment.hpp"

using namespace mobsig;

namespace {

const AccessId kA{"umts-1", "operator-3g", "umts"};
const AccessId kB{"wlan-1", "hotspot", "wlan"};

Cell cell(AccessId id, Position c, double r, bool fmip = false) {
  return Cell{std::move(id), c, r, 50'000, 10'000, 100'000, fmip, {1000, 50}};
}

struct Fixture {
  Simulator sim;
  Environment env;
  explicit Fixture(Trajectory t = Trajectory(std::vector<Waypoint>{{0, {0, 0}}}))
      : env(sim, {cell(kA, {0, 0}, 1000), cell(kB, {300, 0}, 100, true)}, std::move(t)) {}
};

}  // namespace

TEST_CASE("trajectory interpolates linearly and clamps") {
  Trajectory t({{1000, {0, 0}}, {3000, {100, 50}}});
  CHECK(t.position_at(0) == Position{0, 0});
  CHECK(t.position_at(2000) == Position{50, 25});
  CHECK(t.position_at(2500) == Position{75, 37.5});
  CHECK(t.position_at(9000) == Position{100, 50});
  CHECK(t.end_time() == 3000);
  CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{}), std::invalid_argument);
  CHECK_THROWS_AS(Trajectory(std::vector<Waypoint>{{5, {0, 0}}, {5, {1, 1}}}), std::invalid_argument);
}

TEST_CASE("radio score is 1 - d/r inside the cell") {
  const Cell c = cell(kA, {0, 0}, 200);
  CHECK(radio_score(c, {0, 0}) == doctest::Approx(1.0));
  CHECK(radio_score(c, {200, 0}) == doctest::Approx(0.0));
  CHECK(radio_score(c, {100, 0}) == doctest::Approx(0.5));
  CHECK(radio_score(c, {0, 120}) == doctest::Approx(1.0 - 120.0 / 200.0));
  CHECK_FALSE(radio_score(c, {200.5, 0}).has_value());
}

TEST_CASE("grant clamps bandwidth down and latency up") {
  CHECK(grant_qos({500, 100}, {1000, 50}) == QosSpec{500, 100});
  CHECK(grant_qos({2000, 10}, {1000, 50}) == QosSpec{1000, 50});
}

TEST_CASE("scan lists covering cells sorted by cell id") {
  Fixture f(Trajectory(std::vector<Waypoint>{{0, {280, 0}}}));
  auto s = f.env.scan(0);
  REQUIRE(s.size() == 2);
  CHECK(s[0].access == kA);  // "umts-1" < "wlan-1"
  CHECK(s[0].radio_score == doctest::Approx(1.0 - 280.0 / 1000.0));
  CHECK(s[1].radio_score == doctest::Approx(1.0 - 20.0 / 100.0));
  Fixture far(Trajectory(std::vector<Waypoint>{{0, {900, 0}}}));
  CHECK(far.env.scan(0).size() == 1);
}

TEST_CASE("invalid cell sets are rejected") {
  Simulator sim;
  CHECK_THROWS_AS(Environment(sim, {cell(kA, {0, 0}, 1), cell(kA, {1, 0}, 1)}, Trajectory(std::vector<Waypoint>{{0, {0, 0}}})),
                  std::invalid_argument);
  CHECK_THROWS_AS(Environment(sim, {cell(kA, {0, 0}, 0)}, Trajectory(std::vector<Waypoint>{{0, {0, 0}}})), std::invalid_argument);
}

TEST_CASE("attach takes the setup latency and grants clamped QoS") {
  Fixture f;
  std::optional<SimTime> at;
  QosSpec granted;
  Result res = Result::failure("pending");
  f.env.link_attach(FlowId{1}, kA, {500, 100}, [&](Result r, QosSpec g) {
    at = f.sim.now();
    res = r;
    granted = g;
  });
  f.sim.run_until_quiescent();
  CHECK(res.ok());
  CHECK(at == 50'000);
  CHECK(granted == QosSpec{500, 100});
  CHECK(f.env.is_attached(FlowId{1}, kA));
  REQUIRE(f.sim.trace().size() == 1);
  CHECK(f.sim.trace()[0].msg == "LinkUp");
}

TEST_CASE("attach failures") {
  Fixture f;  // mobile at the origin: the hotspot at 300 m is out of range
  Result out = Result::success();
  SimTime when = 0;
  f.env.link_attach(FlowId{1}, kB, {1, 1}, [&](Result r, QosSpec) {
    out = r;
    when = f.sim.now();
  });
  f.sim.run_until_quiescent();
  CHECK(out == Result::failure("out_of_coverage"));
  CHECK(when == 50'000);

  f.env.link_attach(FlowId{1}, kA, {1, 1}, [](Result, QosSpec) {});
  f.sim.run_until_quiescent();
  const SimTime t0 = f.sim.now();
  f.env.link_attach(FlowId{1}, kA, {1, 1}, [&](Result r, QosSpec) {
    out = r;
    when = f.sim.now();
  });
  f.sim.run_until_quiescent();
  CHECK(out == Result::failure("already_attached"));
  CHECK(when == t0);
}

TEST_CASE("detach takes teardown time, invalidates locators, coverage remains") {
  Fixture f;
  f.env.link_attach(FlowId{1}, kA, {1, 1}, [](Result, QosSpec) {});
  f.sim.run_until_quiescent();
  std::optional<Locator> loc;
  f.env.allocate_locator(FlowId{1}, kA, false, [&](Result r, std::optional<Locator> l) {
    CHECK(r.ok());
    loc = l;
  });
  const SimTime before = f.sim.now();
  f.sim.run_until_quiescent();
  CHECK(f.sim.now() - before == 100'000);
  REQUIRE(loc);
  CHECK(loc->access == kA);
  CHECK(f.env.locator_valid(*loc));

  const SimTime t = f.sim.now();
  SimTime done_at = 0;
  f.env.link_detach(FlowId{1}, kA, [&](Result r) {
    CHECK(r.ok());
    done_at = f.sim.now();
  });
  f.sim.run_until_quiescent();
  CHECK(done_at - t == 10'000);
  CHECK_FALSE(f.env.is_attached(FlowId{1}, kA));
  CHECK_FALSE(f.env.locator_valid(*loc));
  CHECK(f.env.scan(f.sim.now()).size() == 1);
}

TEST_CASE("detaching a link that was never attached fails at once") {
  Fixture f;
  Result out = Result::success();
  f.env.link_detach(FlowId{1}, kA, [&](Result r) { out = r; });
  f.sim.run_until_quiescent();
  CHECK(out == Result::failure("not_attached"));
  CHECK(f.sim.now() == 0);
}

TEST_CASE("proactive locators need FMIP support and survive without a link") {
  Fixture f;
  std::optional<Locator> loc;
  Result out = Result::success();
  f.env.allocate_locator(FlowId{2}, kB, true, [&](Result r, std::optional<Locator> l) {
    out = r;
    loc = l;
  });
  f.sim.run_until_quiescent();
  CHECK(out.ok());
  CHECK(f.sim.now() == 0);
  REQUIRE(loc);
  CHECK(f.env.locator_valid(*loc));

  f.env.allocate_locator(FlowId{2}, kA, true, [&](Result r, std::optional<Locator>) { out = r; });
  f.sim.run_until_quiescent();
  CHECK(out == Result::failure("fmip_unsupported"));

  f.env.allocate_locator(FlowId{2}, kA, false, [&](Result r, std::optional<Locator>) { out = r; });
  f.sim.run_until_quiescent();
  CHECK(out == Result::failure("not_attached"));
}
