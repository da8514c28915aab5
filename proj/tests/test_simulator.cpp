#include <doctest.h>

#include "ndlab/coverage.hpp"
#include "ndlab/error.hpp"
#include "ndlab/protocols.hpp"
#include "ndlab/simulator.hpp"

using namespace ndlab;

namespace {

ProtocolSpec only_beacons(const ProtocolSpec& p) { return ProtocolSpec(p.time, p.beacons, std::nullopt, p.radio); }
ProtocolSpec only_windows(const ProtocolSpec& p) { return ProtocolSpec(p.time, std::nullopt, p.receptions, p.radio); }

// Beacon of length omega at `at` inside a device that listens all the time.
ProtocolSpec always_on(Tick period, Tick at, Tick omega, Tick turnaround) {
  RadioModel r;
  r.omega = omega;
  r.d_oTxRx = turnaround;
  r.d_oRxTx = turnaround;
  return ProtocolSpec(TimeBase{}, BeaconSchedule({at}, omega, period), ReceptionSchedule({{0, period}}, period), r);
}

}  // namespace

TEST_CASE("pair replay follows the in-flight convention") {
  auto p = gen_optimal_unidirectional(2, rat(1, 50), RadioModel{});
  auto tx = only_beacons(p);
  auto rx = only_windows(p);
  // tx beacons at absolute 0, 50, 100, ...; receiver window [0, 50) per 100.
  CHECK(one_way_latency({&tx, 0}, {&rx, 0}) == 100);
  CHECK(one_way_latency({&tx, 1}, {&rx, 0}) == 49);
  CHECK(one_way_latency({&tx, 1}, {&rx, 1}) == 99);
  auto both = simulate_pair(p, p, 0, 0, {false, 0});
  CHECK(both.e_to_f == 100);
  CHECK(both.f_to_e == 100);
}

TEST_CASE("exhaustive replay equals the coverage oracle") {
  RadioModel r;
  std::vector<std::pair<ProtocolSpec, ProtocolSpec>> pairs;
  auto opt = gen_optimal_unidirectional(2, rat(1, 50), r);
  pairs.emplace_back(only_beacons(opt), only_windows(opt));
  auto displaced = gen_optimal_unidirectional(4, rat(1, 20), r, 5);
  pairs.emplace_back(only_beacons(displaced), only_windows(displaced));
  auto pi = gen_pi0m(3, 10, r);
  pairs.emplace_back(only_beacons(pi), only_windows(pi));
  ProtocolSpec odd_tx(TimeBase{}, BeaconSchedule({0, 3, 11}, 1, 17), std::nullopt, r);
  ProtocolSpec odd_rx(TimeBase{}, std::nullopt, ReceptionSchedule({{0, 3}, {5, 2}}, 10), r);
  pairs.emplace_back(odd_tx, odd_rx);
  RadioModel rc;
  rc.omega = 2;
  rc.semantics = ReceptionSemantics::Contained;
  auto contained = gen_optimal_unidirectional(3, rat(1, 10), rc, 22);
  pairs.emplace_back(only_beacons(contained), only_windows(contained));

  for (const auto& [tx, rx] : pairs) {
    auto ex = exhaustive_one_way(tx, rx);
    auto orc = worst_case_latency_oracle(tx, rx);
    REQUIRE(orc.bounded);
    CHECK(ex.bounded);
    CHECK(ex.worst == orc.latency);
  }
}

TEST_CASE("exhaustive sampling mode agrees with the oracle") {
  auto p = gen_optimal_unidirectional(4, rat(1, 20), RadioModel{});
  SimConfig cfg;
  cfg.devices = {only_beacons(p), only_windows(p)};
  cfg.sampling = OffsetSampling::ExhaustiveTicks;
  cfg.threads = 3;
  auto out = simulate_multi(cfg);
  Tick worst = 0;
  for (const auto& t : out.trials) {
    REQUIRE(t.latency);
    worst = std::max(worst, *t.latency);
  }
  CHECK(worst == worst_case_latency_oracle(cfg.devices[0], cfg.devices[1]).latency);
  CHECK(out.failures == 0);
  CHECK(out.first_collisions == 0);
}

TEST_CASE("seeded runs are reproducible regardless of thread count") {
  auto p = gen_optimal_unidirectional(2, rat(1, 20), RadioModel{});
  SimConfig cfg;
  cfg.devices = {p, p, p, p};
  cfg.trials = 2000;
  cfg.seed = 42;
  cfg.threads = 1;
  auto a = simulate_multi(cfg);
  cfg.threads = 5;
  auto b = simulate_multi(cfg);
  CHECK(trials_csv(a) == trials_csv(b));
  CHECK(summary_json(a) == summary_json(b));
  cfg.seed = 43;
  CHECK(trials_csv(simulate_multi(cfg)) != trials_csv(a));
  CHECK(a.senders == 4);
}

TEST_CASE("single sender never collides") {
  auto p = gen_optimal_unidirectional(2, rat(1, 20), RadioModel{});
  SimConfig cfg;
  cfg.devices = {only_beacons(p), only_windows(p)};
  cfg.trials = 500;
  auto out = simulate_multi(cfg);
  CHECK(out.senders == 1);
  CHECK(out.first_collision_rate() == 0.0);
  CHECK(out.failure_rate() == 0.0);
}

TEST_CASE("disjoint protocol: a collided covering beacon always misses the deadline") {
  auto p = gen_optimal_unidirectional(4, rat(1, 25), RadioModel{});
  SimConfig cfg;
  cfg.devices = {only_beacons(p), only_windows(p), only_beacons(p), only_beacons(p), only_beacons(p)};
  cfg.trials = 5000;
  cfg.seed = 7;
  auto out = simulate_multi(cfg);
  CHECK(out.covering_collisions > 0);
  CHECK(out.audit_violations == 0);
  CHECK(out.failures >= out.covering_collisions);
}

TEST_CASE("trial CSV layout") {
  auto p = gen_optimal_unidirectional(2, rat(1, 20), RadioModel{});
  SimConfig cfg;
  cfg.devices = {only_beacons(p), only_windows(p)};
  cfg.trials = 2;
  auto csv = trials_csv(simulate_multi(cfg));
  CHECK(csv.rfind("trial_id,offsets,latency,collided_first,covering_collided,failed\n", 0) == 0);
}

TEST_CASE("self-blocking: zero turnaround blocks exactly beta") {
  auto p = gen_optimal_unidirectional(2, rat(1, 100), []() {
    RadioModel r;
    r.omega = 32;
    return r;
  }());
  CHECK(self_blocking_probability(p) == rat(1, 100));
  // Move the beacons into the window so every one of them costs listening time.
  ProtocolSpec in(p.time, BeaconSchedule({1600, 4800}, 32, 6400), p.receptions, p.radio);
  CHECK(measured_self_blocking(in) == 0.01);
  ProtocolSpec silent(p.time, std::nullopt, p.receptions, p.radio);
  CHECK(self_blocking_probability(silent) == 0);
}

TEST_CASE("self-blocking with 140-tick turnarounds") {
  RadioModel r;
  r.omega = 32;
  r.d_oTxRx = 140;
  r.d_oRxTx = 140;
  auto p = gen_optimal_unidirectional(2, rat(1, 100), r);
  ProtocolSpec centered(p.time, BeaconSchedule({1600, 4800}, 32, 6400), p.receptions, r);
  CHECK(self_blocking_probability(centered) == rat(975, 10000));
  CHECK(measured_self_blocking(centered) == doctest::Approx(0.0975).epsilon(1e-12));
}

TEST_CASE("blocked time per own beacon is omega plus both turnarounds") {
  // center, leading edge (beacon at the period start) and trailing edge
  for (Tick at : {500, 0, 999 - 31}) {
    auto p = always_on(1000, at, 32, 140);
    std::int64_t blocked = 0;
    for (Tick u = 0; u < 1000; ++u) blocked += can_receive_at(p, u) ? 0 : 1;
    CHECK(blocked == 32 + 140 + 140);
    // without self-blocking everything is receivable
    for (Tick u = 0; u < 1000; ++u) CHECK(can_receive_at(p, u, false));
  }
}
