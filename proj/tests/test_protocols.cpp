#include <doctest.h>

#include "ndlab/coverage.hpp"
#include "ndlab/error.hpp"
#include "ndlab/interval_set.hpp"
#include "ndlab/protocols.hpp"

#include <algorithm>
#include <cmath>

using namespace ndlab;

namespace {

// Coverage of one hyper-period worth of beacons against the receiver.
DeterminismReport hyper_coverage(const ProtocolSpec& tx, const ProtocolSpec& rx) {
  const Tick h = checked_lcm(*tx.beacons->period(), rx.receptions->period());
  const std::int64_t n = h / *tx.beacons->period() * static_cast<std::int64_t>(tx.beacons->size());
  std::vector<Tick> times;
  for (std::int64_t i = 0; i < n; ++i) times.push_back(tx.beacons->emission(i));
  return analyze(build_coverage_map(times, *rx.receptions, rx.radio.semantics, tx.beacons->omega()));
}

// Worst latency over slot-aligned relative phases.
std::optional<Tick> slot_grid_worst(const ProtocolSpec& p, Tick slot) {
  Tick worst = 0;
  for (Tick s = 0; s * slot < p.receptions->period(); ++s) {
    auto l = latency_at_phase(p, p, s * slot);
    if (!l) return std::nullopt;
    worst = std::max(worst, *l);
  }
  return worst;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an ndlab::Error");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("built-in difference sets are rotation closed") {
  for (std::int64_t t : {7, 13, 21, 31}) {
    auto ds = builtin_difference_set(t);
    auto pat = diffcode_slots(ds);
    const auto k = static_cast<double>(ds.elements().size());
    CHECK(k >= std::sqrt(static_cast<double>(t)));
    for (std::int64_t rot = 0; rot < t; ++rot) CHECK(shared_active_slots(pat, pat, rot) >= 1);
    // a (T, k, 1) set meets every nonzero rotation of itself exactly once
    for (std::int64_t rot = 1; rot < t; ++rot) CHECK(shared_active_slots(pat, pat, rot) == 1);
  }
  CHECK(code_of([] { DifferenceSet(7, {0, 1, 2}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { builtin_difference_set(8); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("slot patterns") {
  auto d = disco_slots(3, 5);
  CHECK(d.slots == 15);
  CHECK(d.active == std::vector<std::int64_t>{0, 3, 5, 6, 9, 10, 12});
  CHECK(code_of([] { disco_slots(3, 6); }) == ErrorCode::InvalidArgument);

  auto s = searchlight_striped_slots(4);
  CHECK(s.slots == 8);
  CHECK(s.active == std::vector<std::int64_t>{0, 1, 4, 6});

  auto u = uconnect_slots(3);
  CHECK(u.slots == 9);
  CHECK(u.active == std::vector<std::int64_t>{0, 1, 3, 6});
  CHECK(code_of([] { uconnect_slots(9); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("slotted worst cases stay inside the slot-domain limits") {
  RadioModel r;
  const Tick slot = 4;
  auto disco = gen_disco(3, 5, slot, r);
  auto dw = slot_grid_worst(disco, slot);
  REQUIRE(dw);
  CHECK(*dw <= 15 * slot);
  CHECK(worst_case_latency_oracle(disco, disco).bounded);

  for (std::int64_t t : {4, 5, 6, 7}) {
    auto sl = gen_searchlight_striped(t, slot, r);
    auto w = slot_grid_worst(sl, slot);
    REQUIRE(w);
    CHECK(*w <= t * ((t + 1) / 2) * slot);
  }

  for (std::int64_t p : {3, 5}) {
    auto uc = gen_uconnect(p, slot, r);
    auto w = slot_grid_worst(uc, slot);
    REQUIRE(w);
    CHECK(*w <= p * p * slot);
  }
  CHECK(reception_duty_cycle(*gen_uconnect(3, slot, r).receptions) == rat(4, 9));

  for (std::int64_t t : {7, 13}) {
    auto dc = gen_diffcode(builtin_difference_set(t), slot, r);
    auto w = slot_grid_worst(dc, slot);
    REQUIRE(w);
    CHECK(*w <= t * slot);
  }
  CHECK(code_of([&] { gen_disco(3, 5, 1, r); }) == ErrorCode::Domain);
}

TEST_CASE("generators produce deterministic protocols") {
  RadioModel r;
  auto check = [](const ProtocolSpec& p) { CHECK(hyper_coverage(p, p).deterministic); };
  check(gen_optimal_unidirectional(3, rat(1, 30), r));
  check(gen_optimal_unidirectional(4, rat(1, 100), r, 25));
  check(gen_pi0m(5, 12, r));
  check(gen_disco(3, 5, 4, r));
  check(gen_searchlight_striped(5, 4, r));
  check(gen_uconnect(5, 4, r));
  check(gen_diffcode(builtin_difference_set(13), 4, r));
}

TEST_CASE("optimal construction is disjoint with repetitive gaps") {
  RadioModel r;
  for (auto [k, inv, window] : std::vector<std::tuple<int, int, Tick>>{{2, 50, 50}, {4, 100, 25}, {6, 40, 10}, {5, 10, 2}}) {
    auto p = gen_optimal_unidirectional(k, rat(1, inv), r, window);
    const auto& b = *p.beacons;
    const std::int64_t m = min_beacons(*p.receptions, ReceptionSemantics::Ideal, 1);
    CHECK(m == k);
    std::vector<Tick> first(b.times().begin(), b.times().end());
    auto rep = analyze(build_coverage_map(first, *p.receptions, ReceptionSemantics::Ideal, 1));
    CHECK(rep.deterministic);
    CHECK_FALSE(rep.redundant);
    const Tick mean = inv;  // omega / beta
    for (std::int64_t i = 0; i < 3 * k; ++i) {
      CHECK(b.emission(i + m) - b.emission(i) == m * mean);
    }
  }
}

TEST_CASE("optimal construction input checks") {
  RadioModel r;
  r.omega = 3;
  CHECK(code_of([&] { gen_optimal_unidirectional(2, rat(2, 25), r); }) == ErrorCode::NeedsFinerTicks);
  RadioModel u;
  CHECK(code_of([&] { gen_optimal_unidirectional(2, rat(1, 50), u, 30); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { gen_optimal_unidirectional(0, rat(1, 50), u); }) == ErrorCode::Domain);
  CHECK(code_of([&] { gen_pi0m(0, 10, u); }) == ErrorCode::Domain);
}

TEST_CASE("correlated quadruple matches a per-tick geometric check") {
  RadioModel r;
  for (auto [m, d] : std::vector<std::pair<int, Tick>>{{4, 5}, {6, 7}, {8, 9}, {10, 3}}) {
    auto q = gen_correlated_quadruple(m, d, r);
    CHECK(q.beacons_per_device == m / 2);
    CHECK(q.e.beacons->size() == static_cast<std::size_t>(m / 2));
    CHECK(q.f.beacons->size() == static_cast<std::size_t>(m / 2));
    auto rep = check_correlated_quadruple(q.e, q.f, q.zeta);
    CHECK(rep.combined.deterministic);
    CHECK_FALSE(rep.combined.redundant);
    CHECK(rep.combined.coverage_lambda == m * d);

    // F's origin sits at phi - zeta on E's axis. Decide coverage tick by tick.
    const Tick tc = m * d;
    for (Tick phi = 0; phi < tc; ++phi) {
      const Tick f_origin = phi - q.zeta;
      bool by_f = false;
      for (Tick t : q.f.beacons->times()) by_f = by_f || floor_mod(f_origin + t, tc) < d;
      bool by_e = false;
      for (Tick t : q.e.beacons->times()) by_e = by_e || floor_mod(t - f_origin, tc) < d;
      CHECK(by_f == rep.covered_by_f.contains(phi));
      CHECK(by_e == rep.covered_by_e.contains(phi));
      CHECK(by_f != by_e);
    }
  }
  CHECK(code_of([&] { gen_correlated_quadruple(5, 5, r); }) == ErrorCode::Domain);
  CHECK(code_of([&] { gen_correlated_quadruple(4, 4, r); }) == ErrorCode::Domain);
}
