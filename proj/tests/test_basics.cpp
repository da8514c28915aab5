#include <doctest.h>

#include "ndlab/error.hpp"
#include "ndlab/interval_set.hpp"
#include "ndlab/json_io.hpp"
#include "ndlab/rational.hpp"
#include "ndlab/schedule.hpp"

using namespace ndlab;

namespace {

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

TEST_CASE("rational parsing is exact") {
  CHECK(parse_rational("1/50") == rat(1, 50));
  CHECK(parse_rational("0.02") == rat(1, 50));
  CHECK(parse_rational("1e-3") == rat(1, 1000));
  CHECK(parse_rational("-2") == rat(-2));
  CHECK(parse_rational("2.5e1") == rat(25));
  CHECK(code_of([] { parse_rational("abc"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_rational("1/0"); }) == ErrorCode::Parse);
  CHECK(floor(rat(-1, 2)) == -1);
  CHECK(ceil(rat(-1, 2)) == 0);
  CHECK(ceil(rat(7, 2)) == 4);
  CHECK(to_string(rat(6, 4)) == "3/2");
}

TEST_CASE("interval sets coalesce and subtract") {
  IntervalSet a{{0, 5}, {5, 8}, {10, 12}};
  REQUIRE(a.intervals().size() == 2);
  CHECK(a.measure() == 10);
  CHECK(a.contains(7));
  CHECK_FALSE(a.contains(8));
  IntervalSet b{{3, 11}};
  CHECK(a.subtract(b) == IntervalSet{{0, 3}, {11, 12}});
  CHECK(a.intersect(b) == IntervalSet{{3, 8}, {10, 11}});
  CHECK(a.unite(b) == IntervalSet{{0, 12}});
  CHECK(IntervalSet{{4, 4}}.empty());
}

TEST_CASE("wrap_interval splits at the period boundary") {
  auto w = wrap_interval(8, 12, 10);
  REQUIRE(w.size() == 2);
  CHECK(w[0] == Interval{8, 10});
  CHECK(w[1] == Interval{0, 2});
  auto neg = wrap_interval(-3, 1, 10);
  CHECK(IntervalSet(neg) == IntervalSet{{0, 1}, {7, 10}});
  CHECK(IntervalSet(wrap_interval(3, 40, 10)) == IntervalSet{{0, 10}});
  CHECK(floor_mod(-1, 7) == 6);
  CHECK(floor_div(-1, 7) == -1);
}

TEST_CASE("schedule validation") {
  CHECK(code_of([] { ReceptionSchedule({{0, 5}, {3, 2}}, 10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { ReceptionSchedule({{8, 5}}, 10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { BeaconSchedule({0, 1}, 2, 10); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { BeaconSchedule({0, 8}, 2, 9); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { TimeBase(0); }) == ErrorCode::InvalidArgument);

  BeaconSchedule b({2, 5, 9}, 1, 12);
  CHECK(b.gap(0) == 3);
  CHECK(b.gap(2) == 5);
  CHECK(b.emission(4) == 17);
  CHECK(transmission_duty_cycle(b) == rat(1, 4));

  BeaconSchedule finite({0, 10, 30}, 2, std::nullopt);
  CHECK(transmission_duty_cycle(finite) == rat(4, 30));
  CHECK(code_of([&] { finite.emission(3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("time base conversion") {
  TimeBase tb(1000);
  CHECK(tb.from_us(32) == 32);
  TimeBase fine(100);
  CHECK(fine.from_us(parse_rational("2.5")) == 25);
  CHECK(code_of([&] { tb.from_us(parse_rational("2.5")); }) == ErrorCode::NeedsFinerTicks);
}

TEST_CASE("duty cycles include overheads") {
  RadioModel r;
  r.omega = 4;
  r.d_oTx = 4;
  r.d_oRx = 2;
  r.alpha = 2;
  ProtocolSpec p(TimeBase{}, BeaconSchedule({0}, 4, 100), ReceptionSchedule({{10, 20}}, 100), r);
  CHECK(effective_transmission_duty_cycle(*p.beacons, r) == rat(8, 100));
  CHECK(effective_reception_duty_cycle(*p.receptions, r) == rat(22, 100));
  CHECK(total_duty_cycle(p) == rat(22 + 16, 100));
}

TEST_CASE("hyper-period overflow is reported") {
  CHECK(checked_lcm(4, 6) == 12);
  CHECK(code_of([] { checked_lcm(std::int64_t{1} << 62, (std::int64_t{1} << 62) - 1); }) ==
        ErrorCode::HyperperiodTooLarge);
}

TEST_CASE("protocol JSON round-trips") {
  RadioModel r;
  r.omega = 3;
  r.alpha = rat(3, 2);
  r.d_oTxRx = 7;
  r.semantics = ReceptionSemantics::Contained;
  ProtocolSpec p(TimeBase(250), BeaconSchedule({1, 40}, 3, 90), ReceptionSchedule({{0, 10}, {45, 10}}, 90, true), r);
  const std::string text = protocol_json(p);
  CHECK(parse_protocol(text) == p);

  ProtocolSpec listener(TimeBase{}, std::nullopt, ReceptionSchedule({{0, 5}}, 50), RadioModel{});
  CHECK(parse_protocol(protocol_json(listener)) == listener);
}

TEST_CASE("protocol JSON rejects malformed input") {
  CHECK(code_of([] { parse_protocol("{"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_protocol("[]"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_protocol(R"({"beacons": {"times": "x", "omega": 1}})"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_protocol(R"({"receptions": {"windows": [], "period": 10}})"); }) ==
        ErrorCode::InvalidArgument);
  CHECK(code_of([] {
          parse_protocol(R"({"receptions": {"windows": [{"start":0,"d":1}], "period": 10},
                             "radio": {"semantics": "fuzzy"}})");
        }) == ErrorCode::Parse);
  // alpha accepts the three rational spellings
  auto a = parse_protocol(R"({"receptions": {"windows": [{"start":0,"d":1}], "period": 10}, "radio": {"alpha": "3/2"}})");
  auto b = parse_protocol(R"({"receptions": {"windows": [{"start":0,"d":1}], "period": 10}, "radio": {"alpha": 1.5}})");
  auto c = parse_protocol(R"({"receptions": {"windows": [{"start":0,"d":1}], "period": 10}, "radio": {"alpha": [3, 2]}})");
  CHECK(a.radio.alpha == rat(3, 2));
  CHECK(b.radio.alpha == rat(3, 2));
  CHECK(c.radio.alpha == rat(3, 2));
}
