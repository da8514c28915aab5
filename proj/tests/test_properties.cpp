#include <doctest.h>

#include "support/properties.hpp"

using namespace ndlab;

TEST_CASE("per-beacon coverage equals the listening time") {
  auto t = props::per_beacon_coverage(0x5eed, 1000);
  CHECK(t.checked == 1000);
  CHECK(t.violations == 0);
}

TEST_CASE("coverage repeats with the reception period") {
  auto t = props::periodicity(0xbeef, 1000);
  CHECK(t.checked == 1000);
  CHECK(t.violations == 0);
}

TEST_CASE("exact worst cases dominate the bound and both oracle methods agree") {
  auto t = props::dominance(0xd0d0, 200);
  CHECK(t.checked == 200);
  CHECK(t.violations == 0);
  CHECK(t.method_mismatches == 0);
}
