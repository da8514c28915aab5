#include <doctest.h>

#include "ndlab/bounds.hpp"
#include "ndlab/error.hpp"

#include <cmath>

using namespace ndlab;

TEST_CASE("unidirectional bound") {
  CHECK(bound_unidirectional(rat(1, 2), rat(1, 50), 1) == 100);
  CHECK(bound_unidirectional(rat(3, 10), rat(1, 50), 1) == 200);
  CHECK(bound_unidirectional(rat(1, 10), rat(1, 200), 32) == 64000);
  CHECK_THROWS_AS(bound_unidirectional(0, rat(1, 2), 1), Error);
}

TEST_CASE("symmetric bound picks the cheaper rounding") {
  auto s = bound_symmetric(rat(1, 50), 1, 1);
  CHECK(s.latency == 10000);
  CHECK(s.k == 100);
  CHECK(s.gamma_o == rat(1, 100));
  CHECK(bound_symmetric_approx(rat(1, 50), 1, 1) == 10000);

  auto t = bound_symmetric(rat(3, 100), 1, 1);
  CHECK(t.branch == 'A');
  CHECK(t.k == 67);
  CHECK(t.latency == rat(448900, 101));

  // With eta slightly below 2/7 the floor branch wins.
  auto u = bound_symmetric(rat(2, 7) - rat(1, 10000), 1, 1);
  CHECK(u.branch == 'B');
  CHECK(u.k == 7);
  CHECK(u.latency == symmetric_latency_at_k(7, rat(2, 7) - rat(1, 10000), 1, 1));
}

TEST_CASE("channel-constrained bound") {
  auto loose = bound_channel_constrained(rat(1, 50), rat(3, 200), 1, 1);
  CHECK(loose.which == 1);
  CHECK(loose.latency == 10000);
  auto tight = bound_channel_constrained(rat(1, 50), rat(1, 200), 1, 1);
  CHECK(tight.which == 2);
  CHECK(tight.latency == 67 * 200);
  // beta_m exactly at the symmetric optimum stays in case 1
  auto edge = bound_channel_constrained(rat(1, 50), rat(1, 100), 1, 1);
  CHECK(edge.which == 1);
  CHECK(edge.latency == 10000);
  try {
    bound_channel_constrained(rat(1, 50), rat(1, 50), 1, 1);
    FAIL("expected Infeasible");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Infeasible);
  }
}

TEST_CASE("asymmetric bound") {
  auto a = bound_asymmetric(rat(1, 50), rat(1, 50), 1, 1);
  CHECK(a.latency == 10000);
  CHECK(a.tight);
  auto b = bound_asymmetric(rat(1, 25), rat(1, 50), 2, 1);
  CHECK(b.latency == 8 * 25 * 50);
  CHECK(b.gamma_e == rat(1, 50));
  CHECK(b.beta_f == rat(1, 100));
  CHECK_FALSE(bound_asymmetric(rat(3, 100), rat(1, 50), 1, 1).tight);
  // The product of the duty cycles, not their sum, is what stays fixed.
  CHECK(b.latency * rat(1, 25) * rat(1, 50) == 8);
}

TEST_CASE("mutual exclusive bound is half the symmetric one at integer 1/eta") {
  for (int k : {2, 5, 10, 100, 1000}) {
    const Rational eta = rat(1, k);
    auto me = bound_mutual_exclusive(eta, 1, 1);
    CHECK(me.latency == Rational(2 * k) * k);
    CHECK(2 * me.latency == bound_symmetric(eta, 1, 1).latency);
  }
}

TEST_CASE("pure ALOHA collision model") {
  CHECK(collision_probability(1, 0.3) == 0.0);
  CHECK(collision_probability(5, 0.005) == doctest::Approx(1 - std::exp(-0.04)));
  const double b = max_beta_for_collision(5, 0.05);
  CHECK(collision_probability(5, b) == doctest::Approx(0.05));
  CHECK_THROWS_AS(collision_probability(0, 0.1), Error);
}

TEST_CASE("relaxed bound reduces to the ideal one") {
  RelaxedFlags none{false, false, false};
  CHECK(bound_relaxed(rat(1, 4), rat(1, 100), 1, 5, 5, none) == bound_unidirectional(rat(1, 4), rat(1, 100), 1));
  // contained only: omega (1 + beta) / (beta gamma)
  RelaxedFlags c{true, false, false};
  CHECK(bound_relaxed(rat(1, 4), rat(1, 100), 1, 0, 0, c) == rat(404));
  CHECK(bound_relaxed(rat(1, 4), rat(1, 100), 1, 0, 0) == rat(405));
  CHECK_THROWS_AS(bound_relaxed(rat(2, 5), rat(1, 100), 1, 0, 0), Error);
}

TEST_CASE("deviation ranges over the optimal grid") {
  const Rational lo = rat(55, 100000), hi = rat(555, 10000);
  auto zero = relaxed_deviation_range(lo, hi, 100, 32, 0, 0);
  CHECK(zero.min == doctest::Approx(0.000550).epsilon(0.01));
  CHECK(zero.max == doctest::Approx(0.0584).epsilon(0.01));
  auto nrf = relaxed_deviation_range(lo, hi, 100, 32, 140, 140);
  CHECK(nrf.min == doctest::Approx(4.378).epsilon(0.001));
  CHECK(nrf.max == doctest::Approx(4.676).epsilon(0.001));
  CHECK(zero.points == nrf.points);
}

TEST_CASE("slotted limits") {
  CHECK(bound_slotted_full_duplex(rat(1, 10), 1, 1) == 400);
  CHECK(bound_slotted_two_beacon(rat(1, 10), 1, 1) == 450);
  CHECK(bound_slotted_channel(rat(1, 10), rat(1, 20), 1, 1) == 400);
  CHECK(slotted_protocol_latency(SlottedProtocol::Disco, 0.1, 0.05, 1, 1) == doctest::Approx(3200));
  CHECK(parse_slotted_protocol("searchlight") == SlottedProtocol::SearchlightS);
  CHECK_THROWS_AS(parse_slotted_protocol("quorum"), Error);
}

TEST_CASE("PI-0M closed forms") {
  // d = alpha omega (M+1) / (eta (M+1) - 1) = 100 at M = 99, eta = 0.02
  CHECK(pi0m_latency(99, 1, rat(1, 50), 1) == 10000);
  CHECK(pi0m_latency_relaxed(99, 1, rat(1, 50), 1) == (100 + 1) * 100 + 1);
  auto pts = pi0m_sweep(rational_grid(rat(1, 1000), 1, rat(1, 1000)), 32, 1);
  CHECK(pts.size() == 1000);
  CHECK(pi0m_nrmse(pts) == doctest::Approx(0.0123556).epsilon(1e-4));
  for (const auto& p : pts) CHECK(p.latency >= p.bound);
}

TEST_CASE("bounds sweep CSV") {
  auto csv = bounds_sweep_csv({rat(1, 50)}, 1, 1, 0);
  CHECK(csv.rfind("eta,symmetric,branch,gamma_o,symmetric_approx,", 0) == 0);
  CHECK(csv.find("\n0.02,10000,A,0.01,10000,") != std::string::npos);
  CHECK(rational_grid(0, 1, rat(1, 4)).size() == 5);
  CHECK_THROWS_AS(rational_grid(0, 1, 0), Error);
}
