// Acceptance runner: one PASS/FAIL line per criterion.
//   ndlab_acceptance               run everything
//   ndlab_acceptance --criterion N run one
// Exit status is 0 only when every selected criterion passes.

#include "ndlab/bounds.hpp"
#include "ndlab/coverage.hpp"
#include "ndlab/protocols.hpp"
#include "ndlab/simulator.hpp"

#include "support/properties.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace ndlab;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Verdict c1_unidirectional_oracle() {
  struct Case {
    std::int64_t k;
    Rational beta;
  };
  const Case cases[] = {{2, rat(1, 50)}, {4, rat(1, 100)}, {10, rat(1, 200)}};
  Verdict v{true, ""};
  std::ostringstream os;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    auto p = gen_optimal_unidirectional(c.k, c.beta, RadioModel{});
    OracleOptions o;
    o.method = OracleMethod::FullSweep;
    auto r = worst_case_latency_oracle(p, p, o);
    const double secs = seconds_since(t0);
    const Rational expect = bound_unidirectional(rat(1, c.k), c.beta, 1);
    const bool ok = r.bounded && Rational(r.latency) == expect && secs < 5.0;
    v.pass = v.pass && ok;
    os << "k=" << c.k << " beta=" << to_string(c.beta) << ": L=" << (r.bounded ? std::to_string(r.latency) : "inf")
       << " expected " << to_string(expect) << " (" << secs << " s); ";
  }
  v.detail = os.str();
  return v;
}

Verdict c2_symmetric_pi0m() {
  const Rational eta = rat(1, 50);
  const Rational bound = bound_symmetric(eta, 1, 1).latency;
  // T_B = d = 100 gives beta = 1/100; M = 99 gives gamma close to 1/100.
  auto p = gen_pi0m(99, 100, RadioModel{});
  auto r = worst_case_latency_oracle(p, p);
  const double eta_p = to_double(total_duty_cycle(p));
  const double err = r.bounded ? std::abs(double(r.latency) - to_double(bound)) / to_double(bound) : 1.0;
  std::ostringstream os;
  os << "bound=" << to_string(bound) << " PI-0M(M=99,d=100) eta=" << eta_p << " L="
     << (r.bounded ? std::to_string(r.latency) : "inf") << " rel.err=" << err;
  return {bound == 10000 && r.bounded && err <= 0.01, os.str()};
}

Verdict c3_pi0m_nrmse() {
  auto pts = pi0m_sweep(rational_grid(rat(1, 1000), 1, rat(1, 1000)), 32, 1);
  const double nrmse = pi0m_nrmse(pts);
  std::ostringstream os;
  os << "points=" << pts.size() << " NRMSE=" << nrmse * 100 << "% (target 1.24 +- 0.2)";
  return {pts.size() == 1000 && std::abs(nrmse * 100 - 1.24) <= 0.2, os.str()};
}

Verdict c4_deviation_ranges() {
  const Rational lo = rat(55, 100000), hi = rat(555, 10000);
  auto zero = relaxed_deviation_range(lo, hi, 100, 32, 0, 0);
  auto nrf = relaxed_deviation_range(lo, hi, 100, 32, 140, 140);
  auto near = [](double got, double want_pct) { return std::abs(got * 100 - want_pct) <= 1.0; };
  std::ostringstream os;
  os << "zero overhead [" << zero.min * 100 << "%, " << zero.max * 100 << "%], 140 us [" << nrf.min * 100 << "%, "
     << nrf.max * 100 << "%] over " << zero.points << " points";
  return {near(zero.min, 0) && near(zero.max, 6) && near(nrf.min, 438) && near(nrf.max, 467), os.str()};
}

Verdict c5_difference_sets() {
  Verdict v{true, ""};
  std::ostringstream os;
  for (std::int64_t t : {7, 13}) {
    auto ds = builtin_difference_set(t);
    auto pat = diffcode_slots(ds);
    std::int64_t failures = 0;
    for (std::int64_t rot = 0; rot < t; ++rot) failures += shared_active_slots(pat, pat, rot) >= 1 ? 0 : 1;
    const auto k = static_cast<std::int64_t>(ds.elements().size());
    const bool ok = failures == 0 && k * k >= t;
    v.pass = v.pass && ok;
    os << "(" << t << "," << k << ",1): rotation failures=" << failures << " k^2=" << k * k << "; ";
  }
  v.detail = os.str();
  return v;
}

Verdict c6_disco() {
  RadioModel r;
  const Tick slot = 4;
  auto p = gen_disco(3, 5, slot, r);
  Tick worst = 0;
  bool all = true;
  for (Tick s = 0; s < 15; ++s) {
    auto l = latency_at_phase(p, p, s * slot);
    if (!l) {
      all = false;
      break;
    }
    worst = std::max(worst, *l);
  }
  auto full = worst_case_latency_oracle(p, p);
  std::ostringstream os;
  os << "slot-grid worst=" << worst << " ticks = " << double(worst) / slot << " slots (limit 15); all-phase oracle "
     << (full.bounded ? std::to_string(full.latency) : "inf");
  return {all && worst <= 15 * slot && full.bounded, os.str()};
}

Verdict c7_collisions() {
  // omega = 32 us at 100 ns ticks; beta = 1/200.
  RadioModel r;
  r.omega = 320;
  auto p = gen_optimal_unidirectional(2, rat(1, 200), r, std::nullopt, TimeBase{100});
  Verdict v{true, ""};
  std::ostringstream os;
  for (int s : {2, 5, 10}) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig cfg;
    cfg.devices.assign(s, p);
    cfg.trials = 100000;
    cfg.seed = 0xc011 + s;
    cfg.threads = 0;
    auto out = simulate_multi(cfg);
    const double secs = seconds_since(t0);
    const double pred = collision_probability(out.senders, 0.005);
    const double sigma = std::sqrt(pred * (1 - pred) / double(cfg.trials));
    const double z = (out.first_collision_rate() - pred) / sigma;
    const bool ok = out.senders == s && std::abs(z) <= 3 && secs < 60;
    v.pass = v.pass && ok;
    os << "S=" << s << ": " << out.first_collision_rate() << " vs " << pred << " (" << z << " sigma, " << secs
       << " s); ";
  }
  v.detail = os.str();
  return v;
}

Verdict c8_asymmetry() {
  // eta = 2/a with 1/a + 1/b = 3/100.
  std::vector<std::pair<std::int64_t, std::int64_t>> grid;
  for (std::int64_t a = 34; a <= 66; ++a) {
    const Rational rest = rat(3, 100) - rat(1, a);
    if (boost::multiprecision::numerator(rest) == 1) grid.emplace_back(a, to_int64(boost::multiprecision::denominator(rest)));
  }
  std::set<Rational> sums, products;
  std::ostringstream os;
  for (auto [a, b] : grid) {
    const Rational ee = rat(2, a), ef = rat(2, b);
    auto bnd = bound_asymmetric(ee, ef, 1, 1);
    sums.insert(bnd.latency * (ee + ef));
    products.insert(bnd.latency * ee * ef);
    os << "(" << to_string(ee) << "," << to_string(ef) << ")->L(eE+eF)=" << to_string(bnd.latency * (ee + ef)) << " ";
  }
  os << "| distinct L(eE+eF)=" << sums.size() << ", distinct L*eE*eF=" << products.size();
  return {grid.size() >= 2 && sums.size() == 1, os.str()};
}

Verdict c9_properties() {
  auto a = props::per_beacon_coverage(0x5eed, 1000);
  auto b = props::periodicity(0xbeef, 1000);
  auto c = props::dominance(0xd0d0, 200);
  std::ostringstream os;
  os << "coverage " << a.violations << "/" << a.checked << ", periodicity " << b.violations << "/" << b.checked
     << ", dominance " << c.violations << "/" << c.checked << " (method mismatches " << c.method_mismatches << ")";
  const bool ok = a.checked == 1000 && b.checked == 1000 && c.checked == 200 && a.violations == 0 &&
                  b.violations == 0 && c.violations == 0 && c.method_mismatches == 0;
  return {ok, os.str()};
}

Verdict c10_self_blocking() {
  RadioModel r;
  r.omega = 32;
  auto p = gen_optimal_unidirectional(2, rat(1, 100), r);
  // Beacons inside the window, away from its edges.
  ProtocolSpec in(p.time, BeaconSchedule({1600, 4800}, 32, 6400), p.receptions, r);
  const Rational zero_analytic = self_blocking_probability(in);
  const double zero_measured = measured_self_blocking(in);

  RadioModel t = r;
  t.d_oTxRx = 140;
  t.d_oRxTx = 140;
  ProtocolSpec turn(p.time, BeaconSchedule({1600, 4800}, 32, 6400), p.receptions, t);
  const Rational analytic = self_blocking_probability(turn);
  const double measured = measured_self_blocking(turn);
  const double rel = std::abs(measured - to_double(analytic)) / to_double(analytic);
  std::ostringstream os;
  os << "zero turnaround: analytic " << to_string(zero_analytic) << " measured " << zero_measured
     << "; 140 us: analytic " << to_string(analytic) << " measured " << measured << " (rel.err " << rel << ")";
  const bool ok = zero_analytic == rat(1, 100) && zero_measured == 0.01 && analytic == rat(975, 10000) && rel <= 0.02;
  return {ok, os.str()};
}

Verdict c11_mutual_exclusive() {
  Verdict v{true, ""};
  std::ostringstream os;
  RadioModel r;
  for (auto [m, d] : std::vector<std::pair<std::int64_t, Tick>>{{4, 5}, {6, 7}, {8, 9}, {10, 11}}) {
    auto q = gen_correlated_quadruple(m, d, r);
    auto rep = check_correlated_quadruple(q.e, q.f, q.zeta);
    const bool ok = rep.combined.deterministic && !rep.combined.redundant &&
                    q.e.beacons->size() == static_cast<std::size_t>(m / 2) &&
                    q.f.beacons->size() == static_cast<std::size_t>(m / 2);
    v.pass = v.pass && ok;
    os << "M=" << m << ": " << (ok ? "disjoint" : "broken") << " with " << q.e.beacons->size() << "+"
       << q.f.beacons->size() << " beacons; ";
  }
  std::int64_t mismatches = 0;
  for (std::int64_t k = 2; k <= 200; ++k) {
    const Rational eta = rat(1, k);
    for (const Rational& omega : {Rational(1), Rational(32)}) {
      for (const Rational& alpha : {Rational(1), rat(3, 2)}) {
        const Rational me = bound_mutual_exclusive(eta, omega, alpha).latency;
        const Rational sym = bound_symmetric(eta, omega, alpha).latency;
        mismatches += (2 * me == sym) ? 0 : 1;
      }
    }
  }
  os << "2*L_me == L_sym at 1/eta = 2..200: " << mismatches << " mismatches";
  v.pass = v.pass && mismatches == 0;
  v.detail = os.str();
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-11)")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Verdict()>> all = {
      c1_unidirectional_oracle, c2_symmetric_pi0m, c3_pi0m_nrmse, c4_deviation_ranges,
      c5_difference_sets,       c6_disco,          c7_collisions, c8_asymmetry,
      c9_properties,            c10_self_blocking, c11_mutual_exclusive,
  };
  int failed = 0;
  for (int i = 1; i <= static_cast<int>(all.size()); ++i) {
    if (only && i != only) continue;
    Verdict v;
    try {
      v = all[i - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    std::printf("criterion %d: %s %s\n", i, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
    failed += v.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
