#include "ndlab/coverage.hpp"
#include "ndlab/error.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

namespace ndlab {

namespace {

struct Pair {
  const BeaconSchedule& beacons;
  const ReceptionSchedule& receptions;
  ReceptionSemantics semantics;
  Tick hyperperiod;
};

Pair prepare(const ProtocolSpec& tx, const ProtocolSpec& rx, Tick max_hyperperiod) {
  if (!tx.beacons) throw Error(ErrorCode::InvalidArgument, "transmitter has no beacon schedule");
  if (!rx.receptions) throw Error(ErrorCode::InvalidArgument, "receiver has no reception schedule");
  if (!tx.beacons->repetitive() || !rx.receptions->repetitive()) {
    throw Error(ErrorCode::InvalidArgument, "the oracle needs repetitive beacon and reception schedules");
  }
  Tick H = checked_lcm(*tx.beacons->period(), rx.receptions->period());
  if (H > max_hyperperiod) {
    throw Error(ErrorCode::HyperperiodTooLarge, "hyper-period " + std::to_string(H) + " exceeds the budget", H);
  }
  return {*tx.beacons, *rx.receptions, rx.radio.semantics, H};
}

// Per-tick tables: which residues mod T_B start a beacon, and which residues
// mod T_C accept a beacon start.
struct TickTables {
  std::vector<char> starts;
  std::vector<char> accepts;
};

TickTables tables(const Pair& p) {
  TickTables t;
  const Tick TB = *p.beacons.period();
  t.starts.assign(static_cast<std::size_t>(TB), 0);
  for (Tick x : p.beacons.times()) t.starts[static_cast<std::size_t>(floor_mod(x, TB))] = 1;
  t.accepts.assign(static_cast<std::size_t>(p.receptions.period()), 0);
  for (const auto& w : p.receptions.windows()) {
    Tick eff = effective_duration(w, p.semantics, p.beacons.omega());
    for (Tick x = w.start; x < w.start + eff; ++x) t.accepts[static_cast<std::size_t>(x)] = 1;
  }
  return t;
}

// Max over in-range instants t0 in [0, H) of (first successful start > t0) - t0.
std::optional<Tick> sweep_phase(const Pair& p, const TickTables& tab, Tick phase) {
  const Tick TB = *p.beacons.period();
  const Tick TC = p.receptions.period();
  const Tick H = p.hyperperiod;
  constexpr Tick kNone = -1;
  Tick next = kNone;
  Tick worst = 0;
  Tick tb = floor_mod(2 * H - 1, TB);
  Tick tc = floor_mod(2 * H - 1 - phase, TC);
  for (Tick t = 2 * H - 1; t >= 0; --t) {
    if (t < H) {
      if (next == kNone) return std::nullopt;
      worst = std::max(worst, next - t);
    }
    if (tab.starts[static_cast<std::size_t>(tb)] && tab.accepts[static_cast<std::size_t>(tc)]) next = t;
    tb = tb == 0 ? TB - 1 : tb - 1;
    tc = tc == 0 ? TC - 1 : tc - 1;
  }
  return worst;
}

OracleResult full_sweep(const Pair& p, unsigned threads) {
  const Tick g = std::gcd(*p.beacons.period(), p.receptions.period());
  TickTables tab = tables(p);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<Tick>(g, 1024))));

  struct Partial {
    bool bounded = true;
    Tick worst = 0;
  };
  std::vector<Partial> parts(threads);
  auto work = [&](unsigned id) {
    // Distinct relative phases are the residues modulo gcd(T_B, T_C).
    for (Tick phi = id; phi < g; phi += threads) {
      auto l = sweep_phase(p, tab, phi);
      if (!l) {
        parts[id].bounded = false;
        return;
      }
      parts[id].worst = std::max(parts[id].worst, *l);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  OracleResult r;
  r.hyperperiod = p.hyperperiod;
  r.bounded = std::all_of(parts.begin(), parts.end(), [](const Partial& x) { return x.bounded; });
  if (r.bounded) {
    for (const auto& x : parts) r.latency = std::max(r.latency, x.worst);
  }
  return r;
}

// For the in-range instant in [tau_{j-1}, tau_j) the first receivable beacon
// is b_j, so the latency is the preceding gap plus the worst beacon-to-beacon
// latency of B' = b_j, b_{j+1}, ... over one hyper-period.
OracleResult endpoint_sweep(const Pair& p) {
  const Tick TB = *p.beacons.period();
  const auto m = static_cast<std::int64_t>(p.beacons.size());
  const std::int64_t n = m * (p.hyperperiod / TB);
  const Tick TC = p.receptions.period();

  std::vector<Interval> windows;
  for (const auto& w : p.receptions.windows()) {
    Tick eff = effective_duration(w, p.semantics, p.beacons.omega());
    if (eff > 0) windows.push_back({w.start, w.start + eff});
  }

  OracleResult r;
  r.hyperperiod = p.hyperperiod;
  r.bounded = true;
  for (std::int64_t j = 0; j < m; ++j) {
    const Tick prev_gap = p.beacons.gap(static_cast<std::size_t>((j + m - 1) % m));
    const Tick first = p.beacons.emission(j);
    IntervalSet uncovered = IntervalSet::range(0, TC);
    Tick worst = 0;
    for (std::int64_t i = 0; i < n && !uncovered.empty(); ++i) {
      const Tick shift = p.beacons.emission(j + i) - first;
      std::vector<Interval> cov;
      for (const auto& w : windows) {
        for (const auto& iv : wrap_interval(w.lo - shift, w.hi - shift, TC)) cov.push_back(iv);
      }
      IntervalSet covered(std::move(cov));
      IntervalSet rest = uncovered.subtract(covered);
      if (rest.measure() != uncovered.measure()) worst = shift;
      uncovered = std::move(rest);
    }
    if (!uncovered.empty()) {
      r.bounded = false;
      r.latency = 0;
      return r;
    }
    r.latency = std::max(r.latency, prev_gap + worst);
  }
  return r;
}

}  // namespace

OracleResult worst_case_latency_oracle(const ProtocolSpec& tx, const ProtocolSpec& rx, const OracleOptions& options) {
  Pair p = prepare(tx, rx, options.max_hyperperiod);
  if (options.method == OracleMethod::FullSweep) return full_sweep(p, options.threads);
  return endpoint_sweep(p);
}

std::optional<Tick> latency_at_phase(const ProtocolSpec& tx, const ProtocolSpec& rx, Tick phase) {
  Pair p = prepare(tx, rx, OracleOptions{}.max_hyperperiod);
  return sweep_phase(p, tables(p), floor_mod(phase, rx.receptions->period()));
}

}  // namespace ndlab
