#include "ndlab/coverage.hpp"

#include "ndlab/error.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace ndlab {

namespace {

constexpr Tick kShiftLimit = std::numeric_limits<Tick>::max() / 4;

}  // namespace

CoverageMap::CoverageMap(Tick period, bool wrapped, Tick listen_per_period, std::vector<IntervalSet> per_beacon)
    : period_(period), wrapped_(wrapped), listen_(listen_per_period), per_beacon_(std::move(per_beacon)) {}

int CoverageMap::multiplicity(Tick phi) const {
  int k = 0;
  for (const auto& s : per_beacon_) k += s.contains(phi) ? 1 : 0;
  return k;
}

// Offsets Phi_1 for which a beacon sent `shift` ticks after b_1 is received.
static IntervalSet shifted_coverage(const ReceptionSchedule& c, ReceptionSemantics sem, Tick omega, Tick shift) {
  std::vector<Interval> out;
  const Tick T = c.period();
  for (const auto& w : c.windows()) {
    Tick eff = effective_duration(w, sem, omega);
    if (eff == 0) continue;
    Tick lo = w.start - shift;
    Tick hi = lo + eff;
    if (c.repetitive()) {
      for (const auto& iv : wrap_interval(lo, hi, T)) out.push_back(iv);
    } else {
      lo = std::max<Tick>(lo, 0);
      hi = std::min(hi, T);
      if (lo < hi) out.push_back({lo, hi});
    }
  }
  return IntervalSet(std::move(out));
}

CoverageMap build_coverage_map(std::span<const Tick> beacon_times, const ReceptionSchedule& receptions,
                               ReceptionSemantics semantics, Tick omega) {
  if (beacon_times.empty()) throw Error(ErrorCode::InvalidArgument, "B' must contain at least one beacon");
  std::vector<IntervalSet> per;
  per.reserve(beacon_times.size());
  const Tick first = beacon_times.front();
  for (std::size_t i = 0; i < beacon_times.size(); ++i) {
    if (i > 0 && beacon_times[i] <= beacon_times[i - 1]) {
      throw Error(ErrorCode::InvalidArgument, "beacon times must be strictly increasing");
    }
    Tick shift = beacon_times[i] - first;
    if (shift > kShiftLimit) throw Error(ErrorCode::HorizonOverflow, "beacon shift exceeds representable ticks", shift);
    per.push_back(shifted_coverage(receptions, semantics, omega, shift));
  }
  Tick listen = 0;
  for (const auto& w : receptions.windows()) listen += effective_duration(w, semantics, omega);
  return CoverageMap(receptions.period(), receptions.repetitive(), listen, std::move(per));
}

DeterminismReport analyze(const CoverageMap& map) {
  std::vector<std::pair<Tick, int>> events;
  for (const auto& s : map.per_beacon()) {
    for (const auto& iv : s.intervals()) {
      events.emplace_back(iv.lo, +1);
      events.emplace_back(iv.hi, -1);
    }
  }
  std::sort(events.begin(), events.end());

  DeterminismReport rep;
  std::vector<Interval> uncovered;
  Tick cursor = 0;
  int depth = 0;
  std::size_t e = 0;
  while (cursor < map.period()) {
    while (e < events.size() && events[e].first <= cursor) depth += events[e++].second;
    Tick next = e < events.size() ? std::min(events[e].first, map.period()) : map.period();
    Tick len = next - cursor;
    if (depth == 0) uncovered.push_back({cursor, next});
    if (depth >= 2) rep.redundant = true;
    rep.coverage_lambda += static_cast<Tick>(depth) * len;
    cursor = next;
  }
  rep.uncovered = IntervalSet(std::move(uncovered));
  rep.deterministic = rep.uncovered.empty();
  if (map.listen_per_period() > 0) {
    rep.min_beacons = (map.period() + map.listen_per_period() - 1) / map.listen_per_period();
  }
  return rep;
}

std::int64_t min_beacons(const ReceptionSchedule& receptions, ReceptionSemantics semantics, Tick omega) {
  Tick listen = 0;
  for (const auto& w : receptions.windows()) listen += effective_duration(w, semantics, omega);
  if (listen <= 0) throw Error(ErrorCode::Infeasible, "effective window length is zero; no beacon can be received");
  // Non-repetitive schedules: ceil(1/gamma) over the horizon, which is the
  // same ceiling with the horizon in place of T_C.
  return (receptions.period() + listen - 1) / listen;
}

std::optional<Tick> beacon_to_beacon_latency(const CoverageMap& map, std::span<const Tick> beacon_times, Tick phi1) {
  if (phi1 < 0 || phi1 >= map.period()) throw Error(ErrorCode::InvalidArgument, "phi1 outside [0, T_C)");
  if (beacon_times.size() != map.beacon_count()) {
    throw Error(ErrorCode::InvalidArgument, "beacon list does not match the coverage map");
  }
  for (std::size_t i = 0; i < map.beacon_count(); ++i) {
    if (map.per_beacon()[i].contains(phi1)) return beacon_times[i] - beacon_times.front();
  }
  return std::nullopt;
}

std::optional<Tick> beacon_to_beacon_latency_direct(std::span<const Tick> beacon_times,
                                                    const ReceptionSchedule& receptions,
                                                    ReceptionSemantics semantics, Tick omega, Tick phi1) {
  for (Tick t : beacon_times) {
    Tick pos = phi1 + (t - beacon_times.front());
    if (receptions.repetitive()) {
      pos = floor_mod(pos, receptions.period());
    } else if (pos < 0 || pos >= receptions.period()) {
      continue;
    }
    for (const auto& w : receptions.windows()) {
      if (pos >= w.start && pos < w.start + effective_duration(w, semantics, omega)) return t - beacon_times.front();
    }
  }
  return std::nullopt;
}

std::string coverage_map_csv(const CoverageMap& map) {
  std::ostringstream os;
  os << "beacon_index,interval_start,interval_end\n";
  for (std::size_t i = 0; i < map.beacon_count(); ++i) {
    for (const auto& iv : map.per_beacon()[i].intervals()) os << i << ',' << iv.lo << ',' << iv.hi << '\n';
  }
  return os.str();
}

IntervalSet reflect(const IntervalSet& set, Tick shift, Tick period) {
  // Integer points x in [a, b) map to shift - x, i.e. [shift - b + 1, shift - a + 1).
  std::vector<Interval> out;
  for (const auto& iv : set.intervals()) {
    for (const auto& w : wrap_interval(shift - iv.hi + 1, shift - iv.lo + 1, period)) out.push_back(w);
  }
  return IntervalSet(std::move(out));
}

QuadrupleReport check_correlated_quadruple(const ProtocolSpec& e, const ProtocolSpec& f, Tick zeta) {
  for (const auto* p : {&e, &f}) {
    if (!p->beacons || !p->receptions) {
      throw Error(ErrorCode::InvalidArgument, "both devices must run beacons and reception windows");
    }
    if (!p->receptions->repetitive()) throw Error(ErrorCode::InvalidArgument, "reception schedules must be repetitive");
    if (p->beacons->times().front() - p->receptions->windows().front().start != zeta) {
      throw Error(ErrorCode::InvalidArgument, "first beacon is not zeta ticks after the designated window");
    }
  }
  const Tick T = e.receptions->period();
  if (f.receptions->period() != T) {
    throw Error(ErrorCode::MisalignedPeriods, "reception periods differ between the devices");
  }

  // Phi_{F,1}: F's beacons against E's windows.
  CoverageMap omega_f =
      build_coverage_map(f.beacons->times(), *e.receptions, e.radio.semantics, f.beacons->omega());
  // Phi_{E,1}: E's beacons against F's windows; Phi_{E,1} = 2 zeta + w_E + w_F - Phi_{F,1}
  // where w are the designated window starts (zero when windows sit at the origin).
  CoverageMap omega_e =
      build_coverage_map(e.beacons->times(), *f.receptions, f.radio.semantics, e.beacons->omega());
  const Tick shift = 2 * zeta + e.receptions->windows().front().start + f.receptions->windows().front().start;

  std::vector<IntervalSet> per;
  QuadrupleReport rep;
  for (const auto& s : omega_f.per_beacon()) {
    per.push_back(s);
    rep.covered_by_f = rep.covered_by_f.unite(s);
  }
  for (const auto& s : omega_e.per_beacon()) {
    IntervalSet mapped = reflect(s, shift, T);
    per.push_back(mapped);
    rep.covered_by_e = rep.covered_by_e.unite(mapped);
  }
  Tick listen = omega_f.listen_per_period() + omega_e.listen_per_period();
  rep.combined = analyze(CoverageMap(T, true, listen, std::move(per)));
  return rep;
}

}  // namespace ndlab
