#pragma once

#include "ndlab/interval_set.hpp"
#include "ndlab/schedule.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ndlab {

// Offsets Phi_1 of the first in-range beacon (relative to the receiver's
// period origin) for which each beacon of B' lands in a reception window.
class CoverageMap {
 public:
  CoverageMap(Tick period, bool wrapped, Tick listen_per_period, std::vector<IntervalSet> per_beacon);

  Tick period() const { return period_; }
  // True when offsets were reduced modulo the period (repetitive receptions).
  bool wrapped() const { return wrapped_; }
  // Effective listening ticks per period (sum of d_k, or d_k - omega).
  Tick listen_per_period() const { return listen_; }
  const std::vector<IntervalSet>& per_beacon() const { return per_beacon_; }
  std::size_t beacon_count() const { return per_beacon_.size(); }

  // Number of beacons covering phi (phi in [0, period)).
  int multiplicity(Tick phi) const;

 private:
  Tick period_;
  bool wrapped_;
  Tick listen_;
  std::vector<IntervalSet> per_beacon_;
};

struct DeterminismReport {
  bool deterministic = false;
  IntervalSet uncovered;
  bool redundant = false;
  Tick coverage_lambda = 0;  // integral of the multiplicity over [0, T_C)
  std::int64_t min_beacons = 0;
};

// Coverage map of the finite beacon list `beacon_times` (B', first entry is
// b_1) against the reception schedule. `omega` is the transmitter's beacon
// length; it matters only under Contained semantics.
CoverageMap build_coverage_map(std::span<const Tick> beacon_times, const ReceptionSchedule& receptions,
                               ReceptionSemantics semantics, Tick omega);

DeterminismReport analyze(const CoverageMap& map);

// Minimum number of beacons M for deterministic discovery. Throws Infeasible
// when the effective listening time is zero.
std::int64_t min_beacons(const ReceptionSchedule& receptions, ReceptionSemantics semantics, Tick omega);

// tau_i - tau_1 for the first beacon covering phi1, or nullopt.
std::optional<Tick> beacon_to_beacon_latency(const CoverageMap& map, std::span<const Tick> beacon_times, Tick phi1);

// Same quantity computed directly from the schedules for an arbitrary
// (unreduced) integer offset, without building a map.
std::optional<Tick> beacon_to_beacon_latency_direct(std::span<const Tick> beacon_times,
                                                    const ReceptionSchedule& receptions,
                                                    ReceptionSemantics semantics, Tick omega, Tick phi1);

// CSV rows "beacon_index,interval_start,interval_end" with a header line.
std::string coverage_map_csv(const CoverageMap& map);

// ---------------------------------------------------------------------------
// Worst-case latency oracle

enum class OracleMethod {
  // Per-tick sweep of the in-range instant for every distinct relative phase.
  FullSweep,
  // Coverage-map evaluation at interval endpoints only.
  Endpoint,
};

struct OracleOptions {
  OracleMethod method = OracleMethod::Endpoint;
  // Largest hyper-period lcm(T_B, T_C) accepted, in ticks.
  Tick max_hyperperiod = Tick{1} << 32;
  unsigned threads = 1;
};

struct OracleResult {
  bool bounded = false;
  Tick latency = 0;  // valid when bounded
  Tick hyperperiod = 0;
};

// Worst case over all relative phases and in-range instants of the time from
// coming into range until a beacon of `tx` is received by `rx`. A beacon that
// starts at the in-range instant itself counts as already in flight.
OracleResult worst_case_latency_oracle(const ProtocolSpec& tx, const ProtocolSpec& rx,
                                       const OracleOptions& options = {});

// Worst case over in-range instants for one relative phase: the receiver's
// period origin sits `phase` ticks after the transmitter's. nullopt means the
// phase never discovers.
std::optional<Tick> latency_at_phase(const ProtocolSpec& tx, const ProtocolSpec& rx, Tick phase);

// Mutual exclusive one-way discovery between two devices that
// keep their beacons at a fixed distance zeta after their designated (first)
// reception window. The report is expressed over Phi_{F,1}, the offset of F's
// first beacon from E's period origin.
struct QuadrupleReport {
  DeterminismReport combined;
  IntervalSet covered_by_f;  // F's beacons into E's windows
  IntervalSet covered_by_e;  // E's beacons into F's windows, mapped to Phi_{F,1}
};

QuadrupleReport check_correlated_quadruple(const ProtocolSpec& e, const ProtocolSpec& f, Tick zeta);

// Reflection Phi -> shift - Phi of an interval set on the circle [0, period).
IntervalSet reflect(const IntervalSet& set, Tick shift, Tick period);

}  // namespace ndlab
