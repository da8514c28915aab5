#pragma once

#include "ndlab/schedule.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ndlab {

// A device placed on the shared time axis: at the in-range instant t = 0 it
// is `offset` ticks into its own schedule, i.e. its period origin sits at
// absolute time -offset.
struct Placement {
  const ProtocolSpec* spec = nullptr;
  Tick offset = 0;
};

struct PairOptions {
  // Own transmissions block reception for
  // [x - d_oRxTx, x + omega + d_oTxRx) around each own beacon start x.
  bool self_blocking = true;
  // Give up after this many ticks past the in-range instant.
  Tick horizon = 0;  // 0: twice the pair hyper-period plus one beacon period
};

// Latency until the receiver hears a beacon of the transmitter. Beacons
// starting at t <= 0 are not receivable. nullopt when nothing is received
// within the horizon.
std::optional<Tick> one_way_latency(const Placement& tx, const Placement& rx, const PairOptions& options = {});

struct PairOutcome {
  std::optional<Tick> e_to_f;  // F receives a beacon of E
  std::optional<Tick> f_to_e;  // E receives a beacon of F
};

PairOutcome simulate_pair(const ProtocolSpec& e, const ProtocolSpec& f, Tick e_offset, Tick f_offset,
                          const PairOptions& options = {});

struct ExhaustiveResult {
  bool bounded = true;
  Tick worst = 0;
  std::int64_t cases = 0;
};

// Max of one_way_latency over every joint placement (the transmitter over
// lcm(T_B, T_C) offsets, the receiver over gcd(T_B, T_C) offsets).
ExhaustiveResult exhaustive_one_way(const ProtocolSpec& tx, const ProtocolSpec& rx, const PairOptions& options = {});

// Whether a device running `p` can receive a beacon starting at schedule
// time u (its own clock), taking semantics and self-blocking into account.
bool can_receive_at(const ProtocolSpec& p, Tick u, bool self_blocking = true);

// Fraction of effective listening ticks over one own hyper-period during
// which own beacons block reception (simulation-side measurement).
double measured_self_blocking(const ProtocolSpec& p);

// beta / omega * (d_oTxRx + d_oRxTx + omega); 0 for a silent device.
Rational self_blocking_probability(const ProtocolSpec& p);

// ---------------------------------------------------------------------------
// Multi-device runs

enum class OffsetSampling { UniformRandom, ExhaustiveTicks };

struct SimConfig {
  // devices[0] joins and is discovered by devices[1]; every other device with
  // beacons is an interferer.
  std::vector<ProtocolSpec> devices;
  std::int64_t trials = 1;
  std::uint64_t seed = 1;
  Tick horizon = 0;                    // 0: derived from the pair hyper-period
  std::optional<Tick> deadline;        // latency target L; default: pair oracle
  OffsetSampling sampling = OffsetSampling::UniformRandom;
  unsigned threads = 1;
};

struct TrialRecord {
  std::int64_t trial = 0;
  std::vector<Tick> offsets;
  std::optional<Tick> latency;
  bool collided_first = false;
  bool covering_collided = false;  // the first beacon that lands in a window collided
  bool within_deadline = false;
};

struct SimOutcome {
  std::vector<TrialRecord> trials;
  std::int64_t senders = 0;  // S: devices that transmit beacons
  Tick deadline = 0;
  double beta = 0;           // joiner's channel utilization
  std::int64_t first_collisions = 0;
  std::int64_t covering_collisions = 0;
  std::int64_t failures = 0;          // not discovered within the deadline
  std::int64_t never_discovered = 0;  // not discovered within the horizon
  std::int64_t audit_violations = 0;  // covering beacon collided yet discovered in time

  double first_collision_rate() const;
  double failure_rate() const;
};

SimOutcome simulate_multi(const SimConfig& cfg);

std::string trials_csv(const SimOutcome& out);
// JSON document with rates, Wilson intervals and the pure-ALOHA prediction.
std::string summary_json(const SimOutcome& out);

}  // namespace ndlab
