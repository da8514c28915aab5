#pragma once

#include "ndlab/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ndlab {

// All schedule quantities are integer tick counts.
using Tick = std::int64_t;

struct TimeBase {
  std::int64_t tick_ns = 1000;

  TimeBase() = default;
  explicit TimeBase(std::int64_t ns);

  double tick_seconds() const { return static_cast<double>(tick_ns) * 1e-9; }
  // Converts a microsecond quantity to ticks; throws NeedsFinerTicks when it
  // is not an integer multiple of the tick.
  Tick from_us(const Rational& us) const;

  friend bool operator==(const TimeBase&, const TimeBase&) = default;
};

// Half-open listening interval [start, start + duration) relative to the
// reception period origin.
struct ReceptionWindow {
  Tick start = 0;
  Tick duration = 0;

  Tick end() const { return start + duration; }
  friend bool operator==(const ReceptionWindow&, const ReceptionWindow&) = default;
};

class ReceptionSchedule {
 public:
  // `period` is T_C for repetitive schedules and the analysis horizon for
  // non-repetitive (finite) ones.
  ReceptionSchedule(std::vector<ReceptionWindow> windows, Tick period, bool repetitive = true);

  const std::vector<ReceptionWindow>& windows() const { return windows_; }
  Tick period() const { return period_; }
  bool repetitive() const { return repetitive_; }
  std::size_t size() const { return windows_.size(); }
  Tick total_listen() const { return total_; }

  friend bool operator==(const ReceptionSchedule&, const ReceptionSchedule&) = default;

 private:
  std::vector<ReceptionWindow> windows_;
  Tick period_;
  bool repetitive_;
  Tick total_ = 0;
};

// Beacons of uniform length omega emitted at `times`. When `period` is set the
// sequence repeats every period (m_B = times.size()); otherwise it is a finite
// sequence.
class BeaconSchedule {
 public:
  BeaconSchedule(std::vector<Tick> times, Tick omega, std::optional<Tick> period);

  const std::vector<Tick>& times() const { return times_; }
  Tick omega() const { return omega_; }
  const std::optional<Tick>& period() const { return period_; }
  bool repetitive() const { return period_.has_value(); }
  std::size_t size() const { return times_.size(); }

  // Gap from beacon i to its successor; wraps around the period for the last
  // beacon of a repetitive schedule.
  Tick gap(std::size_t i) const;

  // Emission time of the n-th beacon of the infinite repetition (n may be
  // any index >= 0, counted from times()[0]).
  Tick emission(std::int64_t n) const;

  friend bool operator==(const BeaconSchedule&, const BeaconSchedule&) = default;

 private:
  std::vector<Tick> times_;
  Tick omega_;
  std::optional<Tick> period_;
};

enum class ReceptionSemantics {
  // A beacon is received when its start lies in a window; its own duration is
  // neglected.
  Ideal,
  // The whole beacon must fit: starts in [w, w + d - omega).
  Contained,
};

struct RadioModel {
  Rational alpha = 1;
  Tick omega = 1;
  Tick d_oTx = 0;
  Tick d_oRx = 0;
  Tick d_oTxRx = 0;
  Tick d_oRxTx = 0;
  ReceptionSemantics semantics = ReceptionSemantics::Ideal;

  void validate() const;
  friend bool operator==(const RadioModel&, const RadioModel&) = default;
};

// A device configuration. Either sequence may be absent (pure transmitter or
// pure listener).
struct ProtocolSpec {
  TimeBase time;
  std::optional<BeaconSchedule> beacons;
  std::optional<ReceptionSchedule> receptions;
  RadioModel radio;

  ProtocolSpec() = default;
  ProtocolSpec(TimeBase tb, std::optional<BeaconSchedule> b, std::optional<ReceptionSchedule> c,
               RadioModel r);

  friend bool operator==(const ProtocolSpec&, const ProtocolSpec&) = default;
};

// Effective window length under the given semantics (d or d - omega, floored
// at zero).
Tick effective_duration(const ReceptionWindow& w, ReceptionSemantics sem, Tick omega);

Rational transmission_duty_cycle(const BeaconSchedule& b);
Rational reception_duty_cycle(const ReceptionSchedule& c);

// beta and gamma including the sleep<->Tx / sleep<->Rx switching overheads.
Rational effective_transmission_duty_cycle(const BeaconSchedule& b, const RadioModel& radio);
Rational effective_reception_duty_cycle(const ReceptionSchedule& c, const RadioModel& radio);

// eta = gamma + alpha * beta, both terms including radio overheads.
Rational total_duty_cycle(const ProtocolSpec& p);

std::int64_t checked_lcm(std::int64_t a, std::int64_t b);

}  // namespace ndlab
