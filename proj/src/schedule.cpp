#include "ndlab/schedule.hpp"

#include "ndlab/error.hpp"

#include <limits>
#include <numeric>
#include <string>

namespace ndlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

}  // namespace

TimeBase::TimeBase(std::int64_t ns) : tick_ns(ns) {
  if (ns <= 0) invalid("tick duration must be positive");
}

Tick TimeBase::from_us(const Rational& us) const {
  Rational ticks = us * 1000 / tick_ns;
  if (boost::multiprecision::denominator(ticks) != 1) {
    throw Error(ErrorCode::NeedsFinerTicks,
                to_string(us) + " us is not a multiple of the " + std::to_string(tick_ns) + " ns tick");
  }
  return to_int64(boost::multiprecision::numerator(ticks));
}

ReceptionSchedule::ReceptionSchedule(std::vector<ReceptionWindow> windows, Tick period, bool repetitive)
    : windows_(std::move(windows)), period_(period), repetitive_(repetitive) {
  if (period_ <= 0) invalid("reception period must be positive");
  if (windows_.empty()) invalid("reception schedule needs at least one window");
  Tick prev_end = 0;
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    const auto& w = windows_[i];
    if (w.duration < 1) invalid("window " + std::to_string(i) + " has duration < 1");
    if (w.start < 0) invalid("window " + std::to_string(i) + " starts before the period origin");
    if (w.start < prev_end) invalid("windows must be sorted and non-overlapping");
    if (w.end() > period_) invalid("window " + std::to_string(i) + " extends past the period");
    prev_end = w.end();
    total_ += w.duration;
  }
}

BeaconSchedule::BeaconSchedule(std::vector<Tick> times, Tick omega, std::optional<Tick> period)
    : times_(std::move(times)), omega_(omega), period_(period) {
  if (omega_ < 1) invalid("beacon duration omega must be >= 1 tick");
  if (times_.empty()) invalid("beacon schedule needs at least one beacon");
  if (times_.front() < 0) invalid("beacon times must be non-negative");
  for (std::size_t i = 1; i < times_.size(); ++i) {
    if (times_[i] - times_[i - 1] < omega_) {
      invalid("beacon " + std::to_string(i) + " overlaps its predecessor (gap < omega)");
    }
  }
  if (period_) {
    if (*period_ <= times_.back() - times_.front()) invalid("beacon period must exceed the span of one instance");
    if (times_.front() + *period_ - times_.back() < omega_) invalid("wrap-around gap is shorter than omega");
  } else if (times_.size() < 2) {
    invalid("a finite beacon sequence needs at least two beacons");
  }
}

Tick BeaconSchedule::gap(std::size_t i) const {
  if (i + 1 < times_.size()) return times_[i + 1] - times_[i];
  if (!period_) invalid("last beacon of a finite sequence has no successor");
  return times_.front() + *period_ - times_.back();
}

Tick BeaconSchedule::emission(std::int64_t n) const {
  const auto m = static_cast<std::int64_t>(times_.size());
  if (n < 0) invalid("negative beacon index");
  if (!period_) {
    if (n >= m) invalid("beacon index past the end of a finite sequence");
    return times_[static_cast<std::size_t>(n)];
  }
  return times_[static_cast<std::size_t>(n % m)] + (n / m) * *period_;
}

void RadioModel::validate() const {
  if (alpha <= 0) invalid("alpha must be positive");
  if (omega < 1) invalid("omega must be >= 1 tick");
  if (d_oTx < 0 || d_oRx < 0 || d_oTxRx < 0 || d_oRxTx < 0) invalid("radio overheads must be non-negative");
}

ProtocolSpec::ProtocolSpec(TimeBase tb, std::optional<BeaconSchedule> b, std::optional<ReceptionSchedule> c,
                           RadioModel r)
    : time(tb), beacons(std::move(b)), receptions(std::move(c)), radio(std::move(r)) {
  radio.validate();
  if (!beacons && !receptions) invalid("protocol needs beacons, receptions or both");
  if (beacons && beacons->omega() != radio.omega) invalid("beacon omega differs from radio omega");
}

Tick effective_duration(const ReceptionWindow& w, ReceptionSemantics sem, Tick omega) {
  if (sem == ReceptionSemantics::Ideal) return w.duration;
  return w.duration > omega ? w.duration - omega : 0;
}

Rational transmission_duty_cycle(const BeaconSchedule& b) {
  const auto m = static_cast<std::int64_t>(b.size());
  if (b.period()) return rat(m * b.omega(), *b.period());
  // Finite sequence: the first m-1 beacons over the span tau_m - tau_1.
  return rat((m - 1) * b.omega(), b.times().back() - b.times().front());
}

Rational reception_duty_cycle(const ReceptionSchedule& c) { return rat(c.total_listen(), c.period()); }

Rational effective_transmission_duty_cycle(const BeaconSchedule& b, const RadioModel& radio) {
  return transmission_duty_cycle(b) * rat(b.omega() + radio.d_oTx, b.omega());
}

Rational effective_reception_duty_cycle(const ReceptionSchedule& c, const RadioModel& radio) {
  const auto n = static_cast<std::int64_t>(c.size());
  return rat(c.total_listen() + n * radio.d_oRx, c.period());
}

Rational total_duty_cycle(const ProtocolSpec& p) {
  Rational eta = 0;
  if (p.receptions) eta += effective_reception_duty_cycle(*p.receptions, p.radio);
  if (p.beacons) eta += p.radio.alpha * effective_transmission_duty_cycle(*p.beacons, p.radio);
  return eta;
}

std::int64_t checked_lcm(std::int64_t a, std::int64_t b) {
  if (a <= 0 || b <= 0) invalid("lcm of non-positive values");
  std::int64_t g = std::gcd(a, b);
  std::int64_t q = a / g;
  if (q > std::numeric_limits<std::int64_t>::max() / b) {
    throw Error(ErrorCode::HyperperiodTooLarge, "hyper-period overflows 64 bits", -1);
  }
  return q * b;
}

}  // namespace ndlab
