#include "ndlab/protocols.hpp"

#include "ndlab/error.hpp"
#include "ndlab/interval_set.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ndlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }
[[noreturn]] void domain(const std::string& msg) { throw Error(ErrorCode::Domain, msg); }

bool is_prime(std::int64_t p) {
  if (p < 2) return false;
  for (std::int64_t q = 2; q * q <= p; ++q) {
    if (p % q == 0) return false;
  }
  return true;
}

// Representative of x mod k in (-k/2, k/2].
std::int64_t centered(std::int64_t x, std::int64_t k) {
  std::int64_t r = floor_mod(x, k);
  return 2 * r > k ? r - k : r;
}

}  // namespace

ProtocolSpec gen_optimal_unidirectional(std::int64_t k, const Rational& beta, const RadioModel& radio,
                                        std::optional<Tick> window, TimeBase tb) {
  radio.validate();
  if (k < 1) domain("1/gamma must be a positive integer");
  if (beta <= 0 || beta > 1) domain("beta must lie in (0, 1]");
  const Rational gap_r = Rational(radio.omega) / beta;
  if (boost::multiprecision::denominator(gap_r) != 1) {
    throw Error(ErrorCode::NeedsFinerTicks, "omega/beta = " + to_string(gap_r) + " ticks is not an integer");
  }
  const Tick gap = to_int64(boost::multiprecision::numerator(gap_r));
  if (gap < radio.omega) domain("beta above 1 would overlap beacons");

  const bool contained = radio.semantics == ReceptionSemantics::Contained;
  Tick d_eff = gap;
  if (window) {
    d_eff = contained ? *window - radio.omega : *window;
    if (d_eff < 1) domain("window leaves no effective listening time");
  }
  if (gap % d_eff != 0) invalid("effective window length must divide the beacon gap omega/beta");
  const Tick d = contained ? d_eff + radio.omega : d_eff;
  const Tick tc = k * d_eff;
  if (d > tc) domain("window does not fit into T_C = k * d_eff (k = 1 needs ideal semantics)");

  const std::int64_t q = gap / d_eff;
  std::vector<Tick> times;
  bool found = false;
  // Beacon i sits at i*gap + e_i*d_eff with e_i = i*(u - q) mod k; its offset
  // modulo T_C is then i*u*d_eff, a permutation of the k slots whenever
  // gcd(u, k) = 1. Prefer u = q (no displacement).
  std::vector<std::int64_t> units;
  if (std::gcd(q, k) == 1) units.push_back(q);
  for (std::int64_t u = 1; u <= k; ++u) {
    if (std::gcd(u, k) == 1) units.push_back(u);
  }
  for (std::int64_t u : units) {
    std::vector<Tick> cand;
    for (std::int64_t i = 0; i < k; ++i) cand.push_back(i * gap + centered(i * (u - q), k) * d_eff);
    const Tick shift = -*std::min_element(cand.begin(), cand.end());
    for (auto& t : cand) t += shift;
    std::vector<Tick> sorted = cand;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != cand) continue;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cand.size(); ++i) ok = ok && cand[i + 1] - cand[i] >= radio.omega;
    ok = ok && cand.front() + k * gap - cand.back() >= radio.omega;
    if (ok) {
      times = std::move(cand);
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorCode::Infeasible, "no beacon placement keeps all gaps >= omega");

  ReceptionSchedule c({{0, d}}, tc);
  BeaconSchedule b(std::move(times), radio.omega, k * gap);
  return ProtocolSpec(tb, std::move(b), std::move(c), radio);
}

ProtocolSpec gen_pi0m(std::int64_t m, Tick d, const RadioModel& radio, Tick delta, TimeBase tb) {
  radio.validate();
  if (m < 1) domain("M must be at least 1");
  if (d <= radio.omega) domain("d must exceed omega");
  if (delta < 0 || delta >= d) domain("delta must lie in [0, d)");
  ReceptionSchedule c({{0, d}}, (m + 1) * d - delta);
  BeaconSchedule b({0}, radio.omega, d);
  return ProtocolSpec(tb, std::move(b), std::move(c), radio);
}

bool SlotPattern::is_active(std::int64_t n) const {
  return std::binary_search(active.begin(), active.end(), floor_mod(n, slots));
}

DifferenceSet::DifferenceSet(std::int64_t modulus, std::vector<std::int64_t> elements)
    : modulus_(modulus), elements_(std::move(elements)) {
  if (modulus_ < 2) invalid("difference set modulus must be at least 2");
  for (auto& e : elements_) e = floor_mod(e, modulus_);
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    invalid("difference set has repeated residues");
  }
  std::vector<int> count(static_cast<std::size_t>(modulus_), 0);
  for (auto a : elements_) {
    for (auto b : elements_) {
      if (a != b) ++count[static_cast<std::size_t>(floor_mod(a - b, modulus_))];
    }
  }
  for (std::int64_t r = 1; r < modulus_; ++r) {
    if (count[static_cast<std::size_t>(r)] != 1) {
      invalid("residue " + std::to_string(r) + " occurs " + std::to_string(count[static_cast<std::size_t>(r)]) +
              " times as a difference; not a (T,k,1) set");
    }
  }
}

DifferenceSet builtin_difference_set(std::int64_t modulus) {
  switch (modulus) {
    case 7: return DifferenceSet(7, {1, 2, 4});
    case 13: return DifferenceSet(13, {0, 1, 3, 9});
    case 21: return DifferenceSet(21, {3, 6, 7, 12, 14});
    case 31: return DifferenceSet(31, {1, 5, 11, 24, 25, 27});
    default: invalid("no built-in difference set for T = " + std::to_string(modulus));
  }
}

SlotPattern disco_slots(std::int64_t p1, std::int64_t p2) {
  if (p1 < 2 || p2 < 2 || p1 == p2) invalid("Disco needs two distinct periods >= 2");
  if (std::gcd(p1, p2) != 1) invalid("Disco periods must be coprime");
  SlotPattern s;
  s.slots = p1 * p2;
  for (std::int64_t n = 0; n < s.slots; ++n) {
    if (n % p1 == 0 || n % p2 == 0) s.active.push_back(n);
  }
  return s;
}

SlotPattern searchlight_striped_slots(std::int64_t period) {
  if (period < 2) domain("Searchlight period must be at least 2");
  const std::int64_t rounds = (period + 1) / 2;
  SlotPattern s;
  s.slots = rounds * period;
  for (std::int64_t j = 0; j < rounds; ++j) {
    s.active.push_back(j * period);
    s.active.push_back(j * period + 1 + j);
  }
  return s;
}

SlotPattern uconnect_slots(std::int64_t p) {
  if (p < 3 || !is_prime(p)) invalid("U-Connect needs an odd prime p");
  SlotPattern s;
  s.slots = p * p;
  for (std::int64_t n = 0; n < s.slots; ++n) {
    if (n % p == 0 || n < (p + 1) / 2) s.active.push_back(n);
  }
  return s;
}

SlotPattern diffcode_slots(const DifferenceSet& ds) {
  return SlotPattern{ds.modulus(), ds.elements()};
}

std::int64_t shared_active_slots(const SlotPattern& a, const SlotPattern& b, std::int64_t rotation) {
  if (a.slots != b.slots) invalid("slot patterns have different hyper-periods");
  std::int64_t n = 0;
  for (auto x : a.active) n += b.is_active(x + rotation) ? 1 : 0;
  return n;
}

ProtocolSpec slotted_protocol(const SlotPattern& pattern, Tick slot_length, const RadioModel& radio, TimeBase tb) {
  radio.validate();
  if (pattern.active.empty()) invalid("slot pattern has no active slot");
  if (slot_length < 2 * radio.omega) domain("slot length must hold two beacons (I >= 2 omega)");
  std::vector<ReceptionWindow> windows;
  std::vector<Tick> times;
  for (auto n : pattern.active) {
    windows.push_back({n * slot_length, slot_length});
    times.push_back(n * slot_length);
    times.push_back((n + 1) * slot_length - radio.omega);
  }
  const Tick period = pattern.slots * slot_length;
  return ProtocolSpec(tb, BeaconSchedule(std::move(times), radio.omega, period),
                      ReceptionSchedule(std::move(windows), period), radio);
}

ProtocolSpec gen_disco(std::int64_t p1, std::int64_t p2, Tick slot_length, const RadioModel& radio, TimeBase tb) {
  return slotted_protocol(disco_slots(p1, p2), slot_length, radio, tb);
}

ProtocolSpec gen_searchlight_striped(std::int64_t period, Tick slot_length, const RadioModel& radio, TimeBase tb) {
  return slotted_protocol(searchlight_striped_slots(period), slot_length, radio, tb);
}

ProtocolSpec gen_uconnect(std::int64_t p, Tick slot_length, const RadioModel& radio, TimeBase tb) {
  return slotted_protocol(uconnect_slots(p), slot_length, radio, tb);
}

ProtocolSpec gen_diffcode(const DifferenceSet& ds, Tick slot_length, const RadioModel& radio, TimeBase tb) {
  return slotted_protocol(diffcode_slots(ds), slot_length, radio, tb);
}

CorrelatedQuadruple gen_correlated_quadruple(std::int64_t m, Tick d, const RadioModel& radio, TimeBase tb) {
  radio.validate();
  if (m < 4 || m % 2 != 0) domain("M must be even and at least 4");
  if (d % 2 == 0) domain("window length d must be odd so that zeta is an integer");
  if (d < radio.omega) domain("window length must be at least omega");
  const Tick tc = m * d;
  const Tick zeta = (3 * d - 1) / 2;
  // Offsets in units of d. E's first beacon reflects onto F-slot 2, so F takes
  // slots {0, 1} and {M/2+2, ..., M-1}; E takes {2, ..., M/2+1}.
  std::vector<Tick> f_times{zeta};
  for (std::int64_t j = 1; j <= m / 2 - 2; ++j) f_times.push_back(zeta + j * d);
  f_times.push_back(zeta + (m - 1) * d);
  std::vector<Tick> e_times;
  for (std::int64_t j = 0; j < m / 2; ++j) e_times.push_back(zeta + j * d);

  ReceptionSchedule c({{0, d}}, tc);
  CorrelatedQuadruple q{
      ProtocolSpec(tb, BeaconSchedule(std::move(e_times), radio.omega, tc), c, radio),
      ProtocolSpec(tb, BeaconSchedule(std::move(f_times), radio.omega, tc), c, radio),
      zeta,
      m / 2,
  };
  return q;
}

}  // namespace ndlab
