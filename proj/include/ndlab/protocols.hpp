#pragma once

#include "ndlab/schedule.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ndlab {

// ---------------------------------------------------------------------------
// Slotless optimal constructions

// One window per T_C = k * d_eff with d_eff = d (ideal) or d - omega
// (contained), and k beacons per T_B = k * omega / beta. When `window` is
// omitted d_eff equals the mean beacon gap. Beacons are equally spaced when
// gcd(gap / d_eff, k) = 1; otherwise they are displaced by multiples of d_eff
// so that every k consecutive beacons still tile [0, T_C) exactly once.
ProtocolSpec gen_optimal_unidirectional(std::int64_t k, const Rational& beta, const RadioModel& radio,
                                        std::optional<Tick> window = std::nullopt, TimeBase tb = {});

// Periodic beacons with T_B = d, one window of length d per
// T_C = (M+1) d - delta.
ProtocolSpec gen_pi0m(std::int64_t m, Tick d, const RadioModel& radio, Tick delta = 1, TimeBase tb = {});

// ---------------------------------------------------------------------------
// Slotted protocols

// Active slot indices within one hyper-period of `slots` slots.
struct SlotPattern {
  std::int64_t slots = 0;
  std::vector<std::int64_t> active;

  bool is_active(std::int64_t n) const;
};

class DifferenceSet {
 public:
  // Throws InvalidArgument unless every nonzero residue is the difference of
  // exactly one ordered pair of elements.
  DifferenceSet(std::int64_t modulus, std::vector<std::int64_t> elements);

  std::int64_t modulus() const { return modulus_; }
  const std::vector<std::int64_t>& elements() const { return elements_; }

 private:
  std::int64_t modulus_;
  std::vector<std::int64_t> elements_;
};

// Built-in (T, k, 1) sets for T in {7, 13, 21, 31}.
DifferenceSet builtin_difference_set(std::int64_t modulus);

SlotPattern disco_slots(std::int64_t p1, std::int64_t p2);
SlotPattern searchlight_striped_slots(std::int64_t period);
SlotPattern uconnect_slots(std::int64_t p);
SlotPattern diffcode_slots(const DifferenceSet& ds);

// Number of slots active on both patterns when the second is rotated by
// `rotation` slots. Both patterns must share the hyper-period.
std::int64_t shared_active_slots(const SlotPattern& a, const SlotPattern& b, std::int64_t rotation);

// Each active slot n becomes a reception window [nI, (n+1)I) with beacons in
// its first and last omega ticks.
ProtocolSpec slotted_protocol(const SlotPattern& pattern, Tick slot_length, const RadioModel& radio,
                              TimeBase tb = {});

ProtocolSpec gen_disco(std::int64_t p1, std::int64_t p2, Tick slot_length, const RadioModel& radio,
                       TimeBase tb = {});
ProtocolSpec gen_searchlight_striped(std::int64_t period, Tick slot_length, const RadioModel& radio,
                                     TimeBase tb = {});
ProtocolSpec gen_uconnect(std::int64_t p, Tick slot_length, const RadioModel& radio, TimeBase tb = {});
ProtocolSpec gen_diffcode(const DifferenceSet& ds, Tick slot_length, const RadioModel& radio, TimeBase tb = {});

// ---------------------------------------------------------------------------
// Mutual exclusive one-way discovery

struct CorrelatedQuadruple {
  ProtocolSpec e;
  ProtocolSpec f;
  Tick zeta = 0;
  std::int64_t beacons_per_device = 0;
};

// Two devices with one window [0, d) per T_C = M d and beacons starting
// zeta = (3d - 1) / 2 after it; F's beacons cover half of the offsets, E's
// beacons the other half. d must be odd and M even, M >= 4.
CorrelatedQuadruple gen_correlated_quadruple(std::int64_t m, Tick d, const RadioModel& radio, TimeBase tb = {});

}  // namespace ndlab
