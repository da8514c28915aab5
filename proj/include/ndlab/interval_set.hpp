#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

namespace ndlab {

struct Interval {
  std::int64_t lo = 0;  // inclusive
  std::int64_t hi = 0;  // exclusive

  std::int64_t length() const { return hi - lo; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sorted, pairwise disjoint, non-adjacent half-open intervals. Adjacent
// inputs are coalesced, so equal point sets compare equal.
class IntervalSet {
 public:
  IntervalSet() = default;
  IntervalSet(std::initializer_list<Interval> items);
  explicit IntervalSet(std::vector<Interval> items);

  static IntervalSet range(std::int64_t lo, std::int64_t hi);

  const std::vector<Interval>& intervals() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::int64_t measure() const;
  bool contains(std::int64_t x) const;

  void insert(Interval iv);

  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  void normalize();

  std::vector<Interval> items_;
};

// Maps [lo, hi) onto the circle [0, period), splitting at the wrap point.
// Intervals of length >= period cover the whole circle.
std::vector<Interval> wrap_interval(std::int64_t lo, std::int64_t hi, std::int64_t period);

std::int64_t floor_mod(std::int64_t a, std::int64_t m);
std::int64_t floor_div(std::int64_t a, std::int64_t m);

}  // namespace ndlab
