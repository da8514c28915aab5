#include "ndlab/interval_set.hpp"

#include <algorithm>

namespace ndlab {

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t floor_div(std::int64_t a, std::int64_t m) {
  std::int64_t q = a / m;
  return (a % m != 0 && ((a < 0) != (m < 0))) ? q - 1 : q;
}

IntervalSet::IntervalSet(std::initializer_list<Interval> items) : items_(items) { normalize(); }

IntervalSet::IntervalSet(std::vector<Interval> items) : items_(std::move(items)) { normalize(); }

IntervalSet IntervalSet::range(std::int64_t lo, std::int64_t hi) { return IntervalSet{{lo, hi}}; }

void IntervalSet::normalize() {
  std::erase_if(items_, [](const Interval& iv) { return iv.hi <= iv.lo; });
  std::sort(items_.begin(), items_.end(), [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  std::vector<Interval> out;
  out.reserve(items_.size());
  for (const auto& iv : items_) {
    if (!out.empty() && iv.lo <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  items_ = std::move(out);
}

std::int64_t IntervalSet::measure() const {
  std::int64_t total = 0;
  for (const auto& iv : items_) total += iv.length();
  return total;
}

bool IntervalSet::contains(std::int64_t x) const {
  auto it = std::upper_bound(items_.begin(), items_.end(), x,
                             [](std::int64_t v, const Interval& iv) { return v < iv.lo; });
  if (it == items_.begin()) return false;
  --it;
  return x < it->hi;
}

void IntervalSet::insert(Interval iv) {
  if (iv.hi <= iv.lo) return;
  items_.push_back(iv);
  normalize();
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<Interval> all = items_;
  all.insert(all.end(), other.items_.begin(), other.items_.end());
  return IntervalSet(std::move(all));
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < items_.size() && j < other.items_.size()) {
    const auto& a = items_[i];
    const auto& b = other.items_[j];
    std::int64_t lo = std::max(a.lo, b.lo);
    std::int64_t hi = std::min(a.hi, b.hi);
    if (lo < hi) out.push_back({lo, hi});
    if (a.hi < b.hi) ++i;
    else ++j;
  }
  return IntervalSet(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  std::vector<Interval> out;
  std::size_t j = 0;
  for (auto cur : items_) {
    while (j < other.items_.size() && other.items_[j].hi <= cur.lo) ++j;
    std::size_t k = j;
    while (k < other.items_.size() && other.items_[k].lo < cur.hi) {
      const auto& cut = other.items_[k];
      if (cut.lo > cur.lo) out.push_back({cur.lo, cut.lo});
      cur.lo = std::max(cur.lo, cut.hi);
      if (cur.lo >= cur.hi) break;
      ++k;
    }
    if (cur.lo < cur.hi) out.push_back(cur);
  }
  return IntervalSet(std::move(out));
}

std::vector<Interval> wrap_interval(std::int64_t lo, std::int64_t hi, std::int64_t period) {
  if (hi <= lo) return {};
  if (hi - lo >= period) return {{0, period}};
  std::int64_t a = floor_mod(lo, period);
  std::int64_t b = a + (hi - lo);
  if (b <= period) return {{a, b}};
  return {{a, period}, {0, b - period}};
}

}  // namespace ndlab
