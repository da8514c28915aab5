#include "ndlab/simulator.hpp"

#include "csv.hpp"
#include "ndlab/bounds.hpp"
#include "ndlab/coverage.hpp"
#include "ndlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace ndlab {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); }

// A schedule pinned to the shared time axis.
class Device {
 public:
  Device(const ProtocolSpec& p, Tick offset) : spec_(&p), offset_(offset) {
    if (p.beacons) {
      if (!p.beacons->repetitive()) invalid("simulation needs repetitive beacon schedules");
      tb_ = *p.beacons->period();
      for (Tick t : p.beacons->times()) res_.push_back(floor_mod(t, tb_));
      std::sort(res_.begin(), res_.end());
    }
    if (p.receptions && !p.receptions->repetitive()) invalid("simulation needs repetitive reception schedules");
  }

  const ProtocolSpec& spec() const { return *spec_; }
  bool transmits() const { return !res_.empty(); }
  bool listens() const { return spec_->receptions.has_value(); }

  // Earliest own beacon start at or after absolute time t.
  Tick next_beacon(Tick t) const {
    const Tick u = t + offset_;
    const Tick r = floor_mod(u, tb_);
    const Tick base = u - r;
    auto it = std::lower_bound(res_.begin(), res_.end(), r);
    const Tick v = it == res_.end() ? base + tb_ + res_.front() : base + *it;
    return v - offset_;
  }

  bool beacon_in(Tick lo, Tick hi) const { return transmits() && lo < hi && next_beacon(lo) < hi; }

  // Absolute time t falls inside a window; `effective` applies the semantics.
  bool in_window(Tick t, bool effective) const {
    if (!listens()) return false;
    const auto& c = *spec_->receptions;
    const Tick pos = floor_mod(t + offset_, c.period());
    const auto& ws = c.windows();
    auto it = std::upper_bound(ws.begin(), ws.end(), pos,
                               [](Tick x, const ReceptionWindow& w) { return x < w.start; });
    if (it == ws.begin()) return false;
    --it;
    const Tick len = effective ? effective_duration(*it, spec_->radio.semantics, spec_->radio.omega) : it->duration;
    return pos < it->start + len;
  }

  bool blocked(Tick t) const {
    if (!transmits()) return false;
    const auto& r = spec_->radio;
    // Own start x blocks [x - d_oRxTx, x + omega + d_oTxRx).
    return beacon_in(t - r.omega - r.d_oTxRx + 1, t + r.d_oRxTx + 1);
  }

  bool receives(Tick t, bool self_blocking) const {
    return in_window(t, true) && !(self_blocking && blocked(t));
  }

 private:
  const ProtocolSpec* spec_;
  Tick offset_;
  Tick tb_ = 0;
  std::vector<Tick> res_;
};

Tick own_hyperperiod(const ProtocolSpec& p) {
  Tick h = 1;
  if (p.beacons && p.beacons->period()) h = checked_lcm(h, *p.beacons->period());
  if (p.receptions) h = checked_lcm(h, p.receptions->period());
  return h;
}

Tick default_horizon(const ProtocolSpec& tx, const ProtocolSpec& rx) {
  const Tick tb = *tx.beacons->period();
  return 2 * checked_lcm(tb, rx.receptions->period()) + tb;
}

void require_pair(const ProtocolSpec& tx, const ProtocolSpec& rx) {
  if (!tx.beacons) invalid("transmitter has no beacon schedule");
  if (!rx.receptions) invalid("receiver has no reception schedule");
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::pair<double, double> wilson95(std::int64_t k, std::int64_t n) {
  if (n == 0) return {0.0, 1.0};
  const double z = 1.959963984540054;
  const double p = static_cast<double>(k) / static_cast<double>(n);
  const double nn = static_cast<double>(n);
  const double den = 1 + z * z / nn;
  const double mid = (p + z * z / (2 * nn)) / den;
  const double half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / den;
  return {std::max(0.0, mid - half), std::min(1.0, mid + half)};
}

}  // namespace

std::optional<Tick> one_way_latency(const Placement& tx, const Placement& rx, const PairOptions& options) {
  require_pair(*tx.spec, *rx.spec);
  const Device t(*tx.spec, tx.offset);
  const Device r(*rx.spec, rx.offset);
  const Tick horizon = options.horizon > 0 ? options.horizon : default_horizon(*tx.spec, *rx.spec);
  for (Tick s = t.next_beacon(1); s <= horizon; s = t.next_beacon(s + 1)) {
    if (r.receives(s, options.self_blocking)) return s;
  }
  return std::nullopt;
}

PairOutcome simulate_pair(const ProtocolSpec& e, const ProtocolSpec& f, Tick e_offset, Tick f_offset,
                          const PairOptions& options) {
  PairOutcome out;
  if (e.beacons && f.receptions) out.e_to_f = one_way_latency({&e, e_offset}, {&f, f_offset}, options);
  if (f.beacons && e.receptions) out.f_to_e = one_way_latency({&f, f_offset}, {&e, e_offset}, options);
  return out;
}

ExhaustiveResult exhaustive_one_way(const ProtocolSpec& tx, const ProtocolSpec& rx, const PairOptions& options) {
  require_pair(tx, rx);
  const Tick tb = *tx.beacons->period();
  const Tick tc = rx.receptions->period();
  const Tick h = checked_lcm(tb, tc);
  const Tick g = std::gcd(tb, tc);
  ExhaustiveResult res;
  for (Tick rx_off = 0; rx_off < g; ++rx_off) {
    for (Tick tx_off = 0; tx_off < h; ++tx_off) {
      ++res.cases;
      auto l = one_way_latency({&tx, tx_off}, {&rx, rx_off}, options);
      if (!l) {
        res.bounded = false;
        return res;
      }
      res.worst = std::max(res.worst, *l);
    }
  }
  return res;
}

bool can_receive_at(const ProtocolSpec& p, Tick u, bool self_blocking) {
  return Device(p, 0).receives(u, self_blocking);
}

double measured_self_blocking(const ProtocolSpec& p) {
  if (!p.receptions) invalid("device has no reception schedule");
  if (!p.beacons) return 0.0;
  const Tick h = own_hyperperiod(p);
  if (h > (Tick{1} << 28)) throw Error(ErrorCode::HyperperiodTooLarge, "hyper-period too long to replay", h);
  const Device d(p, 0);
  std::int64_t listening = 0;
  std::int64_t lost = 0;
  for (Tick u = 0; u < h; ++u) {
    if (!d.in_window(u, false)) continue;
    ++listening;
    if (d.blocked(u)) ++lost;
  }
  return listening == 0 ? 0.0 : static_cast<double>(lost) / static_cast<double>(listening);
}

Rational self_blocking_probability(const ProtocolSpec& p) {
  if (!p.beacons) return 0;
  const auto& r = p.radio;
  return transmission_duty_cycle(*p.beacons) / p.beacons->omega() * (r.d_oTxRx + r.d_oRxTx + p.beacons->omega());
}

double SimOutcome::first_collision_rate() const {
  return trials.empty() ? 0.0 : static_cast<double>(first_collisions) / static_cast<double>(trials.size());
}

double SimOutcome::failure_rate() const {
  return trials.empty() ? 0.0 : static_cast<double>(failures) / static_cast<double>(trials.size());
}

SimOutcome simulate_multi(const SimConfig& cfg) {
  if (cfg.devices.size() < 2) invalid("simulation needs at least two devices");
  if (cfg.trials < 1) invalid("trials must be at least 1");
  const ProtocolSpec& joiner = cfg.devices[0];
  const ProtocolSpec& receiver = cfg.devices[1];
  require_pair(joiner, receiver);

  SimOutcome out;
  for (const auto& d : cfg.devices) out.senders += d.beacons ? 1 : 0;
  out.beta = to_double(transmission_duty_cycle(*joiner.beacons));
  if (cfg.deadline) {
    out.deadline = *cfg.deadline;
  } else {
    auto o = worst_case_latency_oracle(joiner, receiver);
    out.deadline = o.bounded ? o.latency : default_horizon(joiner, receiver);
  }
  const Tick horizon = cfg.horizon > 0 ? cfg.horizon : default_horizon(joiner, receiver) + out.deadline;

  std::vector<Tick> hyper;
  for (const auto& d : cfg.devices) hyper.push_back(own_hyperperiod(d));

  std::int64_t n = cfg.trials;
  Tick ex_h = 0;
  Tick ex_g = 0;
  if (cfg.sampling == OffsetSampling::ExhaustiveTicks) {
    if (cfg.devices.size() != 2) invalid("exhaustive offsets are supported for two devices only");
    ex_h = checked_lcm(*joiner.beacons->period(), receiver.receptions->period());
    ex_g = std::gcd(*joiner.beacons->period(), receiver.receptions->period());
    n = ex_h * ex_g;
  }

  out.trials.resize(static_cast<std::size_t>(n));
  auto run = [&](std::int64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    if (cfg.sampling == OffsetSampling::ExhaustiveTicks) {
      rec.offsets = {trial % ex_h, trial / ex_h};
    } else {
      std::mt19937_64 rng(splitmix64(cfg.seed ^ splitmix64(static_cast<std::uint64_t>(trial))));
      for (Tick h : hyper) rec.offsets.push_back(std::uniform_int_distribution<Tick>(0, h - 1)(rng));
    }
    std::vector<Device> devs;
    devs.reserve(cfg.devices.size());
    for (std::size_t i = 0; i < cfg.devices.size(); ++i) devs.emplace_back(cfg.devices[i], rec.offsets[i]);

    const Tick omega = joiner.beacons->omega();
    auto collides = [&](Tick s) {
      for (std::size_t j = 1; j < devs.size(); ++j) {
        if (!devs[j].transmits()) continue;
        // Pure ALOHA: any overlap of [s, s+omega) with [x, x+omega_j).
        if (devs[j].beacon_in(s - devs[j].spec().beacons->omega() + 1, s + omega)) return true;
      }
      return false;
    };

    const Device& tx = devs[0];
    const Device& rx = devs[1];
    bool first = true;
    bool covering_seen = false;
    for (Tick s = tx.next_beacon(1); s <= horizon; s = tx.next_beacon(s + 1)) {
      const bool hit = collides(s);
      if (first) {
        rec.collided_first = hit;
        first = false;
      }
      if (!rx.receives(s, true)) continue;
      if (!covering_seen) {
        covering_seen = true;
        rec.covering_collided = hit;
      }
      if (!hit) {
        rec.latency = s;
        break;
      }
    }
    rec.within_deadline = rec.latency && *rec.latency <= out.deadline;
    out.trials[static_cast<std::size_t>(trial)] = std::move(rec);
  };

  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(std::min<std::int64_t>(n, 64))));
  if (threads == 1) {
    for (std::int64_t i = 0; i < n; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::int64_t i = t; i < n; i += threads) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  for (const auto& r : out.trials) {
    out.first_collisions += r.collided_first ? 1 : 0;
    out.covering_collisions += r.covering_collided ? 1 : 0;
    out.failures += r.within_deadline ? 0 : 1;
    out.never_discovered += r.latency ? 0 : 1;
    out.audit_violations += (r.covering_collided && r.within_deadline) ? 1 : 0;
  }
  return out;
}

std::string trials_csv(const SimOutcome& out) {
  csv::Writer w;
  w.row("trial_id", "offsets", "latency", "collided_first", "covering_collided", "failed");
  for (const auto& r : out.trials) {
    std::string offs;
    for (std::size_t i = 0; i < r.offsets.size(); ++i) offs += (i ? ";" : "") + std::to_string(r.offsets[i]);
    w.row(r.trial, offs, r.latency ? std::to_string(*r.latency) : std::string(), static_cast<int>(r.collided_first),
          static_cast<int>(r.covering_collided), static_cast<int>(!r.within_deadline));
  }
  return w.str();
}

std::string summary_json(const SimOutcome& out) {
  using nlohmann::json;
  const auto n = static_cast<std::int64_t>(out.trials.size());
  const double predicted = collision_probability(out.senders, out.beta);
  const double sigma = n > 0 ? std::sqrt(predicted * (1 - predicted) / static_cast<double>(n)) : 0.0;
  const double rate = out.first_collision_rate();
  auto [c_lo, c_hi] = wilson95(out.first_collisions, n);
  auto [f_lo, f_hi] = wilson95(out.failures, n);
  json j;
  j["schema_version"] = 1;
  j["trials"] = n;
  j["senders"] = out.senders;
  j["beta"] = out.beta;
  j["deadline_ticks"] = out.deadline;
  j["first_collision"] = {
      {"count", out.first_collisions},
      {"rate", rate},
      {"wilson95", {c_lo, c_hi}},
      {"predicted", predicted},
      {"sigma", sigma},
      {"z", sigma > 0 ? (rate - predicted) / sigma : 0.0},
  };
  j["failure"] = {{"count", out.failures}, {"rate", out.failure_rate()}, {"wilson95", {f_lo, f_hi}}};
  j["covering_collisions"] = out.covering_collisions;
  j["never_discovered"] = out.never_discovered;
  j["audit_violations"] = out.audit_violations;
  return j.dump(2) + "\n";
}

}  // namespace ndlab
