#include "ndlab/ndlab.h"

#include "../csv.hpp"
#include "../json_util.hpp"
#include "ndlab/bounds.hpp"
#include "ndlab/coverage.hpp"
#include "ndlab/error.hpp"
#include "ndlab/json_io.hpp"
#include "ndlab/protocols.hpp"
#include "ndlab/simulator.hpp"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <thread>

struct nd_protocol {
  ndlab::ProtocolSpec spec;
};

namespace {

using namespace ndlab;
using nlohmann::json;

thread_local std::string g_error;
thread_local std::int64_t g_error_value = 0;

nd_status status_of(ErrorCode c) {
  switch (c) {
    case ErrorCode::InvalidArgument: return ND_ERR_INVALID_ARGUMENT;
    case ErrorCode::Domain: return ND_ERR_DOMAIN;
    case ErrorCode::Infeasible: return ND_ERR_INFEASIBLE;
    case ErrorCode::HyperperiodTooLarge: return ND_ERR_HYPERPERIOD_TOO_LARGE;
    case ErrorCode::NeedsFinerTicks: return ND_ERR_NEEDS_FINER_TICKS;
    case ErrorCode::MisalignedPeriods: return ND_ERR_MISALIGNED_PERIODS;
    case ErrorCode::HorizonOverflow: return ND_ERR_HORIZON_OVERFLOW;
    case ErrorCode::Parse: return ND_ERR_PARSE;
  }
  return ND_ERR_INTERNAL;
}

nd_status fail(nd_status s, std::string msg, std::int64_t value = 0) {
  g_error = std::move(msg);
  g_error_value = value;
  return s;
}

template <typename F>
nd_status guard(F&& f) {
  try {
    g_error.clear();
    g_error_value = 0;
    f();
    return ND_OK;
  } catch (const Error& e) {
    return fail(status_of(e.code()), e.what(), e.value());
  } catch (const json::exception& e) {
    return fail(ND_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(ND_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ND_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(ND_ERR_INTERNAL, "unknown failure");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// ND_LAB_THREADS caps whatever parallelism a caller asks for; 0 means "all
// hardware threads".
unsigned cap_threads(std::int64_t requested) {
  unsigned n = requested > 0 ? static_cast<unsigned>(requested) : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("ND_LAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

json params_object(const char* text) {
  if (!text || !*text) return json::object();
  json j = parse_json(text);
  if (!j.is_object()) throw Error(ErrorCode::Parse, "parameters must be a JSON object");
  return j;
}

Rational rat_param(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing parameter \"") + key + "\"");
  return json_rational(j.at(key));
}

Rational rat_param(const json& j, const char* key, const Rational& fallback) {
  return j.contains(key) ? json_rational(j.at(key)) : fallback;
}

std::int64_t int_param(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::InvalidArgument, std::string("missing parameter \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw Error(ErrorCode::InvalidArgument, std::string("\"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::int64_t int_param(const json& j, const char* key, std::int64_t fallback) {
  return j.contains(key) ? int_param(j, key) : fallback;
}

// Exact value as "n/d" next to its double rendering.
json exact(const Rational& r) { return {{"value", to_double(r)}, {"exact", to_string(r)}}; }

json intervals_json(const IntervalSet& s) {
  json a = json::array();
  for (const auto& iv : s.intervals()) a.push_back({iv.lo, iv.hi});
  return a;
}

// Emissions of the first `n` beacons of the infinite repetition.
std::vector<Tick> beacon_prefix(const BeaconSchedule& b, std::int64_t n) {
  std::vector<Tick> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) out.push_back(b.emission(i));
  return out;
}

struct PrefixAnalysis {
  std::vector<Tick> beacons;
  CoverageMap map;
  DeterminismReport report;
};

// Shortest beacon prefix B' whose coverage union is complete, or the prefix
// spanning one hyper-period when none is.
PrefixAnalysis covering_prefix(const ProtocolSpec& tx, const ProtocolSpec& rx) {
  if (!tx.beacons) throw Error(ErrorCode::InvalidArgument, "transmitter has no beacon sequence");
  if (!rx.receptions) throw Error(ErrorCode::InvalidArgument, "receiver has no reception sequence");
  const auto& b = *tx.beacons;
  const auto& c = *rx.receptions;
  std::int64_t limit = static_cast<std::int64_t>(b.size());
  if (b.repetitive() && c.repetitive()) {
    const Tick h = checked_lcm(*b.period(), c.period());
    if (h > (Tick{1} << 26)) throw Error(ErrorCode::HyperperiodTooLarge, "hyper-period too large for coverage export", h);
    limit = h / *b.period() * static_cast<std::int64_t>(b.size());
  }
  auto build = [&](std::int64_t n) {
    auto times = beacon_prefix(b, n);
    auto map = build_coverage_map(times, c, rx.radio.semantics, b.omega());
    auto rep = analyze(map);
    return PrefixAnalysis{std::move(times), std::move(map), std::move(rep)};
  };
  // Coverage only grows with n, so bisect for the first complete prefix.
  auto full = build(limit);
  if (!full.report.deterministic) return full;
  std::int64_t lo = 1, hi = limit;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (build(mid).report.deterministic) hi = mid;
    else lo = mid + 1;
  }
  return build(lo);
}

OracleOptions oracle_options(const json& o) {
  OracleOptions opt;
  const std::string method = o.value("method", std::string("endpoint"));
  if (method == "endpoint") opt.method = OracleMethod::Endpoint;
  else if (method == "full") opt.method = OracleMethod::FullSweep;
  else throw Error(ErrorCode::InvalidArgument, "method must be \"endpoint\" or \"full\"");
  opt.max_hyperperiod = int_param(o, "max_hyperperiod", opt.max_hyperperiod);
  opt.threads = cap_threads(int_param(o, "threads", 1));
  return opt;
}

ProtocolSpec generate(const std::string& kind, const json& p) {
  const TimeBase tb(int_param(p, "tick_ns", 1000));
  const json r = p.value("radio", json::object());
  const RadioModel radio = radio_from_json(r, int_param(p, "omega", 1));
  if (kind == "optimal") {
    std::optional<Tick> window;
    if (p.contains("window")) window = int_param(p, "window");
    return gen_optimal_unidirectional(int_param(p, "k"), rat_param(p, "beta"), radio, window, tb);
  }
  if (kind == "pi0m") return gen_pi0m(int_param(p, "M"), int_param(p, "d"), radio, int_param(p, "delta", 1), tb);
  if (kind == "disco") return gen_disco(int_param(p, "p1"), int_param(p, "p2"), int_param(p, "slot"), radio, tb);
  if (kind == "searchlight") return gen_searchlight_striped(int_param(p, "period"), int_param(p, "slot"), radio, tb);
  if (kind == "uconnect") return gen_uconnect(int_param(p, "p"), int_param(p, "slot"), radio, tb);
  if (kind == "diffcode") {
    const std::int64_t t = int_param(p, "T");
    if (p.contains("elements")) {
      return gen_diffcode(DifferenceSet(t, p.at("elements").get<std::vector<std::int64_t>>()), int_param(p, "slot"),
                          radio, tb);
    }
    return gen_diffcode(builtin_difference_set(t), int_param(p, "slot"), radio, tb);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown protocol kind \"" + kind + "\"");
}

json symmetric_json(const SymmetricBound& s) {
  return {{"latency", exact(s.latency)}, {"branch", std::string(1, s.branch)}, {"k", s.k}, {"gamma", exact(s.gamma_o)}};
}

json evaluate_bound(const std::string& name, const json& p) {
  const Rational omega = rat_param(p, "omega", 1);
  const Rational alpha = rat_param(p, "alpha", 1);
  json out{{"schema_version", kSchemaVersion}, {"bound", name}};
  if (name == "unidirectional") {
    out["latency"] = exact(bound_unidirectional(rat_param(p, "gamma"), rat_param(p, "beta"), omega));
  } else if (name == "symmetric") {
    const auto s = bound_symmetric(rat_param(p, "eta"), omega, alpha);
    out.update(symmetric_json(s));
  } else if (name == "symmetric_approx") {
    out["latency"] = exact(bound_symmetric_approx(rat_param(p, "eta"), omega, alpha));
  } else if (name == "channel") {
    const auto c = bound_channel_constrained(rat_param(p, "eta"), rat_param(p, "beta_m"), omega, alpha);
    out["latency"] = exact(c.latency);
    out["case"] = c.which;
  } else if (name == "asymmetric") {
    const auto a = bound_asymmetric(rat_param(p, "eta_e"), rat_param(p, "eta_f"), omega, alpha);
    out["latency"] = exact(a.latency);
    out["tight"] = a.tight;
    out["beta_e"] = exact(a.beta_e);
    out["gamma_e"] = exact(a.gamma_e);
    out["beta_f"] = exact(a.beta_f);
    out["gamma_f"] = exact(a.gamma_f);
  } else if (name == "mutual_exclusive") {
    const auto m = bound_mutual_exclusive(rat_param(p, "eta"), omega, alpha);
    out["latency"] = exact(m.latency);
    out["branch"] = std::string(1, m.branch);
    out["k"] = m.k;
  } else if (name == "relaxed") {
    RelaxedFlags f;
    f.contained = p.value("contained", true);
    f.count_first = p.value("count_first", true);
    f.overheads = p.value("overheads", true);
    out["latency"] = exact(bound_relaxed(rat_param(p, "gamma"), rat_param(p, "beta"), omega, rat_param(p, "d_oTx", 0),
                                         rat_param(p, "d_oRx", 0), f));
  } else if (name == "slotted_full_duplex") {
    out["latency"] = exact(bound_slotted_full_duplex(rat_param(p, "eta"), omega, alpha));
  } else if (name == "slotted_two_beacon") {
    out["latency"] = exact(bound_slotted_two_beacon(rat_param(p, "eta"), omega, alpha));
  } else if (name == "slotted_channel") {
    out["latency"] = exact(bound_slotted_channel(rat_param(p, "eta"), rat_param(p, "beta"), omega, alpha));
  } else if (name == "slotted_protocol") {
    const auto proto = parse_slotted_protocol(p.at("protocol").get<std::string>());
    out["protocol"] = to_string(proto);
    out["latency"] = {{"value", slotted_protocol_latency(proto, to_double(rat_param(p, "eta")),
                                                         to_double(rat_param(p, "beta")), to_double(omega),
                                                         to_double(alpha))}};
  } else if (name == "pi0m") {
    out["latency"] = exact(pi0m_latency(int_param(p, "M"), omega, rat_param(p, "eta"), alpha));
  } else if (name == "pi0m_relaxed") {
    out["latency"] = exact(pi0m_latency_relaxed(int_param(p, "M"), omega, rat_param(p, "eta"), alpha));
  } else if (name == "pi0m_nrmse") {
    const auto etas = rational_grid(rat_param(p, "eta_from"), rat_param(p, "eta_to"), rat_param(p, "eta_step"));
    out["nrmse"] = pi0m_nrmse(pi0m_sweep(etas, omega, alpha));
    out["points"] = etas.size();
  } else if (name == "collision") {
    const std::int64_t s = int_param(p, "senders");
    out["probability"] = collision_probability(s, to_double(rat_param(p, "beta")));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown bound \"" + name + "\"");
  }
  return out;
}

SimConfig sim_config(const json& j) {
  SimConfig cfg;
  if (!j.contains("devices") || !j.at("devices").is_array()) {
    throw Error(ErrorCode::InvalidArgument, "config needs a \"devices\" array");
  }
  for (const auto& d : j.at("devices")) cfg.devices.push_back(protocol_from_json(d));
  cfg.trials = int_param(j, "trials", 1);
  if (j.contains("seed")) {
    const auto& s = j.at("seed");
    if (!s.is_number_integer()) throw Error(ErrorCode::InvalidArgument, "\"seed\" must be an integer");
    cfg.seed = s.is_number_unsigned() ? s.get<std::uint64_t>() : static_cast<std::uint64_t>(s.get<std::int64_t>());
  }
  cfg.horizon = int_param(j, "horizon", 0);
  if (j.contains("deadline") && !j.at("deadline").is_null()) cfg.deadline = int_param(j, "deadline");
  const std::string sampling = j.value("sampling", std::string("uniform"));
  if (sampling == "uniform") cfg.sampling = OffsetSampling::UniformRandom;
  else if (sampling == "exhaustive") cfg.sampling = OffsetSampling::ExhaustiveTicks;
  else throw Error(ErrorCode::InvalidArgument, "sampling must be \"uniform\" or \"exhaustive\"");
  cfg.threads = cap_threads(int_param(j, "threads", 1));
  return cfg;
}

}  // namespace

extern "C" {

const char* nd_status_name(nd_status status) {
  switch (status) {
    case ND_OK: return "ok";
    case ND_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case ND_ERR_DOMAIN: return "domain";
    case ND_ERR_INFEASIBLE: return "infeasible";
    case ND_ERR_HYPERPERIOD_TOO_LARGE: return "hyperperiod_too_large";
    case ND_ERR_NEEDS_FINER_TICKS: return "needs_finer_ticks";
    case ND_ERR_MISALIGNED_PERIODS: return "misaligned_periods";
    case ND_ERR_HORIZON_OVERFLOW: return "horizon_overflow";
    case ND_ERR_PARSE: return "parse";
    case ND_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* nd_last_error(void) { return g_error.c_str(); }
int64_t nd_last_error_value(void) { return g_error_value; }

void nd_string_free(char* s) { std::free(s); }

nd_status nd_protocol_from_json(const char* text, nd_protocol** out) {
  return guard([&] {
    require(text && out, "json and out");
    *out = new nd_protocol{parse_protocol(text)};
  });
}

nd_status nd_protocol_to_json(const nd_protocol* p, char** out) {
  return guard([&] {
    require(p && out, "protocol and out");
    *out = dup(protocol_json(p->spec));
  });
}

void nd_protocol_free(nd_protocol* p) { delete p; }

nd_status nd_generate(const char* kind, const char* params_json, nd_protocol** out) {
  return guard([&] {
    require(kind && out, "kind and out");
    auto spec = generate(kind, params_object(params_json));
    *out = new nd_protocol{std::move(spec)};
  });
}

nd_status nd_generate_quadruple(const char* params_json, nd_protocol** e, nd_protocol** f, int64_t* zeta) {
  return guard([&] {
    require(e && f && zeta, "outputs");
    const json p = params_object(params_json);
    const RadioModel radio = radio_from_json(p.value("radio", json::object()), int_param(p, "omega", 1));
    auto q = gen_correlated_quadruple(int_param(p, "M"), int_param(p, "d"), radio, TimeBase(int_param(p, "tick_ns", 1000)));
    auto* pe = new nd_protocol{std::move(q.e)};
    auto* pf = new (std::nothrow) nd_protocol{std::move(q.f)};
    if (!pf) {
      delete pe;
      throw std::bad_alloc();
    }
    *e = pe;
    *f = pf;
    *zeta = q.zeta;
  });
}

nd_status nd_analyze(const nd_protocol* tx, const nd_protocol* rx, const char* options_json, char** report_json) {
  return guard([&] {
    require(tx && rx && report_json, "protocols and report");
    const OracleOptions opt = oracle_options(params_object(options_json));
    const auto& t = tx->spec;
    const auto& r = rx->spec;
    const auto pre = covering_prefix(t, r);

    json rep{{"schema_version", kSchemaVersion}};
    rep["coverage"] = {
        {"beacons", pre.beacons.size()},
        {"period", pre.map.period()},
        {"deterministic", pre.report.deterministic},
        {"redundant", pre.report.redundant},
        {"uncovered", intervals_json(pre.report.uncovered)},
        {"lambda", pre.report.coverage_lambda},
        {"min_beacons", pre.report.min_beacons},
    };

    const auto orc = worst_case_latency_oracle(t, r, opt);
    rep["oracle"] = {{"method", opt.method == OracleMethod::Endpoint ? "endpoint" : "full"},
                     {"hyperperiod", orc.hyperperiod},
                     {"bounded", orc.bounded},
                     {"latency", orc.bounded ? json(orc.latency) : json(nullptr)}};

    const Rational beta = transmission_duty_cycle(*t.beacons);
    const Rational gamma = rat(pre.map.listen_per_period(), pre.map.period());
    json b{{"beta", exact(beta)}, {"gamma", exact(gamma)}};
    if (gamma > 0) {
      const Rational bound = bound_unidirectional(gamma, beta, t.beacons->omega());
      b["latency"] = exact(bound);
      if (orc.bounded) {
        const Rational gap = Rational(orc.latency) - bound;
        b["gap"] = exact(gap);
        b["relative_gap"] = to_double(gap / bound);
        b["dominates"] = gap >= 0;
      }
    } else {
      b["latency"] = nullptr;
    }
    rep["bound"] = b;
    *report_json = dup(rep.dump(2) + "\n");
  });
}

nd_status nd_coverage_csv(const nd_protocol* tx, const nd_protocol* rx, char** csv) {
  return guard([&] {
    require(tx && rx && csv, "protocols and csv");
    *csv = dup(coverage_map_csv(covering_prefix(tx->spec, rx->spec).map));
  });
}

nd_status nd_check_quadruple(const nd_protocol* e, const nd_protocol* f, int64_t zeta, char** report_json) {
  return guard([&] {
    require(e && f && report_json, "protocols and report");
    const auto q = check_correlated_quadruple(e->spec, f->spec, zeta);
    json rep{{"schema_version", kSchemaVersion},
             {"deterministic", q.combined.deterministic},
             {"redundant", q.combined.redundant},
             {"uncovered", intervals_json(q.combined.uncovered)},
             {"lambda", q.combined.coverage_lambda},
             {"covered_by_f", intervals_json(q.covered_by_f)},
             {"covered_by_e", intervals_json(q.covered_by_e)}};
    *report_json = dup(rep.dump(2) + "\n");
  });
}

nd_status nd_bound(const char* name, const char* params_json, char** result_json) {
  return guard([&] {
    require(name && result_json, "name and result");
    *result_json = dup(evaluate_bound(name, params_object(params_json)).dump(2) + "\n");
  });
}

nd_status nd_bounds_sweep_csv(const char* params_json, char** csv) {
  return guard([&] {
    require(csv, "csv");
    const json p = params_object(params_json);
    const Rational step = rat_param(p, "eta_step");
    const Rational from = rat_param(p, "eta_from"), to = rat_param(p, "eta_to");
    if (step <= 0) throw Error(ErrorCode::InvalidArgument, "eta step must be positive");
    if (from <= 0 || to < from) throw Error(ErrorCode::InvalidArgument, "eta grid needs 0 < from <= to");
    const auto etas = rational_grid(from, to, step);
    if (etas.empty()) throw Error(ErrorCode::InvalidArgument, "empty eta grid");
    *csv = dup(bounds_sweep_csv(etas, rat_param(p, "omega", 1), rat_param(p, "alpha", 1), rat_param(p, "beta_m", 0)));
  });
}

nd_status nd_deviation_csv(const char* params_json, char** csv, char** summary_json) {
  return guard([&] {
    require(csv, "csv");
    const json p = params_object(params_json);
    const Rational lo = rat_param(p, "lo"), hi = rat_param(p, "hi");
    const std::int64_t steps = int_param(p, "beta_steps", 100);
    const Rational omega = rat_param(p, "omega", 1);
    const Rational dtx = rat_param(p, "d_oTx", 0), drx = rat_param(p, "d_oRx", 0);
    std::string body = relaxed_deviation_csv(lo, hi, steps, omega, dtx, drx);
    std::string summary;
    if (summary_json) {
      const auto range = relaxed_deviation_range(lo, hi, steps, omega, dtx, drx);
      summary = json{{"schema_version", kSchemaVersion},
                     {"min", range.min},
                     {"max", range.max},
                     {"points", range.points}}.dump(2) + "\n";
    }
    char* c = dup(body);
    if (summary_json) {
      try {
        *summary_json = dup(summary);
      } catch (...) {
        std::free(c);
        throw;
      }
    }
    *csv = c;
  });
}

nd_status nd_simulate(const char* config_json, char** trials, char** summary) {
  return guard([&] {
    require(config_json && trials && summary, "config and outputs");
    const auto out = simulate_multi(sim_config(parse_json(config_json)));
    char* t = dup(trials_csv(out));
    try {
      *summary = dup(summary_json(out));
    } catch (...) {
      std::free(t);
      throw;
    }
    *trials = t;
  });
}

nd_status nd_collision_probability(int64_t senders, double beta, double* out) {
  return guard([&] {
    require(out, "out");
    *out = collision_probability(senders, beta);
  });
}

nd_status nd_self_blocking(const nd_protocol* p, double* analytic, double* measured) {
  return guard([&] {
    require(p && analytic && measured, "protocol and outputs");
    const double a = to_double(self_blocking_probability(p->spec));
    *measured = measured_self_blocking(p->spec);
    *analytic = a;
  });
}

}  // extern "C"
