// ndlab command-line front end. Everything goes through the C API.
#include "ndlab/ndlab.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;

struct Failure {
  int exit_code;
  std::string kind;
  std::string message;
};

int exit_code_for(nd_status s) {
  switch (s) {
    case ND_OK: return kExitOk;
    case ND_ERR_INVALID_ARGUMENT:
    case ND_ERR_PARSE:
    case ND_ERR_NEEDS_FINER_TICKS: return kExitUsage;
    case ND_ERR_DOMAIN:
    case ND_ERR_INFEASIBLE:
    case ND_ERR_HYPERPERIOD_TOO_LARGE:
    case ND_ERR_MISALIGNED_PERIODS:
    case ND_ERR_HORIZON_OVERFLOW: return kExitDomain;
    case ND_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(nd_status s) {
  if (s != ND_OK) throw Failure{exit_code_for(s), nd_status_name(s), nd_last_error()};
}

[[noreturn]] void usage(const std::string& msg) { throw Failure{kExitUsage, "usage", msg}; }

void diagnose(const Failure& f) {
  json j{{"error", f.kind}, {"message", f.message}, {"exit_code", f.exit_code}};
  std::cerr << j.dump() << "\n";
}

// Owns a char* handed out by the library.
struct Text {
  char* p = nullptr;
  ~Text() { nd_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct Protocol {
  nd_protocol* p = nullptr;
  ~Protocol() { nd_protocol_free(p); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) usage("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) usage("cannot write " + path);
  out << content;
  if (!out) usage("write failed for " + path);
}

// Decimal microseconds -> integer nanoseconds, exactly.
std::int64_t us_to_ns(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  const auto dot = s.find('.');
  std::string whole = s.substr(0, dot);
  std::string frac = dot == std::string::npos ? "" : s.substr(dot + 1);
  while (frac.size() > 3 && frac.back() == '0') frac.pop_back();
  auto digits = [](const std::string& d) {
    for (char c : d) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  if ((whole.empty() && frac.empty()) || !digits(whole) || !digits(frac)) usage("not a decimal microsecond value: " + text);
  if (frac.size() > 3) throw Failure{kExitUsage, "needs_finer_ticks", text + " us is finer than 1 ns"};
  frac.resize(3, '0');
  if (whole.size() > 12) usage("value out of range: " + text);
  const std::int64_t ns = (whole.empty() ? 0 : std::stoll(whole)) * 1000 + std::stoll(frac);
  return neg ? -ns : ns;
}

struct Clock {
  std::int64_t tick_ns = 1000;

  std::int64_t ticks(const std::string& us, const char* flag) const {
    const std::int64_t ns = us_to_ns(us);
    if (ns % tick_ns != 0) {
      throw Failure{kExitUsage, "needs_finer_ticks",
                    std::string(flag) + "=" + us + " us is not a whole number of " + std::to_string(tick_ns) +
                        " ns ticks"};
    }
    return ns / tick_ns;
  }
};

struct RadioFlags {
  std::string omega_us = "1";
  std::string alpha = "1";
  std::string dotx_us = "0", dorx_us = "0", dotxrx_us = "0", dorxtx_us = "0";
  std::string semantics = "ideal";

  void add(CLI::App* app) {
    app->add_option("--omega-us", omega_us, "beacon duration in us");
    app->add_option("--alpha", alpha, "Tx/Rx power ratio");
    app->add_option("--doTx-us", dotx_us, "sleep-to-Tx overhead in us");
    app->add_option("--doRx-us", dorx_us, "sleep-to-Rx overhead in us");
    app->add_option("--doTxRx-us", dotxrx_us, "Tx-to-Rx turnaround in us");
    app->add_option("--doRxTx-us", dorxtx_us, "Rx-to-Tx turnaround in us");
    app->add_option("--semantics", semantics, "reception semantics")->check(CLI::IsMember({"ideal", "contained"}));
  }

  json to_json(const Clock& c) const {
    return {{"alpha", alpha},
            {"omega", c.ticks(omega_us, "--omega-us")},
            {"d_oTx", c.ticks(dotx_us, "--doTx-us")},
            {"d_oRx", c.ticks(dorx_us, "--doRx-us")},
            {"d_oTxRx", c.ticks(dotxrx_us, "--doTxRx-us")},
            {"d_oRxTx", c.ticks(dorxtx_us, "--doRxTx-us")},
            {"semantics", semantics}};
  }
};

// "eta=lo:hi:step"
json parse_sweep(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || spec.substr(0, eq) != "eta") usage("--sweep expects eta=lo:hi:step");
  std::vector<std::string> parts;
  std::stringstream ss(spec.substr(eq + 1));
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) usage("--sweep expects eta=lo:hi:step");
  for (const auto& p : parts) {
    if (p.empty()) usage("--sweep has an empty grid component");
  }
  return {{"eta_from", parts[0]}, {"eta_to", parts[1]}, {"eta_step", parts[2]}};
}

// key=value pairs for --bound; values stay strings so the library parses
// rationals exactly. Integers become JSON integers.
json parse_params(const std::vector<std::string>& kv) {
  json j = json::object();
  for (const auto& item : kv) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) usage("--param expects key=value, got " + item);
    const std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    bool integral = !val.empty() && val.find_first_not_of("-0123456789") == std::string::npos;
    if (integral) {
      try {
        j[key] = std::stoll(val);
        continue;
      } catch (const std::exception&) {
      }
    }
    if (val == "true" || val == "false") j[key] = val == "true";
    else j[key] = val;
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neighbor-discovery schedule analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ndlab 1.0");

  // bounds ----------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "latency bounds: sweeps, deviation study, single evaluation");
  std::string sweep, bound_name, out_path, summary_path;
  std::string b_alpha = "1", b_omega = "1", beta_m = "0", dev_lo = "0.00055", dev_hi = "0.0555";
  std::string b_dotx = "0", b_dorx = "0";
  std::int64_t beta_steps = 100;
  bool deviation = false;
  std::vector<std::string> params;
  auto* o_sweep = bounds->add_option("--sweep", sweep, "duty-cycle grid eta=lo:hi:step");
  auto* o_dev = bounds->add_flag("--deviation", deviation, "relaxed-bound deviation CSV");
  auto* o_bound = bounds->add_option("--bound", bound_name, "evaluate one bound (see README)");
  o_sweep->excludes(o_dev)->excludes(o_bound);
  o_dev->excludes(o_bound);
  bounds->add_option("--alpha", b_alpha, "Tx/Rx power ratio");
  bounds->add_option("--omega-us", b_omega, "beacon duration in us (latencies come out in us)");
  bounds->add_option("--beta-m", beta_m, "channel utilization limit for the constrained column");
  bounds->add_option("--doTx-us", b_dotx, "sleep-to-Tx overhead in us");
  bounds->add_option("--doRx-us", b_dorx, "sleep-to-Rx overhead in us");
  bounds->add_option("--lo", dev_lo, "lower end of the beta/gamma range");
  bounds->add_option("--hi", dev_hi, "upper end of the beta/gamma range");
  bounds->add_option("--beta-steps", beta_steps, "beta grid points")->check(CLI::PositiveNumber);
  bounds->add_option("--param", params, "key=value for --bound");
  bounds->add_option("-o,--out", out_path, "output file (default stdout)");
  bounds->add_option("--summary", summary_path, "deviation range JSON output");

  // generate --------------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "emit a protocol as JSON");
  std::string kind;
  std::int64_t tick_ns = 1000;
  RadioFlags radio;
  std::optional<std::int64_t> g_k, g_m, g_p1, g_p2, g_period, g_p, g_t;
  std::optional<std::string> g_beta, g_window_us, g_d_us, g_delta_us, g_slot_us;
  std::vector<std::int64_t> g_elements;
  generate->add_option("kind", kind, "optimal|pi0m|disco|searchlight|uconnect|diffcode")
      ->required()
      ->check(CLI::IsMember({"optimal", "pi0m", "disco", "searchlight", "uconnect", "diffcode"}));
  generate->add_option("--tick-ns", tick_ns, "tick duration in ns")->check(CLI::PositiveNumber);
  radio.add(generate);
  generate->add_option("--k", g_k, "optimal: 1/gamma");
  generate->add_option("--beta", g_beta, "optimal: channel utilization");
  generate->add_option("--window-us", g_window_us, "optimal: reception window length");
  generate->add_option("--M", g_m, "pi0m: windows per scan period");
  generate->add_option("--d-us", g_d_us, "pi0m: window length and beacon period");
  generate->add_option("--delta-us", g_delta_us, "pi0m: scan period shortening");
  generate->add_option("--p1", g_p1, "disco: first prime");
  generate->add_option("--p2", g_p2, "disco: second prime");
  generate->add_option("--period", g_period, "searchlight: period in slots");
  generate->add_option("--p", g_p, "uconnect: prime");
  generate->add_option("--T", g_t, "diffcode: modulus");
  generate->add_option("--elements", g_elements, "diffcode: custom difference set");
  generate->add_option("--slot-us", g_slot_us, "slotted: slot length");
  std::string gen_out;
  generate->add_option("-o,--out", gen_out, "output file (default stdout)");

  // analyze ---------------------------------------------------------------
  auto* analyze = app.add_subcommand("analyze", "coverage, exact worst case and bound for E beaconing to F");
  std::string e_path, f_path, method = "endpoint", coverage_csv, an_out;
  std::int64_t threads = 0, max_h = std::int64_t{1} << 32;
  analyze->add_option("E", e_path, "transmitting protocol JSON")->required();
  analyze->add_option("F", f_path, "receiving protocol JSON")->required();
  analyze->add_option("--method", method, "oracle method")->check(CLI::IsMember({"endpoint", "full"}));
  analyze->add_option("--coverage-csv", coverage_csv, "write the coverage map here");
  analyze->add_option("--threads", threads, "worker threads (0: all, capped by ND_LAB_THREADS)");
  analyze->add_option("--max-hyperperiod", max_h, "largest accepted lcm(T_B, T_C) in ticks");
  analyze->add_option("-o,--out", an_out, "report file (default stdout)");

  // simulate --------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "multi-device collision simulation");
  std::string config_path, trials_path, sim_summary;
  std::optional<std::int64_t> sim_seed, sim_trials;
  simulate->add_option("config", config_path, "simulation config JSON")->required();
  simulate->add_option("--trials-csv", trials_path, "per-trial CSV output");
  simulate->add_option("--summary", sim_summary, "summary JSON output (default stdout)");
  simulate->add_option("--seed", sim_seed, "override the config seed");
  simulate->add_option("--trials", sim_trials, "override the config trial count");
  simulate->add_option("--threads", threads, "worker threads (0: all, capped by ND_LAB_THREADS)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnose({kExitUsage, "usage", e.what()});
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (bounds->parsed()) {
      if (sweep.empty() && !deviation && bound_name.empty()) {
        std::cerr << bounds->help();
        usage("bounds needs one of --sweep, --deviation, --bound");
      }
      if (!sweep.empty()) {
        json p = parse_sweep(sweep);
        p["omega"] = b_omega;
        p["alpha"] = b_alpha;
        p["beta_m"] = beta_m;
        Text csv;
        check(nd_bounds_sweep_csv(p.dump().c_str(), &csv.p));
        emit(out_path, csv.str());
      } else if (deviation) {
        json p{{"lo", dev_lo}, {"hi", dev_hi}, {"beta_steps", beta_steps}, {"omega", b_omega},
               {"d_oTx", b_dotx}, {"d_oRx", b_dorx}};
        Text csv, summary;
        check(nd_deviation_csv(p.dump().c_str(), &csv.p, summary_path.empty() ? nullptr : &summary.p));
        emit(out_path, csv.str());
        if (!summary_path.empty()) emit(summary_path, summary.str());
      } else {
        json p = parse_params(params);
        if (!p.contains("omega")) p["omega"] = b_omega;
        if (!p.contains("alpha")) p["alpha"] = b_alpha;
        Text result;
        check(nd_bound(bound_name.c_str(), p.dump().c_str(), &result.p));
        emit(out_path, result.str());
      }
    } else if (generate->parsed()) {
      const Clock clock{tick_ns};
      json p{{"tick_ns", tick_ns}, {"radio", radio.to_json(clock)}};
      auto need = [&](bool present, const char* flag) {
        if (!present) usage(std::string("generate ") + kind + " needs " + flag);
      };
      if (kind == "optimal") {
        need(g_k.has_value(), "--k");
        need(g_beta.has_value(), "--beta");
        p["k"] = *g_k;
        p["beta"] = *g_beta;
        if (g_window_us) p["window"] = clock.ticks(*g_window_us, "--window-us");
      } else if (kind == "pi0m") {
        need(g_m.has_value(), "--M");
        need(g_d_us.has_value(), "--d-us");
        p["M"] = *g_m;
        p["d"] = clock.ticks(*g_d_us, "--d-us");
        if (g_delta_us) p["delta"] = clock.ticks(*g_delta_us, "--delta-us");
      } else {
        need(g_slot_us.has_value(), "--slot-us");
        p["slot"] = clock.ticks(*g_slot_us, "--slot-us");
        if (kind == "disco") {
          need(g_p1 && g_p2, "--p1 and --p2");
          p["p1"] = *g_p1;
          p["p2"] = *g_p2;
        } else if (kind == "searchlight") {
          need(g_period.has_value(), "--period");
          p["period"] = *g_period;
        } else if (kind == "uconnect") {
          need(g_p.has_value(), "--p");
          p["p"] = *g_p;
        } else {
          need(g_t.has_value(), "--T");
          p["T"] = *g_t;
          if (!g_elements.empty()) p["elements"] = g_elements;
        }
      }
      Protocol proto;
      check(nd_generate(kind.c_str(), p.dump().c_str(), &proto.p));
      Text out;
      check(nd_protocol_to_json(proto.p, &out.p));
      emit(gen_out, out.str());
    } else if (analyze->parsed()) {
      Protocol e, f;
      check(nd_protocol_from_json(read_file(e_path).c_str(), &e.p));
      check(nd_protocol_from_json(read_file(f_path).c_str(), &f.p));
      if (threads < 0) usage("--threads must be >= 0");
      json opt{{"method", method}, {"threads", threads}, {"max_hyperperiod", max_h}};
      Text report;
      check(nd_analyze(e.p, f.p, opt.dump().c_str(), &report.p));
      if (!coverage_csv.empty()) {
        Text csv;
        check(nd_coverage_csv(e.p, f.p, &csv.p));
        emit(coverage_csv, csv.str());
      }
      emit(an_out, report.str());
    } else if (simulate->parsed()) {
      json cfg;
      try {
        cfg = json::parse(read_file(config_path));
      } catch (const json::exception& ex) {
        throw Failure{kExitUsage, "parse", std::string("config: ") + ex.what()};
      }
      if (!cfg.is_object()) usage("config must be a JSON object");
      if (sim_seed) cfg["seed"] = *sim_seed;
      if (sim_trials) cfg["trials"] = *sim_trials;
      if (threads < 0) usage("--threads must be >= 0");
      cfg["threads"] = threads;
      Text trials, summary;
      check(nd_simulate(cfg.dump().c_str(), &trials.p, &summary.p));
      if (!trials_path.empty()) emit(trials_path, trials.str());
      emit(sim_summary, summary.str());
    }
  } catch (const Failure& f) {
    diagnose(f);
    return f.exit_code;
  } catch (const std::exception& ex) {
    diagnose({kExitInternal, "internal", ex.what()});
    return kExitInternal;
  }
  return kExitOk;
}
