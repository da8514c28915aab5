#include <doctest.h>

#include "ndlab/ndlab.h"

#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <string>

using nlohmann::json;

namespace {

struct Text {
  char* p = nullptr;
  ~Text() { nd_string_free(p); }
  json parse() const { return json::parse(p); }
};

struct Proto {
  nd_protocol* p = nullptr;
  ~Proto() { nd_protocol_free(p); }
};

}  // namespace

TEST_CASE("generate, serialize and reload") {
  Proto p;
  REQUIRE(nd_generate("optimal", R"({"k": 4, "beta": "1/100", "window": 25})", &p.p) == ND_OK);
  Text j;
  REQUIRE(nd_protocol_to_json(p.p, &j.p) == ND_OK);
  CHECK(j.parse()["beacons"]["times"] == json::array({0, 125, 250, 275}));
  Proto q;
  REQUIRE(nd_protocol_from_json(j.p, &q.p) == ND_OK);
  Text k;
  REQUIRE(nd_protocol_to_json(q.p, &k.p) == ND_OK);
  CHECK(std::string(j.p) == std::string(k.p));
}

TEST_CASE("analyze report") {
  Proto p;
  REQUIRE(nd_generate("optimal", R"({"k": 2, "beta": 0.02})", &p.p) == ND_OK);
  Text r;
  REQUIRE(nd_analyze(p.p, p.p, R"({"method": "full"})", &r.p) == ND_OK);
  auto j = r.parse();
  CHECK(j["schema_version"] == 1);
  CHECK(j["coverage"]["deterministic"] == true);
  CHECK(j["coverage"]["redundant"] == false);
  CHECK(j["coverage"]["beacons"] == 2);
  CHECK(j["oracle"]["latency"] == 100);
  CHECK(j["bound"]["latency"]["exact"] == "100");
  CHECK(j["bound"]["gap"]["exact"] == "0");

  Text csv;
  REQUIRE(nd_coverage_csv(p.p, p.p, &csv.p) == ND_OK);
  CHECK(std::string(csv.p) == "beacon_index,interval_start,interval_end\n0,0,50\n1,50,100\n");
}

TEST_CASE("non-deterministic input reports the uncovered offsets") {
  Proto p;
  REQUIRE(nd_protocol_from_json(R"({"beacons": {"times": [0], "omega": 1, "period": 10},
                                    "receptions": {"windows": [{"start": 0, "d": 2}], "period": 10}})",
                                &p.p) == ND_OK);
  Text r;
  REQUIRE(nd_analyze(p.p, p.p, nullptr, &r.p) == ND_OK);
  auto j = r.parse();
  CHECK(j["coverage"]["deterministic"] == false);
  CHECK(j["coverage"]["uncovered"] == json::array({json::array({2, 10})}));
  CHECK(j["oracle"]["bounded"] == false);
  CHECK(j["oracle"]["latency"].is_null());
}

TEST_CASE("error codes and messages") {
  Proto p;
  CHECK(nd_generate("disco", R"({"p1": 3, "p2": 6, "slot": 4})", &p.p) == ND_ERR_INVALID_ARGUMENT);
  CHECK(std::string(nd_last_error()).find("coprime") != std::string::npos);
  CHECK(p.p == nullptr);
  CHECK(nd_generate("optimal", R"({"k": 2, "beta": "1/3"})", &p.p) == ND_OK);
  nd_protocol_free(p.p);
  p.p = nullptr;
  CHECK(nd_generate("optimal", R"({"k": 2, "beta": "2/5"})", &p.p) == ND_ERR_NEEDS_FINER_TICKS);
  CHECK(nd_generate("pi0m", R"({"M": 3, "d": 1})", &p.p) == ND_ERR_DOMAIN);
  CHECK(nd_generate("nope", "{}", &p.p) == ND_ERR_INVALID_ARGUMENT);
  CHECK(nd_protocol_from_json("{not json", &p.p) == ND_ERR_PARSE);
  CHECK(nd_protocol_from_json(nullptr, &p.p) == ND_ERR_INVALID_ARGUMENT);
  Text t;
  CHECK(nd_bound("channel", R"({"eta": 0.02, "beta_m": 0.02})", &t.p) == ND_ERR_INFEASIBLE);
  CHECK(t.p == nullptr);
  CHECK(std::string(nd_status_name(ND_ERR_HYPERPERIOD_TOO_LARGE)) == "hyperperiod_too_large");

  Proto a, b;
  REQUIRE(nd_protocol_from_json(R"({"beacons": {"times": [0], "omega": 1, "period": 1009},
                                    "receptions": {"windows": [{"start": 0, "d": 1}], "period": 1009}})",
                                &a.p) == ND_OK);
  REQUIRE(nd_protocol_from_json(R"({"beacons": {"times": [0], "omega": 1, "period": 1013},
                                    "receptions": {"windows": [{"start": 0, "d": 600}], "period": 1013}})",
                                &b.p) == ND_OK);
  CHECK(nd_analyze(a.p, b.p, R"({"max_hyperperiod": 1000})", &t.p) == ND_ERR_HYPERPERIOD_TOO_LARGE);
  CHECK(nd_last_error_value() == 1009 * 1013);
}

TEST_CASE("bounds through the C interface") {
  Text t;
  REQUIRE(nd_bound("symmetric", R"({"eta": "0.02"})", &t.p) == ND_OK);
  CHECK(t.parse()["latency"]["exact"] == "10000");
  Text me;
  REQUIRE(nd_bound("mutual_exclusive", R"({"eta": "1/100", "omega": 32})", &me.p) == ND_OK);
  CHECK(me.parse()["latency"]["exact"] == "640000");
  Text sweep;
  REQUIRE(nd_bounds_sweep_csv(R"({"eta_from": "0.01", "eta_to": "0.03", "eta_step": "0.01"})", &sweep.p) == ND_OK);
  std::string s(sweep.p);
  CHECK(std::count(s.begin(), s.end(), '\n') == 4);
  Text bad;
  CHECK(nd_bounds_sweep_csv(R"({"eta_from": "0.03", "eta_to": "0.01", "eta_step": "0.01"})", &bad.p) != ND_OK);
  double p = 0;
  REQUIRE(nd_collision_probability(5, 0.005, &p) == ND_OK);
  CHECK(p == doctest::Approx(0.0392106).epsilon(1e-5));

  Text dev, sum;
  REQUIRE(nd_deviation_csv(R"({"lo": "0.00055", "hi": "0.0555", "omega": 32, "d_oTx": 140, "d_oRx": 140})", &dev.p,
                           &sum.p) == ND_OK);
  CHECK(sum.parse()["max"].get<double>() == doctest::Approx(4.676).epsilon(1e-3));
}

TEST_CASE("quadruple through the C interface") {
  Proto e, f;
  int64_t zeta = 0;
  REQUIRE(nd_generate_quadruple(R"({"M": 6, "d": 5})", &e.p, &f.p, &zeta) == ND_OK);
  CHECK(zeta == 7);
  Text r;
  REQUIRE(nd_check_quadruple(e.p, f.p, zeta, &r.p) == ND_OK);
  CHECK(r.parse()["deterministic"] == true);
  CHECK(r.parse()["redundant"] == false);
}

TEST_CASE("simulation through the C interface is reproducible") {
  Proto p;
  REQUIRE(nd_generate("optimal", R"({"k": 2, "beta": "1/20"})", &p.p) == ND_OK);
  Text pj;
  REQUIRE(nd_protocol_to_json(p.p, &pj.p) == ND_OK);
  json cfg{{"devices", {pj.parse(), pj.parse(), pj.parse()}}, {"trials", 300}, {"seed", 99}};
  Text c1, s1, c2, s2;
  REQUIRE(nd_simulate(cfg.dump().c_str(), &c1.p, &s1.p) == ND_OK);
  cfg["threads"] = 4;
  REQUIRE(nd_simulate(cfg.dump().c_str(), &c2.p, &s2.p) == ND_OK);
  CHECK(std::string(c1.p) == std::string(c2.p));
  CHECK(std::string(s1.p) == std::string(s2.p));
  CHECK(s1.parse()["senders"] == 3);

  double analytic = 0, measured = 0;
  REQUIRE(nd_self_blocking(p.p, &analytic, &measured) == ND_OK);
  CHECK(analytic == doctest::Approx(0.05));
}
