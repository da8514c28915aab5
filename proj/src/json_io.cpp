#include "ndlab/json_io.hpp"

#include "json_util.hpp"
#include "ndlab/error.hpp"

namespace ndlab {

using nlohmann::json;

namespace {

ReceptionSemantics parse_semantics(const std::string& s) {
  if (s == "ideal") return ReceptionSemantics::Ideal;
  if (s == "contained") return ReceptionSemantics::Contained;
  throw Error(ErrorCode::Parse, "semantics must be \"ideal\" or \"contained\", got \"" + s + "\"");
}

}  // namespace

RadioModel radio_from_json(const json& r, Tick default_omega) {
  if (!r.is_object()) throw Error(ErrorCode::Parse, "radio must be a JSON object");
  try {
    RadioModel radio;
    if (r.contains("alpha")) radio.alpha = json_rational(r.at("alpha"));
    radio.omega = r.contains("omega") ? r.at("omega").get<Tick>() : default_omega;
    radio.d_oTx = r.value("d_oTx", Tick{0});
    radio.d_oRx = r.value("d_oRx", Tick{0});
    radio.d_oTxRx = r.value("d_oTxRx", Tick{0});
    radio.d_oRxTx = r.value("d_oRxTx", Tick{0});
    radio.semantics = parse_semantics(r.value("semantics", std::string("ideal")));
    return radio;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("radio JSON: ") + e.what());
  }
}

ProtocolSpec protocol_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "protocol must be a JSON object");
  try {
    TimeBase tb(j.value("tick_ns", std::int64_t{1000}));

    std::optional<BeaconSchedule> beacons;
    if (j.contains("beacons") && !j.at("beacons").is_null()) {
      const auto& b = j.at("beacons");
      std::optional<Tick> period;
      if (b.contains("period") && !b.at("period").is_null()) period = b.at("period").get<Tick>();
      beacons.emplace(b.at("times").get<std::vector<Tick>>(), b.at("omega").get<Tick>(), period);
    }

    std::optional<ReceptionSchedule> receptions;
    if (j.contains("receptions") && !j.at("receptions").is_null()) {
      const auto& c = j.at("receptions");
      std::vector<ReceptionWindow> windows;
      for (const auto& w : c.at("windows")) windows.push_back({w.at("start").get<Tick>(), w.at("d").get<Tick>()});
      receptions.emplace(std::move(windows), c.at("period").get<Tick>(), c.value("repetitive", true));
    }

    const Tick default_omega = beacons ? beacons->omega() : Tick{1};
    RadioModel radio = radio_from_json(j.value("radio", json::object()), default_omega);
    return ProtocolSpec(tb, std::move(beacons), std::move(receptions), radio);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("protocol JSON: ") + e.what());
  }
}

json protocol_to_json(const ProtocolSpec& p) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["tick_ns"] = p.time.tick_ns;
  if (p.beacons) {
    j["beacons"] = {{"times", p.beacons->times()}, {"omega", p.beacons->omega()}};
    j["beacons"]["period"] = p.beacons->period() ? json(*p.beacons->period()) : json(nullptr);
  } else {
    j["beacons"] = nullptr;
  }
  if (p.receptions) {
    json ws = json::array();
    for (const auto& w : p.receptions->windows()) ws.push_back({{"start", w.start}, {"d", w.duration}});
    j["receptions"] = {{"windows", ws}, {"period", p.receptions->period()}, {"repetitive", p.receptions->repetitive()}};
  } else {
    j["receptions"] = nullptr;
  }
  const auto& r = p.radio;
  j["radio"] = {
      {"alpha", rational_to_json(r.alpha)},
      {"omega", r.omega},
      {"d_oTx", r.d_oTx},
      {"d_oRx", r.d_oRx},
      {"d_oTxRx", r.d_oTxRx},
      {"d_oRxTx", r.d_oRxTx},
      {"semantics", r.semantics == ReceptionSemantics::Ideal ? "ideal" : "contained"},
  };
  return j;
}

ProtocolSpec parse_protocol(std::string_view text) { return protocol_from_json(parse_json(text)); }

std::string protocol_json(const ProtocolSpec& p) { return protocol_to_json(p).dump(2) + "\n"; }

Rational rational_from_json_text(std::string_view text) { return json_rational(parse_json(text)); }

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("invalid JSON: ") + e.what());
  }
}

Rational json_rational(const json& v) {
  if (v.is_array()) {
    if (v.size() != 2 || !v[0].is_number_integer() || !v[1].is_number_integer()) {
      throw Error(ErrorCode::Parse, "rational arrays must be [num, den] integers");
    }
    const auto den = v[1].get<std::int64_t>();
    if (den == 0) throw Error(ErrorCode::Parse, "zero denominator");
    return rat(v[0].get<std::int64_t>(), den);
  }
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number()) return parse_rational(v.dump());
  throw Error(ErrorCode::Parse, "expected a number, a string or [num, den]");
}

json rational_to_json(const Rational& r) {
  return json::array({to_int64(boost::multiprecision::numerator(r)), to_int64(boost::multiprecision::denominator(r))});
}

}  // namespace ndlab
