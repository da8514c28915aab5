#pragma once

#include "ndlab/schedule.hpp"

#include <json.hpp>

#include <string_view>

namespace ndlab {

nlohmann::json parse_json(std::string_view text);
Rational json_rational(const nlohmann::json& v);
nlohmann::json rational_to_json(const Rational& r);

// radio.omega falls back to default_omega when absent.
RadioModel radio_from_json(const nlohmann::json& r, Tick default_omega);

ProtocolSpec protocol_from_json(const nlohmann::json& j);
nlohmann::json protocol_to_json(const ProtocolSpec& p);

}  // namespace ndlab
