#pragma once

#include "ndlab/schedule.hpp"

#include <string>
#include <string_view>

namespace ndlab {

inline constexpr int kSchemaVersion = 1;

// Protocol description:
// { "tick_ns": int,
//   "beacons": {"times": [int], "omega": int, "period": int|null} | null,
//   "receptions": {"windows": [{"start": int, "d": int}], "period": int,
//                  "repetitive": bool} | null,
//   "radio": {"alpha": [num, den], "omega": int, "d_oTx": int, "d_oRx": int,
//             "d_oTxRx": int, "d_oRxTx": int, "semantics": "ideal"|"contained"} }
// radio.omega is optional when beacons are present. Throws Error(Parse) on
// malformed input and the schedule errors on invalid content.
ProtocolSpec parse_protocol(std::string_view json);
std::string protocol_json(const ProtocolSpec& p);

// Rates in JSON may be numbers, "n/d" strings, decimal strings or [num, den].
Rational rational_from_json_text(std::string_view json_value);

}  // namespace ndlab
