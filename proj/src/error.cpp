#include "ndlab/error.hpp"

namespace ndlab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::Domain: return "DOMAIN";
    case ErrorCode::Infeasible: return "INFEASIBLE";
    case ErrorCode::HyperperiodTooLarge: return "HYPERPERIOD_TOO_LARGE";
    case ErrorCode::NeedsFinerTicks: return "NEEDS_FINER_TICKS";
    case ErrorCode::MisalignedPeriods: return "MISALIGNED_PERIODS";
    case ErrorCode::HorizonOverflow: return "HORIZON_OVERFLOW";
    case ErrorCode::Parse: return "PARSE";
  }
  return "UNKNOWN";
}

}  // namespace ndlab
