#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace ndlab {

enum class ErrorCode {
  InvalidArgument,
  Domain,
  Infeasible,
  HyperperiodTooLarge,
  NeedsFinerTicks,
  MisalignedPeriods,
  HorizonOverflow,
  Parse,
};

const char* to_string(ErrorCode code) noexcept;

// Library-wide exception. `value` carries an optional numeric payload, e.g. the
// offending hyper-period for HyperperiodTooLarge.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, std::int64_t value = 0)
      : std::runtime_error(what), code_(code), value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  std::int64_t value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  std::int64_t value_;
};

}  // namespace ndlab
