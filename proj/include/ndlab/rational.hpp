#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace ndlab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

double to_double(const Rational& r);

// Parses "3", "-2", "0.02", "1e-3", "1/50" exactly. Throws Error(Parse).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

std::int64_t to_int64(const BigInt& v);

}  // namespace ndlab
