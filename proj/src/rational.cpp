#include "ndlab/rational.hpp"

#include "ndlab/error.hpp"

#include <cctype>
#include <limits>

namespace ndlab {

namespace mp = boost::multiprecision;

BigInt floor(const Rational& r) {
  BigInt num = mp::numerator(r);
  BigInt den = mp::denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt num = mp::numerator(r);
  BigInt den = mp::denominator(r);
  BigInt q = num / den;
  if (num % den != 0 && num > 0) ++q;
  return q;
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

std::int64_t to_int64(const BigInt& v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw Error(ErrorCode::HorizonOverflow, "integer does not fit in 64 bits");
  }
  return v.convert_to<std::int64_t>();
}

namespace {

Rational parse_decimal(std::string_view s, std::string_view full) {
  auto fail = [&] { return Error(ErrorCode::Parse, "not a number: '" + std::string(full) + "'"); };
  if (s.empty()) throw fail();
  bool neg = false;
  std::size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    ++i;
  }
  BigInt mant = 0;
  std::int64_t exp10 = 0;
  bool digits = false;
  bool dot = false;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      mant = mant * 10 + (c - '0');
      digits = true;
      if (dot) --exp10;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) throw fail();
  if (i < s.size()) {
    if (s[i] != 'e' && s[i] != 'E') throw fail();
    ++i;
    bool eneg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      eneg = s[i] == '-';
      ++i;
    }
    if (i >= s.size()) throw fail();
    std::int64_t e = 0;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i])) || e > 100000) throw fail();
      e = e * 10 + (s[i] - '0');
    }
    exp10 += eneg ? -e : e;
  }
  Rational r(mant);
  BigInt scale = mp::pow(BigInt(10), static_cast<unsigned>(exp10 < 0 ? -exp10 : exp10));
  if (exp10 < 0) r /= Rational(scale);
  else r *= Rational(scale);
  return neg ? Rational(-r) : r;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return parse_decimal(text, text);
  Rational num = parse_decimal(text.substr(0, slash), text);
  Rational den = parse_decimal(text.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  return num / den;
}

std::string to_string(const Rational& r) {
  if (mp::denominator(r) == 1) return mp::numerator(r).str();
  return mp::numerator(r).str() + "/" + mp::denominator(r).str();
}

}  // namespace ndlab
