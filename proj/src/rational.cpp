#include "mss/rational.hpp"

#include <cctype>

#include "mss/errors.hpp"

namespace mss {

namespace {

bool is_integer_token(const std::string& s) {
  std::size_t i = (!s.empty() && s[0] == '-') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::size_t slash = text.find('/');
  if (slash == std::string::npos) {
    if (!is_integer_token(text)) {
      throw SchemaError("malformed rational: '" + text + "'");
    }
    return Rational(Int(text));
  }
  std::string num = text.substr(0, slash);
  std::string den = text.substr(slash + 1);
  if (!is_integer_token(num) || !is_integer_token(den)) {
    throw SchemaError("malformed rational: '" + text + "'");
  }
  Int d(den);
  if (d == 0) throw SchemaError("zero denominator in '" + text + "'");
  return Rational(Int(num), d);
}

std::string format_rational(const Rational& value) {
  Int num = numerator(value);
  Int den = denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string format_decimal(const Rational& value, int digits) {
  bool negative = value < 0;
  Rational v = negative ? Rational(-value) : value;
  Int scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  // round half up
  Int scaled = Int(numerator(v) * scale * 2 + denominator(v)) /
               (denominator(v) * 2);
  Int whole = scaled / scale;
  Int frac = scaled % scale;
  std::string fs = frac.str();
  fs.insert(fs.begin(), digits - fs.size(), '0');
  std::string out = whole.str();
  if (digits > 0) out += "." + fs;
  return negative ? "-" + out : out;
}

}  // namespace mss
