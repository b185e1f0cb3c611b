#include "prooflens/rational.hpp"

namespace prooflens {

Rat parse_rat(std::string_view text) {
  auto bad = [&] {
    return std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  };
  if (text.empty()) throw bad();
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw bad();
    bool negative = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') {
      negative = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) throw bad();
    for (size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw bad();
    BigInt value(std::string(s.substr(i)));
    return negative ? BigInt(-value) : value;
  };
  if (slash == std::string_view::npos) return Rat(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) throw bad();
  return Rat(num, den);
}

std::string rat_str(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

Rat rat_pow(const Rat& base, unsigned exp) {
  Rat acc(1);
  Rat b = base;
  while (exp != 0) {
    if (exp & 1u) acc *= b;
    exp >>= 1u;
    if (exp != 0) b *= b;
  }
  return acc;
}

} // namespace prooflens
