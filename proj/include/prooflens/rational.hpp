#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace prooflens {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Parses "p/q" or "p" with optional sign. Throws std::invalid_argument on
// malformed input or zero denominator.
Rat parse_rat(std::string_view text);

// Canonical form: "p/q", or just "p" when the denominator is 1.
std::string rat_str(const Rat& r);

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }
inline Rat rat_min(const Rat& a, const Rat& b) { return a < b ? a : b; }
inline Rat rat_max(const Rat& a, const Rat& b) { return a < b ? b : a; }

// base^exp for natural exp (exp = 0 gives 1).
Rat rat_pow(const Rat& base, unsigned exp);

} // namespace prooflens
