#pragma once

#include "prooflens/rational.hpp"

#include <stdexcept>

namespace prooflens {

// Certified rational interval: every producer guarantees the represented real
// quantity lies in [lo, hi].
struct Enclosure {
  Rat lo;
  Rat hi;

  Enclosure(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw std::logic_error("enclosure with lo > hi");
  }
  static Enclosure point(Rat v) { return Enclosure(v, v); }

  Rat width() const { return hi - lo; }
  Rat mid() const { return (lo + hi) / 2; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

inline Enclosure operator+(const Enclosure& a, const Enclosure& b) {
  return Enclosure(a.lo + b.lo, a.hi + b.hi);
}
inline Enclosure operator-(const Enclosure& a, const Enclosure& b) {
  return Enclosure(a.lo - b.hi, a.hi - b.lo);
}
inline Enclosure scale(const Rat& c, const Enclosure& e) {
  if (c >= 0) return Enclosure(c * e.lo, c * e.hi);
  return Enclosure(c * e.hi, c * e.lo);
}
// Enclosure of |x| for x in e.
inline Enclosure abs_of(const Enclosure& e) {
  if (e.lo >= 0) return e;
  if (e.hi <= 0) return Enclosure(-e.hi, -e.lo);
  return Enclosure(Rat(0), rat_max(-e.lo, e.hi));
}
inline Enclosure hull(const Enclosure& a, const Enclosure& b) {
  return Enclosure(rat_min(a.lo, b.lo), rat_max(a.hi, b.hi));
}

} // namespace prooflens
