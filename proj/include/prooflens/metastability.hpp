#pragma once

#include "prooflens/rational.hpp"

#include <stdexcept>
#include <variant>
#include <vector>

namespace prooflens::logic {

struct RangeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Total monotone-presentable map on naturals: F(n) = a·n + b, or an explicit
// table over [start, start + size).
class FSpec {
 public:
  static FSpec affine(long a, long b);
  static FSpec table(long start, std::vector<long> values);
  long eval(long n) const;  // throws RangeError outside a table's range
  bool is_table() const { return std::holds_alternative<Table>(rep_); }

 private:
  struct Affine { long a, b; };
  struct Table { long start; std::vector<long> values; };
  std::variant<Affine, Table> rep_;
};

struct MetastabilityProblem {
  std::vector<Rat> values;  // α_{start_index}, α_{start_index+1}, ...
  long start_index = 0;
  Rat epsilon;              // > 0
  FSpec F = FSpec::affine(1, 0);

  long max_index() const { return start_index + static_cast<long>(values.size()) - 1; }
  bool has(long n) const { return n >= start_index && n <= max_index(); }
  const Rat& alpha(long n) const;
  void validate() const;
};

// F'(n): the least m in [n, F(n)] with |α_n − α_m| ≥ ε if one exists, F(n)
// otherwise. Total on every represented n whose window fits the range; empty
// windows (F(n) < n) are left at F(n).
FSpec metastable_refine(const MetastabilityProblem& p);

struct MetastableWindow {
  long found_n;
  long scanned_max;        // largest start index examined
  long window_lo, window_hi;
};

// Least n with |α_n − α_m| < ε for all m in [n, F(n)]. Throws RangeError when
// the represented range is exhausted before a stable window fits inside it.
MetastableWindow metastability_search(const MetastabilityProblem& p);

} // namespace prooflens::logic
