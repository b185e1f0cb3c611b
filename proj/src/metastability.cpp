#include "prooflens/metastability.hpp"

namespace prooflens::logic {

FSpec FSpec::affine(long a, long b) {
  FSpec f;
  f.rep_ = Affine{a, b};
  return f;
}
FSpec FSpec::table(long start, std::vector<long> values) {
  FSpec f;
  f.rep_ = Table{start, std::move(values)};
  return f;
}
long FSpec::eval(long n) const {
  if (const auto* a = std::get_if<Affine>(&rep_)) return a->a * n + a->b;
  const auto& t = std::get<Table>(rep_);
  long i = n - t.start;
  if (i < 0 || i >= static_cast<long>(t.values.size()))
    throw RangeError("F index out of represented range: n=" + std::to_string(n));
  return t.values[i];
}

const Rat& MetastabilityProblem::alpha(long n) const {
  if (!has(n))
    throw RangeError("sequence index out of represented range: n=" + std::to_string(n));
  return values[static_cast<size_t>(n - start_index)];
}

void MetastabilityProblem::validate() const {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (values.empty()) throw std::invalid_argument("empty sequence");
  for (long n = start_index; n <= max_index(); ++n) {
    long fn;
    try {
      fn = F.eval(n);
    } catch (const RangeError&) {
      continue;  // table F may cover a sub-range
    }
    if (fn < 0) throw std::invalid_argument("F must be nonnegative");
  }
}

FSpec metastable_refine(const MetastabilityProblem& p) {
  p.validate();
  std::vector<long> refined;
  long n = p.start_index;
  for (; n <= p.max_index(); ++n) {
    long fn = p.F.eval(n);
    if (fn > p.max_index()) break;  // window leaves the represented range
    long out = fn;
    for (long m = n; m <= fn; ++m) {
      if (rat_abs(p.alpha(n) - p.alpha(m)) >= p.epsilon) {
        out = m;
        break;
      }
    }
    refined.push_back(out);
  }
  if (refined.empty())
    throw RangeError("no represented index has its window inside the range");
  return FSpec::table(p.start_index, std::move(refined));
}

MetastableWindow metastability_search(const MetastabilityProblem& p) {
  p.validate();
  long scanned = p.start_index - 1;
  for (long n = p.start_index; n <= p.max_index(); ++n) {
    long fn = p.F.eval(n);
    if (fn > p.max_index())
      throw RangeError(
          "exhausted represented range without a stable interval (scanned up to n=" +
          std::to_string(scanned) + ", window [" + std::to_string(n) + "," +
          std::to_string(fn) + "] does not fit)");
    scanned = n;
    bool stable = true;
    for (long m = n; m <= fn && stable; ++m)
      stable = rat_abs(p.alpha(n) - p.alpha(m)) < p.epsilon;
    if (stable) return MetastableWindow{n, scanned, n, fn};
  }
  throw RangeError("exhausted represented range without a stable interval (scanned up to n=" +
                   std::to_string(scanned) + ")");
}

} // namespace prooflens::logic
