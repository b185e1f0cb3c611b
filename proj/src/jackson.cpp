#include "prooflens/jackson.hpp"

#include <algorithm>

namespace prooflens::jackson {

using real::derive_modulus;
using real::eval;
using real::eval_modulus;
using real::fe_poly;
using real::fe_scale;
using real::fe_sum;
using real::l1_norm;
using real::mod_min;
using real::modulus_scale;
using real::poly_modulus;
using real::sgn_integral;
using real::sup_norm;

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

// ---------------------------------------------------------------------------
// Covers

bool SmallValueCover::contains(const Rat& x) const {
  for (const auto& [lo, hi] : intervals)
    if (lo < x && x < hi) return true;
  return false;
}

SmallValueCover build_cover(const FunPtr& g, const Rat& zeta, long grid_denominator) {
  if (zeta <= 0) throw std::invalid_argument("build_cover: zeta must be positive");
  if (grid_denominator <= 0) throw std::invalid_argument("build_cover: bad grid");
  Modulus omega = derive_modulus(g);
  Rat step(1, grid_denominator);
  if (step > eval_modulus(omega, zeta / 2))
    throw GridTooCoarse("build_cover: grid spacing exceeds omega_g(zeta/2)");

  SmallValueCover cover;
  cover.threshold = zeta;
  cover.grid_denominator = grid_denominator;
  Rat flag = 3 * zeta / 2;
  std::optional<std::pair<Rat, Rat>> open;
  for (long k = 0; k <= grid_denominator; ++k) {
    Rat x(k, grid_denominator);
    if (rat_abs(eval(g, x)) < flag) {
      Rat lo = rat_max(Rat(0), x - step);
      Rat hi = rat_min(Rat(1), x + step);
      if (open && lo <= open->second) {
        open->second = hi;
      } else {
        if (open) cover.intervals.push_back(*open);
        open = {lo, hi};
      }
    }
  }
  if (open) cover.intervals.push_back(*open);
  Rat measure(0);
  for (const auto& [lo, hi] : cover.intervals) measure += hi - lo;
  cover.total_measure = measure;
  return cover;
}

// ---------------------------------------------------------------------------
// Reduction lemma

ReductionResult verify_reduction(const FunPtr& g, const FunPtr& h, const Rat& eps,
                                 const Rat& zeta, const Rat& K, const SmallValueCover& B,
                                 const Rat& tol) {
  ReductionResult out;
  out.witness.lambda = zeta / (2 * K);
  out.witness.gap = eps * zeta / 2;
  if (eps <= 0 || zeta <= 0 || K <= 0) {
    out.detail = "parameters must be positive";
    return out;
  }

  // Hypothesis: B is a valid cover for (g, ζ) of measure ≤ ε. Rebuilt from B's
  // own grid so a cover for the wrong function cannot certify.
  if (B.total_measure > eps) {
    out.detail = "cover measure exceeds epsilon";
    return out;
  }
  SmallValueCover rebuilt;
  try {
    rebuilt = build_cover(g, zeta, B.grid_denominator);
  } catch (const std::exception& e) {
    out.detail = std::string("cover not reproducible: ") + e.what();
    return out;
  }
  if (!(rebuilt.intervals == B.intervals) || rebuilt.threshold != B.threshold) {
    out.detail = "cover does not match build_cover(g, zeta)";
    return out;
  }

  // Hypothesis: ‖h‖∞ ≤ K.
  Enclosure hsup = sup_norm(h, rat_min(tol, K / 16));
  if (hsup.hi > K) {
    out.detail = hsup.lo > K ? "sup-norm hypothesis false" : "sup-norm hypothesis not certifiable";
    return out;
  }

  // Hypothesis: |∫h·sgn g| ≥ 3Kε, with the certified sign fixing λ's sign.
  Enclosure integral = sgn_integral(g, h, rat_min(tol, eps * K / 4));
  int sign;
  if (integral.lo > 0) sign = 1;
  else if (integral.hi < 0) sign = -1;
  else {
    out.detail = "sign of the sgn-integral not certifiable";
    return out;
  }
  Rat integral_lo_abs = sign > 0 ? integral.lo : -integral.hi;
  if (integral_lo_abs < 3 * K * eps) {
    out.detail = "sgn-integral hypothesis not certifiable";
    return out;
  }

  out.witness.lambda = Rat(sign) * zeta / (2 * K);

  // Conclusion: ‖g − λh‖₁ + εζ/2 ≤ ‖g‖₁, certified by enclosures tightened
  // well below the gap so interval width cannot manufacture a verdict.
  Rat needed = rat_min(tol, out.witness.gap / 16);
  FunPtr diff = fe_sum(g, fe_scale(-out.witness.lambda, h));
  out.lhs = l1_norm(diff, needed);
  out.rhs = l1_norm(g, needed);
  if (out.lhs.hi + out.witness.gap <= out.rhs.lo) {
    out.status = CheckStatus::Pass;
    out.detail = "certified";
  } else if (out.lhs.lo + out.witness.gap > out.rhs.hi) {
    out.status = CheckStatus::Fail;
    out.detail = "conclusion certified false under certified hypotheses";
  } else {
    out.detail = "conclusion not certifiable at the given tolerance";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Near zeros

Rat near_zero_separation(unsigned n) {
  if (n == 0) throw std::invalid_argument("near_zero_separation: n must be >= 1");
  Rat nn(static_cast<long>(n));
  return 1 / (20 * (nn + 2) * (nn + 2) * nn);
}

std::optional<NearZeroCertificate> find_near_zeros(const FunPtr& f, const Polynomial& p,
                                                   unsigned n, const Rat& zeta,
                                                   long grid_denominator) {
  if (zeta <= 0) throw std::invalid_argument("find_near_zeros: zeta must be positive");
  Rat gamma = near_zero_separation(n);
  NearZeroCertificate cert;
  cert.separation = gamma;
  cert.value_bound = zeta;
  for (long k = 0; k <= grid_denominator; ++k) {
    Rat r(k, grid_denominator);
    if (rat_abs(eval(f, r) - p.eval(r)) > zeta) continue;
    if (!cert.points.empty() && r - cert.points.back() < gamma) continue;
    cert.points.push_back(r);
    if (cert.points.size() == static_cast<size_t>(n) + 1) return cert;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Sup from L1

SupFromL1Result sup_from_l1(const FunPtr& q, const Modulus& omega_q, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("sup_from_l1: eps must be positive");
  SupFromL1Result out;
  out.bound = (eps / 2) * rat_min(Rat(1, 2), eval_modulus(omega_q, eps / 2));
  out.l1 = l1_norm(q, out.bound / 4);
  if (out.l1.hi >= out.bound) {
    // Precondition not certifiable at this width; one refinement attempt.
    out.l1 = l1_norm(q, out.bound / 64);
    if (out.l1.hi >= out.bound) {
      out.status = CheckStatus::Inconclusive;
      return out;
    }
  }
  out.status = CheckStatus::Pass;
  // The lemma now guarantees ‖q‖∞ < ε; cross-check the enclosure.
  Enclosure sup = sup_norm(q, eps / 8);
  if (sup.lo >= eps) {
    out.defect = true;
    out.status = CheckStatus::Fail;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Modulus of uniqueness

UniquenessModulus::UniquenessModulus(unsigned n, Modulus omega_f, Rat f_l1)
    : n_(n), omega_f_(std::move(omega_f)), f_l1_(std::move(f_l1)) {
  if (n_ == 0) throw std::invalid_argument("uniqueness_modulus: n must be >= 1");
  if (f_l1_ <= 0) throw std::invalid_argument("uniqueness_modulus: f_l1 must be positive");
  Rat nn(static_cast<long>(n_));
  zeta_denominator_ =
      4 * (nn + 1) * rat_pow(Rat(20), n_) * rat_pow(nn + 2, 2 * n_) * rat_pow(nn, n_);
}

Rat UniquenessModulus::zeta(const Rat& eps) const {
  if (eps <= 0) throw std::invalid_argument("phi: eps must be positive");
  return eps / zeta_denominator_;
}

Modulus UniquenessModulus::q_modulus() const {
  // |Δq| ≤ 2|Δf| + 2C|x−y| with C = 4n²(n+1)²‖f‖₁: split δ as 2(δ/6) + 2C·δ/(3C).
  return mod_min({modulus_scale(omega_f_, 6), modulus_scale(poly_modulus(n_, f_l1_), 3)});
}

Rat UniquenessModulus::phi(const Rat& eps) const {
  Rat z = zeta(eps);
  Rat nn(static_cast<long>(n_));
  Rat first = 1 / (10 * (nn + 2) * (nn + 2));
  Rat rest = eval_modulus(q_modulus(), z / 2);
  return (z / 2) * rat_min(first, rest);
}

UniquenessModulus uniqueness_modulus(unsigned n, Modulus omega_f, Rat f_l1) {
  return UniquenessModulus(n, std::move(omega_f), std::move(f_l1));
}

Rat stability_radius(const UniquenessModulus& phi, const Rat& delta) {
  if (delta <= 0) throw std::invalid_argument("stability_radius: delta must be positive");
  return phi.phi(delta) / 2;
}

} // namespace prooflens::jackson
