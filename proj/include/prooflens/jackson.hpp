#pragma once

#include "prooflens/norms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace prooflens::jackson {

using prooflens::Enclosure;
using prooflens::Rat;
using real::FunPtr;
using real::Modulus;
using real::Polynomial;

// Certification is three-valued: enclosure-based hypothesis checks never turn
// a too-wide interval into a boolean.
enum class CheckStatus { Pass, Fail, Inconclusive };
std::string to_string(CheckStatus s);

struct GridTooCoarse : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small-value covers (the set B of Lemma-style hypotheses)

struct SmallValueCover {
  std::vector<std::pair<Rat, Rat>> intervals;  // disjoint open intervals in [0,1]
  Rat threshold;                               // ζ
  Rat total_measure;
  long grid_denominator = 0;

  bool contains(const Rat& x) const;
};

// Intervals of radius one grid step around every grid point with |g| < 3ζ/2.
// Certification: grid spacing ≤ ω_g(ζ/2), so any x with |g(x)| < ζ is within
// ω_g(ζ/2) of a grid point whose value is < 3ζ/2, hence covered.
SmallValueCover build_cover(const FunPtr& g, const Rat& zeta, long grid_denominator);

// ---------------------------------------------------------------------------
// The reduction lemma

struct ReductionWitness {
  Rat lambda;  // sign(∫h·sgn g)·ζ/(2K)
  Rat gap;     // εζ/2
};

struct ReductionResult {
  CheckStatus status = CheckStatus::Inconclusive;
  ReductionWitness witness;
  Enclosure lhs = Enclosure::point(Rat(0));  // ‖g − λh‖₁
  Enclosure rhs = Enclosure::point(Rat(0));  // ‖g‖₁
  std::string detail;
};

// Certifies ‖g − λh‖₁ + εζ/2 ≤ ‖g‖₁ under the hypotheses
// |∫h·sgn g| ≥ 3Kε, ‖h‖∞ ≤ K, B valid for (g,ζ) with measure ≤ ε.
// A non-certifiable hypothesis yields Inconclusive, never Fail.
ReductionResult verify_reduction(const FunPtr& g, const FunPtr& h, const Rat& eps,
                                 const Rat& zeta, const Rat& K, const SmallValueCover& B,
                                 const Rat& tol = Rat(1, 4096));

// ---------------------------------------------------------------------------
// Near-zero certificates

struct NearZeroCertificate {
  std::vector<Rat> points;  // r_1 < ... < r_{n+1}
  Rat separation;           // γ = 1/(20(n+2)²n)
  Rat value_bound;          // ζ
};

// Greedy left-to-right scan over the grid: select points with
// |f(r)−p(r)| ≤ ζ at pairwise distance ≥ γ. Empty result is a plain negative
// unless the caller holds a nearly-best certificate for p.
std::optional<NearZeroCertificate> find_near_zeros(const FunPtr& f, const Polynomial& p,
                                                   unsigned n, const Rat& zeta,
                                                   long grid_denominator = 256);

Rat near_zero_separation(unsigned n);  // 1/(20(n+2)²n), n ≥ 1

// ---------------------------------------------------------------------------
// Sup-from-L1 (quantitative "zero integral means zero function")

struct SupFromL1Result {
  CheckStatus status = CheckStatus::Inconclusive;
  Enclosure l1 = Enclosure::point(Rat(0));
  Rat bound;          // (ε/2)·min{1/2, ω_q(ε/2)}
  bool defect = false;  // certified precondition with sup-norm lower bound ≥ ε
};

// Certifies ‖q‖∞ < ε from ∫|q| < (ε/2)·min{1/2, ω_q(ε/2)}; double-checks the
// conclusion against a sup_norm enclosure and flags any discrepancy.
SupFromL1Result sup_from_l1(const FunPtr& q, const Modulus& omega_q, const Rat& eps);

// ---------------------------------------------------------------------------
// Modulus of uniqueness

class UniquenessModulus {
 public:
  UniquenessModulus(unsigned n, Modulus omega_f, Rat f_l1);

  unsigned n() const { return n_; }
  const Modulus& omega_f() const { return omega_f_; }
  const Rat& f_l1() const { return f_l1_; }

  // ζ(ε) = ε / (4(n+1)·20ⁿ·(n+2)^(2n)·nⁿ)
  Rat zeta(const Rat& eps) const;
  // Φ(ε) = (ζ/2)·min{1/(10(n+2)²), ω_f(ζ/12), ζ/(24n²(n+1)²‖f‖₁)}
  Rat phi(const Rat& eps) const;
  // ω_q(δ) = min{ω_f(δ/6), δ/(12n²(n+1)²‖f‖₁)}, assembled from the
  // combinators: min{scale(ω_f,6), scale(poly_modulus(n,‖f‖₁),3)}.
  Modulus q_modulus() const;

 private:
  unsigned n_;
  Modulus omega_f_;
  Rat f_l1_;
  Rat zeta_denominator_;
};

UniquenessModulus uniqueness_modulus(unsigned n, Modulus omega_f, Rat f_l1);

// Φ(δ)/2: if ‖f−f′‖₁ is below this radius, grid-best approximations of f and
// f′ are within δ in L1.
Rat stability_radius(const UniquenessModulus& phi, const Rat& delta);

} // namespace prooflens::jackson
