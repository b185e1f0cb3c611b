#pragma once

#include "prooflens/enclosure.hpp"
#include "prooflens/funexpr.hpp"

#include <optional>
#include <vector>

namespace prooflens::real {

struct UnsupportedShape : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Exact piecewise-polynomial normal form

struct PolyPiece {
  Rat lo, hi;       // lo < hi; pieces tile [0,1]
  Polynomial poly;  // e(x) = poly(x) exactly on [lo, hi]
};

// Exact normalization of the expression tree. Fails (nullopt) when an Abs
// argument changes sign at an irrational point (degree-2 pieces with
// non-square discriminant, or degree >= 3 pieces).
std::optional<std::vector<PolyPiece>> normalize_piecewise(const FunPtr& e);

Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
// Exact ∫_a^b p dx.
Rat integrate_poly(const Polynomial& p, const Rat& a, const Rat& b);
// Number of distinct real roots of p in (a, b].
int sturm_root_count(const Polynomial& p, const Rat& a, const Rat& b);
// Exact rational square root, if the argument is a square.
std::optional<Rat> rat_sqrt_exact(const Rat& r);

// ---------------------------------------------------------------------------
// Certified norms and integrals

// Enclosure of ∫₀¹ |e| dx with width ≤ tol. Piecewise-normalizable inputs get
// the sign-partition route (exact away from roots, root zones bounded after
// Sturm isolation); everything else falls back to midpoint-panel quadrature
// certified by the derived modulus.
Enclosure l1_norm(const FunPtr& e, const Rat& tol);

// Enclosure of ∫_a^b e dx (signed) with width ≤ tol.
Enclosure integrate_expr(const FunPtr& e, const Rat& a, const Rat& b, const Rat& tol);

// Enclosure of sup_{[0,1]} |e| with width ≤ tol. Piecewise forms of degree ≤ 2
// (and degree 3 with rational critical points) are exact; otherwise grid
// evaluation with modulus slack, refined adaptively.
Enclosure sup_norm(const FunPtr& e, const Rat& tol);

// Enclosure of ∫ h · sgn(g) dx. g must be PL or a polynomial of degree ≤ 3.
Enclosure sgn_integral(const FunPtr& g, const FunPtr& h, const Rat& tol);

// ---------------------------------------------------------------------------
// Markov brothers' inequality checks

struct MarkovResult {
  bool certified = false;  // hi(lhs) ≤ factor · lo(rhs) established
  bool refuted = false;    // lo(lhs) > factor · hi(rhs): a certified violation
  Enclosure lhs = Enclosure::point(Rat(0));
  Enclosure rhs = Enclosure::point(Rat(0));
  Rat factor;
};

// ||p'||∞ ≤ 2n²||p||∞, n = declared degree bound.
MarkovResult markov_derivative_check(const Polynomial& p);
// ||p||∞ ≤ 2(n+1)²||p||₁.
MarkovResult markov_l1_check(const Polynomial& p);

// ---------------------------------------------------------------------------
// Lagrange interpolation

// Degree-≤ n polynomial through n+1 nodes with pairwise distinct abscissae.
Polynomial lagrange(const std::vector<std::pair<Rat, Rat>>& points, unsigned n);

// (n+1) · v_bound · separation^(−n): sup bound for any degree-≤ n polynomial
// through n+1 nodes separated by ≥ separation with |values| ≤ v_bound.
Rat lagrange_sup_bound(const Rat& v_bound, const Rat& separation, unsigned n);

} // namespace prooflens::real
