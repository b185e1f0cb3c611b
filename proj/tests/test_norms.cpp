#include <doctest.h>

#include "prooflens/norms.hpp"

#include <random>

using namespace prooflens;
using namespace prooflens::real;

namespace {

FunPtr tent() {
  return fe_pl(PLFunction({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}}));
}
FunPtr line2xm1() { return fe_poly(Polynomial({Rat(-1), Rat(2)}, 1)); }

// Independent oracle: ∫|p| over [0,1] for a polynomial with known rational
// roots, by direct sign-splitting at the supplied roots.
Rat abs_integral_with_roots(const Polynomial& p, std::vector<Rat> roots) {
  std::vector<Rat> cuts{Rat(0)};
  std::sort(roots.begin(), roots.end());
  for (const Rat& r : roots)
    if (r > 0 && r < 1) cuts.push_back(r);
  cuts.push_back(Rat(1));
  Rat total(0);
  for (size_t i = 0; i + 1 < cuts.size(); ++i)
    total += rat_abs(integrate_poly(p, cuts[i], cuts[i + 1]));
  return total;
}

}  // namespace

TEST_CASE("piecewise normalization") {
  auto pieces = normalize_piecewise(tent());
  REQUIRE(pieces.has_value());
  CHECK(pieces->size() == 2);
  CHECK((*pieces)[0].poly.eval(Rat(1, 4)) == Rat(1, 2));
  CHECK((*pieces)[1].poly.eval(Rat(3, 4)) == Rat(1, 2));

  // Sum of PL and polynomial refines breakpoints.
  auto sum = normalize_piecewise(fe_sum(tent(), line2xm1()));
  REQUIRE(sum.has_value());
  CHECK(sum->size() == 2);

  // Abs with a rational root splits exactly.
  auto ab = normalize_piecewise(fe_abs(line2xm1()));
  REQUIRE(ab.has_value());
  CHECK(ab->size() == 2);
  CHECK((*ab)[0].hi == Rat(1, 2));

  // Abs over an irrational sign change is not exactly normalizable.
  FunPtr bad = fe_abs(fe_poly(Polynomial({Rat(-1, 2), Rat(0), Rat(1)}, 2)));
  CHECK_FALSE(normalize_piecewise(bad).has_value());

  // Degree-2 Abs with square discriminant stays exact.
  FunPtr ok = fe_abs(fe_poly(Polynomial({Rat(0), Rat(-4), Rat(4)}, 2)));
  CHECK(normalize_piecewise(ok).has_value());
}

TEST_CASE("sturm root counting") {
  Polynomial p({Rat(-1, 2), Rat(0), Rat(1)}, 2);  // roots ±sqrt(1/2)
  CHECK(sturm_root_count(p, Rat(0), Rat(1)) == 1);
  CHECK(sturm_root_count(p, Rat(-1), Rat(1)) == 2);
  Polynomial q({Rat(0), Rat(-4), Rat(4)}, 2);  // roots 0 and 1
  CHECK(sturm_root_count(q, Rat(0), Rat(1)) == 1);   // (0,1] holds only x=1
  CHECK(sturm_root_count(q, Rat(-1), Rat(1)) == 2);
  Polynomial cube({Rat(0), Rat(0), Rat(0), Rat(1)}, 3);  // x^3, triple root
  CHECK(sturm_root_count(cube, Rat(-1), Rat(1)) == 1);   // distinct roots only
}

TEST_CASE("rat_sqrt_exact") {
  CHECK(rat_sqrt_exact(Rat(9, 4)) == Rat(3, 2));
  CHECK(rat_sqrt_exact(Rat(0)) == Rat(0));
  CHECK_FALSE(rat_sqrt_exact(Rat(2)).has_value());
  CHECK_FALSE(rat_sqrt_exact(Rat(-1)).has_value());
}

TEST_CASE("l1_norm exact cases") {
  Rat tol(1, 1000);
  Enclosure a = l1_norm(fe_poly(Polynomial({Rat(0), Rat(1)}, 1)), tol);
  CHECK(a.contains(Rat(1, 2)));
  CHECK(a.width() == 0);
  Enclosure b = l1_norm(line2xm1(), tol);
  CHECK(b.contains(Rat(1, 2)));
  CHECK(b.width() == 0);
  Enclosure c = l1_norm(tent(), tol);
  CHECK(c.contains(Rat(1, 2)));
  CHECK(c.width() == 0);
}

TEST_CASE("l1_norm randomized polynomials with known roots") {
  std::mt19937 rng(987);
  for (const Rat& tol : {Rat(1, 10), Rat(1, 100), Rat(1, 1000)}) {
    for (int trial = 0; trial < 25; ++trial) {
      // p(x) = s(x - r1)(x - r2) with rational roots.
      Rat r1(static_cast<long>(rng() % 17), 16);
      Rat r2(static_cast<long>(rng() % 33), 32);
      Rat s = Rat(static_cast<long>(rng() % 7) + 1, 2) * (rng() % 2 == 0 ? 1 : -1);
      Polynomial p = poly_mul(Polynomial({-r1, Rat(1)}, 1), Polynomial({-r2, Rat(1)}, 1))
                         .scaled(s);
      Rat expected = abs_integral_with_roots(p, {r1, r2});
      Enclosure e = l1_norm(fe_poly(p), tol);
      CHECK(e.contains(expected));
      CHECK(e.width() <= tol);
    }
  }
}

TEST_CASE("l1_norm with an irrational sign change stays certified") {
  // ∫ |x^2 - 1/2| = (2·sqrt(2) - 1)/6 ≈ 0.3047378...
  Polynomial p({Rat(-1, 2), Rat(0), Rat(1)}, 2);
  for (const Rat& tol : {Rat(1, 100), Rat(1, 4096), Rat(1, 1000000)}) {
    Enclosure e = l1_norm(fe_poly(p), tol);
    CHECK(e.width() <= tol);
    CHECK(e.lo <= Rat(304738, 1000000));
    CHECK(e.hi >= Rat(304737, 1000000));
  }
  // Same value through the quadrature fallback (Abs node blocks exactness).
  Enclosure q = l1_norm(fe_abs(fe_poly(p)), Rat(1, 64));
  CHECK(q.width() <= Rat(1, 64));
  CHECK(q.lo <= Rat(3048, 10000));
  CHECK(q.hi >= Rat(3047, 10000));
}

TEST_CASE("integrate_expr is exact on piecewise inputs") {
  Enclosure e = integrate_expr(tent(), Rat(0), Rat(1, 2), Rat(1, 1000));
  CHECK(e.width() == 0);
  CHECK(e.lo == Rat(1, 4));
  Enclosure whole = integrate_expr(line2xm1(), Rat(0), Rat(1), Rat(1, 1000));
  CHECK(whole.lo == 0);
}

TEST_CASE("sup_norm") {
  Rat tol(1, 1000);
  CHECK(sup_norm(fe_poly(Polynomial({Rat(0), Rat(1)}, 1)), tol).lo == 1);
  CHECK(sup_norm(tent(), tol).lo == 1);
  Enclosure s = sup_norm(fe_scale(Rat(-2), fe_poly(Polynomial({Rat(0), Rat(1)}, 1))), tol);
  CHECK(s.lo == 2);
  CHECK(s.width() == 0);
  // Interior maximum of a parabola: 4x - 4x^2 peaks at 1.
  Enclosure peak = sup_norm(fe_poly(Polynomial({Rat(0), Rat(4), Rat(-4)}, 2)), tol);
  CHECK(peak.lo == 1);
  CHECK(peak.width() == 0);
  // Branch-and-bound fallback: sup of |x^2 - 1/2| via an Abs node is 1/2 at 0.
  Enclosure bb = sup_norm(fe_abs(fe_poly(Polynomial({Rat(-1, 2), Rat(0), Rat(1)}, 2))),
                          Rat(1, 128));
  CHECK(bb.width() <= Rat(1, 128));
  CHECK(bb.hi >= Rat(1, 2));
  CHECK(bb.lo <= Rat(1, 2));
}

TEST_CASE("sgn_integral") {
  Rat tol(1, 4096);
  // g = h = 2x-1: ∫ h sgn g = ∫|2x-1| = 1/2, exact.
  Enclosure a = sgn_integral(line2xm1(), line2xm1(), tol);
  CHECK(a.contains(Rat(1, 2)));
  CHECK(a.width() <= tol);
  // Constant g: sgn ≡ 1.
  Enclosure b = sgn_integral(fe_poly(Polynomial::constant(Rat(1))), tent(), tol);
  CHECK(b.contains(Rat(1, 2)));
  // Antisymmetric h against sgn(2x-1): zero.
  Enclosure c = sgn_integral(line2xm1(), fe_poly(Polynomial::constant(Rat(1))), tol);
  CHECK(c.contains(Rat(0)));
  CHECK(c.width() <= tol);
  // Irrational root of g: ∫ sgn(x^2 - 1/2) dx = 1 - 2/sqrt(2) ≈ -0.41421.
  Enclosure d = sgn_integral(fe_poly(Polynomial({Rat(-1, 2), Rat(0), Rat(1)}, 2)),
                             fe_poly(Polynomial::constant(Rat(1))), tol);
  CHECK(d.width() <= tol);
  CHECK(d.lo <= Rat(-41421, 100000));
  CHECK(d.hi >= Rat(-41422, 100000));
  // Non-normalizable h goes through the quadrature fallback and stays sound:
  // ∫ |x²-1/2|·sgn(2x-1) dx = -5/24 + (2sqrt(2)/3 - 5/8) ≈ -0.111929.
  {
    FunPtr habs = fe_abs(fe_poly(Polynomial({Rat(-1, 2), Rat(0), Rat(1)}, 2)));
    Enclosure s = sgn_integral(line2xm1(), habs, Rat(1, 64));
    CHECK(s.width() <= Rat(1, 32));
    CHECK(s.lo <= Rat(-1119, 10000));
    CHECK(s.hi >= Rat(-1120, 10000));
  }
  // Scaled and shifted polynomials still reduce to piecewise polynomials.
  Enclosure e = sgn_integral(fe_scale(Rat(2), line2xm1()), line2xm1(), tol);
  CHECK(e.contains(Rat(1, 2)));
  // Unsupported shapes.
  CHECK_THROWS_AS(
      sgn_integral(fe_abs(fe_poly(Polynomial({Rat(-1, 2), Rat(0), Rat(1)}, 2))), tent(), tol),
      UnsupportedShape);
  CHECK_THROWS_AS(
      sgn_integral(fe_poly(Polynomial({Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)}, 4)), tent(), tol),
      UnsupportedShape);
}

TEST_CASE("markov derivative check") {
  // p = 2x-1, n=1: equality case 2 <= 2.
  MarkovResult a = markov_derivative_check(Polynomial({Rat(-1), Rat(2)}, 1));
  CHECK(a.certified);
  CHECK(a.lhs.lo == 2);
  CHECK(a.rhs.lo == 1);
  // Constant.
  MarkovResult b = markov_derivative_check(Polynomial({Rat(5)}, 0));
  CHECK(b.certified);
  // p = x^2, n=2: 2 <= 8.
  MarkovResult c = markov_derivative_check(Polynomial({Rat(0), Rat(0), Rat(1)}, 2));
  CHECK(c.certified);
  CHECK(c.lhs.lo == 2);
  // Zero polynomial.
  CHECK(markov_derivative_check(Polynomial({Rat(0)}, 1)).certified);
}

TEST_CASE("markov l1 check") {
  MarkovResult a = markov_l1_check(Polynomial({Rat(-1), Rat(2)}, 1));
  CHECK(a.certified);
  MarkovResult b = markov_l1_check(Polynomial({Rat(-7, 3)}, 0));
  CHECK(b.certified);
  MarkovResult c = markov_l1_check(Polynomial({Rat(0), Rat(1)}, 1));
  CHECK(c.certified);
  // Near-Chebyshev coefficients still certify (through the slow path).
  MarkovResult d = markov_l1_check(Polynomial({Rat(1), Rat(-8), Rat(8)}, 2));
  CHECK(d.certified);
  CHECK_FALSE(d.refuted);
}

TEST_CASE("lagrange interpolation") {
  Polynomial identity = lagrange({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}}, 1);
  CHECK(identity == Polynomial({Rat(0), Rat(1)}, 1));
  Polynomial constant = lagrange({{Rat(0), Rat(2, 3)}, {Rat(1), Rat(2, 3)}}, 1);
  CHECK(constant == Polynomial({Rat(2, 3), Rat(0)}, 1));
  Polynomial parabola =
      lagrange({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}}, 2);
  CHECK(parabola == Polynomial({Rat(0), Rat(4), Rat(-4)}, 2));
  CHECK_THROWS_AS(lagrange({{Rat(0), Rat(0)}, {Rat(0), Rat(1)}}, 1), std::invalid_argument);
  CHECK_THROWS_AS(lagrange({{Rat(0), Rat(0)}}, 1), std::invalid_argument);
}

TEST_CASE("lagrange reproduces nodes exactly and respects the sup bound") {
  std::vector<std::pair<Rat, Rat>> nodes = {
      {Rat(1, 8), Rat(1, 3)}, {Rat(1, 2), Rat(-1, 5)}, {Rat(7, 8), Rat(1, 7)}};
  Polynomial L = lagrange(nodes, 2);
  Rat vmax(0), sep_min(1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    CHECK(L.eval(nodes[i].first) == nodes[i].second);
    vmax = rat_max(vmax, rat_abs(nodes[i].second));
    if (i > 0) sep_min = rat_min(sep_min, nodes[i].first - nodes[i - 1].first);
  }
  Rat bound = lagrange_sup_bound(vmax, sep_min, 2);
  for (long k = 0; k <= 256; ++k)
    CHECK(rat_abs(L.eval(Rat(k, 256))) <= bound);
}

TEST_CASE("lagrange_sup_bound") {
  CHECK(lagrange_sup_bound(Rat(0), Rat(1, 7), 3) == 0);
  CHECK(lagrange_sup_bound(Rat(1), Rat(1, 2), 1) == 4);
  CHECK(lagrange_sup_bound(Rat(5, 7), Rat(1, 100), 0) == Rat(5, 7));
  CHECK_THROWS_AS(lagrange_sup_bound(Rat(1), Rat(0), 1), std::invalid_argument);
}
