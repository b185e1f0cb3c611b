#include <doctest.h>

#include "prooflens/jackson.hpp"

using namespace prooflens;
using namespace prooflens::jackson;
using namespace prooflens::real;

namespace {

FunPtr tent() {
  return fe_pl(PLFunction({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}}));
}
FunPtr line2xm1() { return fe_poly(Polynomial({Rat(-1), Rat(2)}, 1)); }

}  // namespace

TEST_CASE("build_cover: constant far from zero gives the empty cover") {
  SmallValueCover c = build_cover(fe_poly(Polynomial::constant(Rat(1))), Rat(1, 2), 64);
  CHECK(c.intervals.empty());
  CHECK(c.total_measure == 0);
}

TEST_CASE("build_cover: zero function is covered everywhere") {
  SmallValueCover c = build_cover(fe_poly(Polynomial::constant(Rat(0))), Rat(1, 8), 64);
  REQUIRE(c.intervals.size() == 1);
  CHECK(c.total_measure == 1);
}

TEST_CASE("build_cover: 2x-1 at zeta 1/8 on the 1/64 grid") {
  SmallValueCover c = build_cover(line2xm1(), Rat(1, 8), 64);
  REQUIRE(c.intervals.size() == 1);
  // Flagged grid points are those with |2k/64 - 1| < 3/16: k in {27..37}.
  CHECK(c.intervals[0].first == Rat(26, 64));
  CHECK(c.intervals[0].second == Rat(38, 64));
  CHECK(c.total_measure == Rat(12, 64));
  // Soundness: every fine-grid point with |g| < zeta lies in the cover.
  for (long k = 0; k <= 1024; ++k) {
    Rat x(k, 1024);
    if (rat_abs(eval(line2xm1(), x)) < Rat(1, 8)) CHECK(c.contains(x));
  }
}

TEST_CASE("build_cover: grid too coarse is rejected") {
  // omega(zeta/2) = zeta/4 for Lipschitz 2; spacing 1/8 > 1/64 when zeta = 1/16.
  CHECK_THROWS_AS(build_cover(line2xm1(), Rat(1, 16), 8), GridTooCoarse);
}

TEST_CASE("verify_reduction: certified instance with the worked arithmetic") {
  // g = h = 2x-1, zeta=1/16, K=1, eps=1/8, grid 256.
  SmallValueCover cover = build_cover(line2xm1(), Rat(1, 16), 256);
  CHECK(cover.total_measure == Rat(3, 32));
  ReductionResult res =
      verify_reduction(line2xm1(), line2xm1(), Rat(1, 8), Rat(1, 16), Rat(1), cover);
  CHECK(res.status == CheckStatus::Pass);
  CHECK(res.witness.lambda == Rat(1, 32));
  CHECK(res.witness.gap == Rat(1, 256));
  // ‖g - λh‖₁ = (31/32)·(1/2) = 31/64, exactly.
  CHECK(res.lhs.contains(Rat(31, 64)));
  CHECK(res.rhs.contains(Rat(1, 2)));
}

TEST_CASE("verify_reduction: sign-flipped h gets a negative lambda") {
  FunPtr h = fe_poly(Polynomial({Rat(1), Rat(-2)}, 1));  // 1-2x = -(2x-1)
  SmallValueCover cover = build_cover(line2xm1(), Rat(1, 16), 256);
  ReductionResult res =
      verify_reduction(line2xm1(), h, Rat(1, 8), Rat(1, 16), Rat(1), cover);
  CHECK(res.status == CheckStatus::Pass);
  CHECK(res.witness.lambda == Rat(-1, 32));
  CHECK(res.lhs.contains(Rat(31, 64)));
}

TEST_CASE("verify_reduction: hypothesis gates give inconclusive, not false") {
  SmallValueCover cover = build_cover(line2xm1(), Rat(1, 16), 256);
  // h = 0: the sgn-integral hypothesis cannot certify.
  ReductionResult zero_h = verify_reduction(
      line2xm1(), fe_poly(Polynomial::constant(Rat(0))), Rat(1, 8), Rat(1, 16), Rat(1), cover);
  CHECK(zero_h.status == CheckStatus::Inconclusive);
  // eps too large for |∫ h sgn g| = 1/2 ≥ 3Kε.
  ReductionResult big_eps =
      verify_reduction(line2xm1(), line2xm1(), Rat(1, 4), Rat(1, 16), Rat(1), cover);
  CHECK(big_eps.status == CheckStatus::Inconclusive);
  // Cover measure above eps.
  ReductionResult small_eps =
      verify_reduction(line2xm1(), line2xm1(), Rat(1, 12), Rat(1, 16), Rat(1), cover);
  CHECK(small_eps.status == CheckStatus::Inconclusive);
  // Cover built for a different function.
  SmallValueCover other = build_cover(tent(), Rat(1, 16), 256);
  ReductionResult wrong =
      verify_reduction(line2xm1(), line2xm1(), Rat(1, 8), Rat(1, 16), Rat(1), other);
  CHECK(wrong.status == CheckStatus::Inconclusive);
  // sup-norm bound K too small.
  ReductionResult tight_k =
      verify_reduction(line2xm1(), line2xm1(), Rat(1, 8), Rat(1, 16), Rat(1, 2), cover);
  CHECK(tight_k.status == CheckStatus::Inconclusive);
}

TEST_CASE("verify_reduction: conclusion arithmetic at lambda 1/16") {
  // With lambda = 1/16 the conclusion values are ‖g-λh‖₁ = 15/32, gap 1/192;
  // the inequality 15/32 + 1/192 ≤ 1/2 holds.
  FunPtr diff = fe_sum(line2xm1(), fe_scale(Rat(-1, 16), line2xm1()));
  Enclosure lhs = l1_norm(diff, Rat(1, 4096));
  CHECK(lhs.contains(Rat(15, 32)));
  CHECK(Rat(15, 32) + Rat(1, 12) * Rat(1, 8) / 2 <= Rat(1, 2));
}

TEST_CASE("find_near_zeros: zero residual takes the earliest admissible points") {
  Polynomial p({Rat(0), Rat(1)}, 1);
  auto cert = find_near_zeros(fe_poly(p), p, 1, Rat(1, 100), 256);
  REQUIRE(cert.has_value());
  REQUIRE(cert->points.size() == 2);
  CHECK(cert->points[0] == Rat(0));
  CHECK(cert->points[1] - cert->points[0] >= cert->separation);
  CHECK(cert->separation == Rat(1, 180));
}

TEST_CASE("find_near_zeros: tent against its best line") {
  Polynomial best({Rat(1, 2), Rat(0)}, 1);
  auto cert = find_near_zeros(tent(), best, 1, Rat(1, 100), 256);
  REQUIRE(cert.has_value());
  REQUIRE(cert->points.size() == 2);
  for (const Rat& r : cert->points)
    CHECK(rat_abs(eval(tent(), r) - best.eval(r)) <= Rat(1, 100));
  CHECK(cert->points[1] - cert->points[0] >= Rat(1, 180));
}

TEST_CASE("find_near_zeros: residual bounded away fails plainly") {
  Polynomial far({Rat(-1), Rat(0)}, 1);  // f - p = 2 everywhere for f = 1
  auto cert = find_near_zeros(fe_poly(Polynomial::constant(Rat(1))), far, 1, Rat(1, 4), 256);
  CHECK_FALSE(cert.has_value());
  CHECK(near_zero_separation(1) == Rat(1, 180));
  CHECK_THROWS_AS(near_zero_separation(0), std::invalid_argument);
}

TEST_CASE("sup_from_l1: spec instances") {
  // q = 0 certifies for any eps.
  auto zero = sup_from_l1(fe_poly(Polynomial::constant(Rat(0))), mod_linear(Rat(1)), Rat(1, 4));
  CHECK(zero.status == CheckStatus::Pass);
  CHECK_FALSE(zero.defect);
  // q = (2x-1)/100 with omega = linear:50 at eps = 1/4: precondition fails.
  auto gate = sup_from_l1(fe_scale(Rat(1, 100), line2xm1()), mod_linear(Rat(50)), Rat(1, 4));
  CHECK(gate.status == CheckStatus::Inconclusive);
  CHECK(gate.bound == Rat(1, 3200));
  // q = 1e-6 constant, omega = linear:1, eps = 1/10: certifies.
  auto tiny = sup_from_l1(fe_scale(Rat(1, 1000000), fe_poly(Polynomial::constant(Rat(1)))),
                          mod_linear(Rat(1)), Rat(1, 10));
  CHECK(tiny.status == CheckStatus::Pass);
  CHECK(tiny.bound == Rat(1, 400));
  CHECK_FALSE(tiny.defect);
}

TEST_CASE("uniqueness modulus: displayed formula values") {
  UniquenessModulus phi = uniqueness_modulus(1, mod_linear(Rat(1)), Rat(1, 2));
  CHECK(phi.zeta(Rat(1)) == Rat(1, 1440));
  CHECK(phi.zeta(Rat(1, 10)) == Rat(1, 14400));
  // Phi(eps) = zeta^2/96 in the regime where the polynomial slot wins.
  CHECK(phi.phi(Rat(1, 10)) == Rat(1) / Rat(19906560000LL));
  CHECK(phi.phi(Rat(1, 2)) > 0);
  CHECK(phi.phi(Rat(1, 10)) <= phi.phi(Rat(1, 5)));
  CHECK_THROWS_AS(uniqueness_modulus(0, mod_linear(Rat(1)), Rat(1)), std::invalid_argument);
  CHECK_THROWS_AS(uniqueness_modulus(1, mod_linear(Rat(1)), Rat(0)), std::invalid_argument);
}

TEST_CASE("uniqueness modulus invariants over an epsilon grid") {
  UniquenessModulus phi = uniqueness_modulus(2, mod_linear(Rat(3)), Rat(2, 3));
  Rat prev(0);
  for (long k = 1; k <= 64; ++k) {
    Rat eps(k, 16);
    Rat value = phi.phi(eps);
    CHECK(value > 0);
    CHECK(value <= eps);
    CHECK(value >= prev);
    prev = value;
  }
}

TEST_CASE("q_modulus equals the displayed combination") {
  for (unsigned n : {1u, 2u}) {
    for (const Rat& L : {Rat(1, 2), Rat(1), Rat(3, 5)}) {
      UniquenessModulus phi = uniqueness_modulus(n, mod_linear(Rat(2)), L);
      Modulus q = phi.q_modulus();
      Rat nn(static_cast<long>(n));
      Rat denom = 12 * nn * nn * (nn + 1) * (nn + 1) * L;
      for (long k = 1; k <= 16; ++k) {
        Rat delta(1, k);
        Rat expected = rat_min(eval_modulus(mod_linear(Rat(2)), delta / 6), delta / denom);
        CHECK(eval_modulus(q, delta) == expected);
      }
    }
  }
}

TEST_CASE("uniqueness modulus with a compound omega") {
  // min{eps/2, eps/8} collapses to eps/8, so the two must agree everywhere.
  UniquenessModulus a =
      uniqueness_modulus(1, mod_min({mod_linear(Rat(2)), mod_linear(Rat(8))}), Rat(1, 2));
  UniquenessModulus b = uniqueness_modulus(1, mod_linear(Rat(8)), Rat(1, 2));
  for (long k = 1; k <= 12; ++k) CHECK(a.phi(Rat(1, k)) == b.phi(Rat(1, k)));
}

TEST_CASE("stability radius") {
  UniquenessModulus phi = uniqueness_modulus(1, mod_linear(Rat(1)), Rat(1, 2));
  Rat delta(1, 4);
  CHECK(stability_radius(phi, delta) == phi.phi(delta) / 2);
  CHECK(stability_radius(phi, Rat(1, 8)) <= stability_radius(phi, Rat(1, 4)));
  CHECK(stability_radius(phi, delta) < delta);
  CHECK_THROWS_AS(stability_radius(phi, Rat(0)), std::invalid_argument);
}
