#include <doctest.h>

#include "prooflens/harness.hpp"

using namespace prooflens;
using namespace prooflens::harness;
using namespace prooflens::real;

namespace {

FunPtr tent() {
  return fe_pl(PLFunction({{Rat(0), Rat(0)}, {Rat(1, 2), Rat(1)}, {Rat(1), Rat(0)}}));
}

PolyGrid small_grid(unsigned n, long denom, Rat bound, Rat cap) {
  PolyGrid g;
  g.n = n;
  g.coeff_denominator = denom;
  g.coeff_bound = std::move(bound);
  g.l1_cap = std::move(cap);
  return g;
}

}  // namespace

TEST_CASE("enumerate_grid: constants at denominator 2") {
  std::vector<Polynomial> polys = enumerate_grid(small_grid(0, 2, Rat(1), Rat(2)));
  REQUIRE(polys.size() == 5);
  std::vector<Rat> expected = {Rat(-1), Rat(-1, 2), Rat(0), Rat(1, 2), Rat(1)};
  for (size_t i = 0; i < 5; ++i) CHECK(polys[i].coeff(0) == expected[i]);
}

TEST_CASE("enumerate_grid: cap 0 keeps only the zero polynomial") {
  std::vector<Polynomial> polys = enumerate_grid(small_grid(1, 2, Rat(1), Rat(0)));
  REQUIRE(polys.size() == 1);
  CHECK(polys[0].is_zero());
}

TEST_CASE("enumerate_grid: n=1 bound 1 denominator 1 gives nine candidates") {
  std::vector<Polynomial> polys = enumerate_grid(small_grid(1, 1, Rat(1), Rat(10)));
  CHECK(polys.size() == 9);
  // Lexicographic: constant term is the major key.
  CHECK(polys.front().coeff(0) == Rat(-1));
  CHECK(polys.front().coeff(1) == Rat(-1));
  CHECK(polys.back().coeff(0) == Rat(1));
  CHECK(polys.back().coeff(1) == Rat(1));
  // The L1 cap filters: ‖1+x‖₁ = 3/2 > 1 drops the corners at cap 1.
  std::vector<Polynomial> capped = enumerate_grid(small_grid(1, 1, Rat(1), Rat(1)));
  CHECK(capped.size() < polys.size());
  for (const auto& p : capped) CHECK(l1_norm(fe_poly(p), Rat(1, 64)).hi <= Rat(1));
}

TEST_CASE("best_on_grid: median constant for f(x) = x") {
  FunPtr f = fe_poly(Polynomial({Rat(0), Rat(1)}, 1));
  std::vector<Polynomial> grid = enumerate_grid(small_grid(0, 64, Rat(1), Rat(2)));
  BestResult best = best_on_grid(f, grid, Rat(1, 1024));
  CHECK(best.poly.coeff(0) == Rat(1, 2));
  CHECK(best.distance.contains(Rat(1, 4)));
  // Independent second pass in reverse order agrees.
  BestResult rev = best_on_grid(f, grid, Rat(1, 1024), /*reverse=*/true);
  CHECK(rev.poly == best.poly);
  CHECK(rev.distance.lo == best.distance.lo);
  CHECK(rev.distance.hi == best.distance.hi);
}

TEST_CASE("best_on_grid: members of the grid map to themselves") {
  std::vector<Polynomial> grid = enumerate_grid(small_grid(1, 4, Rat(1), Rat(2)));
  FunPtr f = fe_poly(Polynomial({Rat(1, 4), Rat(1, 2)}, 1));
  BestResult best = best_on_grid(f, grid, Rat(1, 1024));
  CHECK(best.poly == Polynomial({Rat(1, 4), Rat(1, 2)}, 1));
  CHECK(best.distance.contains(Rat(0)));

  FunPtr zero = fe_poly(Polynomial::constant(Rat(0)));
  CHECK(best_on_grid(zero, grid, Rat(1, 1024)).poly.is_zero());
}

TEST_CASE("nearly_best_set: delta regimes and monotonicity") {
  FunPtr f = fe_poly(Polynomial({Rat(0), Rat(1)}, 1));
  std::vector<Polynomial> grid = enumerate_grid(small_grid(0, 8, Rat(1), Rat(2)));
  // Huge delta: everything belongs.
  NearlyBest all = nearly_best_set(f, grid, Rat(10), Rat(1, 1024));
  CHECK(all.members.size() == grid.size());
  // Tiny delta with exact distances: the strict minimizer alone.
  NearlyBest one = nearly_best_set(f, grid, Rat(1, 1000000), Rat(1, 1024));
  CHECK(one.members.size() == 1);
  CHECK(grid[one.members[0]].coeff(0) == Rat(1, 2));
  // Monotone in delta.
  NearlyBest mid = nearly_best_set(f, grid, Rat(1, 16), Rat(1, 1024));
  CHECK(one.members.size() <= mid.members.size());
  CHECK(mid.members.size() <= all.members.size());
  for (size_t m : one.members)
    CHECK(std::find(mid.members.begin(), mid.members.end(), m) != mid.members.end());
  // f itself on the grid: the set contains it.
  FunPtr on_grid = fe_poly(Polynomial::constant(Rat(1, 2)));
  NearlyBest self = nearly_best_set(on_grid, grid, Rat(1, 64), Rat(1, 1024));
  bool found = false;
  for (size_t m : self.members) found = found || grid[m].coeff(0) == Rat(1, 2);
  CHECK(found);
}

TEST_CASE("check_uniqueness_property: exact grid ties exercise the pair check") {
  // f = 33/128 sits exactly midway between the grid constants 16/64 and 17/64,
  // so the nearly-best set has two members and one genuine pair to certify.
  FunPtr f = fe_poly(Polynomial::constant(Rat(33, 128)));
  Report r = check_uniqueness_property(f, 1, Rat(1, 4),
                                       small_grid(1, 64, Rat(1), Rat(0)));
  CHECK(r.failures() == 0);
  const auto& summary = r.checks.back();
  CHECK(summary.witness.at("members").get<size_t>() >= 2);
  CHECK(summary.witness.at("pairs").get<size_t>() >= 1);
  bool saw_pair = false;
  for (const auto& c : r.checks)
    if (c.id.find("/pair/") != std::string::npos) {
      saw_pair = true;
      CHECK(c.status == CheckStatus::Pass);
    }
  CHECK(saw_pair);
}

TEST_CASE("enumerate_grid members carry the L1 cap certificate") {
  PolyGrid g = small_grid(1, 8, Rat(2), Rat(1));
  for (const auto& p : enumerate_grid(g))
    CHECK(l1_norm(fe_poly(p), Rat(1, 4096)).hi <= g.l1_cap);
}

TEST_CASE("nearly_best_set: straddling enclosures are boundary, not members") {
  // For f = x² the best grid constant is 1/4 (rational-root distance, exact);
  // the runner-up 1/2 has an irrational sign change, so its distance enclosure
  // has nonzero width. A threshold aimed inside that interval must park the
  // runner-up in the boundary list rather than let interval width decide.
  FunPtr f = fe_poly(Polynomial({Rat(0), Rat(0), Rat(1)}, 2));
  std::vector<Polynomial> grid = enumerate_grid(small_grid(0, 4, Rat(1), Rat(2)));
  Rat tol(1, 1024);
  NearlyBest probe = nearly_best_set(f, grid, Rat(1), tol);
  CHECK(grid[probe.best_index].coeff(0) == Rat(1, 4));
  CHECK(probe.best_distance.width() == 0);
  CHECK(probe.best_distance.lo == Rat(1, 4));  // 1/12 + 1/6, splitting at x = 1/2
  size_t second = probe.best_index == 0 ? 1 : 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (i == probe.best_index) continue;
    if (probe.distances[i].mid() < probe.distances[second].mid()) second = i;
  }
  CHECK(grid[second].coeff(0) == Rat(1, 2));
  const Enclosure& d2 = probe.distances[second];
  REQUIRE(d2.width() > 0);
  Rat delta = d2.mid() - probe.best_distance.lo;
  NearlyBest nb = nearly_best_set(f, grid, delta, tol);
  CHECK(std::find(nb.boundary.begin(), nb.boundary.end(), second) != nb.boundary.end());
  CHECK(std::find(nb.members.begin(), nb.members.end(), second) == nb.members.end());
}

TEST_CASE("check_uniqueness_property on a small tent instance") {
  Report r = check_uniqueness_property(tent(), 1, Rat(1, 4),
                                       small_grid(1, 16, Rat(2), Rat(0)));
  CHECK(r.failures() == 0);
  REQUIRE(!r.checks.empty());
  CHECK(r.checks.back().id.find("summary") != std::string::npos);
  CHECK(r.checks.back().status == CheckStatus::Pass);
}

TEST_CASE("check_stability: identical functions and oversized perturbations") {
  Report same = check_stability(tent(), tent(), 1, Rat(1, 4),
                                small_grid(1, 16, Rat(2), Rat(0)));
  CHECK(same.failures() == 0);
  CHECK(same.checks.back().status == CheckStatus::Pass);

  FunPtr far = fe_sum(tent(), fe_poly(Polynomial::constant(Rat(1, 4))));
  Report gated = check_stability(tent(), far, 1, Rat(1, 4),
                                 small_grid(1, 16, Rat(2), Rat(0)));
  CHECK(gated.checks.back().status == CheckStatus::Inconclusive);
}

TEST_CASE("run_suite: empty config") {
  Report r = run_suite(nlohmann::json::object());
  CHECK(r.checks.empty());
  CHECK(r.failures() == 0);
  nlohmann::json j = r.to_json();
  CHECK(j.at("summary").at("pass") == 0);
  CHECK(j.contains("timestamp"));
}

TEST_CASE("run_suite: deliberately wrong synthetic check is recorded as failure") {
  nlohmann::json config = {{"suite", "selftest"},
                           {"synthetic", {{{"lo", "1/2"}, {"hi", "1/3"}}}}};
  Report r = run_suite(config);
  CHECK(r.failures() == 1);
  CHECK(r.to_json().at("summary").at("fail") == 1);
}

TEST_CASE("run_suite: determinism modulo timestamp") {
  nlohmann::json config = {
      {"suite", "det"},
      {"markov", {{{"n", 1}, {"denominator", 4}, {"bound", "1"}}}},
      {"metastability",
       {{{"name", "c"}, {"values", {"1/2", "1/2", "1/2", "1/2"}}, {"eps", "1/10"},
         {"f", "affine:1:0"}, {"expect_n", 0}}}}};
  nlohmann::json a = run_suite(config).to_json();
  nlohmann::json b = run_suite(config).to_json();
  a.erase("timestamp");
  b.erase("timestamp");
  CHECK(a == b);
}

TEST_CASE("report JSON schema fields") {
  nlohmann::json config = {{"suite", "schema"},
                           {"synthetic", {{{"lo", "1/3"}, {"hi", "1/2"}}}}};
  nlohmann::json j = run_suite(config).to_json();
  CHECK(j.at("suite") == "schema");
  CHECK(j.contains("config"));
  REQUIRE(j.at("checks").size() == 1);
  const auto& c = j.at("checks").at(0);
  CHECK(c.contains("id"));
  CHECK(c.at("status") == "pass");
  CHECK(c.contains("lo"));
  CHECK(c.contains("hi"));
  CHECK(j.at("summary").at("inconclusive") == 0);
}

TEST_CASE("thread budget respects the environment variable") {
  CHECK(thread_budget() >= 1);
  std::vector<int> marks(1000, 0);
  parallel_for(1000, [&](size_t i) { marks[i] = static_cast<int>(i % 7); });
  for (size_t i = 0; i < marks.size(); ++i) CHECK(marks[i] == static_cast<int>(i % 7));
}
