#pragma once

#include "prooflens/jackson.hpp"

#include <functional>
#include <json.hpp>

namespace prooflens::harness {

using jackson::CheckStatus;
using prooflens::Enclosure;
using prooflens::Rat;
using real::FunPtr;
using real::Polynomial;

// PROOFLENS_THREADS caps harness parallelism (default: hardware concurrency).
int thread_budget();
// fn(i) for i in [0, n); work is partitioned over disjoint index ranges and
// results must be written to index-addressed slots for a deterministic merge.
void parallel_for(size_t n, const std::function<void(size_t)>& fn);

// ---------------------------------------------------------------------------
// Polynomial grids (the Q_n surrogate)

struct PolyGrid {
  unsigned n = 0;
  long coeff_denominator = 1;
  Rat coeff_bound;
  Rat l1_cap;  // 2·‖f‖₁ in Q_n use
};

struct EmptyGrid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lexicographic on coefficient vectors (constant term first); only members
// with certified ‖p‖₁ ≤ l1_cap are emitted.
std::vector<Polynomial> enumerate_grid(const PolyGrid& grid);

// ---------------------------------------------------------------------------
// Grid search oracles

struct BestResult {
  Polynomial poly;
  Enclosure distance;
  size_t index = 0;
};

// Minimizes the L1-distance enclosure midpoint over the grid; ties broken
// lexicographically. `reverse` scans the grid backwards (oracle re-check).
BestResult best_on_grid(const FunPtr& f, const std::vector<Polynomial>& grid,
                        const Rat& tol, bool reverse = false);

struct NearlyBest {
  std::vector<size_t> members;   // certified: hi(dist) < lo(best) + delta
  std::vector<size_t> boundary;  // enclosure straddles the threshold
  size_t best_index = 0;
  Enclosure best_distance = Enclosure::point(Rat(0));
  std::vector<Enclosure> distances;  // aligned with the grid
};

NearlyBest nearly_best_set(const FunPtr& f, const std::vector<Polynomial>& grid,
                           const Rat& delta, const Rat& tol);

// ---------------------------------------------------------------------------
// Reports

struct CheckRecord {
  std::string id;
  CheckStatus status = CheckStatus::Inconclusive;
  std::optional<Enclosure> enclosure;
  nlohmann::json witness;
};

struct Report {
  std::string suite;
  nlohmann::json config;
  std::vector<CheckRecord> checks;
  std::string timestamp;

  void add(CheckRecord r);
  void merge(const Report& other);
  int passes() const;
  int failures() const;
  int inconclusive() const;
  nlohmann::json to_json() const;
};

// Every pair in nearly_best_set(f, grid, Φ_f(eps)) must be within eps in L1;
// boundary members are reported separately and excluded from pair checks.
Report check_uniqueness_property(const FunPtr& f, unsigned n, const Rat& eps,
                                 const PolyGrid& grid);

// Under ‖f−f′‖₁ < stability_radius(Φ_f, delta), the grid-best approximations
// of f and f′ are within delta.
Report check_stability(const FunPtr& f, const FunPtr& f_prime, unsigned n,
                       const Rat& delta, const PolyGrid& grid);

// Executes the configured instances across all check families and aggregates.
// Config parse errors throw std::invalid_argument.
Report run_suite(const nlohmann::json& config);

} // namespace prooflens::harness
