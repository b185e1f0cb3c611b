#include "prooflens/harness.hpp"

#include "prooflens/dialectica.hpp"
#include "prooflens/metastability.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace prooflens::harness {

using jackson::build_cover;
using jackson::find_near_zeros;
using jackson::stability_radius;
using jackson::sup_from_l1;
using jackson::SmallValueCover;
using jackson::uniqueness_modulus;
using jackson::UniquenessModulus;
using jackson::verify_reduction;
using real::derive_modulus;
using real::fe_poly;
using real::fe_scale;
using real::fe_sum;
using real::l1_norm;
using real::markov_derivative_check;
using real::markov_l1_check;
using real::MarkovResult;
using real::Modulus;
using real::parse_fun_spec;
using real::parse_modulus_spec;

// ---------------------------------------------------------------------------
// Parallelism

int thread_budget() {
  if (const char* env = std::getenv("PROOFLENS_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min(v, 64L));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 2 : static_cast<int>(std::min(hw, 16u));
}

void parallel_for(size_t n, const std::function<void(size_t)>& fn) {
  int threads = thread_budget();
  if (threads <= 1 || n < 64) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));
  size_t chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    size_t lo = t * chunk;
    size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi, t] {
      try {
        for (size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[static_cast<size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Grid enumeration

namespace {

Rat coeff_sum_bound(const Polynomial& p) {
  Rat s(0);
  for (const auto& c : p.coeffs()) s += rat_abs(c);
  return s;
}

bool lex_less(const Polynomial& a, const Polynomial& b) {
  size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  for (size_t i = 0; i < n; ++i) {
    if (a.coeff(i) != b.coeff(i)) return a.coeff(i) < b.coeff(i);
  }
  return false;
}

}  // namespace

std::vector<Polynomial> enumerate_grid(const PolyGrid& grid) {
  if (grid.coeff_denominator <= 0 || grid.coeff_bound < 0)
    throw std::invalid_argument("enumerate_grid: bad grid parameters");
  long steps = 0;
  {
    Rat k = grid.coeff_bound * grid.coeff_denominator;
    BigInt num = boost::multiprecision::numerator(k);
    BigInt den = boost::multiprecision::denominator(k);
    steps = static_cast<long>(num / den);
  }
  std::vector<Polynomial> out;
  std::vector<long> odo(grid.n + 1, -steps);
  for (;;) {
    std::vector<Rat> coeffs(grid.n + 1);
    for (size_t i = 0; i <= grid.n; ++i) coeffs[i] = Rat(odo[i], grid.coeff_denominator);
    Polynomial p(std::move(coeffs), grid.n);
    bool member;
    if (coeff_sum_bound(p) <= grid.l1_cap) {
      member = true;  // ‖p‖₁ ≤ sup ≤ Σ|cᵢ|
    } else {
      member = l1_norm(fe_poly(p), Rat(1, 4096)).hi <= grid.l1_cap;
    }
    if (member) out.push_back(std::move(p));
    // Odometer: last coefficient varies fastest; constant term is the major key.
    size_t pos = grid.n + 1;
    while (pos > 0) {
      --pos;
      if (odo[pos] < steps) {
        ++odo[pos];
        for (size_t i = pos + 1; i <= grid.n; ++i) odo[i] = -steps;
        break;
      }
      if (pos == 0) {
        if (out.empty()) throw EmptyGrid("enumerate_grid: no member satisfies the L1 cap");
        return out;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Grid search

namespace {

std::vector<Enclosure> grid_distances(const FunPtr& f, const std::vector<Polynomial>& grid,
                                      const Rat& tol) {
  std::vector<std::optional<Enclosure>> tmp(grid.size());
  parallel_for(grid.size(), [&](size_t i) {
    FunPtr diff = fe_sum(f, fe_scale(Rat(-1), fe_poly(grid[i])));
    tmp[i] = l1_norm(diff, tol);
  });
  std::vector<Enclosure> out;
  out.reserve(grid.size());
  for (auto& e : tmp) out.push_back(*e);
  return out;
}

size_t pick_best(const std::vector<Polynomial>& grid, const std::vector<Enclosure>& dist,
                 bool reverse) {
  size_t best = reverse ? grid.size() - 1 : 0;
  auto better = [&](size_t i, size_t j) {
    Rat mi = dist[i].mid(), mj = dist[j].mid();
    if (mi != mj) return mi < mj;
    return lex_less(grid[i], grid[j]);
  };
  if (reverse) {
    for (size_t k = grid.size(); k-- > 0;)
      if (better(k, best)) best = k;
  } else {
    for (size_t k = 0; k < grid.size(); ++k)
      if (better(k, best)) best = k;
  }
  return best;
}

}  // namespace

BestResult best_on_grid(const FunPtr& f, const std::vector<Polynomial>& grid,
                        const Rat& tol, bool reverse) {
  if (grid.empty()) throw EmptyGrid("best_on_grid: empty grid");
  std::vector<Enclosure> dist = grid_distances(f, grid, tol);
  size_t best = pick_best(grid, dist, reverse);
  return BestResult{grid[best], dist[best], best};
}

NearlyBest nearly_best_set(const FunPtr& f, const std::vector<Polynomial>& grid,
                           const Rat& delta, const Rat& tol) {
  if (grid.empty()) throw EmptyGrid("nearly_best_set: empty grid");
  if (delta <= 0) throw std::invalid_argument("nearly_best_set: delta must be positive");
  NearlyBest out;
  out.distances = grid_distances(f, grid, tol);
  out.best_index = pick_best(grid, out.distances, false);
  out.best_distance = out.distances[out.best_index];
  Rat threshold = out.best_distance.lo + delta;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (out.distances[i].hi < threshold)
      out.members.push_back(i);
    else if (out.distances[i].lo < threshold)
      out.boundary.push_back(i);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports

void Report::add(CheckRecord r) { checks.push_back(std::move(r)); }

void Report::merge(const Report& other) {
  for (const auto& c : other.checks) checks.push_back(c);
}

int Report::passes() const {
  int k = 0;
  for (const auto& c : checks) k += c.status == CheckStatus::Pass;
  return k;
}
int Report::failures() const {
  int k = 0;
  for (const auto& c : checks) k += c.status == CheckStatus::Fail;
  return k;
}
int Report::inconclusive() const {
  int k = 0;
  for (const auto& c : checks) k += c.status == CheckStatus::Inconclusive;
  return k;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["suite"] = suite;
  j["config"] = config;
  auto& arr = j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e;
    e["id"] = c.id;
    e["status"] = jackson::to_string(c.status);
    if (c.enclosure) {
      e["lo"] = rat_str(c.enclosure->lo);
      e["hi"] = rat_str(c.enclosure->hi);
    }
    if (!c.witness.is_null()) e["witness"] = c.witness;
    arr.push_back(std::move(e));
  }
  j["summary"] = {{"pass", passes()}, {"fail", failures()}, {"inconclusive", inconclusive()}};
  j["timestamp"] = timestamp;
  return j;
}

namespace {

std::string now_iso8601() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Uniqueness and stability

Report check_uniqueness_property(const FunPtr& f, unsigned n, const Rat& eps,
                                 const PolyGrid& grid_in) {
  Report report;
  report.suite = "uniqueness";
  report.timestamp = now_iso8601();
  Rat f_l1 = l1_norm(f, Rat(1, 1 << 20)).hi;
  PolyGrid grid = grid_in;
  if (grid.l1_cap <= 0) grid.l1_cap = 2 * f_l1;
  UniquenessModulus phi = uniqueness_modulus(n, derive_modulus(f), f_l1);
  Rat delta = phi.phi(eps);
  std::vector<Polynomial> members = enumerate_grid(grid);
  NearlyBest nb = nearly_best_set(f, members, delta, Rat(1, 1024));

  std::string base = "uniqueness/n" + std::to_string(n) + "/eps=" + rat_str(eps);
  size_t pair_checks = 0, pair_failures = 0;
  for (size_t a = 0; a < nb.members.size(); ++a) {
    for (size_t b = a + 1; b < nb.members.size(); ++b) {
      const Polynomial& p1 = members[nb.members[a]];
      const Polynomial& p2 = members[nb.members[b]];
      Enclosure d = l1_norm(fe_poly(p1 - p2), Rat(1, 4096));
      CheckRecord rec;
      rec.id = base + "/pair/" + std::to_string(nb.members[a]) + "," +
               std::to_string(nb.members[b]);
      rec.enclosure = d;
      rec.witness = {{"p1", p1.str()}, {"p2", p2.str()}};
      if (d.hi < eps) rec.status = CheckStatus::Pass;
      else if (d.lo >= eps) rec.status = CheckStatus::Fail;
      else rec.status = CheckStatus::Inconclusive;
      pair_failures += rec.status == CheckStatus::Fail;
      ++pair_checks;
      report.add(std::move(rec));
    }
  }
  CheckRecord summary;
  summary.id = base + "/summary";
  summary.status = pair_failures == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  summary.enclosure = nb.best_distance;
  // Gap to the runner-up minimizer, recorded as the grid-scale uniqueness trend.
  std::optional<Rat> runner_up;
  for (size_t i = 0; i < nb.distances.size(); ++i) {
    if (i == nb.best_index) continue;
    Rat mid = nb.distances[i].mid();
    if (!runner_up || mid < *runner_up) runner_up = mid;
  }
  summary.witness = {{"phi", rat_str(delta)},
                     {"grid_size", members.size()},
                     {"members", nb.members.size()},
                     {"boundary", nb.boundary.size()},
                     {"pairs", pair_checks},
                     {"best", members[nb.best_index].str()}};
  if (runner_up)
    summary.witness["runner_up_gap"] = rat_str(*runner_up - nb.best_distance.mid());
  report.add(std::move(summary));
  return report;
}

Report check_stability(const FunPtr& f, const FunPtr& f_prime, unsigned n,
                       const Rat& delta, const PolyGrid& grid_in) {
  Report report;
  report.suite = "stability";
  report.timestamp = now_iso8601();
  Rat f_l1 = l1_norm(f, Rat(1, 1 << 20)).hi;
  PolyGrid grid = grid_in;
  if (grid.l1_cap <= 0) grid.l1_cap = 2 * f_l1;
  UniquenessModulus phi = uniqueness_modulus(n, derive_modulus(f), f_l1);
  Rat radius = stability_radius(phi, delta);

  CheckRecord rec;
  rec.id = "stability/n" + std::to_string(n) + "/delta=" + rat_str(delta);
  FunPtr gap = fe_sum(f, fe_scale(Rat(-1), f_prime));
  Enclosure dist_ff = l1_norm(gap, rat_min(Rat(1, 4096), radius / 4));
  if (dist_ff.hi >= radius) {
    rec.status = CheckStatus::Inconclusive;
    rec.enclosure = dist_ff;
    rec.witness = {{"radius", rat_str(radius)}, {"reason", "perturbation not below radius"}};
    report.add(std::move(rec));
    return report;
  }
  std::vector<Polynomial> members = enumerate_grid(grid);
  BestResult b1 = best_on_grid(f, members, Rat(1, 1024));
  BestResult b2 = best_on_grid(f_prime, members, Rat(1, 1024));
  Enclosure d = l1_norm(fe_poly(b1.poly - b2.poly), Rat(1, 4096));
  rec.enclosure = d;
  rec.witness = {{"radius", rat_str(radius)},
                 {"best_f", b1.poly.str()},
                 {"best_f_prime", b2.poly.str()}};
  if (d.hi < delta) rec.status = CheckStatus::Pass;
  else if (d.lo >= delta) rec.status = CheckStatus::Fail;
  else rec.status = CheckStatus::Inconclusive;
  report.add(std::move(rec));
  return report;
}

// ---------------------------------------------------------------------------
// Suite families

namespace {

Rat jrat(const nlohmann::json& j) { return parse_rat(j.get<std::string>()); }

void run_markov(const nlohmann::json& instances, Report& report) {
  for (const auto& inst : instances) {
    PolyGrid grid;
    grid.n = inst.at("n").get<unsigned>();
    grid.coeff_denominator = inst.at("denominator").get<long>();
    grid.coeff_bound = jrat(inst.at("bound"));
    grid.l1_cap = inst.contains("cap") ? jrat(inst.at("cap"))
                                       : (grid.coeff_bound + 1) * (grid.n + 1);
    std::vector<Polynomial> polys = enumerate_grid(grid);
    std::vector<int> deriv_bad(polys.size(), 0), l1_bad(polys.size(), 0);
    parallel_for(polys.size(), [&](size_t i) {
      MarkovResult d = markov_derivative_check(polys[i]);
      if (!d.certified) deriv_bad[i] = d.refuted ? 2 : 1;
      MarkovResult l = markov_l1_check(polys[i]);
      if (!l.certified) l1_bad[i] = l.refuted ? 2 : 1;
    });
    long deriv_fail = std::count_if(deriv_bad.begin(), deriv_bad.end(),
                                    [](int v) { return v != 0; });
    long l1_fail = std::count_if(l1_bad.begin(), l1_bad.end(), [](int v) { return v != 0; });
    std::string base = "markov/n" + std::to_string(grid.n);
    CheckRecord rec;
    rec.id = base + "/derivative";
    rec.status = deriv_fail == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rec.witness = {{"polynomials", polys.size()}, {"violations", deriv_fail}};
    report.add(std::move(rec));
    CheckRecord rec2;
    rec2.id = base + "/l1";
    rec2.status = l1_fail == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rec2.witness = {{"polynomials", polys.size()}, {"violations", l1_fail}};
    report.add(std::move(rec2));
  }
}

void run_reduction(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    FunPtr g = parse_fun_spec(inst.at("g"));
    FunPtr h = parse_fun_spec(inst.at("h"));
    Rat eps = jrat(inst.at("eps"));
    Rat zeta = jrat(inst.at("zeta"));
    Rat K = jrat(inst.at("K"));
    long grid = inst.at("grid").get<long>();
    Rat tol = inst.contains("tol") ? jrat(inst.at("tol")) : Rat(1, 4096);
    CheckRecord rec;
    rec.id = "reduction/" +
             (inst.contains("name") ? inst.at("name").get<std::string>() : std::to_string(k));
    try {
      SmallValueCover cover = build_cover(g, zeta, grid);
      auto res = verify_reduction(g, h, eps, zeta, K, cover, tol);
      rec.status = res.status;
      rec.enclosure = res.lhs;
      rec.witness = {{"lambda", rat_str(res.witness.lambda)},
                     {"gap", rat_str(res.witness.gap)},
                     {"g_l1_lo", rat_str(res.rhs.lo)},
                     {"cover_measure", rat_str(cover.total_measure)},
                     {"detail", res.detail}};
    } catch (const std::exception& e) {
      rec.status = CheckStatus::Inconclusive;
      rec.witness = {{"error", e.what()}};
    }
    ++k;
    report.add(std::move(rec));
  }
}

void run_near_zeros(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    FunPtr f = parse_fun_spec(inst.at("f"));
    std::vector<Rat> coeffs;
    for (const auto& c : inst.at("p")) coeffs.push_back(jrat(c));
    unsigned n = inst.at("n").get<unsigned>();
    Polynomial p(std::move(coeffs), n);
    Rat zeta = jrat(inst.at("zeta"));
    long grid = inst.contains("grid") ? inst.at("grid").get<long>() : 256;
    bool expect_found = inst.at("expect").get<std::string>() == "found";
    auto cert = find_near_zeros(f, p, n, zeta, grid);
    CheckRecord rec;
    rec.id = "near_zeros/" +
             (inst.contains("name") ? inst.at("name").get<std::string>() : std::to_string(k));
    bool ok = cert.has_value() == expect_found;
    if (cert) {
      nlohmann::json pts = nlohmann::json::array();
      for (const auto& r : cert->points) pts.push_back(rat_str(r));
      rec.witness = {{"points", pts}, {"separation", rat_str(cert->separation)}};
      // Structural re-check of the certificate.
      for (size_t i = 0; ok && i < cert->points.size(); ++i) {
        ok = rat_abs(real::eval(f, cert->points[i]) - p.eval(cert->points[i])) <= zeta;
        if (i > 0) ok = ok && cert->points[i] - cert->points[i - 1] >= cert->separation;
      }
    }
    rec.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    ++k;
    report.add(std::move(rec));
  }
}

void run_sup_from_l1(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    FunPtr q = parse_fun_spec(inst.at("q"));
    Modulus omega = parse_modulus_spec(inst.at("omega").get<std::string>());
    Rat eps = jrat(inst.at("eps"));
    std::string expect = inst.at("expect").get<std::string>();
    auto res = sup_from_l1(q, omega, eps);
    CheckRecord rec;
    rec.id = "sup_from_l1/" +
             (inst.contains("name") ? inst.at("name").get<std::string>() : std::to_string(k));
    rec.enclosure = res.l1;
    rec.witness = {{"bound", rat_str(res.bound)}, {"defect", res.defect}};
    bool ok = jackson::to_string(res.status) == expect && !res.defect;
    rec.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
    ++k;
    report.add(std::move(rec));
  }
}

PolyGrid grid_from_json(const nlohmann::json& j, unsigned n) {
  PolyGrid grid;
  grid.n = n;
  grid.coeff_denominator = j.at("denominator").get<long>();
  grid.coeff_bound = j.contains("bound") ? jrat(j.at("bound")) : Rat(4);
  grid.l1_cap = j.contains("cap") ? jrat(j.at("cap")) : Rat(0);  // 0 = auto (2‖f‖₁)
  return grid;
}

void run_uniqueness(const nlohmann::json& instances, Report& report) {
  for (const auto& inst : instances) {
    FunPtr f = parse_fun_spec(inst.at("f"));
    unsigned n = inst.at("n").get<unsigned>();
    Rat eps = jrat(inst.at("eps"));
    PolyGrid grid = grid_from_json(inst.at("grid"), n);
    Report sub = check_uniqueness_property(f, n, eps, grid);
    std::string name = inst.contains("name") ? inst.at("name").get<std::string>() : "f";
    for (auto& c : sub.checks) c.id = name + "/" + c.id;
    report.merge(sub);
  }
}

void run_stability(const nlohmann::json& instances, Report& report) {
  for (const auto& inst : instances) {
    FunPtr f = parse_fun_spec(inst.at("f"));
    unsigned n = inst.at("n").get<unsigned>();
    Rat delta = jrat(inst.at("delta"));
    PolyGrid grid = grid_from_json(inst.at("grid"), n);
    // Default perturbation: f' = f + η with η = radius/2.
    FunPtr f_prime;
    if (inst.contains("f_prime")) {
      f_prime = parse_fun_spec(inst.at("f_prime"));
    } else {
      Rat f_l1 = l1_norm(f, Rat(1, 1 << 20)).hi;
      UniquenessModulus phi = uniqueness_modulus(n, derive_modulus(f), f_l1);
      Rat eta = stability_radius(phi, delta) / 2;
      if (inst.contains("eta")) eta = jrat(inst.at("eta"));
      f_prime = fe_sum(f, fe_scale(eta, fe_poly(Polynomial::constant(Rat(1)))));
    }
    Report sub = check_stability(f, f_prime, n, delta, grid);
    std::string name = inst.contains("name") ? inst.at("name").get<std::string>() : "f";
    for (auto& c : sub.checks) c.id = name + "/" + c.id;
    report.merge(sub);
  }
}

// --- ND equivalence checks ---

using logic::DomainTag;
using logic::FiniteModel;
using logic::finite_model_eval;
using logic::FormulaDoc;
using logic::FormulaPtr;

FormulaDoc load_formula_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open formula file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return logic::parse_document(buf.str());
}

void collect_base_domains(const DomainTag& d, std::vector<DomainTag>& out) {
  if (d.is_fun()) {
    collect_base_domains(*d.from, out);
    collect_base_domains(*d.to, out);
    return;
  }
  for (const auto& seen : out)
    if (seen == d) return;
  out.push_back(d);
}

void collect_formula_domains(const FormulaPtr& f, std::vector<DomainTag>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, logic::Atom>) {
        } else if constexpr (std::is_same_v<T, logic::Not>) {
          collect_formula_domains(n.body, out);
        } else if constexpr (std::is_same_v<T, logic::ForAll> ||
                             std::is_same_v<T, logic::Exists>) {
          collect_base_domains(n.domain, out);
          collect_formula_domains(n.body, out);
        } else {
          collect_formula_domains(n.lhs, out);
          collect_formula_domains(n.rhs, out);
        }
      },
      f->node);
}

void run_nd_file_instance(const nlohmann::json& inst, const std::string& base_dir,
                          Report& report) {
  std::string path = inst.at("file").get<std::string>();
  if (!base_dir.empty() && path.front() != '/') path = base_dir + "/" + path;
  FormulaDoc doc = load_formula_file(path);
  FormulaPtr embedded = logic::embed(logic::nd(doc.root));

  std::vector<DomainTag> domains;
  collect_formula_domains(doc.root, domains);
  for (const auto& [name, sig] : doc.signature.predicates)
    for (const auto& d : sig.profile) collect_base_domains(d, domains);

  FiniteModel model;
  for (const auto& d : domains) {
    long size = 2;
    if (inst.contains("carriers")) {
      const auto& c = inst.at("carriers");
      std::string key = d.name.empty() ? d.descriptor : d.name;
      if (c.contains(key)) size = c.at(key).get<long>();
    }
    model.set_carrier(d, size);
  }

  // All predicate tables, one bit per cell.
  struct PredCells {
    std::string name;
    std::vector<DomainTag> profile;
    long cells;
  };
  std::vector<PredCells> preds;
  long total_bits = 0;
  for (const auto& [name, sig] : doc.signature.predicates) {
    if (sig.profile.empty())
      throw std::invalid_argument("nd_equiv needs predicate profiles: " + name);
    long cells = 1;
    for (const auto& d : sig.profile) cells *= model.carrier_size(d);
    preds.push_back(PredCells{name, sig.profile, cells});
    total_bits += cells;
  }
  if (total_bits > 22)
    throw std::invalid_argument("nd_equiv table space too large for " + path);

  long mismatches = 0;
  long total = 1L << total_bits;
  for (long mask = 0; mask < total; ++mask) {
    long cursor = mask;
    for (const auto& pc : preds) {
      std::vector<char> table(pc.cells);
      for (long i = 0; i < pc.cells; ++i) table[i] = (cursor >> i) & 1;
      cursor >>= pc.cells;
      model.set_predicate(pc.name, pc.profile, std::move(table));
    }
    if (finite_model_eval(doc.root, model) != finite_model_eval(embedded, model))
      ++mismatches;
  }
  CheckRecord rec;
  rec.id = "nd_equiv/" + inst.at("file").get<std::string>();
  rec.status = mismatches == 0 ? CheckStatus::Pass : CheckStatus::Fail;
  rec.witness = {{"tables", total}, {"mismatches", mismatches}};
  report.add(std::move(rec));
}

// The Π3 functional-form lemma: ∀x∃y∀z φ(x,y,z) iff ∀x∀Z∃y φ(x,y,Z(y)).
void run_pi3_sweep(Report& report) {
  DomainTag D = DomainTag::countable("D", "D");
  DomainTag fun_dd = DomainTag::fun(D, D);
  using logic::mk_atom;
  using logic::mk_exists;
  using logic::mk_forall;
  using logic::Term;

  auto var = [](const char* v) { return Term{v, {}}; };
  FormulaPtr lhs3 = mk_forall(
      "x", D,
      mk_exists("y", D,
                mk_forall("z", D, mk_atom("P", {var("x"), var("y"), var("z")}))));
  FormulaPtr rhs3 = mk_forall(
      "x", D,
      mk_forall("Z", fun_dd,
                mk_exists("y", D,
                          mk_atom("P", {var("x"), var("y"), Term{"Z", {var("y")}}}))));
  FormulaPtr lhs2 =
      mk_exists("y", D, mk_forall("z", D, mk_atom("Q", {var("y"), var("z")})));
  FormulaPtr rhs2 = mk_forall(
      "Z", fun_dd,
      mk_exists("y", D, mk_atom("Q", {var("y"), Term{"Z", {var("y")}}})));

  // Size 2: every ternary table, evaluated directly and through embed(nd(·)).
  {
    FiniteModel m;
    m.set_carrier(D, 2);
    FormulaPtr embedded = logic::embed(logic::nd(lhs3));
    long bad = 0;
    for (long mask = 0; mask < (1 << 8); ++mask) {
      std::vector<char> table(8);
      for (int i = 0; i < 8; ++i) table[i] = (mask >> i) & 1;
      m.set_predicate("P", {D, D, D}, std::move(table));
      bool a = finite_model_eval(lhs3, m);
      bool b = finite_model_eval(rhs3, m);
      bool c = finite_model_eval(embedded, m);
      if (a != b || a != c) ++bad;
    }
    CheckRecord rec;
    rec.id = "nd_equiv/pi3/size2_exhaustive";
    rec.status = bad == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rec.witness = {{"tables", 256}, {"mismatches", bad}};
    report.add(std::move(rec));
  }

  // Size 3: both sides factor through the x-slices φ(x,·,·). Verify the
  // per-slice equivalence on all 512 slices with the real evaluator, then
  // sweep all 2^27 ternary tables through the slice tables, and spot-check
  // full tables directly.
  {
    FiniteModel m;
    m.set_carrier(D, 3);
    std::vector<char> lhs_slice(512), rhs_slice(512);
    long slice_bad = 0;
    for (long s = 0; s < 512; ++s) {
      std::vector<char> table(9);
      for (int i = 0; i < 9; ++i) table[i] = (s >> i) & 1;
      m.set_predicate("Q", {D, D}, std::move(table));
      lhs_slice[s] = finite_model_eval(lhs2, m);
      rhs_slice[s] = finite_model_eval(rhs2, m);
      if (lhs_slice[s] != rhs_slice[s]) ++slice_bad;
    }
    long sweep_bad = 0;
    for (long t = 0; t < (1L << 27); ++t) {
      bool a = lhs_slice[t & 511] && lhs_slice[(t >> 9) & 511] && lhs_slice[(t >> 18) & 511];
      bool b = rhs_slice[t & 511] && rhs_slice[(t >> 9) & 511] && rhs_slice[(t >> 18) & 511];
      if (a != b) ++sweep_bad;
    }
    std::mt19937 rng(12345);
    long direct_bad = 0;
    const long samples = 2000;
    for (long k = 0; k < samples; ++k) {
      std::vector<char> table(27);
      long t = static_cast<long>(rng()) & ((1L << 27) - 1);
      for (int i = 0; i < 27; ++i) table[i] = (t >> i) & 1;
      m.set_predicate("P", {D, D, D}, std::move(table));
      bool a = finite_model_eval(lhs3, m);
      bool b = finite_model_eval(rhs3, m);
      bool expected = lhs_slice[t & 511] && lhs_slice[(t >> 9) & 511] && lhs_slice[(t >> 18) & 511];
      if (a != b || a != expected) ++direct_bad;
    }
    CheckRecord rec;
    rec.id = "nd_equiv/pi3/size3_sweep";
    rec.status =
        (slice_bad == 0 && sweep_bad == 0 && direct_bad == 0) ? CheckStatus::Pass : CheckStatus::Fail;
    rec.witness = {{"slices", 512},
                   {"slice_mismatches", slice_bad},
                   {"tables_swept", 1L << 27},
                   {"sweep_mismatches", sweep_bad},
                   {"direct_samples", samples},
                   {"direct_mismatches", direct_bad}};
    report.add(std::move(rec));
  }
}

void run_nd_equiv(const nlohmann::json& instances, const std::string& base_dir,
                  Report& report) {
  for (const auto& inst : instances) {
    if (inst.contains("builtin")) {
      if (inst.at("builtin").get<std::string>() == "pi3_lemma") run_pi3_sweep(report);
      else throw std::invalid_argument("unknown nd_equiv builtin");
      continue;
    }
    run_nd_file_instance(inst, base_dir, report);
  }
}

void run_metastability(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    logic::MetastabilityProblem p;
    for (const auto& v : inst.at("values")) p.values.push_back(jrat(v));
    p.start_index = inst.contains("start") ? inst.at("start").get<long>() : 0;
    p.epsilon = jrat(inst.at("eps"));
    const std::string fspec = inst.at("f").get<std::string>();
    if (fspec.rfind("affine:", 0) == 0) {
      auto rest = fspec.substr(7);
      auto colon = rest.find(':');
      p.F = logic::FSpec::affine(std::stol(rest.substr(0, colon)),
                                 std::stol(rest.substr(colon + 1)));
    } else {
      throw std::invalid_argument("metastability: unsupported F spec " + fspec);
    }
    CheckRecord rec;
    rec.id = "metastability/" +
             (inst.contains("name") ? inst.at("name").get<std::string>() : std::to_string(k));
    try {
      auto res = logic::metastability_search(p);
      bool ok = true;
      if (inst.contains("expect_n")) ok = res.found_n == inst.at("expect_n").get<long>();
      // The refinement transform leaves stable instances fixed.
      logic::FSpec refined = logic::metastable_refine(p);
      ok = ok && refined.eval(res.found_n) == p.F.eval(res.found_n);
      rec.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
      rec.witness = {{"found_n", res.found_n},
                     {"window", {res.window_lo, res.window_hi}},
                     {"scanned_max", res.scanned_max}};
    } catch (const logic::RangeError& e) {
      bool expected_error = inst.contains("expect_error") && inst.at("expect_error").get<bool>();
      rec.status = expected_error ? CheckStatus::Pass : CheckStatus::Fail;
      rec.witness = {{"error", e.what()}};
    }
    ++k;
    report.add(std::move(rec));
  }
}

// ω_q assembled by the combinators must equal min{ω_f(δ/6), δ/(12n²(n+1)²‖f‖₁)}
// exactly, at every configured δ.
void run_q_modulus(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    unsigned n = inst.at("n").get<unsigned>();
    Modulus omega = parse_modulus_spec(inst.at("omega").get<std::string>());
    Rat f_l1 = jrat(inst.at("f_l1"));
    UniquenessModulus um = uniqueness_modulus(n, omega, f_l1);
    Modulus assembled = um.q_modulus();
    Rat nn(static_cast<long>(n));
    Rat denom = 12 * nn * nn * (nn + 1) * (nn + 1) * f_l1;
    long mismatches = 0, points = 0;
    for (const auto& dj : inst.at("deltas")) {
      Rat delta = jrat(dj);
      Rat lhs = real::eval_modulus(assembled, delta);
      Rat rhs = rat_min(real::eval_modulus(omega, delta / 6), delta / denom);
      if (lhs != rhs) ++mismatches;
      ++points;
    }
    CheckRecord rec;
    rec.id = "q_modulus/" +
             (inst.contains("name") ? inst.at("name").get<std::string>() : std::to_string(k));
    rec.status = mismatches == 0 ? CheckStatus::Pass : CheckStatus::Fail;
    rec.witness = {{"points", points}, {"mismatches", mismatches}};
    ++k;
    report.add(std::move(rec));
  }
}

void run_synthetic(const nlohmann::json& instances, Report& report) {
  int k = 0;
  for (const auto& inst : instances) {
    Rat lo = jrat(inst.at("lo"));
    Rat hi = jrat(inst.at("hi"));
    CheckRecord rec;
    rec.id = "synthetic/" + std::to_string(k++);
    rec.status = lo < hi ? CheckStatus::Pass : CheckStatus::Fail;
    rec.enclosure = lo <= hi ? Enclosure(lo, hi) : Enclosure(hi, lo);
    report.add(std::move(rec));
  }
}

}  // namespace

Report run_suite(const nlohmann::json& config) {
  Report report;
  report.suite = config.contains("suite") ? config.at("suite").get<std::string>() : "suite";
  report.config = config;
  report.timestamp = now_iso8601();
  std::string base_dir =
      config.contains("base_dir") ? config.at("base_dir").get<std::string>() : "";
  if (config.contains("markov")) run_markov(config.at("markov"), report);
  if (config.contains("reduction")) run_reduction(config.at("reduction"), report);
  if (config.contains("near_zeros")) run_near_zeros(config.at("near_zeros"), report);
  if (config.contains("sup_from_l1")) run_sup_from_l1(config.at("sup_from_l1"), report);
  if (config.contains("uniqueness")) run_uniqueness(config.at("uniqueness"), report);
  if (config.contains("stability")) run_stability(config.at("stability"), report);
  if (config.contains("q_modulus")) run_q_modulus(config.at("q_modulus"), report);
  if (config.contains("nd_equiv")) run_nd_equiv(config.at("nd_equiv"), base_dir, report);
  if (config.contains("metastability")) run_metastability(config.at("metastability"), report);
  if (config.contains("synthetic")) run_synthetic(config.at("synthetic"), report);
  report.timestamp = now_iso8601();
  return report;
}

} // namespace prooflens::harness
