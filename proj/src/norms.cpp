#include "prooflens/norms.hpp"

#include <algorithm>
#include <cassert>

namespace prooflens::real {

// ---------------------------------------------------------------------------
// Polynomial helpers

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial({Rat(0)}, 0);
  std::vector<Rat> c(a.coeffs().size() + b.coeffs().size() - 1, Rat(0));
  for (size_t i = 0; i < a.coeffs().size(); ++i)
    for (size_t j = 0; j < b.coeffs().size(); ++j)
      c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return Polynomial(std::move(c), static_cast<unsigned>(c.size() - 1));
}

Rat integrate_poly(const Polynomial& p, const Rat& a, const Rat& b) {
  Polynomial anti = p.antiderivative();
  return anti.eval(b) - anti.eval(a);
}

std::optional<Rat> rat_sqrt_exact(const Rat& r) {
  if (r < 0) return std::nullopt;
  if (r == 0) return Rat(0);
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  BigInt sn = boost::multiprecision::sqrt(num);
  BigInt sd = boost::multiprecision::sqrt(den);
  if (sn * sn != num || sd * sd != den) return std::nullopt;
  return Rat(sn, sd);
}

namespace {

std::vector<Rat> trim(std::vector<Rat> c) {
  while (c.size() > 1 && c.back() == 0) c.pop_back();
  return c;
}

// Remainder of u / v over Q (coefficient vectors, constant first).
std::vector<Rat> poly_rem(std::vector<Rat> u, const std::vector<Rat>& v) {
  u = trim(std::move(u));
  std::vector<Rat> d = trim(v);
  while (u.size() >= d.size() && !(u.size() == 1 && u[0] == 0)) {
    Rat q = u.back() / d.back();
    size_t shift = u.size() - d.size();
    for (size_t i = 0; i < d.size(); ++i) u[shift + i] -= q * d[i];
    u = trim(std::move(u));
    if (u.size() == 1 && u[0] == 0) break;
  }
  return u;
}

Rat eval_vec(const std::vector<Rat>& c, const Rat& x) {
  Rat acc(0);
  for (size_t i = c.size(); i > 0; --i) acc = acc * x + c[i - 1];
  return acc;
}

struct SturmChain {
  std::vector<std::vector<Rat>> seq;

  explicit SturmChain(const Polynomial& p) {
    std::vector<Rat> p0 = trim(p.coeffs());
    seq.push_back(p0);
    if (p0.size() == 1) return;
    std::vector<Rat> p1(p0.size() - 1);
    for (size_t i = 1; i < p0.size(); ++i) p1[i - 1] = p0[i] * Rat(static_cast<long>(i));
    seq.push_back(trim(std::move(p1)));
    for (;;) {
      std::vector<Rat> r = poly_rem(seq[seq.size() - 2], seq.back());
      if (r.size() == 1 && r[0] == 0) break;
      for (auto& c : r) c = -c;
      seq.push_back(std::move(r));
    }
  }

  int variations(const Rat& x) const {
    int count = 0;
    int last = 0;
    for (const auto& p : seq) {
      Rat v = eval_vec(p, x);
      int s = v > 0 ? 1 : (v < 0 ? -1 : 0);
      if (s == 0) continue;
      if (last != 0 && s != last) ++count;
      last = s;
    }
    return count;
  }

  // Roots in (a, b].
  int count(const Rat& a, const Rat& b) const { return variations(a) - variations(b); }
};

// Roots strictly inside (a, b), given the chain of a nonzero polynomial.
int interior_roots(const SturmChain& chain, const Polynomial& p, const Rat& a,
                   const Rat& b) {
  int n = chain.count(a, b);
  if (p.eval(b) == 0) --n;
  return n;
}

}  // namespace

int sturm_root_count(const Polynomial& p, const Rat& a, const Rat& b) {
  if (p.is_zero()) throw std::invalid_argument("root count of the zero polynomial");
  return SturmChain(p).count(a, b);
}

// ---------------------------------------------------------------------------
// Exact piecewise normalization

namespace {

std::vector<PolyPiece> pl_pieces(const PLFunction& f) {
  std::vector<PolyPiece> out;
  const auto& pts = f.points();
  for (size_t i = 1; i < pts.size(); ++i) {
    const auto& [x0, y0] = pts[i - 1];
    const auto& [x1, y1] = pts[i];
    Rat slope = (y1 - y0) / (x1 - x0);
    out.push_back(PolyPiece{x0, x1, Polynomial({y0 - slope * x0, slope}, 1)});
  }
  return out;
}

std::vector<PolyPiece> merge_sum(const std::vector<PolyPiece>& a,
                                 const std::vector<PolyPiece>& b) {
  std::vector<Rat> cuts;
  for (const auto& p : a) cuts.push_back(p.lo);
  for (const auto& p : b) cuts.push_back(p.lo);
  cuts.push_back(Rat(1));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<PolyPiece> out;
  size_t ia = 0, ib = 0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Rat& lo = cuts[i];
    const Rat& hi = cuts[i + 1];
    while (a[ia].hi <= lo) ++ia;
    while (b[ib].hi <= lo) ++ib;
    out.push_back(PolyPiece{lo, hi, a[ia].poly + b[ib].poly});
  }
  return out;
}

// Rational roots of p strictly inside (lo, hi); nullopt when an irrational
// sign-relevant root may lie there.
std::optional<std::vector<Rat>> rational_roots_inside(const Polynomial& p, const Rat& lo,
                                                      const Rat& hi) {
  std::vector<Rat> roots;
  unsigned deg = p.degree();
  if (p.is_zero() || deg == 0) return roots;
  if (deg == 1) {
    Rat r = -p.coeff(0) / p.coeff(1);
    if (lo < r && r < hi) roots.push_back(std::move(r));
    return roots;
  }
  if (deg == 2) {
    const Rat a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
    Rat disc = b * b - 4 * a * c;
    if (disc < 0) return roots;
    if (std::optional<Rat> s = rat_sqrt_exact(disc)) {
      Rat r1 = (-b - *s) / (2 * a);
      Rat r2 = (-b + *s) / (2 * a);
      if (r2 < r1) std::swap(r1, r2);
      if (lo < r1 && r1 < hi) roots.push_back(r1);
      if (r2 != r1 && lo < r2 && r2 < hi) roots.push_back(r2);
      return roots;
    }
  }
  SturmChain chain(p);
  if (interior_roots(chain, p, lo, hi) == 0) return roots;
  return std::nullopt;  // irrational interior root: not handled exactly
}

// |pieces| as an exact piecewise polynomial; nullopt on irrational sign change.
std::optional<std::vector<PolyPiece>> abs_pieces(const std::vector<PolyPiece>& in) {
  std::vector<PolyPiece> out;
  for (const auto& piece : in) {
    if (piece.poly.is_zero()) {
      out.push_back(piece);
      continue;
    }
    auto roots = rational_roots_inside(piece.poly, piece.lo, piece.hi);
    if (!roots) return std::nullopt;
    std::vector<Rat> cuts{piece.lo};
    cuts.insert(cuts.end(), roots->begin(), roots->end());
    cuts.push_back(piece.hi);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      Rat mid = (cuts[i] + cuts[i + 1]) / 2;
      Rat v = piece.poly.eval(mid);
      // A touching root (even multiplicity) keeps the sign of its neighbors.
      Polynomial q = v < 0 ? piece.poly.scaled(Rat(-1)) : piece.poly;
      out.push_back(PolyPiece{cuts[i], cuts[i + 1], std::move(q)});
    }
  }
  return out;
}

}  // namespace

std::optional<std::vector<PolyPiece>> normalize_piecewise(const FunPtr& e) {
  using Result = std::optional<std::vector<PolyPiece>>;
  return std::visit(
      [&](const auto& n) -> Result {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PLFunction>) {
          return pl_pieces(n);
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          return std::vector<PolyPiece>{PolyPiece{Rat(0), Rat(1), n}};
        } else if constexpr (std::is_same_v<T, AbsNode>) {
          Result arg = normalize_piecewise(n.arg);
          if (!arg) return std::nullopt;
          return abs_pieces(*arg);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          Result arg = normalize_piecewise(n.arg);
          if (!arg) return std::nullopt;
          for (auto& p : *arg) p.poly = p.poly.scaled(n.factor);
          return arg;
        } else {
          Result a = normalize_piecewise(n.lhs);
          if (!a) return std::nullopt;
          Result b = normalize_piecewise(n.rhs);
          if (!b) return std::nullopt;
          return merge_sum(*a, *b);
        }
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Integration of |piecewise|

namespace {

// Valid sup bound of |p| on [0,1] (hence on any subinterval).
Rat coeff_sup_bound(const Polynomial& p) {
  Rat s(0);
  for (const auto& c : p.coeffs()) s += rat_abs(c);
  return s;
}

// Enclosure of ∫_a^b |p| dx with width ≤ budget, via Sturm sign isolation.
Enclosure integrate_abs_poly(const Polynomial& p, const Rat& a, const Rat& b,
                             const Rat& budget) {
  if (p.is_zero() || a == b) return Enclosure::point(Rat(0));
  SturmChain chain(p);
  Rat sup = coeff_sup_bound(p);
  int total_roots = std::max(1, chain.count(a, b) + (p.eval(a) == 0 ? 1 : 0));
  Rat threshold = budget / (2 * Rat(total_roots));
  std::vector<std::pair<Rat, Rat>> stack{{a, b}};
  Rat lo(0), hi(0);
  while (!stack.empty()) {
    auto [x0, x1] = stack.back();
    stack.pop_back();
    if (interior_roots(chain, p, x0, x1) == 0) {
      // Sign constant on the interior: exact.
      Rat v = rat_abs(integrate_poly(p, x0, x1));
      lo += v;
      hi += v;
      continue;
    }
    Rat band = (x1 - x0) * sup;
    Rat signed_part = rat_abs(integrate_poly(p, x0, x1));
    if (band - signed_part <= threshold) {
      lo += signed_part;
      hi += band;
      continue;
    }
    Rat mid = (x0 + x1) / 2;
    stack.push_back({x0, mid});
    stack.push_back({mid, x1});
  }
  return Enclosure(lo, hi);
}

// Midpoint-panel quadrature of ∫_a^b e dx (or ∫|e| when absolute), certified
// by the derived modulus.
Enclosure quadrature(const FunPtr& e, const Rat& a, const Rat& b, const Rat& tol,
                     bool absolute) {
  Modulus mod = derive_modulus(e);
  Rat c = modulus_inverse(mod, Rat(1));  // inverse is linear: inv(d) = c·d
  Rat len = b - a;
  if (len == 0) return Enclosure::point(Rat(0));
  long panels = 1;
  // Total enclosure width is 2·c·w·len for panel width w = len/panels.
  while (2 * c * (len / panels) * len > tol) {
    panels *= 2;
    if (panels > (1L << 24))
      throw std::runtime_error("quadrature fallback cannot reach the requested tolerance");
  }
  Rat w = len / panels;
  Rat eps = c * w;
  Rat sum(0);
  for (long k = 0; k < panels; ++k) {
    Rat mid = a + w * Rat(2 * k + 1) / 2;
    Rat v = eval(e, mid);
    sum += absolute ? rat_abs(v) : v;
  }
  Rat lo = sum * w - eps * len;
  Rat hi = sum * w + eps * len;
  if (absolute && lo < 0) lo = 0;
  return Enclosure(lo, hi);
}

}  // namespace

Enclosure l1_norm(const FunPtr& e, const Rat& tol) {
  if (tol <= 0) throw std::invalid_argument("l1_norm: tol must be positive");
  if (auto pieces = normalize_piecewise(e)) {
    if (auto apieces = abs_pieces(*pieces)) {
      // |e| itself is exact piecewise polynomial: integrate exactly.
      Rat total(0);
      for (const auto& piece : *apieces)
        total += integrate_poly(piece.poly, piece.lo, piece.hi);
      return Enclosure::point(total);
    }
    Rat lo(0), hi(0);
    Rat budget = tol / Rat(static_cast<long>(pieces->size()));
    for (const auto& piece : *pieces) {
      Enclosure part = integrate_abs_poly(piece.poly, piece.lo, piece.hi, budget);
      lo += part.lo;
      hi += part.hi;
    }
    return Enclosure(lo, hi);
  }
  return quadrature(e, Rat(0), Rat(1), tol, /*absolute=*/true);
}

Enclosure integrate_expr(const FunPtr& e, const Rat& a, const Rat& b, const Rat& tol) {
  if (a > b) throw std::invalid_argument("integrate_expr: a > b");
  if (a == b) return Enclosure::point(Rat(0));
  if (auto pieces = normalize_piecewise(e)) {
    Rat acc(0);
    for (const auto& piece : *pieces) {
      Rat lo = rat_max(piece.lo, a);
      Rat hi = rat_min(piece.hi, b);
      if (lo < hi) acc += integrate_poly(piece.poly, lo, hi);
    }
    return Enclosure::point(acc);
  }
  return quadrature(e, a, b, tol, /*absolute=*/false);
}

// ---------------------------------------------------------------------------
// Sup norm

namespace {

// Exact sup of |p| on [a,b] when critical points are rational; nullopt else.
std::optional<Rat> poly_abs_sup_exact(const Polynomial& p, const Rat& a, const Rat& b) {
  Rat best = rat_max(rat_abs(p.eval(a)), rat_abs(p.eval(b)));
  Polynomial d = p.derivative();
  if (d.is_zero()) return best;
  auto crits = rational_roots_inside(d, a, b);
  if (!crits) return std::nullopt;
  for (const Rat& r : *crits) best = rat_max(best, rat_abs(p.eval(r)));
  return best;
}

// Branch-and-bound sup of |e| on [0,1]: grid evaluation plus modulus slack,
// adaptively refined.
Enclosure sup_branch_bound(const FunPtr& e, const Rat& tol) {
  Modulus mod = derive_modulus(e);
  Rat c = modulus_inverse(mod, Rat(1));
  struct Seg {
    Rat a, b, ub;
  };
  auto upper = [&](const Rat& a, const Rat& b, const Rat& mid_val) {
    return mid_val + c * (b - a) / 2;
  };
  Rat m0 = rat_abs(eval(e, Rat(1, 2)));
  std::vector<Seg> segs{{Rat(0), Rat(1), upper(Rat(0), Rat(1), m0)}};
  Rat lb = m0;
  for (;;) {
    Rat ub(0);
    for (const auto& s : segs) ub = rat_max(ub, s.ub);
    if (ub - lb <= tol) return Enclosure(lb, ub);
    std::vector<Seg> next;
    for (const auto& s : segs) {
      if (s.ub <= lb) continue;  // cannot hold the sup beyond the current lb
      Rat mid = (s.a + s.b) / 2;
      for (int half = 0; half < 2; ++half) {
        Rat a = half == 0 ? s.a : mid;
        Rat b = half == 0 ? mid : s.b;
        Rat v = rat_abs(eval(e, (a + b) / 2));
        lb = rat_max(lb, v);
        next.push_back(Seg{a, b, upper(a, b, v)});
      }
    }
    segs = std::move(next);
  }
}

}  // namespace

Enclosure sup_norm(const FunPtr& e, const Rat& tol) {
  if (tol <= 0) throw std::invalid_argument("sup_norm: tol must be positive");
  if (auto pieces = normalize_piecewise(e)) {
    Rat best(0);
    bool all_exact = true;
    for (const auto& piece : *pieces) {
      auto s = poly_abs_sup_exact(piece.poly, piece.lo, piece.hi);
      if (!s) {
        all_exact = false;
        break;
      }
      best = rat_max(best, *s);
    }
    if (all_exact) return Enclosure::point(best);
  }
  return sup_branch_bound(e, tol);
}

// ---------------------------------------------------------------------------
// ∫ h · sgn(g)

namespace {

struct SignRegion {
  Rat a, b;
  int sign;  // +1, -1; 0 marks an undecided root zone
};

// Partition of [0,1] by the sign of g. Pieces with rational roots split
// exactly; zones around irrational sign changes are narrowed until their
// crude band is below zone_budget each.
std::vector<SignRegion> sign_partition(const std::vector<PolyPiece>& pieces,
                                       const Rat& zone_budget, const Rat& h_sup) {
  std::vector<SignRegion> out;
  for (const auto& piece : pieces) {
    if (piece.poly.is_zero()) {
      out.push_back(SignRegion{piece.lo, piece.hi, 0});
      continue;
    }
    if (auto roots = rational_roots_inside(piece.poly, piece.lo, piece.hi)) {
      std::vector<Rat> cuts{piece.lo};
      cuts.insert(cuts.end(), roots->begin(), roots->end());
      cuts.push_back(piece.hi);
      for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        Rat mid = (cuts[i] + cuts[i + 1]) / 2;
        out.push_back(SignRegion{cuts[i], cuts[i + 1],
                                 piece.poly.eval(mid) >= 0 ? 1 : -1});
      }
      continue;
    }
    SturmChain chain(piece.poly);
    std::vector<std::pair<Rat, Rat>> stack{{piece.lo, piece.hi}};
    while (!stack.empty()) {
      auto [a, b] = stack.back();
      stack.pop_back();
      if (interior_roots(chain, piece.poly, a, b) == 0) {
        Rat mid = (a + b) / 2;
        out.push_back(SignRegion{a, b, piece.poly.eval(mid) > 0 ? 1 : -1});
        continue;
      }
      if ((b - a) * h_sup <= zone_budget) {
        out.push_back(SignRegion{a, b, 0});
        continue;
      }
      Rat mid = (a + b) / 2;
      stack.push_back({a, mid});
      stack.push_back({mid, b});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const SignRegion& x, const SignRegion& y) { return x.a < y.a; });
  return out;
}

}  // namespace

Enclosure sgn_integral(const FunPtr& g, const FunPtr& h, const Rat& tol) {
  if (tol <= 0) throw std::invalid_argument("sgn_integral: tol must be positive");
  auto pieces = normalize_piecewise(g);
  if (!pieces)
    throw UnsupportedShape("sgn_integral: g must reduce to piecewise polynomials");
  for (const auto& piece : *pieces)
    if (piece.poly.degree() > 3)
      throw UnsupportedShape("sgn_integral: g must have piecewise degree <= 3");

  Rat h_sup = sup_norm(h, Rat(1, 16)).hi;
  if (h_sup == 0) return Enclosure::point(Rat(0));
  // Root zones get half the budget (as one pool), h-integrals the other half.
  long max_zones = 0;
  for (const auto& piece : *pieces)
    max_zones += piece.poly.is_zero() ? 1 : static_cast<long>(piece.poly.degree());
  max_zones = std::max(max_zones, 1L);
  Rat zone_budget = tol / (4 * Rat(max_zones));
  std::vector<SignRegion> regions = sign_partition(*pieces, zone_budget, h_sup);
  long signed_regions = 0;
  for (const auto& r : regions)
    if (r.sign != 0) ++signed_regions;
  Rat per_region = signed_regions > 0 ? tol / (4 * Rat(signed_regions)) : Rat(0);
  Rat lo(0), hi(0);
  for (const auto& r : regions) {
    if (r.sign == 0) {
      Rat band = (r.b - r.a) * h_sup;
      lo -= band;
      hi += band;
      continue;
    }
    Enclosure part = integrate_expr(h, r.a, r.b, per_region);
    if (r.sign > 0) {
      lo += part.lo;
      hi += part.hi;
    } else {
      lo -= part.hi;
      hi -= part.lo;
    }
  }
  return Enclosure(lo, hi);
}

// ---------------------------------------------------------------------------
// Markov checks

namespace {

// Enclosure of sup|p| on [0,1], exact when critical points are rational.
Enclosure poly_sup_enclosure(const Polynomial& p, const Rat& tol) {
  if (auto s = poly_abs_sup_exact(p, Rat(0), Rat(1))) return Enclosure::point(*s);
  return sup_branch_bound(fe_poly(p), tol);
}

// Cheap certified lower bound for ||p||₁: sum of |∫ p| over dyadic quarters.
Rat l1_quick_lower(const Polynomial& p) {
  Rat lo(0);
  for (int k = 0; k < 4; ++k)
    lo += rat_abs(integrate_poly(p, Rat(k, 4), Rat(k + 1, 4)));
  return lo;
}

}  // namespace

MarkovResult markov_derivative_check(const Polynomial& p) {
  Rat n(static_cast<long>(p.degree_bound()));
  MarkovResult out;
  out.factor = 2 * n * n;
  Rat tol(1, 1L << 20);
  for (int round = 0; round < 6; ++round) {
    out.lhs = poly_sup_enclosure(p.derivative(), tol);
    out.rhs = poly_sup_enclosure(p, tol);
    if (out.lhs.hi <= out.factor * out.rhs.lo) {
      out.certified = true;
      return out;
    }
    if (out.lhs.lo > out.factor * out.rhs.hi) {
      out.refuted = true;
      return out;
    }
    tol /= 1024;
  }
  return out;  // undecided at the refinement cap
}

MarkovResult markov_l1_check(const Polynomial& p) {
  Rat n(static_cast<long>(p.degree_bound()));
  MarkovResult out;
  out.factor = 2 * (n + 1) * (n + 1);
  Rat tol(1, 1L << 16);
  out.lhs = poly_sup_enclosure(p, tol);
  Rat quick = l1_quick_lower(p);
  if (out.lhs.hi <= out.factor * quick) {
    out.certified = true;
    out.rhs = Enclosure(quick, coeff_sup_bound(p));
    return out;
  }
  for (int round = 0; round < 6; ++round) {
    out.lhs = poly_sup_enclosure(p, tol);
    out.rhs = l1_norm(fe_poly(p), tol);
    if (out.lhs.hi <= out.factor * out.rhs.lo) {
      out.certified = true;
      return out;
    }
    if (out.lhs.lo > out.factor * out.rhs.hi) {
      out.refuted = true;
      return out;
    }
    tol /= 1024;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lagrange

Polynomial lagrange(const std::vector<std::pair<Rat, Rat>>& points, unsigned n) {
  if (points.size() != static_cast<size_t>(n) + 1)
    throw std::invalid_argument("lagrange: expected n+1 points");
  for (size_t i = 0; i < points.size(); ++i)
    for (size_t j = i + 1; j < points.size(); ++j)
      if (points[i].first == points[j].first)
        throw std::invalid_argument("lagrange: duplicate nodes");
  Polynomial acc({Rat(0)}, n);
  for (size_t i = 0; i < points.size(); ++i) {
    Polynomial basis({Rat(1)}, 0);
    Rat denom(1);
    for (size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      basis = poly_mul(basis, Polynomial({-points[j].first, Rat(1)}, 1));
      denom *= points[i].first - points[j].first;
    }
    acc = acc + basis.scaled(points[i].second / denom);
  }
  std::vector<Rat> coeffs = acc.coeffs();
  coeffs.resize(n + 1, Rat(0));
  return Polynomial(std::move(coeffs), n);
}

Rat lagrange_sup_bound(const Rat& v_bound, const Rat& separation, unsigned n) {
  if (separation <= 0) throw std::invalid_argument("lagrange_sup_bound: separation <= 0");
  if (v_bound < 0) throw std::invalid_argument("lagrange_sup_bound: negative value bound");
  return Rat(static_cast<long>(n) + 1) * v_bound / rat_pow(separation, n);
}

} // namespace prooflens::real
