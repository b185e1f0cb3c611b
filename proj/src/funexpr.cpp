#include "prooflens/funexpr.hpp"

#include <algorithm>
#include <sstream>

namespace prooflens::real {

// ---------------------------------------------------------------------------
// PLFunction

PLFunction::PLFunction(std::vector<std::pair<Rat, Rat>> points)
    : points_(std::move(points)) {
  if (points_.size() < 2) throw std::invalid_argument("PL needs at least two points");
  if (points_.front().first != 0 || points_.back().first != 1)
    throw std::invalid_argument("PL must span [0,1]");
  for (size_t i = 1; i < points_.size(); ++i)
    if (!(points_[i - 1].first < points_[i].first))
      throw std::invalid_argument("PL breakpoints must be strictly increasing");
}

Rat PLFunction::eval(const Rat& x) const {
  if (x < 0 || x > 1) throw DomainError("PL evaluated outside [0,1]");
  size_t hi = 1;
  while (hi + 1 < points_.size() && points_[hi].first < x) ++hi;
  const auto& [x0, y0] = points_[hi - 1];
  const auto& [x1, y1] = points_[hi];
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

Rat PLFunction::lipschitz() const {
  Rat best(0);
  for (size_t i = 1; i < points_.size(); ++i) {
    Rat slope = rat_abs((points_[i].second - points_[i - 1].second) /
                        (points_[i].first - points_[i - 1].first));
    if (slope > best) best = slope;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(std::vector<Rat> coeffs, unsigned degree_bound)
    : coeffs_(std::move(coeffs)), degree_bound_(degree_bound) {
  if (coeffs_.size() > static_cast<size_t>(degree_bound) + 1)
    throw std::invalid_argument("more coefficients than the declared degree bound");
}

unsigned Polynomial::degree() const {
  for (size_t i = coeffs_.size(); i > 0; --i)
    if (coeffs_[i - 1] != 0) return static_cast<unsigned>(i - 1);
  return 0;
}

bool Polynomial::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rat& c) { return c == 0; });
}

Rat Polynomial::eval(const Rat& x) const {
  Rat acc(0);
  for (size_t i = coeffs_.size(); i > 0; --i) acc = acc * x + coeffs_[i - 1];
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial({Rat(0)}, 0);
  std::vector<Rat> d(coeffs_.size() - 1);
  for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Rat(static_cast<long>(i));
  return Polynomial(std::move(d), degree_bound_ == 0 ? 0 : degree_bound_ - 1);
}

Polynomial Polynomial::antiderivative() const {
  std::vector<Rat> a(coeffs_.size() + 1);
  a[0] = 0;
  for (size_t i = 0; i < coeffs_.size(); ++i)
    a[i + 1] = coeffs_[i] / Rat(static_cast<long>(i + 1));
  return Polynomial(std::move(a), degree_bound_ + 1);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Rat> c(std::max(coeffs_.size(), o.coeffs_.size()), Rat(0));
  for (size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) + o.coeff(i);
  return Polynomial(std::move(c), std::max(degree_bound_, o.degree_bound_));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Rat> c(std::max(coeffs_.size(), o.coeffs_.size()), Rat(0));
  for (size_t i = 0; i < c.size(); ++i) c[i] = coeff(i) - o.coeff(i);
  return Polynomial(std::move(c), std::max(degree_bound_, o.degree_bound_));
}

Polynomial Polynomial::scaled(const Rat& c) const {
  std::vector<Rat> out(coeffs_.size());
  for (size_t i = 0; i < coeffs_.size(); ++i) out[i] = coeffs_[i] * c;
  return Polynomial(std::move(out), degree_bound_);
}

bool Polynomial::operator==(const Polynomial& o) const {
  size_t n = std::max(coeffs_.size(), o.coeffs_.size());
  for (size_t i = 0; i < n; ++i)
    if (coeff(i) != o.coeff(i)) return false;
  return true;
}

std::string Polynomial::str() const {
  std::ostringstream out;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0 && !(coeffs_.size() == 1)) continue;
    if (!first) out << " + ";
    out << rat_str(coeffs_[i]);
    if (i == 1) out << "x";
    if (i > 1) out << "x^" << i;
    first = false;
  }
  if (first) out << "0";
  return out.str();
}

// ---------------------------------------------------------------------------
// FunExpr

FunPtr fe_pl(PLFunction f) {
  return std::make_shared<FunExpr>(FunExpr{std::move(f)});
}
FunPtr fe_poly(Polynomial p) {
  return std::make_shared<FunExpr>(FunExpr{std::move(p)});
}
FunPtr fe_abs(FunPtr arg) {
  return std::make_shared<FunExpr>(FunExpr{AbsNode{std::move(arg)}});
}
FunPtr fe_scale(Rat factor, FunPtr arg) {
  return std::make_shared<FunExpr>(FunExpr{ScaleNode{std::move(factor), std::move(arg)}});
}
FunPtr fe_sum(FunPtr lhs, FunPtr rhs) {
  return std::make_shared<FunExpr>(FunExpr{SumNode{std::move(lhs), std::move(rhs)}});
}

Rat eval(const FunPtr& e, const Rat& x) {
  if (x < 0 || x > 1) throw DomainError("FunExpr evaluated outside [0,1]");
  return std::visit(
      [&](const auto& n) -> Rat {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PLFunction>) return n.eval(x);
        else if constexpr (std::is_same_v<T, Polynomial>) return n.eval(x);
        else if constexpr (std::is_same_v<T, AbsNode>) return rat_abs(eval(n.arg, x));
        else if constexpr (std::is_same_v<T, ScaleNode>) return n.factor * eval(n.arg, x);
        else return eval(n.lhs, x) + eval(n.rhs, x);
      },
      e->node);
}

FunPtr parse_fun_spec(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("kind"))
    throw std::invalid_argument("function spec must be an object with a 'kind'");
  const std::string kind = spec.at("kind").get<std::string>();
  if (kind == "pl") {
    std::vector<std::pair<Rat, Rat>> pts;
    for (const auto& p : spec.at("points"))
      pts.emplace_back(parse_rat(p.at(0).get<std::string>()),
                       parse_rat(p.at(1).get<std::string>()));
    return fe_pl(PLFunction(std::move(pts)));
  }
  if (kind == "poly") {
    std::vector<Rat> coeffs;
    for (const auto& c : spec.at("coeffs")) coeffs.push_back(parse_rat(c.get<std::string>()));
    if (coeffs.empty()) coeffs.push_back(Rat(0));
    unsigned bound = static_cast<unsigned>(coeffs.size() - 1);
    if (spec.contains("degree_bound")) bound = spec.at("degree_bound").get<unsigned>();
    return fe_poly(Polynomial(std::move(coeffs), bound));
  }
  if (kind == "abs") return fe_abs(parse_fun_spec(spec.at("arg")));
  if (kind == "scale")
    return fe_scale(parse_rat(spec.at("c").get<std::string>()),
                    parse_fun_spec(spec.at("arg")));
  if (kind == "sum") {
    const auto& terms = spec.at("terms");
    if (terms.empty()) throw std::invalid_argument("sum needs at least one term");
    FunPtr acc = parse_fun_spec(terms.at(0));
    for (size_t i = 1; i < terms.size(); ++i)
      acc = fe_sum(std::move(acc), parse_fun_spec(terms.at(i)));
    return acc;
  }
  throw std::invalid_argument("unknown function spec kind: " + kind);
}

nlohmann::json fun_spec_json(const FunPtr& e) {
  return std::visit(
      [&](const auto& n) -> nlohmann::json {
        using T = std::decay_t<decltype(n)>;
        nlohmann::json j;
        if constexpr (std::is_same_v<T, PLFunction>) {
          j["kind"] = "pl";
          auto& pts = j["points"] = nlohmann::json::array();
          for (const auto& [x, y] : n.points())
            pts.push_back({rat_str(x), rat_str(y)});
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          j["kind"] = "poly";
          auto& cs = j["coeffs"] = nlohmann::json::array();
          for (const auto& c : n.coeffs()) cs.push_back(rat_str(c));
          j["degree_bound"] = n.degree_bound();
        } else if constexpr (std::is_same_v<T, AbsNode>) {
          j["kind"] = "abs";
          j["arg"] = fun_spec_json(n.arg);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          j["kind"] = "scale";
          j["c"] = rat_str(n.factor);
          j["arg"] = fun_spec_json(n.arg);
        } else {
          j["kind"] = "sum";
          j["terms"] = nlohmann::json::array({fun_spec_json(n.lhs), fun_spec_json(n.rhs)});
        }
        return j;
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Moduli

Modulus mod_linear(Rat c) {
  if (c <= 0) throw std::invalid_argument("Linear modulus needs c > 0");
  return Modulus{LinearMod{std::move(c)}};
}
Modulus mod_min(std::vector<Modulus> parts) {
  if (parts.empty()) throw std::invalid_argument("empty min modulus");
  if (parts.size() == 1) return parts[0];
  return Modulus{MinMod{std::move(parts)}};
}
Modulus mod_pre(Rat scale, Modulus inner) {
  if (scale <= 0) throw std::invalid_argument("Precomposed scale must be positive");
  return Modulus{PreMod{std::move(scale), std::make_shared<const Modulus>(std::move(inner))}};
}

Rat eval_modulus(const Modulus& m, const Rat& eps) {
  if (eps <= 0) throw std::invalid_argument("modulus evaluated at nonpositive epsilon");
  return std::visit(
      [&](const auto& n) -> Rat {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearMod>) {
          return eps / n.c;
        } else if constexpr (std::is_same_v<T, MinMod>) {
          Rat best = eval_modulus(n.parts[0], eps);
          for (size_t i = 1; i < n.parts.size(); ++i)
            best = rat_min(best, eval_modulus(n.parts[i], eps));
          return best;
        } else {
          return eval_modulus(*n.inner, n.scale * eps);
        }
      },
      m.node);
}

Rat modulus_inverse(const Modulus& m, const Rat& delta) {
  return std::visit(
      [&](const auto& n) -> Rat {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearMod>) {
          return n.c * delta;
        } else if constexpr (std::is_same_v<T, MinMod>) {
          Rat worst = modulus_inverse(n.parts[0], delta);
          for (size_t i = 1; i < n.parts.size(); ++i)
            worst = rat_max(worst, modulus_inverse(n.parts[i], delta));
          return worst;
        } else {
          return modulus_inverse(*n.inner, delta) / n.scale;
        }
      },
      m.node);
}

Modulus modulus_abs(const Modulus& w) { return w; }

Modulus modulus_scale(const Modulus& w, const Rat& c) {
  if (c == 0)
    throw std::invalid_argument("modulus_scale: c = 0 (scaled function is constant)");
  Rat k = rat_abs(c);
  if (k == 1) return w;
  return std::visit(
      [&](const auto& n) -> Modulus {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearMod>) {
          return mod_linear(n.c * k);
        } else if constexpr (std::is_same_v<T, MinMod>) {
          std::vector<Modulus> parts;
          parts.reserve(n.parts.size());
          for (const auto& p : n.parts) parts.push_back(modulus_scale(p, k));
          return mod_min(std::move(parts));
        } else {
          return Modulus{PreMod{n.scale / k, n.inner}};
        }
      },
      w.node);
}

Modulus modulus_sum(const Modulus& w1, const Modulus& w2) {
  return mod_min({modulus_scale(w1, 2), modulus_scale(w2, 2)});
}

Modulus modulus_sum3(const Modulus& w1, const Modulus& w2, const Modulus& w3) {
  return mod_min({modulus_scale(w1, 3), modulus_scale(w2, 3), modulus_scale(w3, 3)});
}

Modulus poly_modulus(unsigned n, const Rat& f_l1) {
  if (n == 0) throw std::invalid_argument("poly_modulus: n must be >= 1");
  if (f_l1 <= 0) throw std::invalid_argument("poly_modulus: f_l1 must be positive");
  Rat nn(static_cast<long>(n));
  return mod_linear(4 * nn * nn * (nn + 1) * (nn + 1) * f_l1);
}

namespace {

// Coefficient-based Lipschitz bound on [0,1].
Rat lipschitz_bound(const FunPtr& e) {
  return std::visit(
      [&](const auto& n) -> Rat {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, PLFunction>) {
          return n.lipschitz();
        } else if constexpr (std::is_same_v<T, Polynomial>) {
          Rat sum(0);
          for (size_t i = 1; i < n.coeffs().size(); ++i)
            sum += Rat(static_cast<long>(i)) * rat_abs(n.coeffs()[i]);
          return sum;
        } else if constexpr (std::is_same_v<T, AbsNode>) {
          return lipschitz_bound(n.arg);
        } else if constexpr (std::is_same_v<T, ScaleNode>) {
          return rat_abs(n.factor) * lipschitz_bound(n.arg);
        } else {
          return lipschitz_bound(n.lhs) + lipschitz_bound(n.rhs);
        }
      },
      e->node);
}

}  // namespace

Modulus derive_modulus(const FunPtr& e) {
  Rat lip = lipschitz_bound(e);
  if (lip == 0) lip = 1;  // constants: any modulus works
  return mod_linear(lip);
}

// ---------------------------------------------------------------------------
// Modulus mini-language

namespace {

Modulus parse_modulus_at(const std::string& s, size_t& pos);

std::string take_until(const std::string& s, size_t& pos, const char* stops) {
  size_t start = pos;
  while (pos < s.size() && !strchr(stops, s[pos])) ++pos;
  return s.substr(start, pos - start);
}

Modulus parse_modulus_at(const std::string& s, size_t& pos) {
  if (s.compare(pos, 7, "linear:") == 0) {
    pos += 7;
    return mod_linear(parse_rat(take_until(s, pos, ",)")));
  }
  if (s.compare(pos, 5, "min:(") == 0) {
    pos += 5;
    std::vector<Modulus> parts;
    for (;;) {
      parts.push_back(parse_modulus_at(s, pos));
      if (pos >= s.size()) throw std::invalid_argument("unterminated min:(...)");
      if (s[pos] == ',') { ++pos; continue; }
      if (s[pos] == ')') { ++pos; break; }
      throw std::invalid_argument("malformed min:(...) spec");
    }
    return mod_min(std::move(parts));
  }
  if (s.compare(pos, 4, "pre:") == 0) {
    pos += 4;
    Rat scale = parse_rat(take_until(s, pos, ":"));
    if (pos >= s.size() || s[pos] != ':') throw std::invalid_argument("pre: needs ':('");
    ++pos;
    if (pos >= s.size() || s[pos] != '(') throw std::invalid_argument("pre: needs '('");
    ++pos;
    Modulus inner = parse_modulus_at(s, pos);
    if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("unterminated pre:(...)");
    ++pos;
    return mod_pre(std::move(scale), std::move(inner));
  }
  throw std::invalid_argument("unknown modulus spec at: " + s.substr(pos));
}

}  // namespace

Modulus parse_modulus_spec(const std::string& text) {
  size_t pos = 0;
  Modulus m = parse_modulus_at(text, pos);
  if (pos != text.size()) throw std::invalid_argument("trailing content in modulus spec");
  return m;
}

std::string modulus_str(const Modulus& m) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, LinearMod>) {
          return "linear:" + rat_str(n.c);
        } else if constexpr (std::is_same_v<T, MinMod>) {
          std::string out = "min:(";
          for (size_t i = 0; i < n.parts.size(); ++i) {
            if (i) out += ",";
            out += modulus_str(n.parts[i]);
          }
          return out + ")";
        } else {
          return "pre:" + rat_str(n.scale) + ":(" + modulus_str(*n.inner) + ")";
        }
      },
      m.node);
}

} // namespace prooflens::real
