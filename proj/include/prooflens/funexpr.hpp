#pragma once

#include "prooflens/rational.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace prooflens::real {

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Piecewise-linear functions on [0,1]

class PLFunction {
 public:
  // Breakpoints: x strictly increasing, first 0, last 1.
  explicit PLFunction(std::vector<std::pair<Rat, Rat>> points);
  const std::vector<std::pair<Rat, Rat>>& points() const { return points_; }
  Rat eval(const Rat& x) const;
  Rat lipschitz() const;  // max slope magnitude

 private:
  std::vector<std::pair<Rat, Rat>> points_;
};

// ---------------------------------------------------------------------------
// Polynomials with rational coefficients, constant term first

class Polynomial {
 public:
  Polynomial() : degree_bound_(0) {}
  Polynomial(std::vector<Rat> coeffs, unsigned degree_bound);
  static Polynomial constant(Rat c) { return Polynomial({std::move(c)}, 0); }

  const std::vector<Rat>& coeffs() const { return coeffs_; }
  unsigned degree_bound() const { return degree_bound_; }
  // Actual degree ignoring trailing zeros; 0 for the zero polynomial.
  unsigned degree() const;
  bool is_zero() const;
  Rat coeff(size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }

  Rat eval(const Rat& x) const;
  Polynomial derivative() const;
  Polynomial antiderivative() const;  // constant term 0
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial scaled(const Rat& c) const;
  bool operator==(const Polynomial& o) const;  // coefficient-wise, bounds ignored

  std::string str() const;  // e.g. "-1 + 2x"

 private:
  std::vector<Rat> coeffs_;
  unsigned degree_bound_;
};

// ---------------------------------------------------------------------------
// Function expressions on [0,1]

struct FunExpr;
using FunPtr = std::shared_ptr<const FunExpr>;

struct AbsNode { FunPtr arg; };
struct ScaleNode { Rat factor; FunPtr arg; };
struct SumNode { FunPtr lhs, rhs; };

struct FunExpr {
  std::variant<PLFunction, Polynomial, AbsNode, ScaleNode, SumNode> node;
};

FunPtr fe_pl(PLFunction f);
FunPtr fe_poly(Polynomial p);
FunPtr fe_abs(FunPtr arg);
FunPtr fe_scale(Rat factor, FunPtr arg);
FunPtr fe_sum(FunPtr lhs, FunPtr rhs);

// Exact value at x; throws DomainError for x outside [0,1].
Rat eval(const FunPtr& e, const Rat& x);

// JSON function spec: {"kind":"pl","points":[["0","0"],...]},
// {"kind":"poly","coeffs":["-1","2"]}, {"kind":"abs","arg":e},
// {"kind":"scale","c":"1/2","arg":e}, {"kind":"sum","terms":[e,...]}.
FunPtr parse_fun_spec(const nlohmann::json& spec);
nlohmann::json fun_spec_json(const FunPtr& e);

// ---------------------------------------------------------------------------
// Moduli of uniform continuity

struct Modulus;

struct LinearMod { Rat c; };                       // ω(ε) = ε/c, c > 0
struct MinMod { std::vector<Modulus> parts; };     // pointwise min
struct PreMod {                                    // ω(ε) = inner(scale·ε)
  Rat scale;
  std::shared_ptr<const Modulus> inner;
};

struct Modulus {
  std::variant<LinearMod, MinMod, PreMod> node;
};

Modulus mod_linear(Rat c);
Modulus mod_min(std::vector<Modulus> parts);
Modulus mod_pre(Rat scale, Modulus inner);

Rat eval_modulus(const Modulus& m, const Rat& eps);       // requires eps > 0
// Least ε with ω(ε) ≥ δ (all representable moduli are strictly increasing).
Rat modulus_inverse(const Modulus& m, const Rat& delta);

Modulus modulus_abs(const Modulus& w);                    // identity
Modulus modulus_scale(const Modulus& w, const Rat& c);    // ε ↦ w(ε/|c|); c ≠ 0
Modulus modulus_sum(const Modulus& w1, const Modulus& w2);
Modulus modulus_sum3(const Modulus& w1, const Modulus& w2, const Modulus& w3);
// Modulus for any member of Q_n: ω(ε) = ε / (4 n² (n+1)² f_l1); n ≥ 1, f_l1 > 0.
Modulus poly_modulus(unsigned n, const Rat& f_l1);

// Structural modulus of the expression (coefficient-based Lipschitz bounds).
Modulus derive_modulus(const FunPtr& e);

// Mini-language: "linear:c", "min:(spec,spec,...)", "pre:c:(spec)".
Modulus parse_modulus_spec(const std::string& text);
std::string modulus_str(const Modulus& m);

} // namespace prooflens::real
