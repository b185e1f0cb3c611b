#pragma once

#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace prooflens::logic {

// ---------------------------------------------------------------------------
// Domains

enum class DomainKind { EffectivelyCompact, Countable, OuterUncountable, FunctionSpace };

struct DomainTag {
  DomainKind kind = DomainKind::Countable;
  std::string name;        // declared/builtin surface name ("" for inline forms)
  std::string descriptor;  // human label, e.g. "Q+", "Q∩[0,1]"
  std::string lo, hi;      // bounds of an inline (Qc lo hi) form
  std::shared_ptr<const DomainTag> from, to;  // FunctionSpace only

  static DomainTag compact(std::string name, std::string descriptor);
  static DomainTag countable(std::string name, std::string descriptor);
  static DomainTag outer(std::string name, std::string descriptor);
  static DomainTag compact_interval(std::string lo, std::string hi);
  static DomainTag fun(DomainTag from, DomainTag to);
  static DomainTag qplus();  // builtin Countable "Q+"

  bool is_fun() const { return kind == DomainKind::FunctionSpace; }
};

bool operator==(const DomainTag& a, const DomainTag& b);
inline bool operator!=(const DomainTag& a, const DomainTag& b) { return !(a == b); }

// Surface syntax of a domain: declared name, "(fun A B)", or "(Qc lo hi)".
std::string render_domain(const DomainTag& d);

// A domain counts as outer if it is OuterUncountable or a function space
// touching one; only such domains may head a formula's outermost ∀-block.
bool effectively_outer(const DomainTag& d);
// Only EffectivelyCompact base domains admit finite certified searches.
bool effectively_compact(const DomainTag& d);

// ---------------------------------------------------------------------------
// Terms and formulas

// head is a variable or free symbol; nonempty args mean (curried) application.
struct Term {
  std::string head;
  std::vector<Term> args;
};
bool operator==(const Term& a, const Term& b);
inline bool operator!=(const Term& a, const Term& b) { return !(a == b); }

enum class Strictness { Strict, NonStrict };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Atom {
  std::string pred;
  std::vector<Term> args;
  Strictness strictness = Strictness::Strict;
};
struct Not { FormulaPtr body; };
struct And { FormulaPtr lhs, rhs; };
struct Or { FormulaPtr lhs, rhs; };
struct Implies { FormulaPtr lhs, rhs; };
struct ForAll { std::string var; DomainTag domain; FormulaPtr body; };
struct Exists { std::string var; DomainTag domain; FormulaPtr body; };

struct Formula {
  std::variant<Atom, Not, And, Or, Implies, ForAll, Exists> node;
};

FormulaPtr mk_atom(std::string pred, std::vector<Term> args,
                   Strictness s = Strictness::Strict);
FormulaPtr mk_not(FormulaPtr body);
FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs);
FormulaPtr mk_forall(std::string var, DomainTag domain, FormulaPtr body);
FormulaPtr mk_exists(std::string var, DomainTag domain, FormulaPtr body);

bool equal(const FormulaPtr& a, const FormulaPtr& b);

// Substitutes variable `name` by `replacement` in terms; an applied occurrence
// (name t1 ... tk) becomes replacement applied to (t1 ... tk) on top of the
// replacement's own arguments. Stops below a quantifier rebinding `name`.
Term subst_term(const Term& t, const std::string& name, const Term& replacement);
FormulaPtr subst(const FormulaPtr& f, const std::string& name, const Term& replacement);

// All names occurring anywhere (bound, free, heads, domains' names excluded).
void collect_names(const FormulaPtr& f, std::set<std::string>& out);

// ---------------------------------------------------------------------------
// Signature and documents

struct PredicateSig {
  int arity = 0;
  Strictness strictness = Strictness::Strict;
  std::vector<DomainTag> profile;  // optional; empty = undeclared profile
};

struct Signature {
  std::vector<std::pair<std::string, DomainTag>> domains;
  std::vector<std::pair<std::string, PredicateSig>> predicates;
  bool has_predicate_block = false;  // false: predicates implicitly declared on use

  const DomainTag* find_domain(const std::string& name) const;
  const PredicateSig* find_predicate(const std::string& name) const;
  void declare_predicate(const std::string& name, PredicateSig sig);
};

struct FormulaDoc {
  Signature signature;
  FormulaPtr root;
};

struct ParseError : std::runtime_error {
  int line, column;
  ParseError(const std::string& msg, int line_, int column_)
      : std::runtime_error(msg + " at " + std::to_string(line_) + ":" +
                           std::to_string(column_)),
        line(line_), column(column_) {}
};
struct ScopeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parses a document: optional preamble ("(domains ...)" then "(predicates ...)")
// followed by one formula. Rejects ill-scoped input (a quantifier may not
// rebind a name already bound in scope). Undeclared names in term position are
// free symbols.
FormulaDoc parse_document(std::string_view text);
// Parses a bare formula against an existing signature (predicates may be
// implicitly declared when the signature has no predicate block).
FormulaPtr parse_formula(Signature& sig, std::string_view text);

std::string render_document(const FormulaDoc& doc);
std::string render_formula(const FormulaPtr& f);
std::string render_term(const Term& t);

// ---------------------------------------------------------------------------
// Fresh names

class NameGen {
 public:
  NameGen() = default;
  explicit NameGen(const FormulaPtr& scope) { reserve(scope); }
  void reserve(const FormulaPtr& scope) { collect_names(scope, used_); }
  void reserve(const std::string& name) { used_.insert(name); }
  // base, or base_k for the smallest k making it unused; monotone counter.
  std::string fresh(const std::string& base);

 private:
  std::set<std::string> used_;
  long counter_ = 0;
};

// ---------------------------------------------------------------------------
// Prenexing and classification

struct PrefixEntry {
  bool universal = true;
  std::string var;
  DomainTag domain;
};

// Logically equivalent formula with every quantifier outermost. Quantifier
// interleaving at binary nodes greedily extends the current non-compact block
// to minimize alternations; compact-domain quantifiers are emitted eagerly.
FormulaPtr prenex(const FormulaPtr& f);

enum class PiClass { Pi1, Pi2, Pi3, Other };
std::string to_string(PiClass c);

struct ComplexityClass {
  PiClass value = PiClass::Other;
  std::vector<PrefixEntry> witness;  // the prenex prefix that justified it
};

// Computed on prenex(f): leading outer-domain ∀s are stripped, compact-domain
// quantifiers ignored, remaining polarity blocks mapped to the smallest Π
// class (Pi1 for ∀/empty, Pi2 for ∀∃ and ∃, Pi3 for ∀∃∀ and ∃∀).
ComplexityClass classify(const FormulaPtr& f);

} // namespace prooflens::logic
