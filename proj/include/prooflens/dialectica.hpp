#pragma once

#include "prooflens/formula.hpp"

#include <map>
#include <vector>

namespace prooflens::logic {

struct TypedVar {
  std::string name;
  DomainTag domain;
};

// ∃ witnesses ∀ challenges · matrix, with an untouched outer ∀-prefix over
// outer-uncountable domains carried through as oracle parameters.
struct DialecticaForm {
  std::vector<TypedVar> outer_prefix;
  std::vector<TypedVar> witnesses;
  std::vector<TypedVar> challenges;
  FormulaPtr matrix;
};

// Replaces every positively occurring Countable-domain ∃ beneath a ∀ by an
// outer ∃ over a function-space variable applied to the intervening
// ∀-variables. Negation bodies and implication antecedents are left untouched.
FormulaPtr skolemize(const FormulaPtr& f);

// The ND translation: atomic, ∧, ¬, → and ∀ clauses, with ∨ and ∃ expanded via
// de Morgan before translating. EffectivelyCompact quantifiers whose bodies
// translate trivially stay in the matrix. Fresh-name generation restarts on
// every call, so identical inputs give structurally identical outputs.
DialecticaForm nd(const FormulaPtr& f);

// Re-quantifies a DialecticaForm as outer-∀s, then ∃ witnesses, ∀ challenges.
FormulaPtr embed(const DialecticaForm& d);

struct NotPi2Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// For a Π2 source formula, the (challenge profile, witness profile, matrix)
// triple of its translation, ready for harness consumption.
struct Pi2WitnessForm {
  std::vector<TypedVar> challenges;
  std::vector<TypedVar> witnesses;
  FormulaPtr matrix;
};
Pi2WitnessForm pi2_witness_form(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Finite models

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Carriers are index ranges 0..size-1 per base domain; a FunctionSpace carrier
// holds exactly all total maps, encoded as mixed-radix integers (value of the
// map at from-element i is digit i in base |to|).
class FiniteModel {
 public:
  void set_carrier(const DomainTag& base_domain, long size);

  // Table is row-major over the profile's carriers.
  void set_predicate(const std::string& name, std::vector<DomainTag> profile,
                     std::vector<char> table);
  // Assigns a free symbol to a carrier element of the given domain.
  void set_symbol(const std::string& name, const DomainTag& domain, long value);

  long carrier_size(const DomainTag& d) const;  // throws ModelError if unassigned
  long apply(const DomainTag& fun_domain, long fun_value, long arg_value) const;

  long fun_size_cap = 200000;

  struct Predicate {
    std::vector<DomainTag> profile;
    std::vector<char> table;
  };
  const Predicate* find_predicate(const std::string& name) const;
  struct Symbol {
    DomainTag domain;
    long value;
  };
  const Symbol* find_symbol(const std::string& name) const;

 private:
  std::map<std::string, long> carriers_;   // keyed by render_domain of base tags
  std::map<std::string, Predicate> predicates_;
  std::map<std::string, Symbol> symbols_;
};

// Tarskian truth by exhaustive enumeration; FunctionSpace quantifiers range
// over all total maps. Throws ModelError on unassigned symbols or domains.
bool finite_model_eval(const FormulaPtr& f, const FiniteModel& m);

} // namespace prooflens::logic
