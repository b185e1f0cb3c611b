#include "prooflens/dialectica.hpp"

#include <algorithm>
#include <cassert>

namespace prooflens::logic {

// ---------------------------------------------------------------------------
// Skolemization

namespace {

// universals: ∀-variables in scope, outermost first.
FormulaPtr skolemize_rec(const FormulaPtr& f, std::vector<TypedVar>& universals,
                         std::vector<TypedVar>& skolem_block, NameGen& names) {
  return std::visit(
      [&](const auto& n) -> FormulaPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom> || std::is_same_v<T, Not>) {
          return f;  // negative or opaque position: untouched
        } else if constexpr (std::is_same_v<T, And>) {
          FormulaPtr l = skolemize_rec(n.lhs, universals, skolem_block, names);
          FormulaPtr r = skolemize_rec(n.rhs, universals, skolem_block, names);
          return mk_and(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<T, Or>) {
          FormulaPtr l = skolemize_rec(n.lhs, universals, skolem_block, names);
          FormulaPtr r = skolemize_rec(n.rhs, universals, skolem_block, names);
          return mk_or(std::move(l), std::move(r));
        } else if constexpr (std::is_same_v<T, Implies>) {
          FormulaPtr r = skolemize_rec(n.rhs, universals, skolem_block, names);
          return mk_implies(n.lhs, std::move(r));
        } else if constexpr (std::is_same_v<T, ForAll>) {
          universals.push_back(TypedVar{n.var, n.domain});
          FormulaPtr body = skolemize_rec(n.body, universals, skolem_block, names);
          universals.pop_back();
          return mk_forall(n.var, n.domain, std::move(body));
        } else {
          if (n.domain.kind == DomainKind::Countable && !universals.empty()) {
            // Fresh function variable over the intervening universals.
            DomainTag fun_dom = n.domain;
            for (auto it = universals.rbegin(); it != universals.rend(); ++it)
              fun_dom = DomainTag::fun(it->domain, std::move(fun_dom));
            std::string fn = n.var;
            if (!fn.empty()) fn[0] = static_cast<char>(std::toupper(
                static_cast<unsigned char>(fn[0])));
            fn = names.fresh(fn);
            Term applied{fn, {}};
            for (const auto& u : universals) applied.args.push_back(Term{u.name, {}});
            skolem_block.push_back(TypedVar{fn, std::move(fun_dom)});
            FormulaPtr body = subst(n.body, n.var, applied);
            return skolemize_rec(body, universals, skolem_block, names);
          }
          FormulaPtr body = skolemize_rec(n.body, universals, skolem_block, names);
          return mk_exists(n.var, n.domain, std::move(body));
        }
      },
      f->node);
}

}  // namespace

FormulaPtr skolemize(const FormulaPtr& f) {
  NameGen names(f);
  std::vector<TypedVar> universals;
  std::vector<TypedVar> skolem_block;
  FormulaPtr body = skolemize_rec(f, universals, skolem_block, names);
  for (auto it = skolem_block.rbegin(); it != skolem_block.rend(); ++it)
    body = mk_exists(it->name, it->domain, std::move(body));
  return body;
}

// ---------------------------------------------------------------------------
// ND translation

namespace {

struct NdPart {
  std::vector<TypedVar> witnesses;
  std::vector<TypedVar> challenges;
  FormulaPtr matrix;
  bool trivial() const { return witnesses.empty() && challenges.empty(); }
};

// Sibling subformulas may bind the same names; rename part's variables that
// collide with other's before the blocks are concatenated.
void disambiguate_against(NdPart& part, const NdPart& other, NameGen& names) {
  std::set<std::string> taken;
  for (const auto& v : other.witnesses) taken.insert(v.name);
  for (const auto& v : other.challenges) taken.insert(v.name);
  auto fix = [&](std::vector<TypedVar>& vars) {
    for (auto& v : vars) {
      if (!taken.count(v.name)) continue;
      std::string nn = names.fresh(v.name);
      part.matrix = subst(part.matrix, v.name, Term{nn, {}});
      v.name = nn;
    }
  };
  fix(part.witnesses);
  fix(part.challenges);
}

// Curried function domain taking each of `params` in order, returning `result`.
DomainTag curried(const std::vector<TypedVar>& params, DomainTag result) {
  for (auto it = params.rbegin(); it != params.rend(); ++it)
    result = DomainTag::fun(it->domain, std::move(result));
  return result;
}

// Fresh name for a lifted variable; genuine function witnesses get the
// uppercased base per the usual notation.
std::string lifted_name(NameGen& names, const std::string& base, bool is_fun) {
  std::string candidate = base;
  if (is_fun && !candidate.empty())
    candidate[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(candidate[0])));
  return names.fresh(candidate);
}


Term applied_to(const std::string& fn, const std::vector<TypedVar>& params) {
  Term t{fn, {}};
  for (const auto& p : params) t.args.push_back(Term{p.name, {}});
  return t;
}

FormulaPtr negate_collapsing(FormulaPtr m) {
  if (const auto* inner = std::get_if<Not>(&m->node)) return inner->body;
  return mk_not(std::move(m));
}

NdPart nd_rec(const FormulaPtr& f, NameGen& names) {
  return std::visit(
      [&](const auto& n) -> NdPart {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return {{}, {}, f};
        } else if constexpr (std::is_same_v<T, And>) {
          NdPart a = nd_rec(n.lhs, names);
          NdPart b = nd_rec(n.rhs, names);
          disambiguate_against(b, a, names);
          NdPart out;
          out.witnesses = a.witnesses;
          out.witnesses.insert(out.witnesses.end(), b.witnesses.begin(), b.witnesses.end());
          out.challenges = a.challenges;
          out.challenges.insert(out.challenges.end(), b.challenges.begin(),
                                b.challenges.end());
          out.matrix = mk_and(a.matrix, b.matrix);
          return out;
        } else if constexpr (std::is_same_v<T, Not>) {
          NdPart a = nd_rec(n.body, names);
          NdPart out;
          FormulaPtr m = a.matrix;
          for (const auto& c : a.challenges) {
            std::string fn = lifted_name(names, c.name, !a.witnesses.empty());
            out.witnesses.push_back(TypedVar{fn, curried(a.witnesses, c.domain)});
            m = subst(m, c.name, applied_to(fn, a.witnesses));
          }
          out.challenges = a.witnesses;
          out.matrix = negate_collapsing(std::move(m));
          return out;
        } else if constexpr (std::is_same_v<T, Or>) {
          // (φ∨ψ)^ND is (¬(¬φ∧¬ψ))^ND
          return nd_rec(mk_not(mk_and(mk_not(n.lhs), mk_not(n.rhs))), names);
        } else if constexpr (std::is_same_v<T, Implies>) {
          NdPart a = nd_rec(n.lhs, names);
          NdPart b = nd_rec(n.rhs, names);
          disambiguate_against(b, a, names);
          NdPart out;
          std::vector<TypedVar> params = a.witnesses;
          params.insert(params.end(), b.challenges.begin(), b.challenges.end());
          FormulaPtr ma = a.matrix;
          for (const auto& c : a.challenges) {
            std::string fn = lifted_name(names, c.name, !params.empty());
            out.witnesses.push_back(TypedVar{fn, curried(params, c.domain)});
            ma = subst(ma, c.name, applied_to(fn, params));
          }
          FormulaPtr mb = b.matrix;
          for (const auto& w : b.witnesses) {
            std::string fn = lifted_name(names, w.name, !a.witnesses.empty());
            out.witnesses.push_back(TypedVar{fn, curried(a.witnesses, w.domain)});
            mb = subst(mb, w.name, applied_to(fn, a.witnesses));
          }
          out.challenges = a.witnesses;
          out.challenges.insert(out.challenges.end(), b.challenges.begin(),
                                b.challenges.end());
          out.matrix = mk_implies(std::move(ma), std::move(mb));
          return out;
        } else if constexpr (std::is_same_v<T, ForAll>) {
          NdPart a = nd_rec(n.body, names);
          if (a.trivial() && effectively_compact(n.domain))
            return {{}, {}, mk_forall(n.var, n.domain, a.matrix)};
          NdPart out;
          FormulaPtr m = a.matrix;
          TypedVar z{n.var, n.domain};
          std::vector<TypedVar> zs{z};
          for (const auto& w : a.witnesses) {
            std::string fn = lifted_name(names, w.name, true);
            out.witnesses.push_back(TypedVar{fn, DomainTag::fun(n.domain, w.domain)});
            m = subst(m, w.name, applied_to(fn, zs));
          }
          out.challenges = a.challenges;
          out.challenges.push_back(z);
          out.matrix = std::move(m);
          return out;
        } else {
          // ∃: compact with trivial body stays in the matrix, otherwise ¬∀¬.
          if (effectively_compact(n.domain)) {
            NdPart a = nd_rec(n.body, names);
            if (a.trivial()) return {{}, {}, mk_exists(n.var, n.domain, a.matrix)};
          }
          return nd_rec(mk_not(mk_forall(n.var, n.domain, mk_not(n.body))), names);
        }
      },
      f->node);
}

}  // namespace

DialecticaForm nd(const FormulaPtr& f) {
  DialecticaForm out;
  // Outer ∀-prefix over outer-uncountable domains is carried through as-is.
  FormulaPtr body = f;
  while (const auto* fa = std::get_if<ForAll>(&body->node)) {
    if (!effectively_outer(fa->domain)) break;
    out.outer_prefix.push_back(TypedVar{fa->var, fa->domain});
    body = fa->body;
  }
  NameGen names(f);
  NdPart part = nd_rec(body, names);
  out.witnesses = std::move(part.witnesses);
  out.challenges = std::move(part.challenges);
  out.matrix = std::move(part.matrix);
  return out;
}

FormulaPtr embed(const DialecticaForm& d) {
  FormulaPtr out = d.matrix;
  for (auto it = d.challenges.rbegin(); it != d.challenges.rend(); ++it)
    out = mk_forall(it->name, it->domain, std::move(out));
  for (auto it = d.witnesses.rbegin(); it != d.witnesses.rend(); ++it)
    out = mk_exists(it->name, it->domain, std::move(out));
  for (auto it = d.outer_prefix.rbegin(); it != d.outer_prefix.rend(); ++it)
    out = mk_forall(it->name, it->domain, std::move(out));
  return out;
}

Pi2WitnessForm pi2_witness_form(const FormulaPtr& f) {
  ComplexityClass c = classify(f);
  if (c.value != PiClass::Pi1 && c.value != PiClass::Pi2)
    throw NotPi2Error("formula is " + to_string(c.value) + ", not Pi2");
  DialecticaForm d = nd(f);
  return Pi2WitnessForm{d.challenges, d.witnesses, d.matrix};
}

// ---------------------------------------------------------------------------
// Finite models

void FiniteModel::set_carrier(const DomainTag& base_domain, long size) {
  if (base_domain.is_fun())
    throw ModelError("function-space carriers are derived, not assigned");
  if (size <= 0) throw ModelError("carriers must be nonempty");
  carriers_[render_domain(base_domain)] = size;
}

void FiniteModel::set_predicate(const std::string& name, std::vector<DomainTag> profile,
                                std::vector<char> table) {
  long cells = 1;
  for (const auto& d : profile) cells *= carrier_size(d);
  if (static_cast<long>(table.size()) != cells)
    throw ModelError("predicate table size mismatch for '" + name + "'");
  predicates_[name] = Predicate{std::move(profile), std::move(table)};
}

void FiniteModel::set_symbol(const std::string& name, const DomainTag& domain,
                             long value) {
  if (value < 0 || value >= carrier_size(domain))
    throw ModelError("symbol value out of carrier range for '" + name + "'");
  symbols_[name] = Symbol{domain, value};
}

long FiniteModel::carrier_size(const DomainTag& d) const {
  if (d.is_fun()) {
    long from = carrier_size(*d.from);
    long to = carrier_size(*d.to);
    long size = 1;
    for (long i = 0; i < from; ++i) {
      if (size > fun_size_cap / to)
        throw ModelError("function-space carrier exceeds cap: " + render_domain(d));
      size *= to;
    }
    return size;
  }
  auto it = carriers_.find(render_domain(d));
  if (it == carriers_.end())
    throw ModelError("unassigned domain: " + render_domain(d));
  return it->second;
}

long FiniteModel::apply(const DomainTag& fun_domain, long fun_value,
                        long arg_value) const {
  if (!fun_domain.is_fun()) throw ModelError("applying a non-function value");
  long to = carrier_size(*fun_domain.to);
  long v = fun_value;
  for (long i = 0; i < arg_value; ++i) v /= to;
  return v % to;
}

const FiniteModel::Predicate* FiniteModel::find_predicate(const std::string& name) const {
  auto it = predicates_.find(name);
  return it == predicates_.end() ? nullptr : &it->second;
}
const FiniteModel::Symbol* FiniteModel::find_symbol(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

namespace {

struct Binding {
  std::string name;
  DomainTag domain;
  long value;
};

struct EvalCtx {
  const FiniteModel& model;
  std::vector<Binding> env;

  const Binding* lookup(const std::string& name) const {
    for (auto it = env.rbegin(); it != env.rend(); ++it)
      if (it->name == name) return &*it;
    return nullptr;
  }
};

// Returns (domain, carrier index) of a term.
std::pair<DomainTag, long> eval_term(const Term& t, const EvalCtx& ctx) {
  DomainTag dom;
  long value;
  if (const Binding* b = ctx.lookup(t.head)) {
    dom = b->domain;
    value = b->value;
  } else if (const FiniteModel::Symbol* s = ctx.model.find_symbol(t.head)) {
    dom = s->domain;
    value = s->value;
  } else {
    throw ModelError("unassigned symbol: " + t.head);
  }
  for (const auto& arg : t.args) {
    auto [arg_dom, arg_val] = eval_term(arg, ctx);
    if (!dom.is_fun())
      throw ModelError("term applies non-function: " + t.head);
    if (!(*dom.from == arg_dom))
      throw ModelError("argument domain mismatch in application of " + t.head);
    value = ctx.model.apply(dom, value, arg_val);
    dom = *dom.to;
  }
  return {dom, value};
}

bool eval_rec(const FormulaPtr& f, EvalCtx& ctx) {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          const FiniteModel::Predicate* p = ctx.model.find_predicate(n.pred);
          if (!p) throw ModelError("unassigned predicate: " + n.pred);
          if (p->profile.size() != n.args.size())
            throw ModelError("arity mismatch for predicate " + n.pred);
          long idx = 0;
          for (size_t i = 0; i < n.args.size(); ++i) {
            auto [dom, val] = eval_term(n.args[i], ctx);
            if (!(dom == p->profile[i]))
              throw ModelError("argument domain mismatch for predicate " + n.pred);
            idx = idx * ctx.model.carrier_size(p->profile[i]) + val;
          }
          return p->table[idx] != 0;
        } else if constexpr (std::is_same_v<T, Not>) {
          return !eval_rec(n.body, ctx);
        } else if constexpr (std::is_same_v<T, And>) {
          return eval_rec(n.lhs, ctx) && eval_rec(n.rhs, ctx);
        } else if constexpr (std::is_same_v<T, Or>) {
          return eval_rec(n.lhs, ctx) || eval_rec(n.rhs, ctx);
        } else if constexpr (std::is_same_v<T, Implies>) {
          return !eval_rec(n.lhs, ctx) || eval_rec(n.rhs, ctx);
        } else if constexpr (std::is_same_v<T, ForAll>) {
          long size = ctx.model.carrier_size(n.domain);
          ctx.env.push_back(Binding{n.var, n.domain, 0});
          bool ok = true;
          for (long v = 0; v < size && ok; ++v) {
            ctx.env.back().value = v;
            ok = eval_rec(n.body, ctx);
          }
          ctx.env.pop_back();
          return ok;
        } else {
          long size = ctx.model.carrier_size(n.domain);
          ctx.env.push_back(Binding{n.var, n.domain, 0});
          bool found = false;
          for (long v = 0; v < size && !found; ++v) {
            ctx.env.back().value = v;
            found = eval_rec(n.body, ctx);
          }
          ctx.env.pop_back();
          return found;
        }
      },
      f->node);
}

}  // namespace

bool finite_model_eval(const FormulaPtr& f, const FiniteModel& m) {
  EvalCtx ctx{m, {}};
  return eval_rec(f, ctx);
}

} // namespace prooflens::logic
