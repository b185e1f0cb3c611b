#include "prooflens/formula.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

namespace prooflens::logic {

// ---------------------------------------------------------------------------
// Domains

DomainTag DomainTag::compact(std::string name, std::string descriptor) {
  DomainTag d;
  d.kind = DomainKind::EffectivelyCompact;
  d.name = std::move(name);
  d.descriptor = std::move(descriptor);
  return d;
}
DomainTag DomainTag::countable(std::string name, std::string descriptor) {
  DomainTag d;
  d.kind = DomainKind::Countable;
  d.name = std::move(name);
  d.descriptor = std::move(descriptor);
  return d;
}
DomainTag DomainTag::outer(std::string name, std::string descriptor) {
  DomainTag d;
  d.kind = DomainKind::OuterUncountable;
  d.name = std::move(name);
  d.descriptor = std::move(descriptor);
  return d;
}
DomainTag DomainTag::compact_interval(std::string lo, std::string hi) {
  DomainTag d;
  d.kind = DomainKind::EffectivelyCompact;
  d.descriptor = "Q∩[" + lo + "," + hi + "]";
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}
DomainTag DomainTag::fun(DomainTag from, DomainTag to) {
  DomainTag d;
  d.kind = DomainKind::FunctionSpace;
  d.descriptor = to.descriptor + "^(" + from.descriptor + ")";
  d.from = std::make_shared<const DomainTag>(std::move(from));
  d.to = std::make_shared<const DomainTag>(std::move(to));
  return d;
}
DomainTag DomainTag::qplus() { return countable("Qplus", "Q+"); }

bool operator==(const DomainTag& a, const DomainTag& b) {
  if (a.kind != b.kind || a.name != b.name || a.lo != b.lo || a.hi != b.hi)
    return false;
  if (a.kind == DomainKind::FunctionSpace)
    return *a.from == *b.from && *a.to == *b.to;
  return true;
}

std::string render_domain(const DomainTag& d) {
  if (!d.name.empty()) return d.name;
  if (d.kind == DomainKind::FunctionSpace)
    return "(fun " + render_domain(*d.from) + " " + render_domain(*d.to) + ")";
  if (d.kind == DomainKind::EffectivelyCompact && !d.hi.empty())
    return "(Qc " + d.lo + " " + d.hi + ")";
  return d.descriptor;
}

bool effectively_outer(const DomainTag& d) {
  if (d.kind == DomainKind::OuterUncountable) return true;
  if (d.kind == DomainKind::FunctionSpace)
    return effectively_outer(*d.from) || effectively_outer(*d.to);
  return false;
}

bool effectively_compact(const DomainTag& d) {
  return d.kind == DomainKind::EffectivelyCompact;
}

// ---------------------------------------------------------------------------
// Terms / formulas

bool operator==(const Term& a, const Term& b) {
  return a.head == b.head && a.args == b.args;
}

FormulaPtr mk_atom(std::string pred, std::vector<Term> args, Strictness s) {
  return std::make_shared<Formula>(Formula{Atom{std::move(pred), std::move(args), s}});
}
FormulaPtr mk_not(FormulaPtr body) {
  return std::make_shared<Formula>(Formula{Not{std::move(body)}});
}
FormulaPtr mk_and(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{And{std::move(lhs), std::move(rhs)}});
}
FormulaPtr mk_or(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{Or{std::move(lhs), std::move(rhs)}});
}
FormulaPtr mk_implies(FormulaPtr lhs, FormulaPtr rhs) {
  return std::make_shared<Formula>(Formula{Implies{std::move(lhs), std::move(rhs)}});
}
FormulaPtr mk_forall(std::string var, DomainTag domain, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{ForAll{std::move(var), std::move(domain), std::move(body)}});
}
FormulaPtr mk_exists(std::string var, DomainTag domain, FormulaPtr body) {
  return std::make_shared<Formula>(
      Formula{Exists{std::move(var), std::move(domain), std::move(body)}});
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->node.index() != b->node.index()) return false;
  return std::visit(
      [&](const auto& na) -> bool {
        using T = std::decay_t<decltype(na)>;
        const auto& nb = std::get<T>(b->node);
        if constexpr (std::is_same_v<T, Atom>) {
          return na.pred == nb.pred && na.args == nb.args &&
                 na.strictness == nb.strictness;
        } else if constexpr (std::is_same_v<T, Not>) {
          return equal(na.body, nb.body);
        } else if constexpr (std::is_same_v<T, ForAll> || std::is_same_v<T, Exists>) {
          return na.var == nb.var && na.domain == nb.domain && equal(na.body, nb.body);
        } else {
          return equal(na.lhs, nb.lhs) && equal(na.rhs, nb.rhs);
        }
      },
      a->node);
}

Term subst_term(const Term& t, const std::string& name, const Term& replacement) {
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(subst_term(a, name, replacement));
  if (t.head == name) {
    Term r = replacement;
    for (auto& a : args) r.args.push_back(std::move(a));
    return r;
  }
  return Term{t.head, std::move(args)};
}

FormulaPtr subst(const FormulaPtr& f, const std::string& name, const Term& replacement) {
  return std::visit(
      [&](const auto& n) -> FormulaPtr {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          std::vector<Term> args;
          args.reserve(n.args.size());
          for (const auto& a : n.args) args.push_back(subst_term(a, name, replacement));
          return mk_atom(n.pred, std::move(args), n.strictness);
        } else if constexpr (std::is_same_v<T, Not>) {
          return mk_not(subst(n.body, name, replacement));
        } else if constexpr (std::is_same_v<T, And>) {
          return mk_and(subst(n.lhs, name, replacement), subst(n.rhs, name, replacement));
        } else if constexpr (std::is_same_v<T, Or>) {
          return mk_or(subst(n.lhs, name, replacement), subst(n.rhs, name, replacement));
        } else if constexpr (std::is_same_v<T, Implies>) {
          return mk_implies(subst(n.lhs, name, replacement),
                            subst(n.rhs, name, replacement));
        } else if constexpr (std::is_same_v<T, ForAll>) {
          if (n.var == name) return mk_forall(n.var, n.domain, n.body);
          return mk_forall(n.var, n.domain, subst(n.body, name, replacement));
        } else {
          if (n.var == name) return mk_exists(n.var, n.domain, n.body);
          return mk_exists(n.var, n.domain, subst(n.body, name, replacement));
        }
      },
      f->node);
}

static void collect_term_names(const Term& t, std::set<std::string>& out) {
  out.insert(t.head);
  for (const auto& a : t.args) collect_term_names(a, out);
}

void collect_names(const FormulaPtr& f, std::set<std::string>& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          for (const auto& a : n.args) collect_term_names(a, out);
        } else if constexpr (std::is_same_v<T, Not>) {
          collect_names(n.body, out);
        } else if constexpr (std::is_same_v<T, ForAll> || std::is_same_v<T, Exists>) {
          out.insert(n.var);
          collect_names(n.body, out);
        } else {
          collect_names(n.lhs, out);
          collect_names(n.rhs, out);
        }
      },
      f->node);
}

std::string NameGen::fresh(const std::string& base) {
  if (used_.insert(base).second) return base;
  for (;;) {
    ++counter_;
    std::string candidate = base + "_" + std::to_string(counter_);
    if (used_.insert(candidate).second) return candidate;
  }
}

// ---------------------------------------------------------------------------
// Signature

const DomainTag* Signature::find_domain(const std::string& name) const {
  for (const auto& [n, d] : domains)
    if (n == name) return &d;
  return nullptr;
}
const PredicateSig* Signature::find_predicate(const std::string& name) const {
  for (const auto& [n, p] : predicates)
    if (n == name) return &p;
  return nullptr;
}
void Signature::declare_predicate(const std::string& name, PredicateSig sig) {
  predicates.emplace_back(name, std::move(sig));
}

// ---------------------------------------------------------------------------
// Lexer / reader

namespace {

struct Token {
  enum Kind { LParen, RParen, Symbol, End } kind;
  std::string text;
  int line, column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_ws();
    if (pos_ >= text_.size()) return {Token::End, "", line_, col_};
    char c = text_[pos_];
    if (c == '(') {
      Token t{Token::LParen, "(", line_, col_};
      advance();
      return t;
    }
    if (c == ')') {
      Token t{Token::RParen, ")", line_, col_};
      advance();
      return t;
    }
    Token t{Token::Symbol, "", line_, col_};
    while (pos_ < text_.size()) {
      char d = text_[pos_];
      if (d == '(' || d == ')' || d == ';' || std::isspace(static_cast<unsigned char>(d)))
        break;
      t.text.push_back(d);
      advance();
    }
    return t;
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  void skip_ws() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {  // line comment
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// Generic s-expression node, parsed before interpretation.
struct Sexp {
  bool is_list = false;
  std::string symbol;
  std::vector<Sexp> items;
  int line = 0, column = 0;
};

class Reader {
 public:
  explicit Reader(std::string_view text) : lexer_(text) { cur_ = lexer_.next(); }

  bool at_end() const { return cur_.kind == Token::End; }

  Sexp read() {
    if (cur_.kind == Token::End) throw ParseError("unexpected end of input", cur_.line, cur_.column);
    if (cur_.kind == Token::RParen) throw ParseError("unexpected ')'", cur_.line, cur_.column);
    if (cur_.kind == Token::Symbol) {
      Sexp s{false, cur_.text, {}, cur_.line, cur_.column};
      cur_ = lexer_.next();
      return s;
    }
    Sexp s{true, "", {}, cur_.line, cur_.column};
    cur_ = lexer_.next();  // consume '('
    while (cur_.kind != Token::RParen) {
      if (cur_.kind == Token::End)
        throw ParseError("unclosed '('", s.line, s.column);
      s.items.push_back(read());
    }
    cur_ = lexer_.next();  // consume ')'
    return s;
  }

 private:
  Lexer lexer_;
  Token cur_;
};

[[noreturn]] void fail(const Sexp& s, const std::string& msg) {
  throw ParseError(msg, s.line, s.column);
}

// ---------------------------------------------------------------------------
// Document parser

class DocParser {
 public:
  explicit DocParser(Signature& sig) : sig_(sig) {}

  DomainTag parse_domain(const Sexp& s) {
    if (!s.is_list) {
      if (s.symbol == "Qplus") return DomainTag::qplus();
      if (const DomainTag* d = sig_.find_domain(s.symbol)) return *d;
      fail(s, "unknown domain '" + s.symbol + "'");
    }
    if (s.items.empty()) fail(s, "empty domain form");
    const std::string& head = s.items[0].symbol;
    if (head == "fun") {
      if (s.items.size() != 3) fail(s, "(fun from to) expects two domains");
      return DomainTag::fun(parse_domain(s.items[1]), parse_domain(s.items[2]));
    }
    if (head == "Qc") {
      if (s.items.size() != 3 || s.items[1].is_list || s.items[2].is_list)
        fail(s, "(Qc lo hi) expects two bounds");
      return DomainTag::compact_interval(s.items[1].symbol, s.items[2].symbol);
    }
    fail(s, "unknown domain form '" + head + "'");
  }

  void parse_domains_block(const Sexp& s) {
    for (size_t i = 1; i < s.items.size(); ++i) {
      const Sexp& entry = s.items[i];
      if (!entry.is_list || entry.items.size() != 2 || entry.items[0].is_list)
        fail(entry, "domain declaration expects (name kind)");
      const std::string& name = entry.items[0].symbol;
      if (sig_.find_domain(name)) fail(entry, "domain '" + name + "' redeclared");
      const Sexp& kind = entry.items[1];
      DomainTag tag;
      if (!kind.is_list) {
        if (kind.symbol == "compact") tag = DomainTag::compact(name, name);
        else if (kind.symbol == "countable") tag = DomainTag::countable(name, name);
        else if (kind.symbol == "outer") tag = DomainTag::outer(name, name);
        else fail(kind, "unknown domain kind '" + kind.symbol + "'");
      } else {
        tag = parse_domain(kind);  // (fun A B)
        tag.name = name;
      }
      tag.name = name;
      sig_.domains.emplace_back(name, std::move(tag));
    }
  }

  void parse_predicates_block(const Sexp& s) {
    sig_.has_predicate_block = true;
    for (size_t i = 1; i < s.items.size(); ++i) {
      const Sexp& entry = s.items[i];
      if (!entry.is_list || entry.items.size() < 2 || entry.items[0].is_list)
        fail(entry, "predicate declaration expects (name arity ...)");
      const std::string& name = entry.items[0].symbol;
      if (sig_.find_predicate(name)) fail(entry, "predicate '" + name + "' redeclared");
      PredicateSig p;
      try {
        p.arity = std::stoi(entry.items[1].symbol);
      } catch (...) {
        fail(entry.items[1], "predicate arity must be an integer");
      }
      for (size_t j = 2; j < entry.items.size(); ++j) {
        const Sexp& extra = entry.items[j];
        if (!extra.is_list && extra.symbol == "nonstrict") {
          p.strictness = Strictness::NonStrict;
        } else if (!extra.is_list && extra.symbol == "strict") {
          p.strictness = Strictness::Strict;
        } else if (extra.is_list && !extra.items.empty() &&
                   extra.items[0].symbol == "profile") {
          for (size_t k = 1; k < extra.items.size(); ++k)
            p.profile.push_back(parse_domain(extra.items[k]));
          if (static_cast<int>(p.profile.size()) != p.arity)
            fail(extra, "profile length differs from arity");
        } else {
          fail(extra, "unknown predicate annotation");
        }
      }
      sig_.declare_predicate(name, std::move(p));
    }
  }

  Term parse_term(const Sexp& s) {
    if (!s.is_list) return Term{s.symbol, {}};
    if (s.items.empty() || s.items[0].is_list) fail(s, "term head must be a name");
    Term t{s.items[0].symbol, {}};
    for (size_t i = 1; i < s.items.size(); ++i) t.args.push_back(parse_term(s.items[i]));
    return t;
  }

  FormulaPtr parse_formula(const Sexp& s, std::vector<std::string>& scope) {
    if (!s.is_list || s.items.empty() || s.items[0].is_list)
      fail(s, "expected a formula form");
    const std::string& head = s.items[0].symbol;
    auto expect = [&](size_t n, const char* what) {
      if (s.items.size() != n) fail(s, std::string("(") + head + " ...) expects " + what);
    };
    if (head == "atom") {
      if (s.items.size() < 2 || s.items[1].is_list) fail(s, "(atom name term*) expected");
      const std::string& pred = s.items[1].symbol;
      std::vector<Term> args;
      for (size_t i = 2; i < s.items.size(); ++i) args.push_back(parse_term(s.items[i]));
      const PredicateSig* p = sig_.find_predicate(pred);
      if (!p) {
        if (sig_.has_predicate_block)
          fail(s, "unknown predicate '" + pred + "'");
        PredicateSig implicit;
        implicit.arity = static_cast<int>(args.size());
        sig_.declare_predicate(pred, implicit);
        p = sig_.find_predicate(pred);
      }
      if (p->arity != static_cast<int>(args.size()))
        fail(s, "predicate '" + pred + "' expects " + std::to_string(p->arity) +
                    " arguments, got " + std::to_string(args.size()));
      return mk_atom(pred, std::move(args), p->strictness);
    }
    if (head == "not") {
      expect(2, "one formula");
      return mk_not(parse_formula(s.items[1], scope));
    }
    if (head == "and" || head == "or" || head == "implies") {
      expect(3, "two formulas");
      FormulaPtr lhs = parse_formula(s.items[1], scope);
      FormulaPtr rhs = parse_formula(s.items[2], scope);
      if (head == "and") return mk_and(std::move(lhs), std::move(rhs));
      if (head == "or") return mk_or(std::move(lhs), std::move(rhs));
      return mk_implies(std::move(lhs), std::move(rhs));
    }
    if (head == "forall" || head == "exists") {
      expect(4, "a variable, a domain, and a body");
      if (s.items[1].is_list) fail(s.items[1], "quantified variable must be a name");
      const std::string& var = s.items[1].symbol;
      if (std::find(scope.begin(), scope.end(), var) != scope.end())
        fail(s.items[1], "rebound variable '" + var + "'");
      DomainTag dom = parse_domain(s.items[2]);
      scope.push_back(var);
      FormulaPtr body = parse_formula(s.items[3], scope);
      scope.pop_back();
      if (head == "forall") return mk_forall(var, std::move(dom), std::move(body));
      return mk_exists(var, std::move(dom), std::move(body));
    }
    fail(s, "unknown formula form '" + head + "'");
  }

 private:
  Signature& sig_;
};

}  // namespace

FormulaPtr parse_formula(Signature& sig, std::string_view text) {
  Reader reader(text);
  Sexp s = reader.read();
  DocParser p(sig);
  std::vector<std::string> scope;
  return p.parse_formula(s, scope);
}

FormulaDoc parse_document(std::string_view text) {
  Reader reader(text);
  FormulaDoc doc;
  DocParser p(doc.signature);
  Sexp first = reader.read();
  if (first.is_list && !first.items.empty() && first.items[0].symbol == "domains") {
    p.parse_domains_block(first);
    first = reader.read();
  }
  if (first.is_list && !first.items.empty() && first.items[0].symbol == "predicates") {
    p.parse_predicates_block(first);
    first = reader.read();
  }
  std::vector<std::string> scope;
  doc.root = p.parse_formula(first, scope);
  if (!reader.at_end()) {
    Sexp extra = reader.read();
    fail(extra, "trailing content after formula");
  }
  return doc;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_term(const Term& t) {
  if (t.args.empty()) return t.head;
  std::string out = "(" + t.head;
  for (const auto& a : t.args) out += " " + render_term(a);
  out += ")";
  return out;
}

std::string render_formula(const FormulaPtr& f) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          std::string out = "(atom " + n.pred;
          for (const auto& a : n.args) out += " " + render_term(a);
          return out + ")";
        } else if constexpr (std::is_same_v<T, Not>) {
          return "(not " + render_formula(n.body) + ")";
        } else if constexpr (std::is_same_v<T, And>) {
          return "(and " + render_formula(n.lhs) + " " + render_formula(n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Or>) {
          return "(or " + render_formula(n.lhs) + " " + render_formula(n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, Implies>) {
          return "(implies " + render_formula(n.lhs) + " " + render_formula(n.rhs) + ")";
        } else if constexpr (std::is_same_v<T, ForAll>) {
          return "(forall " + n.var + " " + render_domain(n.domain) + " " +
                 render_formula(n.body) + ")";
        } else {
          return "(exists " + n.var + " " + render_domain(n.domain) + " " +
                 render_formula(n.body) + ")";
        }
      },
      f->node);
}

static std::string render_domain_decl(const DomainTag& d) {
  switch (d.kind) {
    case DomainKind::EffectivelyCompact: return "compact";
    case DomainKind::Countable: return "countable";
    case DomainKind::OuterUncountable: return "outer";
    case DomainKind::FunctionSpace:
      return "(fun " + render_domain(*d.from) + " " + render_domain(*d.to) + ")";
  }
  return "countable";
}

std::string render_document(const FormulaDoc& doc) {
  std::ostringstream out;
  if (!doc.signature.domains.empty()) {
    out << "(domains";
    for (const auto& [name, d] : doc.signature.domains)
      out << " (" << name << " " << render_domain_decl(d) << ")";
    out << ")\n";
  }
  if (doc.signature.has_predicate_block && !doc.signature.predicates.empty()) {
    out << "(predicates";
    for (const auto& [name, p] : doc.signature.predicates) {
      out << " (" << name << " " << p.arity;
      if (p.strictness == Strictness::NonStrict) out << " nonstrict";
      if (!p.profile.empty()) {
        out << " (profile";
        for (const auto& d : p.profile) out << " " << render_domain(d);
        out << ")";
      }
      out << ")";
    }
    out << ")\n";
  }
  out << render_formula(doc.root) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Prenex

namespace {

struct PrenexPart {
  std::vector<PrefixEntry> prefix;
  FormulaPtr matrix;
};

void flip(std::vector<PrefixEntry>& prefix) {
  for (auto& e : prefix) e.universal = !e.universal;
}

// Interleaves two prefixes preserving each one's order. Compact-domain
// quantifiers are emitted whenever they are at a head; otherwise the side
// whose head continues the current non-compact polarity block wins, with a
// left bias on fresh blocks.
std::vector<PrefixEntry> merge_prefixes(std::vector<PrefixEntry> a,
                                        std::vector<PrefixEntry> b) {
  std::vector<PrefixEntry> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  std::optional<bool> block;  // polarity of the current non-compact block
  auto take = [&](std::vector<PrefixEntry>& src, size_t& k) {
    if (!effectively_compact(src[k].domain)) block = src[k].universal;
    out.push_back(std::move(src[k]));
    ++k;
  };
  while (i < a.size() || j < b.size()) {
    if (i < a.size() && effectively_compact(a[i].domain)) { take(a, i); continue; }
    if (j < b.size() && effectively_compact(b[j].domain)) { take(b, j); continue; }
    if (i >= a.size()) { take(b, j); continue; }
    if (j >= b.size()) { take(a, i); continue; }
    if (block.has_value() && a[i].universal == *block) { take(a, i); continue; }
    if (block.has_value() && b[j].universal == *block) { take(b, j); continue; }
    take(a, i);
  }
  return out;
}

PrenexPart prenex_rec(const FormulaPtr& f, NameGen& names);

// Renames prefix variables that occur anywhere in `other` (as a free symbol
// or a sibling binder), so pulling them outward cannot capture.
void rename_against(PrenexPart& part, const FormulaPtr& other, NameGen& names) {
  std::set<std::string> taken;
  collect_names(other, taken);
  for (auto& e : part.prefix) {
    if (!taken.count(e.var)) continue;
    std::string nn = names.fresh(e.var);
    part.matrix = subst(part.matrix, e.var, Term{nn, {}});
    e.var = nn;
  }
}

PrenexPart prenex_binary(const FormulaPtr& lhs, const FormulaPtr& rhs, bool flip_lhs,
                         NameGen& names,
                         FormulaPtr (*mk)(FormulaPtr, FormulaPtr)) {
  PrenexPart a = prenex_rec(lhs, names);
  PrenexPart b = prenex_rec(rhs, names);
  if (flip_lhs) flip(a.prefix);
  rename_against(a, b.matrix, names);
  rename_against(b, a.matrix, names);
  PrenexPart out;
  out.prefix = merge_prefixes(std::move(a.prefix), std::move(b.prefix));
  out.matrix = mk(std::move(a.matrix), std::move(b.matrix));
  return out;
}

PrenexPart prenex_rec(const FormulaPtr& f, NameGen& names) {
  return std::visit(
      [&](const auto& n) -> PrenexPart {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Atom>) {
          return {{}, f};
        } else if constexpr (std::is_same_v<T, Not>) {
          PrenexPart a = prenex_rec(n.body, names);
          flip(a.prefix);
          a.matrix = mk_not(a.matrix);
          return a;
        } else if constexpr (std::is_same_v<T, And>) {
          return prenex_binary(n.lhs, n.rhs, false, names, mk_and);
        } else if constexpr (std::is_same_v<T, Or>) {
          return prenex_binary(n.lhs, n.rhs, false, names, mk_or);
        } else if constexpr (std::is_same_v<T, Implies>) {
          return prenex_binary(n.lhs, n.rhs, true, names, mk_implies);
        } else if constexpr (std::is_same_v<T, ForAll>) {
          PrenexPart a = prenex_rec(n.body, names);
          a.prefix.insert(a.prefix.begin(), PrefixEntry{true, n.var, n.domain});
          return a;
        } else {
          PrenexPart a = prenex_rec(n.body, names);
          a.prefix.insert(a.prefix.begin(), PrefixEntry{false, n.var, n.domain});
          return a;
        }
      },
      f->node);
}

}  // namespace

FormulaPtr prenex(const FormulaPtr& f) {
  NameGen names(f);
  PrenexPart p = prenex_rec(f, names);
  FormulaPtr out = p.matrix;
  for (auto it = p.prefix.rbegin(); it != p.prefix.rend(); ++it) {
    if (it->universal)
      out = mk_forall(it->var, it->domain, std::move(out));
    else
      out = mk_exists(it->var, it->domain, std::move(out));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(PiClass c) {
  switch (c) {
    case PiClass::Pi1: return "Pi1";
    case PiClass::Pi2: return "Pi2";
    case PiClass::Pi3: return "Pi3";
    case PiClass::Other: return "Other";
  }
  return "Other";
}

ComplexityClass classify(const FormulaPtr& f) {
  FormulaPtr p = prenex(f);
  ComplexityClass result;
  // Strip the prefix off the prenex form.
  FormulaPtr cur = p;
  for (;;) {
    if (const auto* fa = std::get_if<ForAll>(&cur->node)) {
      result.witness.push_back(PrefixEntry{true, fa->var, fa->domain});
      cur = fa->body;
    } else if (const auto* ex = std::get_if<Exists>(&cur->node)) {
      result.witness.push_back(PrefixEntry{false, ex->var, ex->domain});
      cur = ex->body;
    } else {
      break;
    }
  }
  // Leading outer-domain universal block is permitted and ignored.
  size_t start = 0;
  while (start < result.witness.size() && result.witness[start].universal &&
         effectively_outer(result.witness[start].domain))
    ++start;
  std::vector<bool> blocks;
  for (size_t i = start; i < result.witness.size(); ++i) {
    const PrefixEntry& e = result.witness[i];
    if (effectively_outer(e.domain)) {
      result.value = PiClass::Other;  // outer quantifier not on the outermost block
      return result;
    }
    if (effectively_compact(e.domain)) continue;
    if (blocks.empty() || blocks.back() != e.universal) blocks.push_back(e.universal);
  }
  if (blocks.empty() || (blocks.size() == 1 && blocks[0]))
    result.value = PiClass::Pi1;
  else if (blocks == std::vector<bool>{false} || blocks == std::vector<bool>{true, false})
    result.value = PiClass::Pi2;
  else if (blocks == std::vector<bool>{false, true} ||
           blocks == std::vector<bool>{true, false, true})
    result.value = PiClass::Pi3;
  else
    result.value = PiClass::Other;
  return result;
}

} // namespace prooflens::logic
