#include <doctest.h>

#include "prooflens/dialectica.hpp"
#include "prooflens/formula.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace prooflens::logic;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FormulaPtr parse_fresh(const std::string& text) {
  Signature sig;
  return parse_formula(sig, text);
}

std::vector<std::string> corpus_files() {
  std::vector<std::string> out;
  for (const auto& entry :
       std::filesystem::directory_iterator(std::string(PROOFLENS_SHARE_DIR) + "/corpus"))
    if (entry.path().extension() == ".formula") out.push_back(entry.path().string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("parse: quantifier over an inline compact interval") {
  FormulaDoc doc = parse_document("(forall x (Qc 0 1) (atom lt (g x) eps))");
  const auto* fa = std::get_if<ForAll>(&doc.root->node);
  REQUIRE(fa != nullptr);
  CHECK(fa->var == "x");
  CHECK(fa->domain.kind == DomainKind::EffectivelyCompact);
  CHECK(fa->domain.descriptor == "Q∩[0,1]");
  const auto* atom = std::get_if<Atom>(&fa->body->node);
  REQUIRE(atom != nullptr);
  CHECK(atom->pred == "lt");
  CHECK(atom->args.size() == 2);
  CHECK(atom->args[0] == Term{"g", {Term{"x", {}}}});
}

TEST_CASE("parse: nested countable quantifiers") {
  FormulaDoc doc =
      parse_document("(forall eps Qplus (exists delta Qplus (atom approxQ f eps delta)))");
  const auto* fa = std::get_if<ForAll>(&doc.root->node);
  REQUIRE(fa != nullptr);
  CHECK(fa->domain.kind == DomainKind::Countable);
  CHECK(fa->domain.descriptor == "Q+");
  const auto* ex = std::get_if<Exists>(&fa->body->node);
  REQUIRE(ex != nullptr);
  CHECK(ex->var == "delta");
}

TEST_CASE("parse: rebound variable is rejected") {
  CHECK_THROWS_AS(parse_document("(exists x Qplus (exists x Qplus (atom p x)))"),
                  ParseError);
}

TEST_CASE("parse: error cases") {
  CHECK_THROWS_AS(parse_document("(forall x NoSuchDomain (atom p x))"), ParseError);
  // Unknown predicate only with a declared predicate block.
  CHECK_THROWS_AS(parse_document("(predicates (q 1)) (atom p x)"), ParseError);
  // Arity mismatch.
  CHECK_THROWS_AS(parse_document("(predicates (q 2)) (atom q x)"), ParseError);
  // Syntax errors carry positions.
  try {
    parse_document("(forall x Qplus\n  (atom p x)");
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
  }
}

TEST_CASE("parser rejects malformed input without crashing") {
  for (const char* bad :
       {")", "(", "(atom)", "(forall x)", "(forall x Qplus)", "(and (atom p x))",
        "(unknownform a b)", "(forall (x) Qplus (atom p x))", "", "(atom p x) trailing",
        "(domains (D))(atom p x)", "(predicates (p x))(atom p)"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_document(bad), ParseError);
  }
}

TEST_CASE("round trip over the golden corpus") {
  auto files = corpus_files();
  CHECK(files.size() == 20);
  for (const auto& path : files) {
    CAPTURE(path);
    std::string text = slurp(path);
    FormulaDoc doc = parse_document(text);
    std::string rendered = render_document(doc);
    FormulaDoc again = parse_document(rendered);
    CHECK(equal(doc.root, again.root));
    // Corpus files are stored in canonical form; render is the identity on them.
    CHECK(rendered == text);
    CHECK(render_document(again) == rendered);
  }
}

TEST_CASE("render of atoms and quantifiers") {
  FormulaDoc doc = parse_document("(forall x (Qc 0 1) (atom lt (g x) eps))");
  CHECK(render_formula(doc.root) == "(forall x (Qc 0 1) (atom lt (g x) eps))");
}

TEST_CASE("prenex: already prenex and de Morgan") {
  FormulaPtr f = parse_fresh("(exists y Qplus (atom p y))");
  CHECK(equal(prenex(f), f));

  FormulaPtr g = parse_fresh("(not (exists z Qplus (atom p z)))");
  FormulaPtr expected = parse_fresh("(forall z Qplus (not (atom p z)))");
  CHECK(equal(prenex(g), expected));
}

TEST_CASE("prenex: zero-counting hypothesis reaches the displayed form") {
  FormulaDoc raw = parse_document(
      slurp(std::string(PROOFLENS_SHARE_DIR) + "/corpus/zero_counting_raw.formula"));
  FormulaDoc displayed = parse_document(
      slurp(std::string(PROOFLENS_SHARE_DIR) + "/corpus/zero_counting_prenexed.formula"));
  CHECK(equal(prenex(raw.root), displayed.root));
}

TEST_CASE("prenex preserves truth on small models") {
  // (∀z G(y,z)) → ∃δ N(y,δ) against its prenex form, all tables at size 2.
  FormulaDoc doc = parse_document(
      "(domains (A countable))"
      "(predicates (G 2 (profile A A)) (N 2 (profile A A)))"
      "(implies (forall z A (atom G y z)) (exists d A (atom N y d)))");
  FormulaPtr pren = prenex(doc.root);
  DomainTag A = *doc.signature.find_domain("A");
  FiniteModel m;
  m.set_carrier(A, 2);
  for (long ytab = 0; ytab < 2; ++ytab) {
    m.set_symbol("y", A, ytab);
    for (long mask = 0; mask < (1 << 8); ++mask) {
      std::vector<char> tg(4), tn(4);
      for (int i = 0; i < 4; ++i) tg[i] = (mask >> i) & 1;
      for (int i = 0; i < 4; ++i) tn[i] = (mask >> (4 + i)) & 1;
      m.set_predicate("G", {A, A}, std::move(tg));
      m.set_predicate("N", {A, A}, std::move(tn));
      CHECK(finite_model_eval(doc.root, m) == finite_model_eval(pren, m));
    }
  }
}

TEST_CASE("prenex renames colliding sibling binders") {
  // Both conjuncts bind y; pulling them out must not capture.
  FormulaPtr f = parse_fresh(
      "(and (exists y Qplus (atom p y)) (exists y Qplus (atom q y)))");
  FormulaPtr pren = prenex(f);
  const auto* e1 = std::get_if<Exists>(&pren->node);
  REQUIRE(e1 != nullptr);
  const auto* e2 = std::get_if<Exists>(&e1->body->node);
  REQUIRE(e2 != nullptr);
  CHECK(e1->var != e2->var);
  const auto* body = std::get_if<And>(&e2->body->node);
  REQUIRE(body != nullptr);
  const auto* left = std::get_if<Atom>(&body->lhs->node);
  const auto* right = std::get_if<Atom>(&body->rhs->node);
  REQUIRE(left != nullptr);
  REQUIRE(right != nullptr);
  CHECK(left->args[0].head != right->args[0].head);
}

TEST_CASE("prenex never captures free occurrences of a binder's name") {
  // y is bound on the left and FREE on the right.
  FormulaPtr f = parse_fresh("(and (exists y Qplus (atom p y)) (atom q y))");
  FormulaPtr pren = prenex(f);
  const auto* ex = std::get_if<Exists>(&pren->node);
  REQUIRE(ex != nullptr);
  const auto* body = std::get_if<And>(&ex->body->node);
  REQUIRE(body != nullptr);
  const auto* right = std::get_if<Atom>(&body->rhs->node);
  REQUIRE(right != nullptr);
  CHECK(right->args[0].head == "y");   // the free y survives
  CHECK(ex->var != "y");               // the binder moved out under a new name
}

TEST_CASE("prenex preserves truth across the evaluation corpus") {
  for (const char* name :
       {"nd_forall_exists.formula", "nd_exists_forall.formula", "nd_implication.formula",
        "nd_disjunction.formula", "nd_negation.formula", "nd_conjunction.formula",
        "nd_compact_matrix.formula", "nd_mixed.formula"}) {
    CAPTURE(name);
    FormulaDoc doc = parse_document(
        slurp(std::string(PROOFLENS_SHARE_DIR) + "/corpus/" + name));
    FormulaPtr pren = prenex(doc.root);
    FiniteModel m;
    std::vector<std::pair<std::string, std::vector<DomainTag>>> preds;
    long bits = 0;
    for (const auto& [dn, dt] : doc.signature.domains)
      if (!dt.is_fun()) m.set_carrier(dt, 2);
    for (const auto& [pn, sig] : doc.signature.predicates) {
      long cells = 1;
      for (const auto& d : sig.profile) cells *= m.carrier_size(d);
      preds.emplace_back(pn, sig.profile);
      bits += cells;
    }
    REQUIRE(bits <= 16);
    for (long mask = 0; mask < (1L << bits); ++mask) {
      long cursor = mask;
      for (const auto& [pn, profile] : preds) {
        long cells = 1;
        for (const auto& d : profile) cells *= m.carrier_size(d);
        std::vector<char> table(cells);
        for (long i = 0; i < cells; ++i) table[i] = (cursor >> i) & 1;
        cursor >>= cells;
        m.set_predicate(pn, profile, std::move(table));
      }
      CHECK(finite_model_eval(doc.root, m) == finite_model_eval(pren, m));
    }
  }
}

TEST_CASE("classify: definitional cases") {
  CHECK(classify(parse_fresh("(forall n Qplus (exists m Qplus (atom p n m)))")).value ==
        PiClass::Pi2);
  CHECK(classify(parse_fresh("(forall x Qplus (exists y Qplus (forall z Qplus (atom p x y z))))"))
            .value == PiClass::Pi3);
  CHECK(classify(parse_fresh("(atom p c)")).value == PiClass::Pi1);
  CHECK(classify(parse_fresh("(forall x Qplus (atom p x))")).value == PiClass::Pi1);
  // Compact quantifiers do not count toward the class.
  CHECK(classify(parse_fresh("(forall n Qplus (exists m Qplus (forall z (Qc 0 1) (atom p n m z))))"))
            .value == PiClass::Pi2);
}

TEST_CASE("classify: Skolemized Jackson statement is Pi2") {
  FormulaDoc doc = parse_document(
      slurp(std::string(PROOFLENS_SHARE_DIR) + "/corpus/jackson_pi2.formula"));
  ComplexityClass c = classify(doc.root);
  CHECK(c.value == PiClass::Pi2);
}

TEST_CASE("classify agrees with classify-of-prenex and ignores renaming") {
  for (const auto& path : corpus_files()) {
    CAPTURE(path);
    FormulaDoc doc = parse_document(slurp(path));
    CHECK(classify(doc.root).value == classify(prenex(doc.root)).value);
  }
  FormulaPtr a = parse_fresh("(forall x Qplus (exists y Qplus (atom p x y)))");
  FormulaPtr b = parse_fresh("(forall u Qplus (exists v Qplus (atom p u v)))");
  CHECK(classify(a).value == classify(b).value);
}

TEST_CASE("outer-domain quantifier allowed only as the outermost block") {
  FormulaDoc doc = parse_document(
      "(domains (R outer))"
      "(forall eps Qplus (forall f R (exists d Qplus (atom p f eps d))))");
  CHECK(classify(doc.root).value == PiClass::Other);
}
