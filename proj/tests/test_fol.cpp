#include "ultraposet/fol.hpp"

#include <functional>
#include <vector>

#include "corpus.hpp"
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace ultraposet;
using fixtures::bool4;
using fixtures::bowtie;
using fixtures::m3;
using fixtures::n5;
using fixtures::three_chain;
using fixtures::two_antichain;
using fixtures::two_chain;

namespace {

constexpr ErrorKind kNoThrow = ErrorKind::UsageError;

template <typename Fn>
ErrorKind thrown_kind(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return kNoThrow;
}

// Every unary table on an n-element carrier, in odometer order.
void for_all_unary_tables(int n, const std::function<void(const OperationTable&)>& fn) {
  std::vector<int> t(std::size_t(n), 0);
  while (true) {
    fn(OperationTable::make(1, n, t));
    int i = n - 1;
    while (i >= 0 && t[std::size_t(i)] == n - 1) t[std::size_t(i--)] = 0;
    if (i < 0) return;
    ++t[std::size_t(i)];
  }
}

std::vector<int> upper_bounds(const Poset& p, const std::vector<int>& xs) {
  std::vector<int> out;
  for (int z = 0; z < p.size(); ++z) {
    bool ub = true;
    for (int x : xs) ub = ub && p.leq(x, z);
    if (ub) out.push_back(z);
  }
  return out;
}

std::vector<int> paper_A(const Poset& p, const OperationTable& f, int s, int y) {
  std::vector<int> A;
  for (int x = 0; x < p.size(); ++x)
    if (p.leq(x, s) && p.leq(f.apply1(x), y)) A.push_back(x);
  return A;
}

struct XorShift {
  unsigned long long state;
  explicit XorShift(unsigned long long seed) : state(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
  unsigned long long next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  int below(int n) { return int(next() % (unsigned long long)(n)); }
};

OperationTable random_unary(XorShift& rng, int n) {
  std::vector<int> t(std::size_t(n), 0);
  for (auto& v : t) v = rng.below(n);
  return OperationTable::make(1, n, t);
}

const std::vector<Poset>& bridge_posets() {
  static const std::vector<Poset> ps = {two_chain(), three_chain(), two_antichain(),
                                        bool4(),     m3(),          n5(),
                                        bowtie()};
  return ps;
}

Algebra standard_algebra(const Poset& p, const OperationTable& f) {
  return Algebra{p, {{"f", f}}};
}

}  // namespace

TEST_CASE("signature construction validates arities and name clashes") {
  Signature s = Signature::standard();
  CHECK(s.relations.at("leq") == 2);
  CHECK(s.operations.at("f") == 1);

  Signature g = Signature::standard("g");
  CHECK(g.operations.count("g") == 1);
  CHECK(g.operations.count("f") == 0);

  CHECK(thrown_kind([] { Signature::make({{"r", 0}}, {}); }) == ErrorKind::SignatureMismatch);
  CHECK(thrown_kind([] { Signature::make({}, {{"f", 0}}); }) == ErrorKind::SignatureMismatch);
  CHECK(thrown_kind([] { Signature::make({{"f", 1}}, {{"f", 1}}); }) ==
        ErrorKind::SignatureMismatch);
}

TEST_CASE("parsing the alpha text yields the conjunction of the two bounds") {
  Signature sig = Signature::standard();
  FormulaPtr parsed = parse_formula("x <= s & f(x) <= y", sig);

  Term x = Term::name("x"), s = Term::name("s"), y = Term::name("y");
  FormulaPtr built = land(leq(x, s), leq(Term::app("f", {x}), y));
  CHECK(formulas_equal(parsed, built));
  CHECK(formulas_equal(parsed, build_paper_formulas(sig).alpha));
}

TEST_CASE("parsing the parenthesized sigma text yields the proof formula") {
  Signature sig = Signature::standard();
  PaperFormulas pf = build_paper_formulas(sig);
  FormulaPtr parsed = parse_formula(corpus::corpus_entry("sigma").text, sig);
  CHECK(formulas_equal(parsed, pf.sigma));

  FormulaPtr parsedPhi = parse_formula(corpus::corpus_entry("phi").text, sig);
  CHECK(formulas_equal(parsedPhi, pf.phi));
}

TEST_CASE("quantifier bodies extend maximally, so underparenthesized sigma is a different formula") {
  // With the maximal-body rule, an inner quantifier swallows a trailing
  // implication unless the quantified subformula is parenthesized. The text
  // below therefore parses to forall z. forall x. ((alpha -> x <= z) -> s <= z),
  // not to the proof formula sigma.
  Signature sig = Signature::standard();
  FormulaPtr loose = parse_formula(
      "forall z. (forall x. ((x <= s & f(x) <= y) -> x <= z) -> s <= z)", sig);

  PaperFormulas pf = build_paper_formulas(sig);
  Term x = Term::name("x"), s = Term::name("s"), z = Term::name("z");
  FormulaPtr swallowed =
      forall("z", forall("x", implies(implies(pf.alpha, leq(x, z)), leq(s, z))));
  CHECK(formulas_equal(loose, swallowed));
  CHECK_FALSE(formulas_equal(loose, pf.sigma));

  // And they differ semantically: on the two-element chain with the identity
  // map, s = y = top satisfies sigma (top is the sup of its down-set) but not
  // the swallowed reading (z = bottom, x = bottom makes its premise true).
  Algebra m = standard_algebra(two_chain(), fixtures::identity_op(two_chain()));
  Assignment a{{"s", 1}, {"y", 1}};
  CHECK(evaluate(m, pf.sigma, a));
  CHECK_FALSE(evaluate(m, loose, a));
}

TEST_CASE("parse errors carry 0-based positions and the failing expectation") {
  Signature sig = Signature::standard();
  auto kindAndMessage = [&](std::string_view text) {
    try {
      parse_formula(text, sig);
    } catch (const Error& e) {
      return std::pair<ErrorKind, std::string>(e.kind(), e.what());
    }
    return std::pair<ErrorKind, std::string>(kNoThrow, "");
  };

  auto [k1, m1] = kindAndMessage("f(x");
  CHECK(k1 == ErrorKind::SyntaxError);
  CHECK(m1.find("position 3") != std::string::npos);

  auto [k2, m2] = kindAndMessage("x < y");
  CHECK(k2 == ErrorKind::SyntaxError);
  CHECK(m2.find("position 2") != std::string::npos);

  CHECK(kindAndMessage("x <= forall").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("forall forall. x <= x").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("x <= y y").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("(x <= y").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("x ? y").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("").first == ErrorKind::SyntaxError);
  CHECK(kindAndMessage("x - y").first == ErrorKind::SyntaxError);

  CHECK(kindAndMessage("g(x) <= x").first == ErrorKind::UnknownSymbol);
  CHECK(kindAndMessage("f(leq(x, x)) <= x").first == ErrorKind::UnknownSymbol);

  CHECK(kindAndMessage("f(x, x) <= x").first == ErrorKind::ArityMismatch);
  CHECK(kindAndMessage("f <= x").first == ErrorKind::ArityMismatch);
  CHECK(kindAndMessage("leq(x) -> x <= x").first == ErrorKind::ArityMismatch);
  CHECK(kindAndMessage("x <= leq").first == ErrorKind::ArityMismatch);
}

TEST_CASE("operator shapes: precedence, associativity, relation atoms") {
  Signature sig = Signature::standard();

  // '->' is right-associative; '&' binds tighter than '|' binds tighter
  // than '->'; '!' tightest.
  FormulaPtr f = parse_formula("x <= y -> x <= y -> x <= y", sig);
  CHECK(f->kind == FormulaKind::Implies);
  CHECK(f->b->kind == FormulaKind::Implies);

  FormulaPtr g = parse_formula("x <= y & y <= x | x = y", sig);
  CHECK(g->kind == FormulaKind::Or);
  CHECK(g->a->kind == FormulaKind::And);

  FormulaPtr h = parse_formula("!x <= y & y <= x", sig);
  CHECK(h->kind == FormulaKind::And);
  CHECK(h->a->kind == FormulaKind::Not);

  FormulaPtr r = parse_formula("leq(f(x), y)", sig);
  CHECK(r->kind == FormulaKind::Rel);
  CHECK(r->relName == "leq");
  REQUIRE(r->relArgs.size() == 2);
  CHECK(r->relArgs[0] == Term::app("f", {Term::name("x")}));

  // '&' / '|' associate to the left.
  FormulaPtr c = parse_formula("x <= x & y <= y & x = y", sig);
  CHECK(c->kind == FormulaKind::And);
  CHECK(c->a->kind == FormulaKind::And);
  CHECK(c->b->kind == FormulaKind::Eq);
}

TEST_CASE("printing is minimal and sigma renders to its canonical text") {
  Signature sig = Signature::standard();
  PaperFormulas pf = build_paper_formulas(sig);
  CHECK(print_formula(pf.sigma) ==
        "forall z. (forall x. x <= s & f(x) <= y -> x <= z) -> s <= z");
  CHECK(print_formula(pf.phi) ==
        "forall z. (forall x. x <= s & f(x) <= y -> f(x) <= z) -> f(s) <= z");
  CHECK(print_formula(pf.alpha) == "x <= s & f(x) <= y");

  // Grouping that differs from the default parse keeps its parentheses.
  CHECK(print_formula(parse_formula("x <= y & (y <= x | x = y)", sig)) ==
        "x <= y & (y <= x | x = y)");
  CHECK(print_formula(parse_formula("(x <= y -> x = y) -> x = x", sig)) ==
        "(x <= y -> x = y) -> x = x");
  CHECK(print_formula(parse_formula("!(x <= y & y <= x)", sig)) == "!(x <= y & y <= x)");
  CHECK(print_formula(parse_formula("!!x <= y", sig)) == "!!x <= y");
}

TEST_CASE("the corpus round-trips through print and parse") {
  Signature sig = Signature::standard();
  CHECK(corpus::los_corpus().size() == 30);
  for (const auto& entry : corpus::los_corpus()) {
    CAPTURE(entry.name);
    FormulaPtr f = parse_formula(entry.text, sig);
    std::string printed = print_formula(f);
    FormulaPtr again = parse_formula(printed, sig);
    CHECK(formulas_equal(f, again));
    CHECK(print_formula(again) == printed);
    CHECK(free_names(f) == entry.frees);
  }
}

TEST_CASE("random formula trees survive the print/parse round trip") {
  Signature sig = Signature::standard();
  XorShift rng(20260816);
  const std::vector<std::string> vars = {"u", "v", "w", "x", "z"};

  std::function<Term(int)> randomTerm = [&](int depth) {
    if (depth <= 0 || rng.below(3) != 0) return Term::name(vars[std::size_t(rng.below(5))]);
    return Term::app("f", {randomTerm(depth - 1)});
  };
  std::function<FormulaPtr(int)> randomFormula = [&](int depth) -> FormulaPtr {
    int pick = depth <= 0 ? rng.below(3) : rng.below(9);
    switch (pick) {
      case 0: return leq(randomTerm(2), randomTerm(2));
      case 1: return eq(randomTerm(2), randomTerm(2));
      case 2: return rel("leq", {randomTerm(2), randomTerm(2)});
      case 3: return lnot(randomFormula(depth - 1));
      case 4: return land(randomFormula(depth - 1), randomFormula(depth - 1));
      case 5: return lor(randomFormula(depth - 1), randomFormula(depth - 1));
      case 6: return implies(randomFormula(depth - 1), randomFormula(depth - 1));
      case 7: return forall(vars[std::size_t(rng.below(5))], randomFormula(depth - 1));
      default: return exists(vars[std::size_t(rng.below(5))], randomFormula(depth - 1));
    }
  };

  for (int trial = 0; trial < 500; ++trial) {
    FormulaPtr f = randomFormula(6);
    std::string printed = print_formula(f);
    CAPTURE(printed);
    FormulaPtr again = parse_formula(printed, sig);
    CHECK(formulas_equal(f, again));
  }
}

TEST_CASE("free_names respects shadowing and ignores operation heads") {
  Signature sig = Signature::standard();
  CHECK(free_names(parse_formula("f(x) <= y", sig)) == std::set<std::string>{"x", "y"});
  CHECK(free_names(parse_formula("forall x. (x <= s & (exists x. x <= x))", sig)) ==
        std::set<std::string>{"s"});
  // The quantifier body extends maximally, so the trailing conjunct's x is
  // bound too; parenthesizing the quantifier frees it.
  CHECK(free_names(parse_formula("exists x. (x <= s) & x <= z", sig)) ==
        std::set<std::string>{"s", "z"});
  CHECK(free_names(parse_formula("(exists x. x <= s) & x <= z", sig)) ==
        std::set<std::string>{"s", "x", "z"});

  PaperFormulas pf = build_paper_formulas(sig);
  CHECK(free_names(pf.alpha) == std::set<std::string>{"x", "s", "y"});
  CHECK(free_names(pf.sigma) == std::set<std::string>{"s", "y"});
  CHECK(free_names(pf.phi) == std::set<std::string>{"s", "y"});
}

TEST_CASE("evaluation on small posets matches hand truth values") {
  Signature sig = Signature::standard();
  Algebra chain = standard_algebra(two_chain(), fixtures::identity_op(two_chain()));
  Algebra anti = standard_algebra(two_antichain(), fixtures::identity_op(two_antichain()));

  CHECK(evaluate(chain, parse_formula("forall x. exists z. x <= z", sig), {}));
  CHECK(evaluate(chain, parse_formula("exists z. forall x. x <= z", sig), {}));
  CHECK(evaluate(anti, parse_formula("forall x. exists z. x <= z", sig), {}));
  CHECK_FALSE(evaluate(anti, parse_formula("exists z. forall x. x <= z", sig), {}));
  CHECK(evaluate(anti, parse_formula("exists x. exists z. (!(x <= z) & !(z <= x))", sig), {}));
  CHECK_FALSE(
      evaluate(chain, parse_formula("exists x. exists z. (!(x <= z) & !(z <= x))", sig), {}));

  CHECK(evaluate(chain, parse_formula("x = x", sig), {{"x", 0}}));
  CHECK_FALSE(evaluate(chain, parse_formula("x = z", sig), {{"x", 0}, {"z", 1}}));
  CHECK(evaluate(chain, parse_formula("leq(x, z)", sig), {{"x", 0}, {"z", 1}}));

  // Bound variables shadow the ambient assignment.
  Assignment clash{{"x", 1}, {"y", 0}};
  CHECK_FALSE(evaluate(chain, parse_formula("x <= y", sig), clash));
  CHECK(evaluate(chain, parse_formula("exists x. x <= y", sig), clash));
  CHECK_FALSE(evaluate(chain, parse_formula("forall x. x <= y", sig), clash));
  // ... and the ambient x (= 1) is restored after the quantifier closes, so
  // the right conjunct reads 1 <= 0 and the negation makes the whole true.
  // A leaky evaluator would leave x = 0 bound and report false.
  CHECK(evaluate(chain, parse_formula("(exists x. x <= y) & !(x <= y)", sig), clash));
}

TEST_CASE("evaluation failure modes: unbound names, bad signatures, bad elements") {
  Signature sig = Signature::standard();
  Algebra chain = standard_algebra(two_chain(), fixtures::identity_op(two_chain()));
  PaperFormulas pf = build_paper_formulas(sig);

  CHECK(thrown_kind([&] { evaluate(chain, pf.sigma, {{"s", 1}}); }) == ErrorKind::UnboundName);
  CHECK(thrown_kind([&] { evaluate(chain, pf.sigma, {}); }) == ErrorKind::UnboundName);
  CHECK(thrown_kind([&] {
          evaluate(chain, pf.sigma, {{"s", 1}, {"y", 7}});
        }) == ErrorKind::UnknownElement);

  // A formula over an operation the algebra does not interpret.
  Signature gsig = Signature::standard("g");
  FormulaPtr usesG = parse_formula("forall x. g(x) <= x", gsig);
  CHECK(thrown_kind([&] { evaluate(chain, usesG, {}); }) == ErrorKind::SignatureMismatch);

  FormulaPtr usesRel = rel("edge", {Term::name("x"), Term::name("x")});
  CHECK(thrown_kind([&] { evaluate(chain, forall("x", usesRel), {}); }) ==
        ErrorKind::SignatureMismatch);
}

TEST_CASE("evaluation over relational structures uses the stored relations") {
  // A two-vertex digraph: edge(a, b) only.
  Relation edge{2, {{0, 1}}};
  RelationalStructure s = RelationalStructure::validate({"a", "b"}, {{"edge", edge}});

  Signature sig = Signature::make({{"edge", 2}}, {});
  CHECK(evaluate(s, parse_formula("exists x. exists z. edge(x, z)", sig), {}));
  CHECK_FALSE(evaluate(s, parse_formula("forall x. exists z. edge(x, z)", sig), {}));
  CHECK(evaluate(s, parse_formula("forall x. forall z. (edge(x, z) -> !edge(z, x))", sig), {}));
  CHECK(evaluate(s, parse_formula("x = x", sig), {{"x", 0}}));

  // Relational structures have no operations and no implicit leq.
  Signature withOp = Signature::standard();
  CHECK(thrown_kind([&] {
          evaluate(s, parse_formula("forall x. f(x) <= x", withOp), {});
        }) == ErrorKind::SignatureMismatch);
  CHECK(thrown_kind([&] {
          evaluate(s, parse_formula("forall x. x <= x", withOp), {});
        }) == ErrorKind::SignatureMismatch);
}

TEST_CASE("build_paper_formulas validates the signature and honors the op name") {
  CHECK(thrown_kind([] { build_paper_formulas(Signature::make({{"r", 2}}, {{"f", 1}})); }) ==
        ErrorKind::SignatureMismatch);
  CHECK(thrown_kind([] { build_paper_formulas(Signature::make({{"leq", 2}}, {{"f", 2}})); }) ==
        ErrorKind::SignatureMismatch);
  CHECK(thrown_kind([] {
          build_paper_formulas(Signature::standard("g"), "f");
        }) == ErrorKind::SignatureMismatch);

  PaperFormulas pg = build_paper_formulas(Signature::standard("g"), "g");
  CHECK(print_formula(pg.alpha) == "x <= s & g(x) <= y");
}

TEST_CASE("sigma says exactly: s is the sup of A") {
  // For every poset, unary table, and pair (s, y): sigma holds iff sup A
  // exists and equals s, where A = {x : x <= s and f(x) <= y}. s is always an
  // upper bound of A, so the formula's lower-bound clause is the whole story.
  Signature sig = Signature::standard();
  PaperFormulas pf = build_paper_formulas(sig);
  for (const Poset& p : bridge_posets()) {
    const int n = p.size();
    for_all_unary_tables(n, [&](const OperationTable& f) {
      Algebra m = standard_algebra(p, f);
      for (int s = 0; s < n; ++s)
        for (int y = 0; y < n; ++y) {
          std::vector<int> A = paper_A(p, f, s, y);
          SupResult supA = sup(p, A, Direction::Up);
          bool viaOrder = supA.exists && supA.value == s;
          bool viaFormula = evaluate(m, pf.sigma, {{"s", s}, {"y", y}});
          CHECK(viaFormula == viaOrder);
        }
    });
  }
}

TEST_CASE("phi says exactly: f(s) is below every upper bound of the image of A") {
  Signature sig = Signature::standard();
  PaperFormulas pf = build_paper_formulas(sig);
  for (const Poset& p : bridge_posets()) {
    const int n = p.size();
    for_all_unary_tables(n, [&](const OperationTable& f) {
      Algebra m = standard_algebra(p, f);
      bool monotone = is_monotone(p, f).holds;
      for (int s = 0; s < n; ++s)
        for (int y = 0; y < n; ++y) {
          std::vector<int> image;
          for (int x : paper_A(p, f, s, y)) image.push_back(f.apply1(x));

          bool belowEveryUb = true;
          for (int z : upper_bounds(p, image)) belowEveryUb = belowEveryUb && p.leq(f.apply1(s), z);

          bool viaFormula = evaluate(m, pf.phi, {{"s", s}, {"y", y}});
          CHECK(viaFormula == belowEveryUb);

          // For monotone f the formula is also equivalent to the stronger
          // reading "the image sup exists and f(s) is below every upper
          // bound", because f(s) is then itself an upper bound of the image.
          if (monotone) {
            SupResult supImage = sup(p, image, Direction::Up);
            CHECK(viaFormula == (supImage.exists && belowEveryUb));
            if (viaFormula) CHECK(supImage.value == f.apply1(s));
          }
        }
    });
  }
}

TEST_CASE("for non-monotone f, phi can hold while the image sup does not exist") {
  // Bowtie a,b < c,d with f fixing a, b, d and sending c to a. At s = c,
  // y = c the set A is {a, b, c}, its image is {a, b}, and both c and d are
  // upper bounds of the image -- so there is no sup, yet phi holds because
  // f(s) = a is below every upper bound.
  Poset p = bowtie();
  OperationTable f = OperationTable::make(1, 4, {0, 1, 0, 3});
  Algebra m = standard_algebra(p, f);
  PaperFormulas pf = build_paper_formulas(Signature::standard());

  const int s = p.find_label("c"), y = p.find_label("c");
  std::vector<int> A = paper_A(p, f, s, y);
  CHECK(label_set(p, A) == "{a, b, c}");

  std::vector<int> image;
  for (int x : A) image.push_back(f.apply1(x));
  CHECK_FALSE(sup(p, image, Direction::Up).exists);
  CHECK(evaluate(m, pf.phi, {{"s", s}, {"y", y}}));
}

TEST_CASE("the unomitted sigma variant agrees with sigma everywhere") {
  Signature sig = Signature::standard();
  FormulaPtr sigma = parse_formula(corpus::corpus_entry("sigma").text, sig);
  FormulaPtr full = parse_formula(corpus::corpus_entry("sigma-unomitted").text, sig);
  XorShift rng(7);
  for (const Poset& p : bridge_posets()) {
    const int n = p.size();
    for (int trial = 0; trial < 40; ++trial) {
      OperationTable f = random_unary(rng, n);
      Algebra m = standard_algebra(p, f);
      for (int s = 0; s < n; ++s)
        for (int y = 0; y < n; ++y) {
          Assignment a{{"s", s}, {"y", y}};
          CHECK(evaluate(m, sigma, a) == evaluate(m, full, a));
        }
    }
  }
}

TEST_CASE("replay on the two-element chain with the identity map") {
  Poset p = two_chain();
  ProofReport r = replay_proof(p, fixtures::identity_op(p), {0, 1}, 1);
  CHECK(r.A == std::vector<int>{0, 1});
  CHECK(r.XsubsetA);
  CHECK(r.supA.exists);
  CHECK(r.supA.value == 1);
  CHECK(r.eq1);
  CHECK(r.sigmaHolds);
  CHECK(r.imageSupA.exists);
  CHECK(r.imageSupA.value == 1);
  CHECK(r.eq3);
  CHECK(r.phiHolds);
  CHECK(r.conclusion);
  CHECK(r.overall);
}

TEST_CASE("replay on bool4 computes A from the chosen bound") {
  Poset p = bool4();
  const int a = p.find_label("a"), top = p.find_label("1");
  ProofReport r = replay_proof(p, fixtures::identity_op(p), {a}, top);
  CHECK(r.A == std::vector<int>{0, a});  // everything below a whose image is below top
  CHECK(r.XsubsetA);
  CHECK(r.eq1);
  CHECK(r.sigmaHolds);
  CHECK(r.eq3);
  CHECK(r.phiHolds);
  CHECK(r.conclusion);
  CHECK(r.overall);

  // Tightening the bound to y = a shrinks nothing here (f = id), but an
  // incomparable bound is rejected: f(a) = a is not below b.
  const int b = p.find_label("b");
  CHECK(thrown_kind([&] { replay_proof(p, fixtures::identity_op(p), {a}, b); }) ==
        ErrorKind::PreconditionFailed);
}

TEST_CASE("replay with the empty set lands on the bottom element") {
  Poset p = bool4();
  ProofReport r = replay_proof(p, fixtures::identity_op(p), {}, 0);
  CHECK(r.A == std::vector<int>{0});
  CHECK(r.eq1);
  CHECK(r.sigmaHolds);
  CHECK(r.eq3);
  CHECK(r.phiHolds);
  CHECK(r.conclusion);
  CHECK(r.overall);
}

TEST_CASE("replay preconditions fail loudly and name the culprit") {
  Poset anti = two_antichain();
  Poset chain = two_chain();
  OperationTable id2 = fixtures::identity_op(chain);

  auto message = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return std::string(e.what());
    }
    return std::string();
  };

  // sup X missing.
  std::string m1 = message([&] { replay_proof(anti, fixtures::identity_op(anti), {0, 1}, 0); });
  CHECK(m1.find("sup of X") != std::string::npos);

  // y not an upper bound of the image.
  std::string m2 = message([&] { replay_proof(chain, id2, {1}, 0); });
  CHECK(m2.find("upper bound") != std::string::npos);

  // f not completely additive (constant-to-top breaks the empty sup).
  OperationTable toTop = fixtures::const_to_top_op(chain);
  std::string m3 = message([&] { replay_proof(chain, toTop, {0}, 1); });
  CHECK(m3.find("completely additive") != std::string::npos);

  // ... but the caller may skip the re-check, and the single-instance report
  // is still computed faithfully (this particular instance happens to work).
  ProofReport r = replay_proof(chain, toTop, {0}, 1, /*verifyAdditivity=*/false);
  CHECK(r.eq1);
  CHECK(r.sigmaHolds);
  CHECK(r.eq3);
  CHECK(r.phiHolds);
  CHECK(r.conclusion);
  CHECK(r.overall);

  // Arity and carrier mismatches.
  OperationTable binary = fixtures::join_op(chain);
  CHECK(thrown_kind([&] { replay_proof(chain, binary, {0}, 1); }) ==
        ErrorKind::PreconditionFailed);
  OperationTable wrong = fixtures::identity_op(bool4());
  CHECK(thrown_kind([&] { replay_proof(chain, wrong, {0}, 1); }) ==
        ErrorKind::PreconditionFailed);
  CHECK(thrown_kind([&] { replay_proof(chain, id2, {5}, 1); }) == ErrorKind::UnknownElement);
  CHECK(thrown_kind([&] { replay_proof(chain, id2, {0}, 5); }) == ErrorKind::UnknownElement);
}

TEST_CASE("replay is sound: every completely additive map passes every valid instance") {
  for (const Poset& p : bridge_posets()) {
    const int n = p.size();
    auto subsets = oracle::all_subsets(n, /*includeEmpty=*/true);
    for_all_unary_tables(n, [&](const OperationTable& f) {
      if (!is_completely_additive(p, f).holds) return;
      for (const auto& X : subsets) {
        if (!sup(p, X, Direction::Up).exists) continue;
        for (int y = 0; y < n; ++y) {
          bool ub = true;
          for (int x : X) ub = ub && p.leq(f.apply1(x), y);
          if (!ub) continue;
          ProofReport r = replay_proof(p, f, X, y, /*verifyAdditivity=*/false);
          CHECK(r.XsubsetA);
          CHECK(r.eq1);
          CHECK(r.sigmaHolds);
          CHECK(r.eq3);
          CHECK(r.phiHolds);
          CHECK(r.conclusion);
          CHECK(r.overall);
        }
      }
    });
  }
}
