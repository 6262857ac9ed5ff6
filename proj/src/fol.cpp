#include "ultraposet/fol.hpp"

#include <cctype>
#include <optional>
#include <utility>

namespace ultraposet {

// ---------------------------------------------------------------------------
// Signature

Signature Signature::make(std::map<std::string, int> relations,
                          std::map<std::string, int> operations) {
  for (const auto& [name, arity] : relations)
    if (arity < 1)
      fail(ErrorKind::SignatureMismatch, "relation '" + name + "' must have arity >= 1");
  for (const auto& [name, arity] : operations) {
    if (arity < 1)
      fail(ErrorKind::SignatureMismatch, "operation '" + name + "' must have arity >= 1");
    if (relations.count(name))
      fail(ErrorKind::SignatureMismatch, "symbol '" + name + "' declared as both kinds");
  }
  Signature s;
  s.relations = std::move(relations);
  s.operations = std::move(operations);
  return s;
}

Signature Signature::standard(const std::string& opName) {
  return make({{"leq", 2}}, {{opName, 1}});
}

// ---------------------------------------------------------------------------
// AST factories

namespace {

std::shared_ptr<Formula> mutable_node(FormulaKind kind) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  return f;
}

}  // namespace

FormulaPtr leq(Term l, Term r) {
  auto f = mutable_node(FormulaKind::Leq);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr eq(Term l, Term r) {
  auto f = mutable_node(FormulaKind::Eq);
  f->lhs = std::move(l);
  f->rhs = std::move(r);
  return f;
}

FormulaPtr rel(std::string name, std::vector<Term> args) {
  auto f = mutable_node(FormulaKind::Rel);
  f->relName = std::move(name);
  f->relArgs = std::move(args);
  return f;
}

FormulaPtr lnot(FormulaPtr x) {
  auto f = mutable_node(FormulaKind::Not);
  f->a = std::move(x);
  return f;
}

namespace {
FormulaPtr binary(FormulaKind kind, FormulaPtr l, FormulaPtr r) {
  auto f = mutable_node(kind);
  f->a = std::move(l);
  f->b = std::move(r);
  return f;
}
FormulaPtr quantifier(FormulaKind kind, std::string var, FormulaPtr body) {
  auto f = mutable_node(kind);
  f->var = std::move(var);
  f->a = std::move(body);
  return f;
}
}  // namespace

FormulaPtr land(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::And, std::move(l), std::move(r)); }
FormulaPtr lor(FormulaPtr l, FormulaPtr r) { return binary(FormulaKind::Or, std::move(l), std::move(r)); }
FormulaPtr implies(FormulaPtr l, FormulaPtr r) {
  return binary(FormulaKind::Implies, std::move(l), std::move(r));
}
FormulaPtr forall(std::string var, FormulaPtr body) {
  return quantifier(FormulaKind::Forall, std::move(var), std::move(body));
}
FormulaPtr exists(std::string var, FormulaPtr body) {
  return quantifier(FormulaKind::Exists, std::move(var), std::move(body));
}

bool formulas_equal(const FormulaPtr& x, const FormulaPtr& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case FormulaKind::Leq:
    case FormulaKind::Eq:
      return x->lhs == y->lhs && x->rhs == y->rhs;
    case FormulaKind::Rel:
      return x->relName == y->relName && x->relArgs == y->relArgs;
    case FormulaKind::Not:
      return formulas_equal(x->a, y->a);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      return formulas_equal(x->a, y->a) && formulas_equal(x->b, y->b);
    case FormulaKind::Forall:
    case FormulaKind::Exists:
      return x->var == y->var && formulas_equal(x->a, y->a);
  }
  return false;
}

namespace {

void term_names(const Term& t, std::set<std::string>& out) {
  if (t.is_name()) {
    out.insert(t.head);
    return;
  }
  for (const auto& a : t.args) term_names(a, out);
}

void collect_free(const FormulaPtr& f, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  auto addTerm = [&](const Term& t) {
    std::set<std::string> names;
    term_names(t, names);
    for (const auto& n : names)
      if (!bound.count(n)) out.insert(n);
  };
  switch (f->kind) {
    case FormulaKind::Leq:
    case FormulaKind::Eq:
      addTerm(f->lhs);
      addTerm(f->rhs);
      return;
    case FormulaKind::Rel:
      for (const auto& t : f->relArgs) addTerm(t);
      return;
    case FormulaKind::Not:
      collect_free(f->a, bound, out);
      return;
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
      collect_free(f->a, bound, out);
      collect_free(f->b, bound, out);
      return;
    case FormulaKind::Forall:
    case FormulaKind::Exists: {
      bool fresh = bound.insert(f->var).second;
      collect_free(f->a, bound, out);
      if (fresh) bound.erase(f->var);
      return;
    }
  }
}

}  // namespace

std::set<std::string> free_names(const FormulaPtr& f) {
  std::set<std::string> bound, out;
  collect_free(f, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, LParen, RParen, Comma, Dot, Leq, Eq, Arrow, Bar, Amp, Bang, End };

struct Token {
  Tok kind;
  std::string text;
  int pos;
};

const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::Comma: return "','";
    case Tok::Dot: return "'.'";
    case Tok::Leq: return "'<='";
    case Tok::Eq: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::Bar: return "'|'";
    case Tok::Amp: return "'&'";
    case Tok::Bang: return "'!'";
    case Tok::End: return "end of input";
  }
  return "?";
}

[[noreturn]] void syntax_error(int pos, const std::string& expected, const std::string& got) {
  fail(ErrorKind::SyntaxError,
       "position " + std::to_string(pos) + ": expected " + expected + ", got " + got);
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    int pos = int(i);
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", pos}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", pos}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", pos}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", pos}); ++i; continue;
      case '|': out.push_back({Tok::Bar, "|", pos}); ++i; continue;
      case '&': out.push_back({Tok::Amp, "&", pos}); ++i; continue;
      case '!': out.push_back({Tok::Bang, "!", pos}); ++i; continue;
      case '=': out.push_back({Tok::Eq, "=", pos}); ++i; continue;
      case '<':
        if (i + 1 < text.size() && text[i + 1] == '=') {
          out.push_back({Tok::Leq, "<=", pos});
          i += 2;
          continue;
        }
        syntax_error(pos, "'<='", "'<'");
      case '-':
        if (i + 1 < text.size() && text[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", pos});
          i += 2;
          continue;
        }
        syntax_error(pos, "'->'", "'-'");
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t j = i + 1;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      out.push_back({Tok::Ident, std::string(text.substr(i, j - i)), pos});
      i = j;
      continue;
    }
    syntax_error(pos, "a token", "'" + std::string(1, c) + "'");
  }
  out.push_back({Tok::End, "", int(text.size())});
  return out;
}

bool is_keyword(const std::string& s) { return s == "forall" || s == "exists"; }

struct Parser {
  const Signature& sig;
  std::vector<Token> toks;
  std::size_t i = 0;

  const Token& peek(int ahead = 0) const {
    std::size_t k = i + std::size_t(ahead);
    return k < toks.size() ? toks[k] : toks.back();
  }

  Token eat(Tok kind) {
    if (peek().kind != kind)
      syntax_error(peek().pos, tok_name(kind),
                   peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'");
    return toks[i++];
  }

  FormulaPtr formula() {
    if (peek().kind == Tok::Ident && is_keyword(peek().text)) {
      bool universal = peek().text == "forall";
      ++i;
      Token var = eat(Tok::Ident);
      if (is_keyword(var.text))
        syntax_error(var.pos, "a variable name", "keyword '" + var.text + "'");
      eat(Tok::Dot);
      FormulaPtr body = formula();
      return universal ? forall(var.text, std::move(body)) : exists(var.text, std::move(body));
    }
    return imp();
  }

  FormulaPtr imp() {
    FormulaPtr l = disj();
    if (peek().kind == Tok::Arrow) {
      ++i;
      return implies(std::move(l), imp());  // right-associative
    }
    return l;
  }

  FormulaPtr disj() {
    FormulaPtr f = conj();
    while (peek().kind == Tok::Bar) {
      ++i;
      f = lor(std::move(f), conj());
    }
    return f;
  }

  FormulaPtr conj() {
    FormulaPtr f = neg();
    while (peek().kind == Tok::Amp) {
      ++i;
      f = land(std::move(f), neg());
    }
    return f;
  }

  FormulaPtr neg() {
    if (peek().kind == Tok::Bang) {
      ++i;
      return lnot(neg());
    }
    return atom();
  }

  FormulaPtr atom() {
    if (peek().kind == Tok::LParen) {
      ++i;
      FormulaPtr f = formula();
      eat(Tok::RParen);
      return f;
    }
    // relation atom: relation-symbol '(' args ')'
    if (peek().kind == Tok::Ident && sig.relations.count(peek().text) &&
        peek(1).kind == Tok::LParen) {
      Token name = eat(Tok::Ident);
      auto args = argument_list();
      int arity = sig.relations.at(name.text);
      if (int(args.size()) != arity)
        fail(ErrorKind::ArityMismatch, "relation '" + name.text + "' expects " +
                                           std::to_string(arity) + " arguments, got " +
                                           std::to_string(args.size()));
      return rel(name.text, std::move(args));
    }
    Term l = term();
    if (peek().kind == Tok::Leq) {
      ++i;
      return leq(std::move(l), term());
    }
    if (peek().kind == Tok::Eq) {
      ++i;
      return eq(std::move(l), term());
    }
    syntax_error(peek().pos, "'<=' or '='",
                 peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'");
  }

  std::vector<Term> argument_list() {
    eat(Tok::LParen);
    std::vector<Term> args;
    args.push_back(term());
    while (peek().kind == Tok::Comma) {
      ++i;
      args.push_back(term());
    }
    eat(Tok::RParen);
    return args;
  }

  Term term() {
    Token head = eat(Tok::Ident);
    if (is_keyword(head.text))
      syntax_error(head.pos, "a term", "keyword '" + head.text + "'");
    if (peek().kind == Tok::LParen) {
      auto it = sig.operations.find(head.text);
      if (it == sig.operations.end()) {
        if (sig.relations.count(head.text))
          fail(ErrorKind::UnknownSymbol,
               "relation symbol '" + head.text + "' cannot appear inside a term");
        fail(ErrorKind::UnknownSymbol, "unknown operation symbol '" + head.text + "'");
      }
      auto args = argument_list();
      if (int(args.size()) != it->second)
        fail(ErrorKind::ArityMismatch, "operation '" + head.text + "' expects " +
                                           std::to_string(it->second) + " arguments, got " +
                                           std::to_string(args.size()));
      return Term::app(head.text, std::move(args));
    }
    if (sig.operations.count(head.text) || sig.relations.count(head.text))
      fail(ErrorKind::ArityMismatch,
           "symbol '" + head.text + "' cannot be used without arguments");
    return Term::name(head.text);
  }
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  Parser p{sig, lex(text)};
  FormulaPtr f = p.formula();
  if (p.peek().kind != Tok::End)
    syntax_error(p.peek().pos, "end of input", "'" + p.peek().text + "'");
  return f;
}

// ---------------------------------------------------------------------------
// Printer

namespace {

int precedence(FormulaKind k) {
  switch (k) {
    case FormulaKind::Forall:
    case FormulaKind::Exists: return 0;
    case FormulaKind::Implies: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Not: return 4;
    default: return 5;
  }
}

std::string print_term(const Term& t) {
  if (t.is_name()) return t.head;
  std::string s = t.head + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ", ";
    s += print_term(t.args[i]);
  }
  return s + ")";
}

std::string print_at(const FormulaPtr& f, int minPrec) {
  std::string s;
  switch (f->kind) {
    case FormulaKind::Leq: s = print_term(f->lhs) + " <= " + print_term(f->rhs); break;
    case FormulaKind::Eq: s = print_term(f->lhs) + " = " + print_term(f->rhs); break;
    case FormulaKind::Rel: {
      s = f->relName + "(";
      for (std::size_t i = 0; i < f->relArgs.size(); ++i) {
        if (i) s += ", ";
        s += print_term(f->relArgs[i]);
      }
      s += ")";
      break;
    }
    case FormulaKind::Not: s = "!" + print_at(f->a, 4); break;
    case FormulaKind::And: s = print_at(f->a, 3) + " & " + print_at(f->b, 4); break;
    case FormulaKind::Or: s = print_at(f->a, 2) + " | " + print_at(f->b, 3); break;
    case FormulaKind::Implies: s = print_at(f->a, 2) + " -> " + print_at(f->b, 1); break;
    case FormulaKind::Forall: s = "forall " + f->var + ". " + print_at(f->a, 0); break;
    case FormulaKind::Exists: s = "exists " + f->var + ". " + print_at(f->a, 0); break;
  }
  if (precedence(f->kind) < minPrec) return "(" + s + ")";
  return s;
}

}  // namespace

std::string print_formula(const FormulaPtr& f) { return print_at(f, 0); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

struct AlgebraModel {
  const Algebra& alg;
  int size() const { return alg.poset.size(); }
  bool rel_holds(const std::string& name, const std::vector<int>& ids) const {
    if (name == "leq" && ids.size() == 2) return alg.poset.leq(ids[0], ids[1]);
    fail(ErrorKind::SignatureMismatch, "structure does not interpret relation '" + name + "'");
  }
  int apply_op(const std::string& name, const std::vector<int>& ids) const {
    auto it = alg.ops.find(name);
    if (it == alg.ops.end())
      fail(ErrorKind::SignatureMismatch,
           "structure does not interpret operation '" + name + "'");
    if (int(ids.size()) != it->second.arity)
      fail(ErrorKind::SignatureMismatch, "operation '" + name + "' arity mismatch");
    return it->second.apply(ids);
  }
};

struct RelationalModel {
  const RelationalStructure& s;
  int size() const { return s.size(); }
  bool rel_holds(const std::string& name, const std::vector<int>& ids) const {
    return s.holds(name, ids);
  }
  int apply_op(const std::string& name, const std::vector<int>&) const {
    fail(ErrorKind::SignatureMismatch,
         "relational structure does not interpret operation '" + name + "'");
  }
};

template <typename Model>
struct Evaluator {
  const Model& m;
  const Assignment& base;
  std::map<std::string, int> bound;

  int term(const Term& t) {
    if (t.is_name()) {
      if (auto it = bound.find(t.head); it != bound.end()) return it->second;
      if (auto it = base.find(t.head); it != base.end()) {
        if (it->second < 0 || it->second >= m.size())
          fail(ErrorKind::UnknownElement,
               "assignment maps '" + t.head + "' outside the carrier");
        return it->second;
      }
      fail(ErrorKind::UnboundName, "unbound name '" + t.head + "'");
    }
    std::vector<int> ids;
    ids.reserve(t.args.size());
    for (const auto& a : t.args) ids.push_back(term(a));
    return m.apply_op(t.head, ids);
  }

  bool go(const FormulaPtr& f) {
    switch (f->kind) {
      case FormulaKind::Leq: return m.rel_holds("leq", {term(f->lhs), term(f->rhs)});
      case FormulaKind::Eq: return term(f->lhs) == term(f->rhs);
      case FormulaKind::Rel: {
        std::vector<int> ids;
        ids.reserve(f->relArgs.size());
        for (const auto& t : f->relArgs) ids.push_back(term(t));
        return m.rel_holds(f->relName, ids);
      }
      case FormulaKind::Not: return !go(f->a);
      case FormulaKind::And: return go(f->a) && go(f->b);
      case FormulaKind::Or: return go(f->a) || go(f->b);
      case FormulaKind::Implies: return !go(f->a) || go(f->b);
      case FormulaKind::Forall:
      case FormulaKind::Exists: {
        bool universal = f->kind == FormulaKind::Forall;
        auto saved = bound.find(f->var) != bound.end()
                         ? std::optional<int>(bound[f->var])
                         : std::nullopt;
        bool result = universal;
        for (int v = 0; v < m.size(); ++v) {
          bound[f->var] = v;
          bool inner = go(f->a);
          if (universal && !inner) {
            result = false;
            break;
          }
          if (!universal && inner) {
            result = true;
            break;
          }
        }
        if (saved)
          bound[f->var] = *saved;
        else
          bound.erase(f->var);
        return result;
      }
    }
    fail(ErrorKind::SignatureMismatch, "malformed formula node");
  }
};

}  // namespace

bool evaluate(const Algebra& m, const FormulaPtr& f, const Assignment& a) {
  AlgebraModel model{m};
  Evaluator<AlgebraModel> ev{model, a, {}};
  return ev.go(f);
}

bool evaluate(const RelationalStructure& m, const FormulaPtr& f, const Assignment& a) {
  RelationalModel model{m};
  Evaluator<RelationalModel> ev{model, a, {}};
  return ev.go(f);
}

// ---------------------------------------------------------------------------
// Proof formulas and the replay

PaperFormulas build_paper_formulas(const Signature& sig, const std::string& opName) {
  auto relIt = sig.relations.find("leq");
  if (relIt == sig.relations.end() || relIt->second != 2)
    fail(ErrorKind::SignatureMismatch, "signature must contain leq/2");
  auto opIt = sig.operations.find(opName);
  if (opIt == sig.operations.end() || opIt->second != 1)
    fail(ErrorKind::SignatureMismatch, "signature must contain " + opName + "/1");

  Term x = Term::name("x"), s = Term::name("s"), y = Term::name("y"), z = Term::name("z");
  Term fx = Term::app(opName, {x});
  Term fs = Term::app(opName, {s});

  PaperFormulas out;
  out.alpha = land(leq(x, s), leq(fx, y));
  out.sigma = forall("z", implies(forall("x", implies(out.alpha, leq(x, z))), leq(s, z)));
  out.phi = forall("z", implies(forall("x", implies(out.alpha, leq(fx, z))), leq(fs, z)));
  return out;
}

ProofReport replay_proof(const Poset& p, const OperationTable& f, const std::vector<int>& X,
                         int y, bool verifyAdditivity) {
  if (f.arity != 1)
    fail(ErrorKind::PreconditionFailed, "replay requires a unary operation, got arity " +
                                            std::to_string(f.arity));
  if (f.carrier != p.size())
    fail(ErrorKind::PreconditionFailed, "operation carrier does not match the poset");
  for (int x : X) p.check_element(x);
  p.check_element(y);

  SupResult sX = sup(p, X, Direction::Up);
  if (!sX.exists)
    fail(ErrorKind::PreconditionFailed, "sup of X does not exist (" + sX.reason + ")");
  const int s = sX.value;

  for (int x : X)
    if (!p.leq(f.apply1(x), y))
      fail(ErrorKind::PreconditionFailed,
           "y is not an upper bound of the image: f(" + p.label(x) + ") = " +
               p.label(f.apply1(x)) + " is not below " + p.label(y));

  if (verifyAdditivity && !is_completely_additive(p, f).holds)
    fail(ErrorKind::PreconditionFailed, "f is not completely additive");

  ProofReport r;
  for (int x = 0; x < p.size(); ++x)
    if (p.leq(x, s) && p.leq(f.apply1(x), y)) r.A.push_back(x);

  r.XsubsetA = true;
  for (int x : X) {
    bool found = false;
    for (int a : r.A) found = found || a == x;
    r.XsubsetA = r.XsubsetA && found;
  }

  r.supA = sup(p, r.A, Direction::Up);
  r.eq1 = r.supA.exists && r.supA.value == s;

  std::vector<int> imageA;
  for (int a : r.A) imageA.push_back(f.apply1(a));
  r.imageSupA = sup(p, imageA, Direction::Up);
  r.eq3 = r.imageSupA.exists && r.imageSupA.value == f.apply1(s);

  Algebra m{p, {{"f", f}}};
  PaperFormulas pf = build_paper_formulas(Signature::standard());
  Assignment assign{{"s", s}, {"y", y}};
  r.sigmaHolds = evaluate(m, pf.sigma, assign);
  r.phiHolds = evaluate(m, pf.phi, assign);

  r.conclusion = p.leq(f.apply1(s), y);

  std::vector<int> imageX;
  for (int x : X) imageX.push_back(f.apply1(x));
  SupResult sImageX = sup(p, imageX, Direction::Up);
  r.overall = sImageX.exists && sImageX.value == f.apply1(s);
  return r;
}

}  // namespace ultraposet
