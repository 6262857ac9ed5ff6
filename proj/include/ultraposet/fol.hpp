#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ultraposet/order.hpp"
#include "ultraposet/relational.hpp"

namespace ultraposet {

/// Symbol table: relation and operation names with arities. Names must be
/// unique across both kinds; relation arities >= 1, operation arities >= 1.
struct Signature {
  std::map<std::string, int> relations;
  std::map<std::string, int> operations;

  static Signature make(std::map<std::string, int> relations,
                        std::map<std::string, int> operations);

  /// leq/2 plus a single unary operation symbol (default "f").
  static Signature standard(const std::string& opName = "f");
};

/// Term: a bare name (variable or parameter, resolved by the Assignment at
/// evaluation time) or an operation application. args.empty() <=> bare name.
struct Term {
  std::string head;
  std::vector<Term> args;

  static Term name(std::string n) { return {std::move(n), {}}; }
  static Term app(std::string op, std::vector<Term> arguments) {
    return {std::move(op), std::move(arguments)};
  }
  bool is_name() const { return args.empty(); }

  bool operator==(const Term&) const = default;
};

enum class FormulaKind { Leq, Eq, Rel, Not, And, Or, Implies, Forall, Exists };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaKind kind;
  // Leq/Eq use lhs,rhs; Rel uses relName + relArgs; Not uses a;
  // And/Or/Implies use a,b; Forall/Exists use var + a (the body).
  Term lhs, rhs;
  std::string relName;
  std::vector<Term> relArgs;
  FormulaPtr a, b;
  std::string var;
};

FormulaPtr leq(Term l, Term r);
FormulaPtr eq(Term l, Term r);
FormulaPtr rel(std::string name, std::vector<Term> args);
FormulaPtr lnot(FormulaPtr f);
FormulaPtr land(FormulaPtr l, FormulaPtr r);
FormulaPtr lor(FormulaPtr l, FormulaPtr r);
FormulaPtr implies(FormulaPtr l, FormulaPtr r);
FormulaPtr forall(std::string var, FormulaPtr body);
FormulaPtr exists(std::string var, FormulaPtr body);

bool formulas_equal(const FormulaPtr& x, const FormulaPtr& y);
std::set<std::string> free_names(const FormulaPtr& f);

/// Recursive-descent parser for the text grammar:
///   formula := 'forall' ident '.' formula | 'exists' ident '.' formula | imp
///   imp     := disj ('->' imp)?
///   disj    := conj ('|' conj)*
///   conj    := neg ('&' neg)*
///   neg     := '!' neg | atom
///   atom    := term '<=' term | term '=' term | '(' formula ')'
///   term    := ident | ident '(' term (',' term)* ')'
/// Quantifier bodies extend maximally; '->' is right-associative. An
/// application whose head is a relation symbol of the signature is accepted
/// as an atom directly (r(t1,...,tn)).
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

/// Minimal-parenthesis rendering; parse(print(f)) is structurally f.
std::string print_formula(const FormulaPtr& f);

using Assignment = std::map<std::string, int>;

/// Tarskian truth over the finite carrier; quantifiers sweep every element.
/// Free names resolve through bound variables first, then the assignment.
bool evaluate(const Algebra& m, const FormulaPtr& f, const Assignment& a);
bool evaluate(const RelationalStructure& m, const FormulaPtr& f, const Assignment& a);

/// The three proof formulas over free names x, s, y:
///   alpha = x <= s & opName(x) <= y
///   sigma = forall z. ((forall x. (alpha -> x <= z)) -> s <= z)
///   phi   = forall z. ((forall x. (alpha -> opName(x) <= z)) -> opName(s) <= z)
struct PaperFormulas {
  FormulaPtr alpha, sigma, phi;
};

PaperFormulas build_paper_formulas(const Signature& sig, const std::string& opName = "f");

/// Field-by-field transcript of the unary preservation argument for one
/// (X, y) instance. The sup fields come from order-core; sigmaHolds/phiHolds
/// from the formula evaluator; the two routes are independent.
struct ProofReport {
  std::vector<int> A;       // {x : x <= s and f(x) <= y}
  bool XsubsetA = false;
  SupResult supA;
  bool eq1 = false;         // s == sup A
  bool sigmaHolds = false;
  SupResult imageSupA;      // sup f(A)
  bool eq3 = false;         // f(s) == sup f(A)
  bool phiHolds = false;
  bool conclusion = false;  // f(s) <= y
  bool overall = false;     // f(s) == sup f(X)
};

/// Requires: sup X exists; y is an upper bound of {f(x) : x in X}; f is
/// completely additive (re-verified unless verifyAdditivity=false, for
/// callers that have already checked it once).
ProofReport replay_proof(const Poset& p, const OperationTable& f, const std::vector<int>& X,
                         int y, bool verifyAdditivity = true);

}  // namespace ultraposet
