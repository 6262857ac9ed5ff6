#pragma once

#include <map>
#include <string>
#include <vector>

#include "ultraposet/order.hpp"
#include "ultraposet/product.hpp"
#include "ultraposet/relational.hpp"

namespace ultraposet {

/// Boolean algebra with operators over a finite powerset. Element ids are
/// atom bitmasks (id 0 = bottom, id 2^atomCount - 1 = top) and labels are
/// brace-wrapped atom sets like "{a,c}". The boolean tables are fixed by the
/// lattice; `operators` carries the extra operations and is allowed to hold
/// non-additive tables so the additivity checks below have something to say.
struct BAO {
  Poset lattice;
  OperationTable meet;
  OperationTable join;
  OperationTable complement;
  std::map<std::string, OperationTable> operators;
  int atomCount = 0;

  bool operator==(const BAO&) const = default;
};

/// Powerset algebra over named atoms, with caller-supplied operator tables
/// (each table indexed by atom masks). Validates the cap (atom count <=
/// complex cap), operator arities >= 1, and table shapes.
/// Operator names "meet", "join", "not" are reserved.
/// Throws CapExceeded / ArityCarrierMismatch / ValidationError.
BAO make_bao(std::vector<std::string> atomLabels,
             std::map<std::string, OperationTable> operators);

/// Complex algebra of a relational structure: carrier = all subsets of s,
/// ordered by inclusion; every relation R of arity n+1 becomes the n-ary
/// existential-image operator
///   f_R(X_1,...,X_n) = { y : exists x_i in X_i with (x_1,...,x_n,y) in R }.
/// Relations of arity 1 have no operator arity to map to and are rejected
/// with ValidationError. Throws CapExceeded when |s| exceeds the complex cap
/// or an operator table would exceed the table cap.
BAO complex_algebra(const RelationalStructure& s);

/// Inverse construction: carrier = atoms of b, and each n-ary operator f
/// contributes the (n+1)-ary relation { (a_1,...,a_n,c) : c <= f(a_1,...,a_n) }
/// over atoms. Accepts any BAO whose lattice is atomic with a full powerset
/// of atom-sets (complex_algebra outputs and isomorphic copies); otherwise
/// throws NotAtomic.
RelationalStructure atom_structure(const BAO& b);

/// True iff the named operator sends every argument tuple with at least one
/// bottom coordinate to bottom.
bool is_normal_operator(const BAO& b, const std::string& name);

/// Complete additivity via the atom-image characterization: f is completely
/// additive on a powerset algebra iff every value f(X_1,...,X_n) equals the
/// union of f over the atom tuples below the arguments (empty union = empty
/// set). Unlike the subset-enumerating checker this stays polynomial in the
/// carrier, so it works at the full complex-algebra scale.
bool is_operator_additive(const BAO& b, const std::string& name);

/// True iff every operator of b passes is_quasi_complete on b's lattice —
/// the hypothesis the completion step of the Givant argument needs.
/// Subject to the additivity enumeration caps.
bool check_quasi_complete_operators(const BAO& b);

/// Outcome of the finite-scale canonical-isomorphism check. lhs is the
/// complex algebra of the reduced product of the structures; rhs is the
/// Dedekind-MacNeille completion of the reduced product of the member
/// complex algebras, with all tables transported along the (bijective at
/// finite scale) completion embedding.
struct GivantReport {
  BAO lhs;
  BAO rhs;
  std::vector<int> coreToCompletion;  // reduced-product class id -> rhs id
  std::vector<int> canonicalMap;      // rhs id -> lhs id
  bool isIso = false;
};

/// Builds both sides, computes the canonical map
///   X/F  |->  { u/F : {i : u_i in X_i} in F }
/// from its definition, and verifies it is a bijection preserving order, the
/// boolean operations, and every operator. Requires an ultrafilter
/// (PreconditionFailed otherwise); caps apply to the products, powersets,
/// and the completion.
GivantReport givant_check(const RelationalFamily& fam, const FilterSpec& fs);

}  // namespace ultraposet
