#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ultraposet/fol.hpp"
#include "ultraposet/order.hpp"
#include "ultraposet/relational.hpp"

namespace ultraposet {

/// Finite index set I = {0, .., size-1} with display labels.
struct IndexSet {
  int size = 0;
  std::vector<std::string> labels;

  static IndexSet make(int size);                       // labels "0", "1", ...
  static IndexSet make(std::vector<std::string> labels);
};

/// Principal filter on a finite index set, stored by its generator J: the
/// filter is {S : J subset of S}. Every filter on a finite set is of this
/// form, and it is an ultrafilter exactly when |J| = 1. (The classically
/// interesting nonprincipal ultrafilters live on infinite index sets and
/// have no finite realization; this toolkit works the principal shadow.)
struct FilterSpec {
  IndexSet index;
  std::vector<int> generator;  // sorted, deduplicated, nonempty
  bool isUltra = false;

  bool contains(const std::vector<int>& S) const;  // J subset of S
};

FilterSpec make_filter(const IndexSet& ix, const std::vector<int>& generator);

/// Indexed family of structures over one shared signature.
template <typename M>
struct Family {
  IndexSet index;
  std::vector<M> members;
};

using AlgebraFamily = Family<Algebra>;
using RelationalFamily = Family<RelationalStructure>;

/// Member count matches the index set; all members interpret the same
/// operation (resp. relation) names at the same arities.
void validate_family(const AlgebraFamily& fam);        // ValidationError, SignatureMismatch
void validate_family(const RelationalFamily& fam);

/// One class of the reduced product: tuples agreeing on every generator
/// coordinate. The canonical representative is the lexicographically least
/// tuple of the class (generator coordinates kept, others zeroed).
struct QuotientElement {
  std::vector<int> representative;
  int classId = -1;
};

/// Direct product: carrier = all index tuples (leftmost index most
/// significant), order/relations/operations componentwise. tuples[id] is the
/// decoded tuple, i.e. the per-index projections of element id.
struct ProductResult {
  Algebra product;
  std::vector<std::vector<int>> tuples;
};

struct RelationalProductResult {
  RelationalStructure product;
  std::vector<std::vector<int>> tuples;
};

ProductResult direct_product(const AlgebraFamily& fam);             // CapExceeded
RelationalProductResult direct_product(const RelationalFamily& fam);

/// Reduced product modulo the principal filter: classes are J-projections,
/// relations hold iff they hold on a filter set of coordinates (equivalently
/// on every generator coordinate), operations act on representatives.
/// subProduct is the direct product of the J-subfamily and canonicalIso maps
/// classId -> subProduct element id; by the canonical choice of class ids the
/// map is the identity, returned explicitly as the isomorphism witness.
struct ReducedResult {
  Algebra quotient;
  std::vector<QuotientElement> classes;   // classId -> canonical representative
  std::vector<int> quotientMap;           // direct-product element id -> classId
  ProductResult subProduct;
  std::vector<int> canonicalIso;          // classId -> subProduct id
};

struct RelationalReducedResult {
  RelationalStructure quotient;
  std::vector<QuotientElement> classes;
  std::vector<int> quotientMap;
  RelationalProductResult subProduct;
  std::vector<int> canonicalIso;
};

ReducedResult reduced_product(const AlgebraFamily& fam, const FilterSpec& fs);
RelationalReducedResult reduced_product(const RelationalFamily& fam, const FilterSpec& fs);

/// The Los agreement check for one formula and one per-index assignment:
/// J_true collects the indices whose member satisfies the formula; the
/// reduced product is evaluated at the classes of the assignment tuples.
/// For ultrafilters agree must hold; for proper non-ultra filters it is
/// informational.
struct LosReport {
  std::vector<int> J_true;
  bool inFilter = false;
  bool productSatisfies = false;
  bool agree = false;
};

LosReport los_check(const AlgebraFamily& fam, const FilterSpec& fs, const FormulaPtr& phi,
                    const std::vector<Assignment>& perIndex);
LosReport los_check(const RelationalFamily& fam, const FilterSpec& fs, const FormulaPtr& phi,
                    const std::vector<Assignment>& perIndex);

/// Exhaustive isomorphism search (backtracking with degree-invariant
/// pruning). Returns the element map A -> B, or nullopt when none exists.
/// Carriers capped at Caps::current().isoCarrier.
std::optional<std::vector<int>> iso_search(const Poset& a, const Poset& b);
std::optional<std::vector<int>> iso_search(const Algebra& a, const Algebra& b);
std::optional<std::vector<int>> iso_search(const RelationalStructure& a,
                                           const RelationalStructure& b);

/// Which preservation property the end-to-end check carries through the
/// ultraproduct: sup-preservation for all subsets, or for nonempty ones.
enum class PreservationMode { CompleteAdditivity, QuasiCompleteness };

struct Theorem1Report {
  ReducedResult ultraproduct;
  std::map<std::string, bool> additivityVerdicts;  // per induced operation
  // For each unary operation: the per-factor sets A_i = {x : x <= s_i and
  // f_i(x) <= y_i} at the canonical representatives of the replayed instance.
  std::map<std::string, std::vector<std::vector<int>>> perFactorSets;
  bool pass = false;
};

/// Checks that every member operation has the chosen preservation property
/// (PreconditionFailed otherwise), builds the ultraproduct, and re-checks
/// every induced operation there. pass iff all induced checks hold.
Theorem1Report theorem1_check(const AlgebraFamily& fam, const FilterSpec& fs,
                              PreservationMode mode = PreservationMode::CompleteAdditivity);

}  // namespace ultraposet
