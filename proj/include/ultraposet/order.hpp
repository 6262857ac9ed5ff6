#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ultraposet/bitset.hpp"
#include "ultraposet/error.hpp"

namespace ultraposet {

/// Finite poset over a dense carrier 0..n-1. The relation is stored closed
/// (reflexive and transitive); rows and columns are bitsets so upper-bound
/// intersections are word-parallel.
class Poset {
public:
  Poset() = default;

  /// Builds the reflexive-transitive closure of the generating pairs and
  /// checks antisymmetry. Throws DuplicateLabel or AntisymmetryViolation
  /// (naming the offending cycle).
  static Poset validate(const std::vector<std::string>& labels,
                        const std::vector<std::pair<int, int>>& pairs);

  /// Trusted constructor for relations already known to be posets (products,
  /// quotients, downset lattices). Only reflexivity is asserted; callers are
  /// verified by check_axioms in tests.
  static Poset from_closed(std::vector<std::string> labels, std::vector<Bitset> upRows);

  int size() const { return int(labels_.size()); }
  bool leq(int x, int y) const { return up_[x].test(y); }
  const Bitset& up(int x) const { return up_[x]; }
  const Bitset& down(int x) const { return down_[x]; }

  /// Mask forms; valid while size() <= 32 (all enumeration-capped callers).
  std::uint32_t up_mask(int x) const { return up_[x].low_mask(); }
  std::uint32_t down_mask(int x) const { return down_[x].low_mask(); }
  std::uint32_t full_mask() const;

  const std::string& label(int x) const { return labels_[x]; }
  const std::vector<std::string>& labels() const { return labels_; }
  int find_label(std::string_view label) const;  // -1 when absent
  void check_element(int x) const;               // UnknownElement

  /// Full machine check of reflexivity, antisymmetry, transitivity.
  bool check_axioms(std::string* why = nullptr) const;

  /// Cover pairs (the transitive reduction), sorted. The canonical save form.
  std::vector<std::pair<int, int>> cover_pairs() const;

  /// Deterministic linear extension (Kahn's algorithm, smallest id first).
  std::vector<int> linear_extension() const;

  std::vector<int> maximal_elements() const;

  bool operator==(const Poset& o) const { return labels_ == o.labels_ && up_ == o.up_; }

private:
  std::vector<std::string> labels_;
  std::vector<Bitset> up_, down_;
};

/// Total n-ary operation on a carrier, given by an explicit table.
/// Index convention: leftmost argument is most significant, i.e.
/// index(a1,..,ak) = ((a1*n)+a2)*n+... .
struct OperationTable {
  int arity = 1;
  int carrier = 0;
  std::vector<int> table;

  /// Validates totality and output range; throws ArityCarrierMismatch.
  static OperationTable make(int arity, int carrier, std::vector<int> table);

  static long long entry_count(int carrier, int arity);  // carrier^arity, overflow-safe

  int apply(std::span<const int> args) const;
  int apply1(int a) const { return table[a]; }
  int apply2(int a, int b) const { return table[std::size_t(a) * carrier + b]; }

  bool operator==(const OperationTable&) const = default;
};

enum class Direction { Up, Down };

struct SupResult {
  bool exists = false;
  int value = -1;      // element id when exists
  std::string reason;  // "no upper bound" | "no least upper bound" (mirrored for Down)
};

/// Least upper bound (Up) or greatest lower bound (Down) of a subset.
/// Empty subsets are allowed: sup of the empty set is the least element.
SupResult sup(const Poset& p, const std::vector<int>& xs, Direction dir);

struct MonotoneReport {
  bool holds = false;
  // Witness when !holds: a pointwise-leq pair of argument tuples with
  // f(lo) not leq f(hi).
  std::vector<int> tupleLo, tupleHi;
};

MonotoneReport is_monotone(const Poset& p, const OperationTable& f);

struct AdditivityWitness {
  std::vector<std::vector<int>> subsets;  // X_1..X_n as ascending id lists
  std::vector<int> sups;                  // verified suprema s_1..s_n
  SupResult imageSup;                     // sup of {f(x_1..x_n) : x_j in X_j}
  int fOfSups = -1;                       // f(s_1,..,s_n)
};

struct AdditivityReport {
  bool holds = false;
  std::optional<AdditivityWitness> witness;
};

/// Exhaustive complete-additivity check: for every tuple of subsets (empty
/// included) whose suprema all exist, the image supremum must exist and equal
/// f of the suprema. Subset tuples are scanned in ascending bitmask order,
/// leftmost coordinate outermost; the witness is the first violation.
AdditivityReport is_completely_additive(const Poset& p, const OperationTable& f);

/// Same check quantified over nonempty subsets only.
AdditivityReport is_quasi_complete(const Poset& p, const OperationTable& f);

struct UnaryInstanceSpec {
  int position = 1;           // 1-based coordinate left free
  std::vector<int> fixedArgs; // the other arity-1 arguments, in order
};

/// The unary function z -> f(a_1,..,a_{j-1},z,a_{j+1},..,a_n).
OperationTable unary_instance(const OperationTable& f, const UnaryInstanceSpec& spec);

struct LemmaInstanceVerdict {
  UnaryInstanceSpec spec;
  bool additive = false;
};

struct LemmaReport {
  bool jointVerdict = false;
  std::vector<LemmaInstanceVerdict> perInstanceVerdicts;
  bool agree = false;  // jointVerdict <=> all instances additive
};

/// Joint complete additivity vs. complete additivity of every unary instance.
LemmaReport check_lemma_equivalence(const Poset& p, const OperationTable& f);

struct CompletionResult {
  Poset lattice;               // the cut lattice, a complete lattice
  std::vector<int> embedding;  // source id -> completion id (principal downset)
  std::vector<std::uint32_t> cutMasks;  // completion id -> cut as source-subset mask
};

/// Dedekind-MacNeille completion by closing every subset under the
/// lower-bounds-of-upper-bounds operator.
CompletionResult dm_completion(const Poset& p);

/// Bottom + top + all binary sups and infs; for a finite poset this is
/// equivalent to every subset having a sup and an inf.
bool is_complete_lattice(const Poset& p);

std::optional<int> bottom(const Poset& p);
std::optional<int> top(const Poset& p);

/// Precomputed supremum/infimum of every subset of a small carrier
/// (size <= 20). Backs the exhaustive additivity checks.
struct SubsetSups {
  int n = 0;
  std::vector<std::int32_t> supOf;  // by mask; -1 none
  std::vector<std::int32_t> infOf;

  static SubsetSups build(const Poset& p);
};

/// Poset with named operations; the model the formula evaluator and the
/// product constructions work over.
struct Algebra {
  Poset poset;
  std::map<std::string, OperationTable> ops;

  bool operator==(const Algebra&) const = default;
};

/// "{a, b}"-style rendering helpers; witnesses are always printed with
/// labels, never raw ids.
std::string label_set(const Poset& p, const std::vector<int>& ids);
std::string label_tuple(const Poset& p, const std::vector<int>& ids);

}  // namespace ultraposet
