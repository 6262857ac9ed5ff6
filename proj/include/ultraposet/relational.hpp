#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ultraposet/error.hpp"

namespace ultraposet {

struct Relation {
  int arity = 1;
  std::set<std::vector<int>> tuples;

  bool operator==(const Relation&) const = default;
};

/// Carrier plus named relations; the atom-level object complex algebras are
/// built from, and a product/ultraproduct citizen in its own right.
struct RelationalStructure {
  std::vector<std::string> labels;
  std::map<std::string, Relation> relations;

  int size() const { return int(labels.size()); }

  /// Checks label uniqueness, at least one relation, arities >= 1, and that
  /// every tuple is well-typed. Throws ValidationError / DuplicateLabel.
  static RelationalStructure validate(std::vector<std::string> labels,
                                      std::map<std::string, Relation> relations);

  int find_label(std::string_view label) const;
  bool holds(const std::string& rel, const std::vector<int>& tuple) const;

  bool operator==(const RelationalStructure&) const = default;
};

}  // namespace ultraposet
