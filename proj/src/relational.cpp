#include "ultraposet/relational.hpp"

namespace ultraposet {

RelationalStructure RelationalStructure::validate(std::vector<std::string> labels,
                                                  std::map<std::string, Relation> relations) {
  const int n = int(labels.size());
  if (n == 0) fail(ErrorKind::ValidationError, "carrier must be nonempty");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (labels[i] == labels[j])
        fail(ErrorKind::DuplicateLabel, "duplicate element label '" + labels[i] + "'");
  if (relations.empty())
    fail(ErrorKind::ValidationError, "relational structure needs at least one relation");
  for (const auto& [name, rel] : relations) {
    if (rel.arity < 1)
      fail(ErrorKind::ValidationError, "relation '" + name + "' has arity < 1");
    for (const auto& t : rel.tuples) {
      if (int(t.size()) != rel.arity)
        fail(ErrorKind::ValidationError,
             "relation '" + name + "' contains a tuple of the wrong width");
      for (int v : t)
        if (v < 0 || v >= n)
          fail(ErrorKind::ValidationError,
               "relation '" + name + "' references an element out of range");
    }
  }
  RelationalStructure s;
  s.labels = std::move(labels);
  s.relations = std::move(relations);
  return s;
}

int RelationalStructure::find_label(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels[i] == label) return i;
  return -1;
}

bool RelationalStructure::holds(const std::string& rel, const std::vector<int>& tuple) const {
  auto it = relations.find(rel);
  if (it == relations.end())
    fail(ErrorKind::SignatureMismatch, "structure does not interpret relation '" + rel + "'");
  if (int(tuple.size()) != it->second.arity)
    fail(ErrorKind::SignatureMismatch, "relation '" + rel + "' arity mismatch");
  return it->second.tuples.count(tuple) != 0;
}

}  // namespace ultraposet
