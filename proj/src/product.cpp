#include "ultraposet/product.hpp"

#include <algorithm>
#include <functional>

#include "ultraposet/caps.hpp"

namespace ultraposet {

// ---------------------------------------------------------------------------
// Index sets and principal filters

IndexSet IndexSet::make(int size) {
  if (size < 1) fail(ErrorKind::ValidationError, "index set must be nonempty");
  IndexSet ix;
  ix.size = size;
  for (int i = 0; i < size; ++i) ix.labels.push_back(std::to_string(i));
  return ix;
}

IndexSet IndexSet::make(std::vector<std::string> labels) {
  if (labels.empty()) fail(ErrorKind::ValidationError, "index set must be nonempty");
  IndexSet ix;
  ix.size = int(labels.size());
  ix.labels = std::move(labels);
  return ix;
}

bool FilterSpec::contains(const std::vector<int>& S) const {
  for (int j : generator) {
    bool found = false;
    for (int s : S) found = found || s == j;
    if (!found) return false;
  }
  return true;
}

FilterSpec make_filter(const IndexSet& ix, const std::vector<int>& generator) {
  if (generator.empty())
    fail(ErrorKind::EmptyGenerator, "a principal filter needs a nonempty generator");
  std::vector<int> J = generator;
  std::sort(J.begin(), J.end());
  J.erase(std::unique(J.begin(), J.end()), J.end());
  for (int j : J)
    if (j < 0 || j >= ix.size)
      fail(ErrorKind::OutOfRangeIndex,
           "generator index " + std::to_string(j) + " outside the index set of size " +
               std::to_string(ix.size));
  FilterSpec fs;
  fs.index = ix;
  fs.generator = std::move(J);
  fs.isUltra = fs.generator.size() == 1;
  return fs;
}

// ---------------------------------------------------------------------------
// Families

void validate_family(const AlgebraFamily& fam) {
  if (fam.index.size < 1 || int(fam.members.size()) != fam.index.size)
    fail(ErrorKind::ValidationError, "family has " + std::to_string(fam.members.size()) +
                                         " members for an index set of size " +
                                         std::to_string(fam.index.size));
  const auto& first = fam.members.front().ops;
  for (const auto& m : fam.members) {
    if (m.ops.size() != first.size())
      fail(ErrorKind::SignatureMismatch, "members disagree on the operation symbols");
    for (const auto& [name, op] : m.ops) {
      auto it = first.find(name);
      if (it == first.end() || it->second.arity != op.arity)
        fail(ErrorKind::SignatureMismatch,
             "members disagree on operation '" + name + "'");
      if (op.carrier != m.poset.size())
        fail(ErrorKind::ValidationError,
             "operation '" + name + "' is not over its member's carrier");
    }
  }
}

void validate_family(const RelationalFamily& fam) {
  if (fam.index.size < 1 || int(fam.members.size()) != fam.index.size)
    fail(ErrorKind::ValidationError, "family has " + std::to_string(fam.members.size()) +
                                         " members for an index set of size " +
                                         std::to_string(fam.index.size));
  const auto& first = fam.members.front().relations;
  for (const auto& m : fam.members) {
    if (m.relations.size() != first.size())
      fail(ErrorKind::SignatureMismatch, "members disagree on the relation symbols");
    for (const auto& [name, r] : m.relations) {
      auto it = first.find(name);
      if (it == first.end() || it->second.arity != r.arity)
        fail(ErrorKind::SignatureMismatch, "members disagree on relation '" + name + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Tuple codec (leftmost index most significant)

namespace {

struct Codec {
  std::vector<int> sizes;
  std::vector<long long> strides;
  long long total = 1;

  static Codec make(std::vector<int> sizes, long long cap, const char* what) {
    Codec c;
    c.sizes = std::move(sizes);
    c.strides.assign(c.sizes.size(), 1);
    c.total = 1;
    for (int i = int(c.sizes.size()) - 1; i >= 0; --i) {
      c.strides[std::size_t(i)] = c.total;
      c.total *= c.sizes[std::size_t(i)];
      if (c.total > cap)
        fail(ErrorKind::CapExceeded, std::string(what) + " carrier exceeds cap " +
                                         std::to_string(cap) +
                                         " (ULTRAPOSET_CAPS product=... raises it)");
    }
    return c;
  }

  int encode(const std::vector<int>& t) const {
    long long id = 0;
    for (std::size_t i = 0; i < sizes.size(); ++i) id += t[i] * strides[i];
    return int(id);
  }

  std::vector<int> decode(int id) const {
    std::vector<int> t(sizes.size());
    long long rest = id;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      t[i] = int(rest / strides[i]);
      rest %= strides[i];
    }
    return t;
  }
};

int member_size(const Algebra& m) { return m.poset.size(); }
int member_size(const RelationalStructure& m) { return m.size(); }

const std::string& member_label(const Algebra& m, int x) { return m.poset.label(x); }
const std::string& member_label(const RelationalStructure& m, int x) { return m.labels[std::size_t(x)]; }

template <typename M>
std::vector<int> member_sizes(const Family<M>& fam) {
  std::vector<int> sizes;
  for (const auto& m : fam.members) sizes.push_back(member_size(m));
  return sizes;
}

template <typename M>
std::vector<std::string> product_labels(const Family<M>& fam, const Codec& codec) {
  std::vector<std::string> labels;
  labels.reserve(std::size_t(codec.total));
  for (int id = 0; id < int(codec.total); ++id) {
    std::vector<int> t = codec.decode(id);
    std::string l = "(";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) l += ",";
      l += member_label(fam.members[i], t[i]);
    }
    l += ")";
    labels.push_back(std::move(l));
  }
  return labels;
}

/// All argument tuples of product ids for one arity, leftmost slot outermost.
void for_all_arg_tuples(int carrier, int arity,
                        const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> args(std::size_t(arity), 0);
  while (true) {
    fn(args);
    int i = arity - 1;
    while (i >= 0 && args[std::size_t(i)] == carrier - 1) args[std::size_t(i--)] = 0;
    if (i < 0) return;
    ++args[std::size_t(i)];
  }
}

template <typename M>
Codec family_codec(const Family<M>& fam) {
  return Codec::make(member_sizes(fam), Caps::current().productCarrier, "product");
}

}  // namespace

// ---------------------------------------------------------------------------
// Direct products

ProductResult direct_product(const AlgebraFamily& fam) {
  validate_family(fam);
  Codec codec = family_codec(fam);
  const int N = int(codec.total);
  const int k = fam.index.size;

  ProductResult out;
  out.tuples.reserve(std::size_t(N));
  for (int id = 0; id < N; ++id) out.tuples.push_back(codec.decode(id));

  std::vector<Bitset> up(std::size_t(N), Bitset{N});
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      bool le = true;
      for (int i = 0; i < k && le; ++i)
        le = fam.members[std::size_t(i)].poset.leq(out.tuples[std::size_t(x)][std::size_t(i)],
                                                   out.tuples[std::size_t(y)][std::size_t(i)]);
      if (le) up[std::size_t(x)].set(y);
    }
  out.product.poset = Poset::from_closed(product_labels(fam, codec), std::move(up));

  const long long tableCap = Caps::current().tableEntries;
  for (const auto& [name, first] : fam.members.front().ops) {
    const int r = first.arity;
    long long entries = OperationTable::entry_count(N, r);
    if (entries < 0 || entries > tableCap)
      fail(ErrorKind::CapExceeded, "product table for '" + name + "' exceeds cap " +
                                       std::to_string(tableCap));
    std::vector<int> table;
    table.reserve(std::size_t(entries));
    std::vector<int> result(std::size_t(k), 0);
    for_all_arg_tuples(N, r, [&](const std::vector<int>& args) {
      for (int i = 0; i < k; ++i) {
        std::vector<int> coords(std::size_t(r), 0);
        for (int j = 0; j < r; ++j)
          coords[std::size_t(j)] = out.tuples[std::size_t(args[std::size_t(j)])][std::size_t(i)];
        result[std::size_t(i)] = fam.members[std::size_t(i)].ops.at(name).apply(coords);
      }
      table.push_back(codec.encode(result));
    });
    out.product.ops.emplace(name, OperationTable::make(r, N, std::move(table)));
  }
  return out;
}

RelationalProductResult direct_product(const RelationalFamily& fam) {
  validate_family(fam);
  Codec codec = family_codec(fam);
  const int N = int(codec.total);
  const int k = fam.index.size;

  RelationalProductResult out;
  out.tuples.reserve(std::size_t(N));
  for (int id = 0; id < N; ++id) out.tuples.push_back(codec.decode(id));

  std::map<std::string, Relation> rels;
  for (const auto& [name, first] : fam.members.front().relations) {
    Relation r;
    r.arity = first.arity;
    for_all_arg_tuples(N, first.arity, [&](const std::vector<int>& args) {
      for (int i = 0; i < k; ++i) {
        std::vector<int> coords(std::size_t(first.arity), 0);
        for (int j = 0; j < first.arity; ++j)
          coords[std::size_t(j)] = out.tuples[std::size_t(args[std::size_t(j)])][std::size_t(i)];
        if (!fam.members[std::size_t(i)].relations.at(name).tuples.count(coords)) return;
      }
      r.tuples.insert(args);
    });
    rels.emplace(name, std::move(r));
  }
  out.product = RelationalStructure::validate(product_labels(fam, codec), rels);
  return out;
}

// ---------------------------------------------------------------------------
// Reduced products

namespace {

template <typename M>
Family<M> subfamily(const Family<M>& fam, const std::vector<int>& J) {
  Family<M> sub;
  std::vector<std::string> labels;
  for (int j : J) {
    sub.members.push_back(fam.members[std::size_t(j)]);
    labels.push_back(fam.index.labels[std::size_t(j)]);
  }
  sub.index = IndexSet::make(std::move(labels));
  return sub;
}

void check_filter_fits(const IndexSet& famIx, const FilterSpec& fs) {
  if (fs.index.size != famIx.size)
    fail(ErrorKind::ValidationError, "filter index set of size " +
                                         std::to_string(fs.index.size) +
                                         " does not match the family of size " +
                                         std::to_string(famIx.size));
  if (fs.generator.empty())
    fail(ErrorKind::EmptyGenerator, "a principal filter needs a nonempty generator");
}

/// Class machinery shared by both reduced products: class ids are the
/// J-subproduct ids of the projections; representatives zero the rest.
struct QuotientIndex {
  Codec full, sub;
  std::vector<int> J;

  int class_of(const std::vector<int>& tuple) const {
    std::vector<int> proj;
    proj.reserve(J.size());
    for (int j : J) proj.push_back(tuple[std::size_t(j)]);
    return sub.encode(proj);
  }

  std::vector<QuotientElement> make_classes() const {
    std::vector<QuotientElement> classes;
    for (int c = 0; c < int(sub.total); ++c) {
      std::vector<int> proj = sub.decode(c);
      QuotientElement q;
      q.classId = c;
      q.representative.assign(full.sizes.size(), 0);
      for (std::size_t t = 0; t < J.size(); ++t)
        q.representative[std::size_t(J[t])] = proj[t];
      classes.push_back(std::move(q));
    }
    return classes;
  }
};

}  // namespace

ReducedResult reduced_product(const AlgebraFamily& fam, const FilterSpec& fs) {
  validate_family(fam);
  check_filter_fits(fam.index, fs);

  ReducedResult out;
  out.subProduct = direct_product(subfamily(fam, fs.generator));

  QuotientIndex qi{family_codec(fam),
                   Codec::make(member_sizes(subfamily(fam, fs.generator)),
                               Caps::current().productCarrier, "reduced product"),
                   fs.generator};
  out.classes = qi.make_classes();
  const int N = int(qi.full.total);
  const int C = int(qi.sub.total);
  out.quotientMap.reserve(std::size_t(N));
  for (int id = 0; id < N; ++id) out.quotientMap.push_back(qi.class_of(qi.full.decode(id)));

  // Order on classes: leq on every generator coordinate of the
  // representatives (equivalently, on a filter set of coordinates).
  std::vector<Bitset> up(std::size_t(C), Bitset{C});
  for (int x = 0; x < C; ++x)
    for (int y = 0; y < C; ++y) {
      bool le = true;
      for (int j : fs.generator)
        le = le && fam.members[std::size_t(j)].poset.leq(
                       out.classes[std::size_t(x)].representative[std::size_t(j)],
                       out.classes[std::size_t(y)].representative[std::size_t(j)]);
      if (le) up[std::size_t(x)].set(y);
    }
  out.quotient.poset =
      Poset::from_closed(out.subProduct.product.poset.labels(), std::move(up));

  // Operations act on representatives, coordinatewise across the full index
  // set; the class of the result is independent of the choice because the
  // generator coordinates of the result only see generator coordinates of
  // the arguments.
  const int k = fam.index.size;
  for (const auto& [name, first] : fam.members.front().ops) {
    const int r = first.arity;
    long long entries = OperationTable::entry_count(C, r);
    if (entries < 0 || entries > Caps::current().tableEntries)
      fail(ErrorKind::CapExceeded, "quotient table for '" + name + "' exceeds cap " +
                                       std::to_string(Caps::current().tableEntries));
    std::vector<int> table;
    table.reserve(std::size_t(entries));
    std::vector<int> result(std::size_t(k), 0);
    for_all_arg_tuples(C, r, [&](const std::vector<int>& args) {
      for (int i = 0; i < k; ++i) {
        std::vector<int> coords(std::size_t(r), 0);
        for (int j = 0; j < r; ++j)
          coords[std::size_t(j)] =
              out.classes[std::size_t(args[std::size_t(j)])].representative[std::size_t(i)];
        result[std::size_t(i)] = fam.members[std::size_t(i)].ops.at(name).apply(coords);
      }
      table.push_back(qi.class_of(result));
    });
    out.quotient.ops.emplace(name, OperationTable::make(r, C, std::move(table)));
  }

  out.canonicalIso.reserve(std::size_t(C));
  for (const auto& q : out.classes)
    out.canonicalIso.push_back(qi.class_of(q.representative));
  return out;
}

RelationalReducedResult reduced_product(const RelationalFamily& fam, const FilterSpec& fs) {
  validate_family(fam);
  check_filter_fits(fam.index, fs);

  RelationalReducedResult out;
  out.subProduct = direct_product(subfamily(fam, fs.generator));

  QuotientIndex qi{family_codec(fam),
                   Codec::make(member_sizes(subfamily(fam, fs.generator)),
                               Caps::current().productCarrier, "reduced product"),
                   fs.generator};
  out.classes = qi.make_classes();
  const int N = int(qi.full.total);
  const int C = int(qi.sub.total);
  out.quotientMap.reserve(std::size_t(N));
  for (int id = 0; id < N; ++id) out.quotientMap.push_back(qi.class_of(qi.full.decode(id)));

  std::map<std::string, Relation> rels;
  for (const auto& [name, first] : fam.members.front().relations) {
    Relation r;
    r.arity = first.arity;
    for_all_arg_tuples(C, first.arity, [&](const std::vector<int>& args) {
      for (int j : fs.generator) {
        std::vector<int> coords(std::size_t(first.arity), 0);
        for (int t = 0; t < first.arity; ++t)
          coords[std::size_t(t)] =
              out.classes[std::size_t(args[std::size_t(t)])].representative[std::size_t(j)];
        if (!fam.members[std::size_t(j)].relations.at(name).tuples.count(coords)) return;
      }
      r.tuples.insert(args);
    });
    rels.emplace(name, std::move(r));
  }
  out.quotient =
      RelationalStructure::validate(out.subProduct.product.labels, rels);

  out.canonicalIso.reserve(std::size_t(C));
  for (const auto& q : out.classes)
    out.canonicalIso.push_back(qi.class_of(q.representative));
  return out;
}

// ---------------------------------------------------------------------------
// Los agreement

namespace {

template <typename M, typename Reduced>
LosReport los_core(const Family<M>& fam, const FilterSpec& fs, const FormulaPtr& phi,
                   const std::vector<Assignment>& perIndex, const Reduced& red) {
  if (int(perIndex.size()) != fam.index.size)
    fail(ErrorKind::ValidationError, "expected one assignment per index, got " +
                                         std::to_string(perIndex.size()));

  LosReport rep;
  for (int i = 0; i < fam.index.size; ++i)
    if (evaluate(fam.members[std::size_t(i)], phi, perIndex[std::size_t(i)]))
      rep.J_true.push_back(i);
  rep.inFilter = fs.contains(rep.J_true);

  Codec codec = family_codec(fam);
  Assignment onQuotient;
  for (const auto& name : free_names(phi)) {
    std::vector<int> tuple(std::size_t(fam.index.size), 0);
    for (int i = 0; i < fam.index.size; ++i) {
      auto it = perIndex[std::size_t(i)].find(name);
      if (it == perIndex[std::size_t(i)].end())
        fail(ErrorKind::UnboundName,
             "assignment for factor " + std::to_string(i) + " lacks '" + name + "'");
      if (it->second < 0 || it->second >= member_size(fam.members[std::size_t(i)]))
        fail(ErrorKind::UnknownElement, "assignment maps '" + name +
                                            "' outside the carrier of factor " +
                                            std::to_string(i));
      tuple[std::size_t(i)] = it->second;
    }
    onQuotient[name] = red.quotientMap[std::size_t(codec.encode(tuple))];
  }
  rep.productSatisfies = evaluate(red.quotient, phi, onQuotient);
  rep.agree = rep.inFilter == rep.productSatisfies;
  return rep;
}

}  // namespace

LosReport los_check(const AlgebraFamily& fam, const FilterSpec& fs, const FormulaPtr& phi,
                    const std::vector<Assignment>& perIndex) {
  validate_family(fam);
  check_filter_fits(fam.index, fs);
  return los_core(fam, fs, phi, perIndex, reduced_product(fam, fs));
}

LosReport los_check(const RelationalFamily& fam, const FilterSpec& fs, const FormulaPtr& phi,
                    const std::vector<Assignment>& perIndex) {
  validate_family(fam);
  check_filter_fits(fam.index, fs);
  return los_core(fam, fs, phi, perIndex, reduced_product(fam, fs));
}

// ---------------------------------------------------------------------------
// Isomorphism search

namespace {

struct IsoProblem {
  int n = 0;
  // Exact per-element invariants; a candidate pair must match.
  std::vector<std::vector<int>> invA, invB;
  // Pairwise consistency for an assigned pair (a->b, a2->b2); called with
  // a2 == a as well, covering loops/fixpoints.
  std::function<bool(int a, int a2, int b, int b2)> pairOk;
  // Complete verification on a full bijection; correctness gate, pruning
  // above is only an accelerator.
  std::function<bool(const std::vector<int>&)> finalOk;
};

std::optional<std::vector<int>> backtrack_iso(const IsoProblem& prob) {
  const int n = prob.n;
  std::vector<std::vector<int>> cand(std::size_t(n), std::vector<int>{});
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (prob.invA[std::size_t(a)] == prob.invB[std::size_t(b)])
        cand[std::size_t(a)].push_back(b);
    if (cand[std::size_t(a)].empty()) return std::nullopt;
  }

  std::vector<int> order(std::size_t(n), 0);
  for (int a = 0; a < n; ++a) order[std::size_t(a)] = a;
  std::sort(order.begin(), order.end(), [&](int x, int y) {
    if (cand[std::size_t(x)].size() != cand[std::size_t(y)].size())
      return cand[std::size_t(x)].size() < cand[std::size_t(y)].size();
    return x < y;
  });

  std::vector<int> map(std::size_t(n), -1);
  std::vector<char> used(std::size_t(n), 0);

  std::function<bool(int)> dfs = [&](int pos) -> bool {
    if (pos == n) return prob.finalOk(map);
    int a = order[std::size_t(pos)];
    for (int b : cand[std::size_t(a)]) {
      if (used[std::size_t(b)]) continue;
      bool ok = prob.pairOk(a, a, b, b);
      for (int q = 0; ok && q < pos; ++q) {
        int a2 = order[std::size_t(q)];
        ok = prob.pairOk(a, a2, b, map[std::size_t(a2)]);
      }
      if (!ok) continue;
      map[std::size_t(a)] = b;
      used[std::size_t(b)] = 1;
      if (dfs(pos + 1)) return true;
      map[std::size_t(a)] = -1;
      used[std::size_t(b)] = 0;
    }
    return false;
  };

  if (dfs(0)) return map;
  return std::nullopt;
}

void check_iso_cap(int na, int nb) {
  const int cap = Caps::current().isoCarrier;
  if (na > cap || nb > cap)
    fail(ErrorKind::CapExceeded, "isomorphism search capped at carrier " +
                                     std::to_string(cap) + ", got " +
                                     std::to_string(std::max(na, nb)));
}

std::vector<std::vector<int>> order_invariants(const Poset& p) {
  std::vector<std::vector<int>> inv;
  for (int x = 0; x < p.size(); ++x)
    inv.push_back({p.down(x).count(), p.up(x).count()});
  return inv;
}

}  // namespace

std::optional<std::vector<int>> iso_search(const Poset& a, const Poset& b) {
  check_iso_cap(a.size(), b.size());
  if (a.size() != b.size()) return std::nullopt;

  IsoProblem prob;
  prob.n = a.size();
  prob.invA = order_invariants(a);
  prob.invB = order_invariants(b);
  prob.pairOk = [&](int x, int x2, int y, int y2) {
    return a.leq(x, x2) == b.leq(y, y2) && a.leq(x2, x) == b.leq(y2, y);
  };
  prob.finalOk = [](const std::vector<int>&) { return true; };
  return backtrack_iso(prob);
}

std::optional<std::vector<int>> iso_search(const Algebra& a, const Algebra& b) {
  check_iso_cap(a.poset.size(), b.poset.size());
  if (a.poset.size() != b.poset.size()) return std::nullopt;
  if (a.ops.size() != b.ops.size()) return std::nullopt;
  for (const auto& [name, op] : a.ops) {
    auto it = b.ops.find(name);
    if (it == b.ops.end() || it->second.arity != op.arity) return std::nullopt;
  }

  IsoProblem prob;
  prob.n = a.poset.size();
  prob.invA = order_invariants(a.poset);
  prob.invB = order_invariants(b.poset);
  // Unary operations contribute per-element invariants (in-degree, fixpoint)
  // and incremental pair constraints; higher arities are settled at the leaf.
  std::vector<const OperationTable*> unaryA, unaryB;
  for (const auto& [name, op] : a.ops)
    if (op.arity == 1) {
      unaryA.push_back(&op);
      unaryB.push_back(&b.ops.at(name));
    }
  for (int x = 0; x < prob.n; ++x)
    for (std::size_t u = 0; u < unaryA.size(); ++u) {
      int indegA = 0, indegB = 0;
      for (int z = 0; z < prob.n; ++z) {
        indegA += unaryA[u]->apply1(z) == x;
        indegB += unaryB[u]->apply1(z) == x;
      }
      prob.invA[std::size_t(x)].push_back(indegA);
      prob.invB[std::size_t(x)].push_back(indegB);
      prob.invA[std::size_t(x)].push_back(unaryA[u]->apply1(x) == x);
      prob.invB[std::size_t(x)].push_back(unaryB[u]->apply1(x) == x);
    }

  prob.pairOk = [&, unaryA, unaryB](int x, int x2, int y, int y2) {
    if (a.poset.leq(x, x2) != b.poset.leq(y, y2)) return false;
    if (a.poset.leq(x2, x) != b.poset.leq(y2, y)) return false;
    for (std::size_t u = 0; u < unaryA.size(); ++u) {
      if (unaryA[u]->apply1(x) == x2 && unaryB[u]->apply1(y) != y2) return false;
      if (unaryA[u]->apply1(x2) == x && unaryB[u]->apply1(y2) != y) return false;
    }
    return true;
  };
  prob.finalOk = [&](const std::vector<int>& map) {
    for (const auto& [name, opA] : a.ops) {
      const OperationTable& opB = b.ops.at(name);
      bool ok = true;
      for_all_arg_tuples(prob.n, opA.arity, [&](const std::vector<int>& args) {
        if (!ok) return;
        std::vector<int> mapped(args.size());
        for (std::size_t j = 0; j < args.size(); ++j)
          mapped[j] = map[std::size_t(args[j])];
        ok = map[std::size_t(opA.apply(args))] == opB.apply(mapped);
      });
      if (!ok) return false;
    }
    return true;
  };
  return backtrack_iso(prob);
}

std::optional<std::vector<int>> iso_search(const RelationalStructure& a,
                                           const RelationalStructure& b) {
  check_iso_cap(a.size(), b.size());
  if (a.size() != b.size()) return std::nullopt;
  if (a.relations.size() != b.relations.size()) return std::nullopt;
  for (const auto& [name, r] : a.relations) {
    auto it = b.relations.find(name);
    if (it == b.relations.end() || it->second.arity != r.arity) return std::nullopt;
    if (it->second.tuples.size() != r.tuples.size()) return std::nullopt;
  }

  IsoProblem prob;
  prob.n = a.size();
  prob.invA.assign(std::size_t(prob.n), {});
  prob.invB.assign(std::size_t(prob.n), {});
  for (const auto& [name, rA] : a.relations) {
    const Relation& rB = b.relations.at(name);
    for (int pos = 0; pos < rA.arity; ++pos)
      for (int x = 0; x < prob.n; ++x) {
        int cA = 0, cB = 0;
        for (const auto& t : rA.tuples) cA += t[std::size_t(pos)] == x;
        for (const auto& t : rB.tuples) cB += t[std::size_t(pos)] == x;
        prob.invA[std::size_t(x)].push_back(cA);
        prob.invB[std::size_t(x)].push_back(cB);
      }
  }

  std::vector<const Relation*> binA, binB;
  for (const auto& [name, r] : a.relations)
    if (r.arity == 2) {
      binA.push_back(&r);
      binB.push_back(&b.relations.at(name));
    }
  prob.pairOk = [&, binA, binB](int x, int x2, int y, int y2) {
    for (std::size_t u = 0; u < binA.size(); ++u) {
      if (binA[u]->tuples.count({x, x2}) != binB[u]->tuples.count({y, y2})) return false;
      if (binA[u]->tuples.count({x2, x}) != binB[u]->tuples.count({y2, y})) return false;
    }
    return true;
  };
  prob.finalOk = [&](const std::vector<int>& map) {
    for (const auto& [name, rA] : a.relations) {
      const Relation& rB = b.relations.at(name);
      for (const auto& t : rA.tuples) {
        std::vector<int> mapped(t.size());
        for (std::size_t j = 0; j < t.size(); ++j) mapped[j] = map[std::size_t(t[j])];
        if (!rB.tuples.count(mapped)) return false;
      }
      // Equal cardinalities (pre-checked) make the forward inclusion a
      // bijection of tuple sets.
    }
    return true;
  };
  return backtrack_iso(prob);
}

// ---------------------------------------------------------------------------
// Theorem 1 end-to-end

namespace {

bool preservation_holds(const Poset& p, const OperationTable& f, PreservationMode mode) {
  return mode == PreservationMode::CompleteAdditivity ? is_completely_additive(p, f).holds
                                                      : is_quasi_complete(p, f).holds;
}

const char* preservation_name(PreservationMode mode) {
  return mode == PreservationMode::CompleteAdditivity ? "completely additive"
                                                      : "quasi-complete";
}

}  // namespace

Theorem1Report theorem1_check(const AlgebraFamily& fam, const FilterSpec& fs,
                              PreservationMode mode) {
  validate_family(fam);
  check_filter_fits(fam.index, fs);
  if (!fs.isUltra)
    fail(ErrorKind::PreconditionFailed,
         "theorem1_check needs an ultrafilter; generator has " +
             std::to_string(fs.generator.size()) + " indices");

  for (int i = 0; i < fam.index.size; ++i)
    for (const auto& [name, op] : fam.members[std::size_t(i)].ops)
      if (!preservation_holds(fam.members[std::size_t(i)].poset, op, mode))
        fail(ErrorKind::PreconditionFailed, "member " + std::to_string(i) +
                                                " operation '" + name + "' is not " +
                                                preservation_name(mode));

  Theorem1Report rep;
  rep.ultraproduct = reduced_product(fam, fs);
  const Poset& q = rep.ultraproduct.quotient.poset;

  rep.pass = true;
  for (const auto& [name, op] : rep.ultraproduct.quotient.ops) {
    bool ok = preservation_holds(q, op, mode);
    rep.additivityVerdicts[name] = ok;
    rep.pass = rep.pass && ok;

    if (op.arity != 1) continue;

    // Deterministic replay instance: the first subset (ascending bitmask
    // order) with at least two elements, an existing sup, and an existing
    // image sup; y is that image sup. Falls back to X = {0}, y = f(0).
    std::vector<int> X;
    int s = -1, y = -1;
    if (q.size() <= 20) {
      for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << q.size()); ++mask) {
        if (std::popcount(mask) < 2) continue;
        std::vector<int> ids;
        for (int x = 0; x < q.size(); ++x)
          if (mask & (std::uint32_t(1) << x)) ids.push_back(x);
        SupResult sx = sup(q, ids, Direction::Up);
        if (!sx.exists) continue;
        std::vector<int> image;
        for (int x : ids) image.push_back(op.apply1(x));
        SupResult sy = sup(q, image, Direction::Up);
        if (!sy.exists) continue;
        X = ids;
        s = sx.value;
        y = sy.value;
        break;
      }
    }
    if (X.empty()) {
      X = {0};
      s = 0;
      y = op.apply1(0);
    }

    const auto& sRep = rep.ultraproduct.classes[std::size_t(s)].representative;
    const auto& yRep = rep.ultraproduct.classes[std::size_t(y)].representative;
    std::vector<std::vector<int>> perFactor;
    for (int i = 0; i < fam.index.size; ++i) {
      const Algebra& m = fam.members[std::size_t(i)];
      const OperationTable& fi = m.ops.at(name);
      std::vector<int> Ai;
      for (int x = 0; x < m.poset.size(); ++x)
        if (m.poset.leq(x, sRep[std::size_t(i)]) &&
            m.poset.leq(fi.apply1(x), yRep[std::size_t(i)]))
          Ai.push_back(x);
      perFactor.push_back(std::move(Ai));
    }
    rep.perFactorSets.emplace(name, std::move(perFactor));
  }
  return rep;
}

}  // namespace ultraposet
