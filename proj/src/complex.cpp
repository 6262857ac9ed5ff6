#include "ultraposet/complex.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>
#include <utility>

#include "ultraposet/caps.hpp"
#include "ultraposet/error.hpp"

namespace ultraposet {

namespace {

std::string subset_label(const std::vector<std::string>& atomLabels, int mask) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < atomLabels.size(); ++i)
    if (mask & (1 << i)) {
      if (!first) out += ",";
      out += atomLabels[i];
      first = false;
    }
  out += "}";
  return out;
}

Poset powerset_lattice(const std::vector<std::string>& atomLabels) {
  const int k = int(atomLabels.size());
  const int N = 1 << k;
  std::vector<std::string> labels;
  labels.reserve(std::size_t(N));
  for (int m = 0; m < N; ++m) labels.push_back(subset_label(atomLabels, m));
  std::vector<Bitset> up(std::size_t(N), Bitset{N});
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y)
      if ((x & y) == x) up[std::size_t(x)].set(y);
  return Poset::from_closed(std::move(labels), std::move(up));
}

// Mixed-radix strides with the leftmost argument most significant — the same
// flattening OperationTable::apply uses.
std::vector<long long> make_strides(int radix, int arity) {
  std::vector<long long> s(std::size_t(arity), 1);
  for (int i = arity - 2; i >= 0; --i) s[std::size_t(i)] = s[std::size_t(i) + 1] * radix;
  return s;
}

/// The completely additive operator with the given atom values, as a full
/// table over subset masks. Filled by the union recurrence
///   f(...,{},...) = {},   f(...,X,...) = f(...,lowbit X,...) | f(...,X^lowbit,...)
/// in ascending flat-index order, so both subproblems are already available.
std::vector<int> additive_extension(int atomCount, int arity, const std::vector<int>& atomImg) {
  const int N = 1 << atomCount;
  const long long total = OperationTable::entry_count(N, arity);
  const auto maskStride = make_strides(N, arity);
  const auto atomStride = make_strides(atomCount, arity);
  std::vector<int> table(std::size_t(total), 0);
  std::vector<int> digits(std::size_t(arity), 0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    bool anyEmpty = false;
    int split = -1;
    for (int i = 0; i < arity; ++i) {
      const int d = int(rest / maskStride[std::size_t(i)]);
      rest %= maskStride[std::size_t(i)];
      digits[std::size_t(i)] = d;
      if (d == 0) anyEmpty = true;
      else if (split < 0 && (d & (d - 1)) != 0) split = i;
    }
    if (anyEmpty) continue;  // stays 0
    if (split >= 0) {
      const int X = digits[std::size_t(split)];
      const int lo = X & -X;
      const long long base = idx - (long long)(X)*maskStride[std::size_t(split)];
      table[std::size_t(idx)] =
          table[std::size_t(base + (long long)(lo)*maskStride[std::size_t(split)])] |
          table[std::size_t(base + (long long)(X ^ lo) * maskStride[std::size_t(split)])];
    } else {
      long long aidx = 0;
      for (int i = 0; i < arity; ++i)
        aidx += (long long)std::countr_zero(unsigned(digits[std::size_t(i)])) *
                atomStride[std::size_t(i)];
      table[std::size_t(idx)] = atomImg[std::size_t(aidx)];
    }
  }
  return table;
}

const OperationTable& find_operator(const BAO& b, const std::string& name) {
  auto it = b.operators.find(name);
  if (it == b.operators.end()) fail(ErrorKind::UnknownSymbol, "no operator named '" + name + "'");
  return it->second;
}

/// Atom-level view of an arbitrary atomic-powerset presentation: the bottom
/// element, the atoms in id order, and each element's mask of atoms below it.
/// Throws NotAtomic unless element -> atom-mask is an order isomorphism onto
/// the full powerset of the atoms.
struct Atomization {
  int bot = -1;
  std::vector<int> atoms;
  std::vector<int> maskOf;
};

Atomization atomize(const Poset& L) {
  const int N = L.size();
  auto bot = bottom(L);
  if (!bot) fail(ErrorKind::NotAtomic, "lattice has no bottom element");
  Atomization out;
  out.bot = *bot;
  for (int x = 0; x < N; ++x) {
    if (x == out.bot) continue;
    bool isAtom = true;
    for (int z = 0; z < N; ++z)
      if (z != out.bot && z != x && L.leq(z, x)) {
        isAtom = false;
        break;
      }
    if (isAtom) out.atoms.push_back(x);
  }
  const int k = int(out.atoms.size());
  if (k > 30 || N != (1 << k))
    fail(ErrorKind::NotAtomic, "lattice has " + std::to_string(N) + " elements but " +
                                   std::to_string(k) + " atoms; not a full powerset");
  out.maskOf.assign(std::size_t(N), 0);
  std::vector<bool> seen(std::size_t(N), false);
  for (int x = 0; x < N; ++x) {
    int mask = 0;
    for (int a = 0; a < k; ++a)
      if (L.leq(out.atoms[std::size_t(a)], x)) mask |= 1 << a;
    out.maskOf[std::size_t(x)] = mask;
    if (seen[std::size_t(mask)])
      fail(ErrorKind::NotAtomic, "two elements sit above the same atom set");
    seen[std::size_t(mask)] = true;
  }
  for (int x = 0; x < N; ++x)
    for (int y = 0; y < N; ++y) {
      bool incl = (out.maskOf[std::size_t(x)] & out.maskOf[std::size_t(y)]) ==
                  out.maskOf[std::size_t(x)];
      if (L.leq(x, y) != incl)
        fail(ErrorKind::NotAtomic, "order does not match atom-set inclusion");
    }
  return out;
}

/// Runs fn over every flat index of a radix^arity table together with its
/// decoded digits.
template <typename Fn>
void for_each_entry(int radix, int arity, Fn&& fn) {
  const long long total = OperationTable::entry_count(radix, arity);
  std::vector<int> digits(std::size_t(arity), 0);
  for (long long idx = 0; idx < total; ++idx) {
    fn(idx, digits);
    for (int i = arity - 1; i >= 0; --i) {
      if (++digits[std::size_t(i)] < radix) break;
      digits[std::size_t(i)] = 0;
    }
  }
}

}  // namespace

BAO make_bao(std::vector<std::string> atomLabels,
             std::map<std::string, OperationTable> operators) {
  const int k = int(atomLabels.size());
  const Caps caps = Caps::current();
  if (k < 1) fail(ErrorKind::ValidationError, "a BAO needs at least one atom");
  if (k > caps.complexCarrier)
    fail(ErrorKind::CapExceeded, "atom count " + std::to_string(k) + " exceeds cap " +
                                     std::to_string(caps.complexCarrier) +
                                     " (ULTRAPOSET_CAPS cm=... raises it)");
  if (std::set<std::string>(atomLabels.begin(), atomLabels.end()).size() != atomLabels.size())
    fail(ErrorKind::DuplicateLabel, "atom labels must be distinct");
  const int N = 1 << k;

  BAO b;
  b.atomCount = k;
  b.lattice = powerset_lattice(atomLabels);

  std::vector<int> meetT(std::size_t(N) * std::size_t(N), 0);
  std::vector<int> joinT(std::size_t(N) * std::size_t(N), 0);
  std::vector<int> compT(std::size_t(N), 0);
  for (int x = 0; x < N; ++x) {
    compT[std::size_t(x)] = (~x) & (N - 1);
    for (int y = 0; y < N; ++y) {
      meetT[std::size_t(x) * std::size_t(N) + std::size_t(y)] = x & y;
      joinT[std::size_t(x) * std::size_t(N) + std::size_t(y)] = x | y;
    }
  }
  b.meet = OperationTable::make(2, N, std::move(meetT));
  b.join = OperationTable::make(2, N, std::move(joinT));
  b.complement = OperationTable::make(1, N, std::move(compT));

  for (const auto& [name, op] : operators) {
    if (name == "meet" || name == "join" || name == "not")
      fail(ErrorKind::ValidationError,
           "operator name '" + name + "' is reserved for the boolean structure");
    if (op.carrier != N)
      fail(ErrorKind::ValidationError, "operator '" + name + "' has carrier " +
                                           std::to_string(op.carrier) + ", expected " +
                                           std::to_string(N));
    OperationTable::make(op.arity, op.carrier, op.table);  // shape + range revalidation
  }
  b.operators = std::move(operators);
  return b;
}

BAO complex_algebra(const RelationalStructure& s) {
  const int n = s.size();
  const Caps caps = Caps::current();
  if (n > caps.complexCarrier)
    fail(ErrorKind::CapExceeded, "carrier " + std::to_string(n) + " exceeds cap " +
                                     std::to_string(caps.complexCarrier) +
                                     " (ULTRAPOSET_CAPS cm=... raises it)");
  const int N = 1 << n;

  std::map<std::string, OperationTable> ops;
  for (const auto& [name, rel] : s.relations) {
    if (rel.arity < 2)
      fail(ErrorKind::ValidationError,
           "relation '" + name + "' has arity 1; a complex-algebra operator needs arity >= 2");
    const int m = rel.arity - 1;
    const long long total = OperationTable::entry_count(N, m);
    if (total < 0 || total > caps.tableEntries)
      fail(ErrorKind::CapExceeded,
           "operator table for '" + name + "' would exceed the table cap of " +
               std::to_string(caps.tableEntries) + " entries (ULTRAPOSET_CAPS table=... raises it)");

    // Image of each element tuple, read straight off the relation.
    const auto stride = make_strides(n, m);
    std::vector<int> atomImg(std::size_t(OperationTable::entry_count(n, m)), 0);
    for (const auto& t : rel.tuples) {
      long long aidx = 0;
      for (int i = 0; i < m; ++i) aidx += (long long)t[std::size_t(i)] * stride[std::size_t(i)];
      atomImg[std::size_t(aidx)] |= 1 << t[std::size_t(m)];
    }
    ops.emplace(name, OperationTable::make(m, N, additive_extension(n, m, atomImg)));
  }
  return make_bao(s.labels, std::move(ops));
}

RelationalStructure atom_structure(const BAO& b) {
  const Poset& L = b.lattice;
  const Atomization at = atomize(L);
  const int k = int(at.atoms.size());

  std::vector<std::string> labels;
  for (int a : at.atoms) labels.push_back(L.label(a));

  std::map<std::string, Relation> rels;
  for (const auto& [name, f] : b.operators) {
    Relation R;
    R.arity = f.arity + 1;
    for_each_entry(k, f.arity, [&](long long, const std::vector<int>& digits) {
      std::vector<int> args;
      args.reserve(digits.size());
      for (int d : digits) args.push_back(at.atoms[std::size_t(d)]);
      const int val = f.apply(args);
      for (int c = 0; c < k; ++c)
        if (L.leq(at.atoms[std::size_t(c)], val)) {
          std::vector<int> tuple = digits;
          tuple.push_back(c);
          R.tuples.insert(std::move(tuple));
        }
    });
    rels.emplace(name, std::move(R));
  }
  return RelationalStructure::validate(std::move(labels), std::move(rels));
}

bool is_normal_operator(const BAO& b, const std::string& name) {
  const OperationTable& f = find_operator(b, name);
  auto bot = bottom(b.lattice);
  if (!bot) fail(ErrorKind::NotAtomic, "lattice has no bottom element");
  bool ok = true;
  for_each_entry(f.carrier, f.arity, [&](long long idx, const std::vector<int>& digits) {
    if (!ok) return;
    for (int d : digits)
      if (d == *bot) {
        if (f.table[std::size_t(idx)] != *bot) ok = false;
        return;
      }
  });
  return ok;
}

bool is_operator_additive(const BAO& b, const std::string& name) {
  const OperationTable& f = find_operator(b, name);
  const Atomization at = atomize(b.lattice);
  const int k = int(at.atoms.size());
  const int m = f.arity;

  // Unflattened check of the defining identity on a powerset: the value at
  // (X_1,...,X_m) must be the union of the values over all atom tuples below
  // the arguments, with the empty union landing on bottom. Quadratic-ish
  // (carrier^m * atoms^m) but exact at every legal table size.
  const auto vals = [&](const std::vector<int>& args) { return f.apply(args); };
  bool ok = true;
  for_each_entry(f.carrier, m, [&](long long idx, const std::vector<int>& digits) {
    if (!ok) return;
    int expected = 0;  // union as an atom mask
    std::vector<int> choice(std::size_t(m), 0);
    bool done = false;
    while (!done) {
      bool below = true;
      for (int i = 0; i < m && below; ++i)
        below = (at.maskOf[std::size_t(digits[std::size_t(i)])] >> choice[std::size_t(i)]) & 1;
      if (below) {
        std::vector<int> args(std::size_t(m), 0);
        for (int i = 0; i < m; ++i) args[std::size_t(i)] = at.atoms[std::size_t(choice[std::size_t(i)])];
        expected |= at.maskOf[std::size_t(vals(args))];
      }
      done = true;
      for (int i = m - 1; i >= 0; --i) {
        if (++choice[std::size_t(i)] < k) {
          done = false;
          break;
        }
        choice[std::size_t(i)] = 0;
      }
    }
    if (at.maskOf[std::size_t(f.table[std::size_t(idx)])] != expected) ok = false;
  });
  return ok;
}

bool check_quasi_complete_operators(const BAO& b) {
  for (const auto& [name, f] : b.operators)
    if (!is_quasi_complete(b.lattice, f).holds) return false;
  return true;
}

GivantReport givant_check(const RelationalFamily& fam, const FilterSpec& fs) {
  validate_family(fam);
  if (fs.index.size != fam.index.size)
    fail(ErrorKind::ValidationError, "filter is over an index set of size " +
                                         std::to_string(fs.index.size) + ", family has " +
                                         std::to_string(fam.index.size));
  if (!fs.isUltra)
    fail(ErrorKind::PreconditionFailed, "givant_check needs an ultrafilter; generator has " +
                                            std::to_string(fs.generator.size()) + " indices");

  GivantReport report;

  // Left side: complex algebra of the ultraproduct of the structures.
  RelationalReducedResult sred = reduced_product(fam, fs);
  report.lhs = complex_algebra(sred.quotient);

  // Right side: completion of the ultraproduct of the member complex
  // algebras, every table transported along the (finite-scale bijective)
  // completion embedding.
  std::vector<BAO> memberBaos;
  for (const auto& m : fam.members) memberBaos.push_back(complex_algebra(m));
  AlgebraFamily afam;
  afam.index = fam.index;
  for (const BAO& B : memberBaos) {
    Algebra a;
    a.poset = B.lattice;
    a.ops = B.operators;
    a.ops.emplace("meet", B.meet);
    a.ops.emplace("join", B.join);
    a.ops.emplace("not", B.complement);
    afam.members.push_back(std::move(a));
  }
  ReducedResult ared = reduced_product(afam, fs);

  const Poset& core = ared.quotient.poset;
  CompletionResult dm = dm_completion(core);
  const int n = core.size();
  if (dm.lattice.size() != n)
    fail(ErrorKind::PreconditionFailed,
         "completion added cuts; the reduced product of complex algebras was not complete");
  report.coreToCompletion = dm.embedding;
  std::vector<int> fromCompletion(std::size_t(n), -1);
  for (int c = 0; c < n; ++c) fromCompletion[std::size_t(dm.embedding[std::size_t(c)])] = c;

  auto transport = [&](const OperationTable& f) {
    std::vector<int> table(f.table.size(), 0);
    for_each_entry(n, f.arity, [&](long long idx, const std::vector<int>& digits) {
      std::vector<int> args(digits.size(), 0);
      for (std::size_t i = 0; i < digits.size(); ++i)
        args[i] = fromCompletion[std::size_t(digits[i])];
      table[std::size_t(idx)] = dm.embedding[std::size_t(f.apply(args))];
    });
    return OperationTable::make(f.arity, n, std::move(table));
  };
  report.rhs.lattice = dm.lattice;
  report.rhs.atomCount = report.lhs.atomCount;
  report.rhs.meet = transport(ared.quotient.ops.at("meet"));
  report.rhs.join = transport(ared.quotient.ops.at("join"));
  report.rhs.complement = transport(ared.quotient.ops.at("not"));
  for (const auto& [name, f] : ared.quotient.ops)
    if (name != "meet" && name != "join" && name != "not")
      report.rhs.operators.emplace(name, transport(f));

  // Canonical map, straight from its definition: a core class is a tuple
  // X = (X_1,...,X_k) of member subsets (canonical representative), and
  //   kappa(X/F) = { u/F : {i : u_i in X_i} in F }
  // read off by walking every tuple u of the full structure product. Left
  // element ids are atom masks over the quotient structure's carrier, whose
  // atom order is exactly the class-id order.
  const int k = fam.index.size;
  std::vector<int> sizes(std::size_t(k), 0);
  for (int i = 0; i < k; ++i) sizes[std::size_t(i)] = fam.members[std::size_t(i)].size();
  std::vector<int> kappa(std::size_t(n), 0);
  for (int c = 0; c < n; ++c) {
    const std::vector<int>& X = ared.classes[std::size_t(c)].representative;
    int mask = 0;
    std::vector<int> u(std::size_t(k), 0);
    long long pid = 0;
    bool done = false;
    while (!done) {
      std::vector<int> S;
      for (int i = 0; i < k; ++i)
        if ((X[std::size_t(i)] >> u[std::size_t(i)]) & 1) S.push_back(i);
      if (fs.contains(S)) mask |= 1 << sred.quotientMap[std::size_t(pid)];
      ++pid;
      done = true;
      for (int i = k - 1; i >= 0; --i) {
        if (++u[std::size_t(i)] < sizes[std::size_t(i)]) {
          done = false;
          break;
        }
        u[std::size_t(i)] = 0;
      }
    }
    kappa[std::size_t(c)] = mask;
  }
  report.canonicalMap.assign(std::size_t(n), -1);
  for (int c = 0; c < n; ++c)
    report.canonicalMap[std::size_t(dm.embedding[std::size_t(c)])] = kappa[std::size_t(c)];

  // Verify: bijection preserving order, boolean operations, and operators.
  const auto& map = report.canonicalMap;
  const BAO& lhs = report.lhs;
  const BAO& rhs = report.rhs;
  bool ok = lhs.lattice.size() == n;
  if (ok) {
    std::vector<bool> hit(std::size_t(n), false);
    for (int x = 0; x < n && ok; ++x) {
      ok = map[std::size_t(x)] >= 0 && map[std::size_t(x)] < n && !hit[std::size_t(map[std::size_t(x)])];
      if (ok) hit[std::size_t(map[std::size_t(x)])] = true;
    }
  }
  for (int x = 0; x < n && ok; ++x)
    for (int y = 0; y < n && ok; ++y) {
      ok = rhs.lattice.leq(x, y) == lhs.lattice.leq(map[std::size_t(x)], map[std::size_t(y)]);
      if (ok)
        ok = map[std::size_t(rhs.meet.apply2(x, y))] ==
                 lhs.meet.apply2(map[std::size_t(x)], map[std::size_t(y)]) &&
             map[std::size_t(rhs.join.apply2(x, y))] ==
                 lhs.join.apply2(map[std::size_t(x)], map[std::size_t(y)]);
    }
  for (int x = 0; x < n && ok; ++x)
    ok = map[std::size_t(rhs.complement.apply1(x))] == lhs.complement.apply1(map[std::size_t(x)]);
  if (ok) {
    auto names = [](const std::map<std::string, OperationTable>& ops) {
      std::vector<std::string> out;
      for (const auto& [name, f] : ops) out.push_back(name);
      return out;
    };
    ok = names(lhs.operators) == names(rhs.operators);
  }
  if (ok)
    for (const auto& [name, g] : rhs.operators) {
      const OperationTable& f = lhs.operators.at(name);
      if (f.arity != g.arity) {
        ok = false;
        break;
      }
      for_each_entry(n, g.arity, [&](long long idx, const std::vector<int>& digits) {
        if (!ok) return;
        std::vector<int> mapped(digits.size(), 0);
        for (std::size_t i = 0; i < digits.size(); ++i) mapped[i] = map[std::size_t(digits[i])];
        ok = map[std::size_t(g.table[std::size_t(idx)])] == f.apply(mapped);
      });
      if (!ok) break;
    }
  report.isIso = ok;
  return report;
}

}  // namespace ultraposet
