#include "ultraposet/order.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <unordered_map>

#include "ultraposet/caps.hpp"

namespace ultraposet {

// ---------------------------------------------------------------------------
// Poset

Poset Poset::validate(const std::vector<std::string>& labels,
                      const std::vector<std::pair<int, int>>& pairs) {
  const int n = int(labels.size());
  if (n == 0) fail(ErrorKind::ValidationError, "carrier must be nonempty");
  {
    std::map<std::string_view, int> seen;
    for (int i = 0; i < n; ++i) {
      auto [it, fresh] = seen.emplace(labels[i], i);
      if (!fresh)
        fail(ErrorKind::DuplicateLabel, "duplicate element label '" + labels[i] + "'");
    }
  }

  std::vector<Bitset> up(n, Bitset(n));
  for (int i = 0; i < n; ++i) up[i].set(i);
  for (auto [a, b] : pairs) {
    if (a < 0 || a >= n || b < 0 || b >= n)
      fail(ErrorKind::UnknownElement, "order pair references element out of range");
    up[a].set(b);
  }

  // Floyd-Warshall closure over bitset rows.
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (up[i].test(k)) up[i] |= up[k];

  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (up[i].test(j) && up[j].test(i))
        fail(ErrorKind::AntisymmetryViolation, "antisymmetry violated: '" + labels[i] +
                                                   "' <= '" + labels[j] + "' and '" +
                                                   labels[j] + "' <= '" + labels[i] + "'");

  return from_closed(labels, std::move(up));
}

Poset Poset::from_closed(std::vector<std::string> labels, std::vector<Bitset> upRows) {
  const int n = int(labels.size());
  if (int(upRows.size()) != n)
    fail(ErrorKind::PreconditionFailed, "relation row count does not match carrier");
  for (int i = 0; i < n; ++i) {
    if (upRows[i].size() != n)
      fail(ErrorKind::PreconditionFailed, "relation row width does not match carrier");
    if (!upRows[i].test(i))
      fail(ErrorKind::PreconditionFailed, "relation is not reflexive");
  }
  Poset p;
  p.labels_ = std::move(labels);
  p.up_ = std::move(upRows);
  p.down_.assign(n, Bitset(n));
  for (int i = 0; i < n; ++i)
    for (int j = p.up_[i].first(); j >= 0; j = p.up_[i].next(j)) p.down_[j].set(i);
  return p;
}

std::uint32_t Poset::full_mask() const {
  const int n = size();
  return n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
}

int Poset::find_label(std::string_view label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  return -1;
}

void Poset::check_element(int x) const {
  if (x < 0 || x >= size())
    fail(ErrorKind::UnknownElement, "element id " + std::to_string(x) + " out of range");
}

bool Poset::check_axioms(std::string* why) const {
  const int n = size();
  auto report = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  for (int i = 0; i < n; ++i)
    if (!up_[i].test(i)) return report("not reflexive at '" + labels_[i] + "'");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (up_[i].test(j) && up_[j].test(i))
        return report("not antisymmetric on '" + labels_[i] + "', '" + labels_[j] + "'");
  for (int i = 0; i < n; ++i)
    for (int j = up_[i].first(); j >= 0; j = up_[i].next(j))
      if (!up_[j].is_subset_of(up_[i]))
        return report("not transitive through '" + labels_[j] + "'");
  return true;
}

std::vector<std::pair<int, int>> Poset::cover_pairs() const {
  const int n = size();
  std::vector<std::pair<int, int>> covers;
  for (int x = 0; x < n; ++x) {
    for (int y = up_[x].first(); y >= 0; y = up_[x].next(y)) {
      if (y == x) continue;
      // y covers x iff nothing lies strictly between.
      Bitset between = up_[x];
      between &= down_[y];
      between.reset(x);
      between.reset(y);
      if (between.none()) covers.emplace_back(x, y);
    }
  }
  return covers;
}

std::vector<int> Poset::linear_extension() const {
  const int n = size();
  std::vector<int> order;
  order.reserve(n);
  Bitset placed(n);
  for (int step = 0; step < n; ++step) {
    for (int x = 0; x < n; ++x) {
      if (placed.test(x)) continue;
      Bitset pending = down_[x];
      pending.reset(x);
      bool ready = true;
      for (int z = pending.first(); z >= 0; z = pending.next(z))
        if (!placed.test(z)) {
          ready = false;
          break;
        }
      if (ready) {
        order.push_back(x);
        placed.set(x);
        break;
      }
    }
  }
  return order;
}

std::vector<int> Poset::maximal_elements() const {
  std::vector<int> out;
  for (int x = 0; x < size(); ++x)
    if (up_[x].count() == 1) out.push_back(x);
  return out;
}

// ---------------------------------------------------------------------------
// OperationTable

long long OperationTable::entry_count(int carrier, int arity) {
  long long total = 1;
  for (int i = 0; i < arity; ++i) {
    if (total > (1LL << 40) / std::max(carrier, 1)) return -1;  // overflow sentinel
    total *= carrier;
  }
  return total;
}

OperationTable OperationTable::make(int arity, int carrier, std::vector<int> table) {
  if (arity < 1) fail(ErrorKind::ArityCarrierMismatch, "operation arity must be >= 1");
  if (carrier < 1) fail(ErrorKind::ArityCarrierMismatch, "operation carrier must be >= 1");
  long long want = entry_count(carrier, arity);
  if (want < 0 || (long long)table.size() != want)
    fail(ErrorKind::ArityCarrierMismatch,
         "operation table has " + std::to_string(table.size()) + " entries, expected " +
             std::to_string(want));
  for (int v : table)
    if (v < 0 || v >= carrier)
      fail(ErrorKind::ArityCarrierMismatch,
           "operation value " + std::to_string(v) + " outside carrier");
  OperationTable op;
  op.arity = arity;
  op.carrier = carrier;
  op.table = std::move(table);
  return op;
}

int OperationTable::apply(std::span<const int> args) const {
  if (int(args.size()) != arity)
    fail(ErrorKind::ArityCarrierMismatch, "expected " + std::to_string(arity) +
                                              " arguments, got " + std::to_string(args.size()));
  std::size_t idx = 0;
  for (int a : args) {
    if (a < 0 || a >= carrier)
      fail(ErrorKind::UnknownElement, "argument " + std::to_string(a) + " outside carrier");
    idx = idx * carrier + std::size_t(a);
  }
  return table[idx];
}

// ---------------------------------------------------------------------------
// Suprema

namespace {

// Least element of the candidate set `cand` (as element ids in bitset form):
// the z in cand below every member. -1 if none.
int least_of(const Poset& p, const Bitset& cand) {
  for (int z = cand.first(); z >= 0; z = cand.next(z))
    if (cand.is_subset_of(p.up(z))) return z;
  return -1;
}

int greatest_of(const Poset& p, const Bitset& cand) {
  for (int z = cand.first(); z >= 0; z = cand.next(z))
    if (cand.is_subset_of(p.down(z))) return z;
  return -1;
}

}  // namespace

SupResult sup(const Poset& p, const std::vector<int>& xs, Direction dir) {
  for (int x : xs) p.check_element(x);
  const int n = p.size();
  Bitset bound(n);
  bound.set_all();
  for (int x : xs) bound &= (dir == Direction::Up ? p.up(x) : p.down(x));
  if (bound.none())
    return {false, -1, dir == Direction::Up ? "no upper bound" : "no lower bound"};
  int z = dir == Direction::Up ? least_of(p, bound) : greatest_of(p, bound);
  if (z < 0)
    return {false, -1,
            dir == Direction::Up ? "no least upper bound" : "no greatest lower bound"};
  return {true, z, ""};
}

std::optional<int> bottom(const Poset& p) {
  for (int x = 0; x < p.size(); ++x)
    if (p.up(x).count() == p.size()) return x;
  return std::nullopt;
}

std::optional<int> top(const Poset& p) {
  for (int x = 0; x < p.size(); ++x)
    if (p.down(x).count() == p.size()) return x;
  return std::nullopt;
}

bool is_complete_lattice(const Poset& p) {
  if (p.size() == 0) return false;
  if (!bottom(p) || !top(p)) return false;
  // With top and bottom present, finite completeness reduces to binary joins
  // and meets existing everywhere.
  for (int x = 0; x < p.size(); ++x)
    for (int y = x + 1; y < p.size(); ++y) {
      Bitset ub = p.up(x);
      ub &= p.up(y);
      if (least_of(p, ub) < 0) return false;
      Bitset lb = p.down(x);
      lb &= p.down(y);
      if (greatest_of(p, lb) < 0) return false;
    }
  return true;
}

SubsetSups SubsetSups::build(const Poset& p) {
  const int n = p.size();
  if (n > 20)
    fail(ErrorKind::CapExceeded,
         "subset-supremum table requires carrier <= 20, got " + std::to_string(n));
  const std::uint32_t full = p.full_mask();
  const std::size_t total = std::size_t(1) << n;

  std::vector<std::uint32_t> upm(n), dnm(n);
  for (int i = 0; i < n; ++i) {
    upm[i] = p.up_mask(i);
    dnm[i] = p.down_mask(i);
  }

  SubsetSups ss;
  ss.n = n;
  ss.supOf.assign(total, -1);
  ss.infOf.assign(total, -1);

  std::vector<std::uint32_t> bound(total);
  bound[0] = full;
  for (std::size_t m = 1; m < total; ++m)
    bound[m] = bound[m & (m - 1)] & upm[std::countr_zero(std::uint32_t(m))];
  for (std::size_t m = 0; m < total; ++m) {
    std::uint32_t cand = bound[m];
    while (cand) {
      int z = std::countr_zero(cand);
      if ((bound[m] & upm[z]) == bound[m]) {
        ss.supOf[m] = z;
        break;
      }
      cand &= cand - 1;
    }
  }

  bound[0] = full;
  for (std::size_t m = 1; m < total; ++m)
    bound[m] = bound[m & (m - 1)] & dnm[std::countr_zero(std::uint32_t(m))];
  for (std::size_t m = 0; m < total; ++m) {
    std::uint32_t cand = bound[m];
    while (cand) {
      int z = std::countr_zero(cand);
      if ((bound[m] & dnm[z]) == bound[m]) {
        ss.infOf[m] = z;
        break;
      }
      cand &= cand - 1;
    }
  }
  return ss;
}

// ---------------------------------------------------------------------------
// Monotonicity

MonotoneReport is_monotone(const Poset& p, const OperationTable& f) {
  if (f.carrier != p.size())
    fail(ErrorKind::ArityCarrierMismatch, "operation carrier does not match poset");
  const int n = p.size();
  const int k = f.arity;
  if (k == 0 || n == 0) return {true, {}, {}};

  // Monotonicity along cover steps in one coordinate implies the general
  // pointwise statement by transitivity.
  std::vector<std::vector<int>> upCovers(n);
  for (auto [x, y] : p.cover_pairs()) upCovers[x].push_back(y);

  std::vector<int> t(k, 0);
  const std::size_t entries = f.table.size();
  for (std::size_t idx = 0; idx < entries; ++idx) {
    // decode idx into digits, leftmost most significant
    std::size_t rest = idx;
    for (int j = k - 1; j >= 0; --j) {
      t[j] = int(rest % n);
      rest /= n;
    }
    const int base = f.table[idx];
    long long stride = 1;
    for (int j = k - 1; j >= 0; --j) {
      for (int y : upCovers[t[j]]) {
        // cover ids need not be numerically larger, so keep the offset signed
        int bumped = f.table[std::size_t((long long)idx + stride * (y - t[j]))];
        if (!p.leq(base, bumped)) {
          MonotoneReport r;
          r.holds = false;
          r.tupleLo = t;
          r.tupleHi = t;
          r.tupleHi[j] = y;
          return r;
        }
      }
      stride *= n;
    }
  }
  return {true, {}, {}};
}

// ---------------------------------------------------------------------------
// Complete additivity (exhaustive, mask-based)

namespace {

std::vector<int> mask_ids(std::uint32_t m) {
  std::vector<int> ids;
  while (m) {
    ids.push_back(std::countr_zero(m));
    m &= m - 1;
  }
  return ids;
}

AdditivityReport make_violation(const Poset& p, const SubsetSups& ss,
                                std::vector<std::uint32_t> subsetMasks, std::vector<int> sups,
                                std::uint32_t imageMask, int fOfSups) {
  AdditivityWitness w;
  for (auto m : subsetMasks) w.subsets.push_back(mask_ids(m));
  w.sups = std::move(sups);
  int is = ss.supOf[imageMask];
  if (is >= 0)
    w.imageSup = {true, is, ""};
  else
    w.imageSup = sup(p, mask_ids(imageMask), Direction::Up);  // recovers the reason
  w.fOfSups = fOfSups;
  AdditivityReport r;
  r.holds = false;
  r.witness = std::move(w);
  return r;
}

AdditivityReport check_additivity_masked(const Poset& p, const OperationTable& f,
                                         bool includeEmpty) {
  if (f.carrier != p.size())
    fail(ErrorKind::ArityCarrierMismatch, "operation carrier does not match poset");

  const Caps caps = Caps::current();
  const int cap = caps.additivity(f.arity);
  if (cap == 0)
    fail(ErrorKind::CapExceeded,
         "additivity check not supported for arity " + std::to_string(f.arity));
  const int n = p.size();
  if (n > cap)
    fail(ErrorKind::CapExceeded, "carrier " + std::to_string(n) +
                                     " exceeds additivity cap " + std::to_string(cap) +
                                     " for arity " + std::to_string(f.arity));
  if (n == 0) return {true, std::nullopt};

  const SubsetSups ss = SubsetSups::build(p);
  const std::uint32_t full = p.full_mask();
  const std::uint32_t start = includeEmpty ? 0u : 1u;
  const std::size_t total = std::size_t(1) << n;

  if (f.arity == 1) {
    std::vector<std::uint32_t> img(total);
    img[0] = 0;
    for (std::uint32_t X = 1; X <= full; ++X)
      img[X] = img[X & (X - 1)] | (std::uint32_t{1} << f.apply1(std::countr_zero(X)));
    for (std::uint32_t X = start; X <= full; ++X) {
      int s = ss.supOf[X];
      if (s < 0) continue;
      int is = ss.supOf[img[X]];
      int fs = f.apply1(s);
      if (is == fs && is >= 0) continue;
      return make_violation(p, ss, {X}, {s}, img[X], fs);
    }
    return {true, std::nullopt};
  }

  if (f.arity == 2) {
    // rowImg[X1*n + b] = { f(a, b) : a in X1 } as an element mask.
    std::vector<std::uint32_t> rowImg(total * n, 0);
    for (std::uint32_t X1 = 1; X1 <= full; ++X1) {
      const int a = std::countr_zero(X1);
      const std::size_t self = std::size_t(X1) * n, rest = std::size_t(X1 & (X1 - 1)) * n;
      for (int b = 0; b < n; ++b)
        rowImg[self + b] = rowImg[rest + b] | (std::uint32_t{1} << f.apply2(a, b));
    }
    std::vector<std::uint32_t> img(total);
    for (std::uint32_t X1 = start; X1 <= full; ++X1) {
      const int s1 = ss.supOf[X1];
      if (s1 < 0) continue;
      const std::uint32_t* rim = rowImg.data() + std::size_t(X1) * n;
      img[0] = 0;
      for (std::uint32_t X2 = start; X2 <= full; ++X2) {
        if (X2) img[X2] = img[X2 & (X2 - 1)] | rim[std::countr_zero(X2)];
        const int s2 = ss.supOf[X2];
        if (s2 < 0) continue;
        int is = ss.supOf[img[X2]];
        int fs = f.apply2(s1, s2);
        if (is == fs && is >= 0) continue;
        return make_violation(p, ss, {X1, X2}, {s1, s2}, img[X2], fs);
      }
    }
    return {true, std::nullopt};
  }

  // arity == 3
  auto at3 = [&](int a, int b, int c) {
    return f.table[(std::size_t(a) * n + b) * n + c];
  };
  // r1[X1][(b,c)] = { f(a,b,c) : a in X1 }
  std::vector<std::uint32_t> r1(total * n * n, 0);
  for (std::uint32_t X1 = 1; X1 <= full; ++X1) {
    const int a = std::countr_zero(X1);
    const std::size_t self = std::size_t(X1) * n * n,
                      rest = std::size_t(X1 & (X1 - 1)) * n * n;
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        r1[self + std::size_t(b) * n + c] =
            r1[rest + std::size_t(b) * n + c] | (std::uint32_t{1} << at3(a, b, c));
  }
  std::vector<std::uint32_t> r2(total * n, 0);
  std::vector<std::uint32_t> img(total);
  for (std::uint32_t X1 = start; X1 <= full; ++X1) {
    const int s1 = ss.supOf[X1];
    if (s1 < 0) continue;
    const std::uint32_t* r1row = r1.data() + std::size_t(X1) * n * n;
    for (std::uint32_t X2 = 1; X2 <= full; ++X2) {
      const int b = std::countr_zero(X2);
      const std::size_t self = std::size_t(X2) * n, rest = std::size_t(X2 & (X2 - 1)) * n;
      for (int c = 0; c < n; ++c)
        r2[self + c] = r2[rest + c] | r1row[std::size_t(b) * n + c];
    }
    for (std::uint32_t X2 = start; X2 <= full; ++X2) {
      const int s2 = ss.supOf[X2];
      if (s2 < 0) continue;
      const std::uint32_t* rim = r2.data() + std::size_t(X2) * n;
      img[0] = 0;
      for (std::uint32_t X3 = start; X3 <= full; ++X3) {
        if (X3) img[X3] = img[X3 & (X3 - 1)] | rim[std::countr_zero(X3)];
        const int s3 = ss.supOf[X3];
        if (s3 < 0) continue;
        int is = ss.supOf[img[X3]];
        int fs = at3(s1, s2, s3);
        if (is == fs && is >= 0) continue;
        return make_violation(p, ss, {X1, X2, X3}, {s1, s2, s3}, img[X3], fs);
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace

AdditivityReport is_completely_additive(const Poset& p, const OperationTable& f) {
  return check_additivity_masked(p, f, /*includeEmpty=*/true);
}

AdditivityReport is_quasi_complete(const Poset& p, const OperationTable& f) {
  return check_additivity_masked(p, f, /*includeEmpty=*/false);
}

// ---------------------------------------------------------------------------
// Unary instances and the instance-wise equivalence

OperationTable unary_instance(const OperationTable& f, const UnaryInstanceSpec& spec) {
  if (f.arity < 2)
    fail(ErrorKind::PositionOutOfRange,
         "unary instances require arity >= 2, got " + std::to_string(f.arity));
  if (spec.position < 1 || spec.position > f.arity)
    fail(ErrorKind::PositionOutOfRange,
         "position " + std::to_string(spec.position) + " not in 1.." + std::to_string(f.arity));
  if (int(spec.fixedArgs.size()) != f.arity - 1)
    fail(ErrorKind::ArityCarrierMismatch,
         "expected " + std::to_string(f.arity - 1) + " fixed arguments, got " +
             std::to_string(spec.fixedArgs.size()));
  for (int a : spec.fixedArgs)
    if (a < 0 || a >= f.carrier)
      fail(ErrorKind::UnknownElement, "fixed argument " + std::to_string(a) + " outside carrier");

  std::vector<int> args(f.arity);
  for (int j = 0, src = 0; j < f.arity; ++j)
    if (j != spec.position - 1) args[j] = spec.fixedArgs[src++];

  std::vector<int> table(f.carrier);
  for (int z = 0; z < f.carrier; ++z) {
    args[spec.position - 1] = z;
    table[z] = f.apply(args);
  }
  return OperationTable::make(1, f.carrier, std::move(table));
}

LemmaReport check_lemma_equivalence(const Poset& p, const OperationTable& f) {
  if (f.arity < 2)
    fail(ErrorKind::PositionOutOfRange,
         "instance-wise equivalence requires arity >= 2, got " + std::to_string(f.arity));
  LemmaReport report;
  report.jointVerdict = is_completely_additive(p, f).holds;

  const int k = f.arity;
  const int n = f.carrier;
  bool allAdditive = true;
  for (int pos = 1; pos <= k; ++pos) {
    std::vector<int> fixed(std::size_t(k - 1), 0);
    while (true) {
      UnaryInstanceSpec spec{pos, fixed};
      OperationTable g = unary_instance(f, spec);
      bool additive = is_completely_additive(p, g).holds;
      allAdditive = allAdditive && additive;
      report.perInstanceVerdicts.push_back({std::move(spec), additive});
      // next fixed tuple, rightmost digit fastest
      int j = k - 2;
      while (j >= 0 && fixed[j] == n - 1) fixed[j--] = 0;
      if (j < 0) break;
      ++fixed[j];
    }
  }
  report.agree = (report.jointVerdict == allAdditive);
  return report;
}

// ---------------------------------------------------------------------------
// Dedekind-MacNeille completion

CompletionResult dm_completion(const Poset& p) {
  const Caps caps = Caps::current();
  const int n = p.size();
  if (n > caps.dmCompletion)
    fail(ErrorKind::CapExceeded, "carrier " + std::to_string(n) +
                                     " exceeds completion cap " +
                                     std::to_string(caps.dmCompletion));

  const std::size_t total = std::size_t(1) << n;
  std::vector<std::uint32_t> dnm(n);
  for (int i = 0; i < n; ++i) dnm[i] = p.down_mask(i);

  // Every cut is the lower-bound set of some subset, and every lower-bound
  // set is a cut, so enumerating lb(T) over all T yields exactly the cuts.
  std::vector<std::uint32_t> lb(total);
  lb[0] = p.full_mask();
  for (std::size_t m = 1; m < total; ++m)
    lb[m] = lb[m & (m - 1)] & dnm[std::countr_zero(std::uint32_t(m))];

  std::vector<std::uint32_t> cuts(lb);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  const int cn = int(cuts.size());
  std::vector<Bitset> up(cn, Bitset(cn));
  for (int i = 0; i < cn; ++i)
    for (int j = 0; j < cn; ++j)
      if ((cuts[i] & ~cuts[j]) == 0) up[i].set(j);

  std::vector<std::string> labels(cn);
  for (int i = 0; i < cn; ++i) labels[i] = label_set(p, mask_ids(cuts[i]));

  CompletionResult out;
  out.lattice = Poset::from_closed(std::move(labels), std::move(up));
  out.cutMasks = cuts;
  out.embedding.resize(n, -1);
  for (int x = 0; x < n; ++x) {
    auto it = std::lower_bound(cuts.begin(), cuts.end(), dnm[x]);
    out.embedding[x] = int(it - cuts.begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

std::string label_set(const Poset& p, const std::vector<int>& ids) {
  std::string out = "{";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += p.label(ids[i]);
  }
  out += "}";
  return out;
}

std::string label_tuple(const Poset& p, const std::vector<int>& ids) {
  std::string out = "(";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ", ";
    out += p.label(ids[i]);
  }
  out += ")";
  return out;
}

}  // namespace ultraposet
