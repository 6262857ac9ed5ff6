#include "ultraposet/gen.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>
#include <utility>

#include "ultraposet/caps.hpp"
#include "ultraposet/complex.hpp"
#include "ultraposet/error.hpp"
#include "ultraposet/fol.hpp"
#include "ultraposet/product.hpp"

namespace ultraposet {

std::uint32_t SplitMix64::below(std::uint32_t n) {
  if (n == 0) fail(ErrorKind::UsageError, "below(0) has no value to draw");
  std::uint64_t x = std::uint32_t(next());
  std::uint64_t m = x * n;
  auto l = std::uint32_t(m);
  if (l < n) {
    std::uint32_t t = std::uint32_t(-n) % n;
    while (l < t) {
      x = std::uint32_t(next());
      m = x * n;
      l = std::uint32_t(m);
    }
  }
  return std::uint32_t(m >> 32);
}

namespace {

std::vector<std::string> element_labels(int n) {
  std::vector<std::string> labels;
  labels.reserve(std::size_t(n));
  for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
  return labels;
}

int join2(const Poset& p, int a, int b) {
  SupResult r = sup(p, {a, b}, Direction::Up);
  if (!r.exists) fail(ErrorKind::PreconditionFailed, "binary join missing in a lattice");
  return r.value;
}

int meet2(const Poset& p, int a, int b) {
  SupResult r = sup(p, {a, b}, Direction::Down);
  if (!r.exists) fail(ErrorKind::PreconditionFailed, "binary meet missing in a lattice");
  return r.value;
}

/// Join-irreducible elements: non-bottom elements covering exactly one
/// element.
std::vector<int> join_irreducibles(const Poset& p) {
  const int n = p.size();
  std::vector<int> out;
  for (int x = 0; x < n; ++x) {
    int lowerCovers = 0;
    for (int z = 0; z < n; ++z) {
      if (z == x || !p.leq(z, x)) continue;
      bool cover = true;
      for (int w = 0; w < n && cover; ++w)
        cover = w == z || w == x || !(p.leq(z, w) && p.leq(w, x));
      if (cover) ++lowerCovers;
    }
    if (lowerCovers == 1) out.push_back(x);  // bottom has zero lower covers
  }
  return out;
}

bool is_distributive_lattice(const Poset& p) {
  if (!is_complete_lattice(p)) return false;
  const int n = p.size();
  std::vector<int> joinT(std::size_t(n) * std::size_t(n), 0);
  std::vector<int> meetT(std::size_t(n) * std::size_t(n), 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      joinT[std::size_t(x) * std::size_t(n) + std::size_t(y)] = join2(p, x, y);
      meetT[std::size_t(x) * std::size_t(n) + std::size_t(y)] = meet2(p, x, y);
    }
  auto J = [&](int x, int y) { return joinT[std::size_t(x) * std::size_t(n) + std::size_t(y)]; };
  auto M = [&](int x, int y) { return meetT[std::size_t(x) * std::size_t(n) + std::size_t(y)]; };
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (M(x, J(y, z)) != J(M(x, y), M(x, z))) return false;
  return true;
}

}  // namespace

Poset gen_poset(std::uint64_t seed, int size) {
  if (size < 1 || size > 12)
    fail(ErrorKind::SizeOutOfRange, "gen_poset size must be in [1, 12], got " +
                                        std::to_string(size));
  SplitMix64 rng(seed);
  const std::uint32_t density = 20 + rng.below(60);  // percent, randomized per seed
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < size; ++i)
    for (int j = i + 1; j < size; ++j)
      if (rng.below(100) < density) pairs.emplace_back(i, j);
  return Poset::validate(element_labels(size), pairs);
}

Poset gen_downset_lattice(std::uint64_t seed, int baseSize) {
  if (baseSize < 1 || baseSize > 4)
    fail(ErrorKind::SizeOutOfRange, "gen_downset_lattice base size must be in [1, 4], got " +
                                        std::to_string(baseSize));
  Poset base = gen_poset(seed, baseSize);
  const int m = base.size();

  std::vector<int> downsets;
  for (int mask = 0; mask < (1 << m); ++mask) {
    bool closed = true;
    for (int x = 0; x < m && closed; ++x) {
      if (!((mask >> x) & 1)) continue;
      for (int y = 0; y < m && closed; ++y)
        if (base.leq(y, x)) closed = (mask >> y) & 1;
    }
    if (closed) downsets.push_back(mask);
  }

  const int n = int(downsets.size());
  std::vector<std::string> labels;
  labels.reserve(std::size_t(n));
  for (int mask : downsets) {
    std::string l = "{";
    bool first = true;
    for (int x = 0; x < m; ++x)
      if ((mask >> x) & 1) {
        if (!first) l += ",";
        l += base.label(x);
        first = false;
      }
    labels.push_back(l + "}");
  }
  std::vector<Bitset> up(std::size_t(n), Bitset{n});
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if ((downsets[std::size_t(a)] & downsets[std::size_t(b)]) == downsets[std::size_t(a)])
        up[std::size_t(a)].set(b);
  return Poset::from_closed(std::move(labels), std::move(up));
}

OperationTable gen_additive_op(std::uint64_t seed, const Poset& lattice, int arity) {
  if (arity < 1 || arity > 2)
    fail(ErrorKind::SizeOutOfRange, "gen_additive_op arity must be 1 or 2, got " +
                                        std::to_string(arity));
  if (!is_distributive_lattice(lattice))
    fail(ErrorKind::NotDownsetLattice,
         "gen_additive_op needs a distributive (downset) lattice; join-irreducible extension "
         "is only completely additive there");
  const int n = lattice.size();
  const int bot = *bottom(lattice);
  const std::vector<int> ji = join_irreducibles(lattice);
  const int j = int(ji.size());

  SplitMix64 rng(seed);
  // Random value for every tuple of join-irreducibles, then extend by joins:
  // f(x1,..,xk) = join of g over the irreducible tuples below the arguments.
  // Any empty coordinate leaves no tuples, so the empty join lands on bottom.
  std::vector<int> g(std::size_t(OperationTable::entry_count(std::max(j, 1), arity)), bot);
  for (auto& v : g) v = int(rng.below(std::uint32_t(n)));

  std::vector<int> table(std::size_t(OperationTable::entry_count(n, arity)), bot);
  if (arity == 1) {
    for (int x = 0; x < n; ++x) {
      int acc = bot;
      for (int a = 0; a < j; ++a)
        if (lattice.leq(ji[std::size_t(a)], x)) acc = join2(lattice, acc, g[std::size_t(a)]);
      table[std::size_t(x)] = acc;
    }
  } else {
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        int acc = bot;
        for (int a = 0; a < j; ++a) {
          if (!lattice.leq(ji[std::size_t(a)], x)) continue;
          for (int b = 0; b < j; ++b)
            if (lattice.leq(ji[std::size_t(b)], y))
              acc = join2(lattice, acc, g[std::size_t(a) * std::size_t(j) + std::size_t(b)]);
        }
        table[std::size_t(x) * std::size_t(n) + std::size_t(y)] = acc;
      }
  }
  return OperationTable::make(arity, n, std::move(table));
}

OperationTable gen_monotone_op(std::uint64_t seed, const Poset& p, int arity) {
  if (arity < 1 || arity > 3)
    fail(ErrorKind::SizeOutOfRange, "gen_monotone_op arity must be in [1, 3], got " +
                                        std::to_string(arity));
  const int n = p.size();
  const long long total = OperationTable::entry_count(n, arity);
  if (total < 0 || total > Caps::current().tableEntries)
    fail(ErrorKind::CapExceeded, "operation table would exceed the table cap");

  SplitMix64 rng(seed);
  // One random maximal chain bottom-up...
  std::vector<int> chain;
  {
    std::vector<int> minimals;
    for (int x = 0; x < n; ++x)
      if (p.down(x).count() == 1) minimals.push_back(x);
    int cur = minimals[rng.below(std::uint32_t(minimals.size()))];
    chain.push_back(cur);
    for (;;) {
      std::vector<int> covers;
      for (int y = 0; y < n; ++y) {
        if (y == cur || !p.leq(cur, y)) continue;
        bool cover = true;
        for (int w = 0; w < n && cover; ++w)
          cover = w == cur || w == y || !(p.leq(cur, w) && p.leq(w, y));
        if (cover) covers.push_back(y);
      }
      if (covers.empty()) break;
      cur = covers[rng.below(std::uint32_t(covers.size()))];
      chain.push_back(cur);
    }
  }
  const int len = int(chain.size());

  // ...then cumulative maxima of random chain positions along the pointwise
  // order of argument tuples: t <= u pointwise gives pos(t) <= pos(u), and
  // the chain turns the integer order back into the poset order.
  std::vector<int> draw(std::size_t(total), 0);
  for (auto& v : draw) v = int(rng.below(std::uint32_t(len)));

  std::vector<std::vector<int>> tuples(std::size_t(total), std::vector<int>{});
  {
    std::vector<int> digits(std::size_t(arity), 0);
    for (long long idx = 0; idx < total; ++idx) {
      tuples[std::size_t(idx)] = digits;
      for (int i = arity - 1; i >= 0; --i) {
        if (++digits[std::size_t(i)] < n) break;
        digits[std::size_t(i)] = 0;
      }
    }
  }
  std::vector<int> table(std::size_t(total), 0);
  for (long long t = 0; t < total; ++t) {
    int m = draw[std::size_t(t)];
    for (long long s = 0; s < total; ++s) {
      bool below = true;
      for (int i = 0; i < arity && below; ++i)
        below = p.leq(tuples[std::size_t(s)][std::size_t(i)], tuples[std::size_t(t)][std::size_t(i)]);
      if (below) m = std::max(m, draw[std::size_t(s)]);
    }
    table[std::size_t(t)] = chain[std::size_t(m)];
  }
  return OperationTable::make(arity, n, std::move(table));
}

// ---------------------------------------------------------------------------
// Campaign

const char* to_string(CampaignProperty p) {
  switch (p) {
    case CampaignProperty::Theorem1: return "theorem1";
    case CampaignProperty::Lemma1: return "lemma1";
    case CampaignProperty::Quasi: return "quasi";
    case CampaignProperty::Los: return "los";
    case CampaignProperty::Givant: return "givant";
  }
  return "?";
}

std::optional<CampaignProperty> campaign_property_from_name(std::string_view name) {
  for (CampaignProperty p : {CampaignProperty::Theorem1, CampaignProperty::Lemma1,
                             CampaignProperty::Quasi, CampaignProperty::Los,
                             CampaignProperty::Givant})
    if (name == to_string(p)) return p;
  return std::nullopt;
}

namespace {

constexpr std::uint64_t property_salt(CampaignProperty p) {
  switch (p) {
    case CampaignProperty::Theorem1: return 0x54686d3100000001ULL;
    case CampaignProperty::Lemma1: return 0x4c656d3100000002ULL;
    case CampaignProperty::Quasi: return 0x5175617300000003ULL;
    case CampaignProperty::Los: return 0x4c6f730000000004ULL;
    case CampaignProperty::Givant: return 0x476976616e740005ULL;
  }
  return 0;
}

/// A downset lattice with carrier within maxCarrier (>= 2, so base size 1
/// always fits as the fallback).
Poset pick_lattice(SplitMix64& rng, int maxCarrier) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    Poset lat = gen_downset_lattice(rng.next(), 1 + int(rng.below(3)));
    if (lat.size() <= maxCarrier) return lat;
  }
  return gen_downset_lattice(rng.next(), 1);
}

std::string describe_family(const AlgebraFamily& fam, const FilterSpec& fs) {
  std::string out = "family of " + std::to_string(fam.members.size()) + " member(s), carriers";
  for (const auto& m : fam.members) out += " " + std::to_string(m.poset.size());
  out += ", generator {";
  for (std::size_t i = 0; i < fs.generator.size(); ++i)
    out += (i ? "," : "") + std::to_string(fs.generator[i]);
  return out + "}";
}

struct LosFormulaSet {
  std::vector<FormulaPtr> formulas;
  std::vector<std::vector<std::string>> frees;
};

const LosFormulaSet& los_formula_set() {
  static const LosFormulaSet set = [] {
    Signature sig = Signature::standard();
    std::vector<std::string> texts = {
        "forall x. x <= x",
        "exists y. forall x. x <= y",
        "forall x. forall y. ((x <= y & y <= x) -> x = y)",
        "forall x. forall y. (x <= y -> f(x) <= f(y))",
        "exists x. f(x) = x",
        "forall x. x <= f(x)",
        "forall x. (exists y. (x <= y & f(y) <= y))",
        "f(s) <= y | y <= f(s)",
        "exists z. (s <= z & f(z) <= y)",
    };
    LosFormulaSet out;
    for (const auto& t : texts) out.formulas.push_back(parse_formula(t, sig));
    PaperFormulas pf = build_paper_formulas(sig);
    out.formulas.push_back(pf.sigma);
    out.formulas.push_back(pf.phi);
    for (const auto& f : out.formulas) {
      auto names = free_names(f);
      out.frees.emplace_back(names.begin(), names.end());
    }
    return out;
  }();
  return set;
}

using TrialFn = std::function<std::optional<std::string>(SplitMix64&, const CampaignConfig&)>;

std::optional<std::string> theorem1_trial(SplitMix64& rng, const CampaignConfig& cfg) {
  const int k = 1 + int(rng.below(std::uint32_t(cfg.maxIndex)));
  const bool withBinary = cfg.maxArity >= 2 && rng.below(2) == 0;
  AlgebraFamily fam;
  fam.index = IndexSet::make(k);
  for (int i = 0; i < k; ++i) {
    Poset lat = pick_lattice(rng, cfg.maxCarrier);
    Algebra a;
    a.ops.emplace("f", gen_additive_op(rng.next(), lat, 1));
    if (withBinary) a.ops.emplace("g", gen_additive_op(rng.next(), lat, 2));
    a.poset = std::move(lat);
    fam.members.push_back(std::move(a));
  }
  FilterSpec fs = make_filter(fam.index, {int(rng.below(std::uint32_t(k)))});

  // Checker-as-oracle leg of the generator-soundness invariant.
  for (const auto& m : fam.members)
    for (const auto& [name, op] : m.ops)
      if (!is_completely_additive(m.poset, op).holds)
        return "generated op '" + name + "' failed is_completely_additive on member with " +
               std::to_string(m.poset.size()) + " elements";

  Theorem1Report rep = theorem1_check(fam, fs);
  if (!rep.pass) {
    std::string bad;
    for (const auto& [name, ok] : rep.additivityVerdicts)
      if (!ok) bad += (bad.empty() ? "" : ", ") + name;
    return "theorem1 verdict false for {" + bad + "} on " + describe_family(fam, fs);
  }
  return std::nullopt;
}

std::optional<std::string> lemma1_trial(SplitMix64& rng, const CampaignConfig& cfg) {
  Poset p = gen_poset(rng.next(), 1 + int(rng.below(std::uint32_t(cfg.maxCarrier))));
  // The lemma relates joint additivity to its unary instances, so the
  // operation must be at least binary regardless of maxArity.
  const int arity = 2;
  OperationTable f;
  if (rng.below(2) == 0) {
    f = gen_monotone_op(rng.next(), p, arity);
  } else {
    std::vector<int> table(std::size_t(OperationTable::entry_count(p.size(), arity)), 0);
    for (auto& v : table) v = int(rng.below(std::uint32_t(p.size())));
    f = OperationTable::make(arity, p.size(), std::move(table));
  }
  LemmaReport rep = check_lemma_equivalence(p, f);
  if (!rep.agree)
    return "lemma instances disagree with the joint verdict on a " +
           std::to_string(p.size()) + "-element poset (arity " + std::to_string(arity) + ")";
  return std::nullopt;
}

std::optional<std::string> quasi_trial(SplitMix64& rng, const CampaignConfig& cfg) {
  const int k = 1 + int(rng.below(std::uint32_t(cfg.maxIndex)));
  const int arity = 1 + int(rng.below(std::uint32_t(cfg.maxArity)));
  AlgebraFamily fam;
  fam.index = IndexSet::make(k);
  for (int i = 0; i < k; ++i) {
    Poset lat = pick_lattice(rng, cfg.maxCarrier);
    const int n = lat.size();
    const int topEl = *top(lat);
    OperationTable f = gen_additive_op(rng.next(), lat, arity);
    // Three quasi-complete shapes: join with a constant (spoils only the
    // empty set), constant-to-top, or the additive op unchanged.
    const std::uint32_t variant = rng.below(3);
    if (variant == 0) {
      const int c = int(rng.below(std::uint32_t(n)));
      for (auto& v : f.table) v = join2(lat, v, c);
    } else if (variant == 1) {
      for (auto& v : f.table) v = topEl;
    }
    Algebra a;
    a.ops.emplace("f", f);
    a.poset = std::move(lat);
    fam.members.push_back(std::move(a));
  }
  FilterSpec fs = make_filter(fam.index, {int(rng.below(std::uint32_t(k)))});

  for (const auto& m : fam.members)
    if (!is_quasi_complete(m.poset, m.ops.at("f")).holds)
      return "generated op failed is_quasi_complete on member with " +
             std::to_string(m.poset.size()) + " elements";

  Theorem1Report rep = theorem1_check(fam, fs, PreservationMode::QuasiCompleteness);
  if (!rep.pass) return "quasi-mode verdict false on " + describe_family(fam, fs);
  return std::nullopt;
}

std::optional<std::string> los_trial(SplitMix64& rng, const CampaignConfig& cfg) {
  const int k = 1 + int(rng.below(std::uint32_t(cfg.maxIndex)));
  AlgebraFamily fam;
  fam.index = IndexSet::make(k);
  for (int i = 0; i < k; ++i) {
    Poset p = gen_poset(rng.next(), 1 + int(rng.below(std::uint32_t(cfg.maxCarrier))));
    std::vector<int> table(std::size_t(p.size()), 0);
    for (auto& v : table) v = int(rng.below(std::uint32_t(p.size())));
    Algebra a;
    a.ops.emplace("f", OperationTable::make(1, p.size(), std::move(table)));
    a.poset = std::move(p);
    fam.members.push_back(std::move(a));
  }
  const LosFormulaSet& set = los_formula_set();
  const std::size_t which = rng.below(std::uint32_t(set.formulas.size()));
  std::vector<Assignment> assigns(std::size_t(k), Assignment{});
  for (int i = 0; i < k; ++i)
    for (const auto& name : set.frees[which])
      assigns[std::size_t(i)][name] =
          int(rng.below(std::uint32_t(fam.members[std::size_t(i)].poset.size())));

  FilterSpec fs = make_filter(fam.index, {int(rng.below(std::uint32_t(k)))});
  LosReport rep = los_check(fam, fs, set.formulas[which], assigns);
  if (!rep.agree)
    return "los disagreement for formula '" + print_formula(set.formulas[which]) + "' on " +
           describe_family(fam, fs);

  // |J| > 1 coverage: a non-ultra filter is informational for los_check, but
  // the quotient must still collapse onto the subfamily product.
  if (k >= 2) {
    int a = int(rng.below(std::uint32_t(k)));
    int b = int(rng.below(std::uint32_t(k)));
    if (a == b) b = (b + 1) % k;
    FilterSpec wide = make_filter(fam.index, {a, b});
    los_check(fam, wide, set.formulas[which], assigns);
    ReducedResult red = reduced_product(fam, wide);
    if (!(red.quotient.poset == red.subProduct.product.poset &&
          red.quotient.ops == red.subProduct.product.ops))
      return "non-ultra quotient failed to collapse onto the subfamily product on " +
             describe_family(fam, wide);
  }
  return std::nullopt;
}

std::optional<std::string> givant_trial(SplitMix64& rng, const CampaignConfig& cfg) {
  // Kept within the completion and table caps: carriers <= 3 and a total of
  // at most 6 base elements across the family.
  const int k = 1 + int(rng.below(std::uint32_t(std::min(cfg.maxIndex, 3))));
  std::vector<int> carriers(std::size_t(k), 1);
  int budget = 6;
  for (int i = 0; i < k; ++i) {
    const int maxHere = std::min(3, budget - (k - 1 - i));  // leave 1 per remaining member
    carriers[std::size_t(i)] = 1 + int(rng.below(std::uint32_t(maxHere)));
    budget -= carriers[std::size_t(i)];
  }
  RelationalFamily fam;
  fam.index = IndexSet::make(k);
  for (int i = 0; i < k; ++i) {
    const int c = carriers[std::size_t(i)];
    Relation e{2, {}};
    const std::uint32_t density = 20 + rng.below(70);
    for (int x = 0; x < c; ++x)
      for (int y = 0; y < c; ++y)
        if (rng.below(100) < density) e.tuples.insert({x, y});
    fam.members.push_back(RelationalStructure::validate(element_labels(c), {{"e", e}}));
  }
  FilterSpec fs = make_filter(fam.index, {int(rng.below(std::uint32_t(k)))});
  GivantReport rep = givant_check(fam, fs);
  if (!rep.isIso) {
    std::string out = "canonical map is not an isomorphism for carriers";
    for (int c : carriers) out += " " + std::to_string(c);
    return out + ", generator {" + std::to_string(fs.generator[0]) + "}";
  }
  return std::nullopt;
}

TrialFn trial_for(CampaignProperty p) {
  switch (p) {
    case CampaignProperty::Theorem1: return theorem1_trial;
    case CampaignProperty::Lemma1: return lemma1_trial;
    case CampaignProperty::Quasi: return quasi_trial;
    case CampaignProperty::Los: return los_trial;
    case CampaignProperty::Givant: return givant_trial;
  }
  fail(ErrorKind::UsageError, "unknown campaign property");
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& cfg) {
  if (cfg.trials < 0 || cfg.trials > 1000000)
    fail(ErrorKind::ConfigOutOfRange, "trials must be in [0, 1000000], got " +
                                          std::to_string(cfg.trials));
  if (cfg.maxCarrier < 2 || cfg.maxCarrier > 8)
    fail(ErrorKind::ConfigOutOfRange, "maxCarrier must be in [2, 8], got " +
                                          std::to_string(cfg.maxCarrier));
  if (cfg.maxIndex < 1 || cfg.maxIndex > 4)
    fail(ErrorKind::ConfigOutOfRange, "maxIndex must be in [1, 4], got " +
                                          std::to_string(cfg.maxIndex));
  if (cfg.maxArity < 1 || cfg.maxArity > 2)
    fail(ErrorKind::ConfigOutOfRange, "maxArity must be in [1, 2], got " +
                                          std::to_string(cfg.maxArity));

  const auto start = std::chrono::steady_clock::now();
  CampaignReport report;
  for (CampaignProperty p : {CampaignProperty::Theorem1, CampaignProperty::Lemma1,
                             CampaignProperty::Quasi, CampaignProperty::Los,
                             CampaignProperty::Givant}) {
    if (std::find(cfg.properties.begin(), cfg.properties.end(), p) == cfg.properties.end())
      continue;
    PropertyStats stats;
    stats.property = p;
    TrialFn fn = trial_for(p);
    SplitMix64 seeds(cfg.masterSeed ^ property_salt(p));
    for (int t = 0; t < cfg.trials; ++t) {
      const std::uint64_t trialSeed = seeds.next();
      SplitMix64 rng(trialSeed);
      ++stats.trials;
      std::optional<std::string> witness;
      try {
        witness = fn(rng, cfg);
      } catch (const std::exception& e) {
        witness = std::string("unexpected exception: ") + e.what();
      }
      if (witness)
        stats.failures.push_back({p, t, trialSeed, *witness});
      else
        ++stats.passes;
    }
    report.perProperty.push_back(std::move(stats));
  }
  report.wallTimeSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ultraposet
