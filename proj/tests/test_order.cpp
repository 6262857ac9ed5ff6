#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "ultraposet/caps.hpp"
#include "ultraposet/order.hpp"

using namespace ultraposet;

namespace {

constexpr ErrorKind kNoThrow = ErrorKind::UsageError;  // sentinel for "didn't throw"

template <typename F>
ErrorKind thrown_kind(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return kNoThrow;
}

// test-local RNG, deliberately distinct from the library generator
struct XorShift {
  std::uint64_t s;
  explicit XorShift(std::uint64_t seed) : s(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  std::uint64_t next() {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    return s;
  }
  int below(int n) { return int(next() % std::uint64_t(n)); }
};

OperationTable random_table(XorShift& rng, int arity, int n) {
  std::vector<int> t(OperationTable::entry_count(n, arity));
  for (auto& v : t) v = rng.below(n);
  return OperationTable::make(arity, n, std::move(t));
}

std::vector<int> ids_upto(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

TEST_CASE("validate: closure of a single edge gives the 2-chain") {
  Poset p = Poset::validate({"a", "b"}, {{0, 1}});
  CHECK(p.leq(0, 0));
  CHECK(p.leq(1, 1));
  CHECK(p.leq(0, 1));
  CHECK_FALSE(p.leq(1, 0));
  CHECK(p.check_axioms());
}

TEST_CASE("validate: 2-cycle is rejected with the cycle named") {
  CHECK(thrown_kind([] { Poset::validate({"a", "b"}, {{0, 1}, {1, 0}}); }) ==
        ErrorKind::AntisymmetryViolation);
  try {
    Poset::validate({"a", "b"}, {{0, 1}, {1, 0}});
  } catch (const Error& e) {
    std::string msg = e.what();
    CHECK(msg.find("'a'") != std::string::npos);
    CHECK(msg.find("'b'") != std::string::npos);
  }
}

TEST_CASE("validate: diamond closure has exactly 9 related pairs") {
  Poset p = Poset::validate({"a", "b", "c", "d"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  auto closed = oracle::closure(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  int count = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      CHECK(p.leq(i, j) == closed[i][j]);
      count += p.leq(i, j) ? 1 : 0;
    }
  CHECK(count == 9);
}

TEST_CASE("validate: duplicate labels and empty carriers are rejected") {
  CHECK(thrown_kind([] { Poset::validate({"a", "a"}, {}); }) == ErrorKind::DuplicateLabel);
  CHECK(thrown_kind([] { Poset::validate({}, {}); }) == ErrorKind::ValidationError);
  CHECK(thrown_kind([] { Poset::validate({"a"}, {{0, 3}}); }) == ErrorKind::UnknownElement);
}

TEST_CASE("validate agrees with the closure oracle on random digraphs") {
  XorShift rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + rng.below(6);
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
    // sample edges only upward in id order so closure is always a poset
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.below(3) == 0) pairs.emplace_back(i, j);
    Poset p = Poset::validate(labels, pairs);
    auto closed = oracle::closure(n, pairs);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(p.leq(i, j) == closed[i][j]);
    CHECK(p.check_axioms());
  }
}

TEST_CASE("cover pairs regenerate the order and match hand counts") {
  Poset d = fixtures::bool4();
  auto covers = d.cover_pairs();
  CHECK(covers.size() == 4);
  Poset rebuilt = Poset::validate(d.labels(), covers);
  CHECK(rebuilt == d);

  Poset c5 = fixtures::chain(5);
  CHECK(c5.cover_pairs().size() == 4);

  for (const Poset& p : {fixtures::m3(), fixtures::n5(), fixtures::bowtie()}) {
    Poset again = Poset::validate(p.labels(), p.cover_pairs());
    CHECK(again == p);
  }
}

TEST_CASE("linear extension is a permutation compatible with the order") {
  for (const Poset& p :
       {fixtures::bool8(), fixtures::m3(), fixtures::n5(), fixtures::bowtie()}) {
    auto ext = p.linear_extension();
    REQUIRE(int(ext.size()) == p.size());
    std::vector<int> pos(p.size(), -1);
    for (int i = 0; i < p.size(); ++i) {
      REQUIRE(ext[i] >= 0);
      REQUIRE(ext[i] < p.size());
      pos[ext[i]] = i;
    }
    for (int i = 0; i < p.size(); ++i) REQUIRE(pos[i] >= 0);
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y)
        if (x != y && p.leq(x, y)) CHECK(pos[x] < pos[y]);
  }
}

TEST_CASE("sup: spec anchor cases") {
  Poset c2 = fixtures::two_chain();
  SUBCASE("empty set yields the bottom element") {
    auto r = sup(c2, {}, Direction::Up);
    REQUIRE(r.exists);
    CHECK(r.value == 0);
  }
  SUBCASE("singletons are their own sup") {
    for (const Poset& p : {fixtures::m3(), fixtures::bowtie()})
      for (int x = 0; x < p.size(); ++x) {
        auto r = sup(p, {x}, Direction::Up);
        REQUIRE(r.exists);
        CHECK(r.value == x);
      }
  }
  SUBCASE("antichain pair has no upper bound") {
    auto r = sup(fixtures::two_antichain(), {0, 1}, Direction::Up);
    CHECK_FALSE(r.exists);
    CHECK(r.reason == "no upper bound");
  }
  SUBCASE("bowtie pair has upper bounds but no least one") {
    auto r = sup(fixtures::bowtie(), {0, 1}, Direction::Up);
    CHECK_FALSE(r.exists);
    CHECK(r.reason == "no least upper bound");
    auto rd = sup(fixtures::bowtie(), {2, 3}, Direction::Down);
    CHECK_FALSE(rd.exists);
    CHECK(rd.reason == "no greatest lower bound");
    auto rd2 = sup(fixtures::two_antichain(), {0, 1}, Direction::Down);
    CHECK_FALSE(rd2.exists);
    CHECK(rd2.reason == "no lower bound");
  }
  SUBCASE("unknown elements are rejected") {
    CHECK(thrown_kind([&] { sup(c2, {5}, Direction::Up); }) == ErrorKind::UnknownElement);
  }
}

TEST_CASE("sup matches the naive oracle on every subset of every fixture") {
  for (const Poset& p : {fixtures::two_chain(), fixtures::three_chain(),
                         fixtures::two_antichain(), fixtures::bool4(), fixtures::m3(),
                         fixtures::n5(), fixtures::bowtie(), fixtures::bool8()}) {
    for (auto& xs : oracle::all_subsets(p.size(), true)) {
      auto up = sup(p, xs, Direction::Up);
      int want = oracle::naive_sup(p, xs);
      CHECK(up.exists == (want >= 0));
      if (up.exists) CHECK(up.value == want);
      auto dn = sup(p, xs, Direction::Down);
      int wantInf = oracle::naive_inf(p, xs);
      CHECK(dn.exists == (wantInf >= 0));
      if (dn.exists) CHECK(dn.value == wantInf);
    }
  }
}

TEST_CASE("supremum uniqueness: the contract is never satisfied twice") {
  for (const Poset& p : {fixtures::bool4(), fixtures::m3(), fixtures::bowtie()}) {
    for (auto& xs : oracle::all_subsets(p.size(), true)) {
      int satisfying = 0;
      for (int z = 0; z < p.size(); ++z) {
        bool ub = true;
        for (int x : xs) ub = ub && p.leq(x, z);
        if (!ub) continue;
        bool leastish = true;
        for (int w = 0; w < p.size(); ++w) {
          bool wub = true;
          for (int x : xs) wub = wub && p.leq(x, w);
          if (wub && !p.leq(z, w)) leastish = false;
        }
        if (leastish) ++satisfying;
      }
      CHECK(satisfying <= 1);
    }
  }
}

TEST_CASE("empty sup exists iff the poset has a least element") {
  for (const Poset& p : {fixtures::two_chain(), fixtures::two_antichain(), fixtures::m3(),
                         fixtures::bowtie()}) {
    auto r = sup(p, {}, Direction::Up);
    auto b = bottom(p);
    CHECK(r.exists == b.has_value());
    if (r.exists) CHECK(r.value == *b);
  }
}

TEST_CASE("SubsetSups table agrees with the oracle") {
  for (const Poset& p : {fixtures::bool8(), fixtures::m3(), fixtures::bowtie()}) {
    auto ss = SubsetSups::build(p);
    for (unsigned m = 0; m < (1u << p.size()); ++m) {
      std::vector<int> xs;
      for (int i = 0; i < p.size(); ++i)
        if (m & (1u << i)) xs.push_back(i);
      CHECK(ss.supOf[m] == oracle::naive_sup(p, xs));
      CHECK(ss.infOf[m] == oracle::naive_inf(p, xs));
    }
  }
}

TEST_CASE("operation table shape validation") {
  CHECK(thrown_kind([] { OperationTable::make(1, 2, {0, 1, 0}); }) ==
        ErrorKind::ArityCarrierMismatch);
  CHECK(thrown_kind([] { OperationTable::make(1, 2, {0, 2}); }) ==
        ErrorKind::ArityCarrierMismatch);
  CHECK(thrown_kind([] { OperationTable::make(0, 2, {}); }) == ErrorKind::ArityCarrierMismatch);
  OperationTable f = OperationTable::make(2, 2, {0, 1, 1, 1});
  CHECK(f.apply({{1, 0}}) == 1);
  CHECK(thrown_kind([&] { f.apply({{1}}); }) == ErrorKind::ArityCarrierMismatch);
  CHECK(thrown_kind([&] { f.apply({{1, 5}}); }) == ErrorKind::UnknownElement);
}

TEST_CASE("monotonicity: anchors and witness validity") {
  Poset b4 = fixtures::bool4();
  CHECK(is_monotone(b4, fixtures::identity_op(b4)).holds);
  CHECK(is_monotone(b4, fixtures::join_op(b4)).holds);

  auto r = is_monotone(b4, fixtures::complement_op(2));
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.tupleLo.size() == 1);
  CHECK(b4.leq(r.tupleLo[0], r.tupleHi[0]));
  CHECK_FALSE(b4.leq(fixtures::complement_op(2).apply1(r.tupleLo[0]),
                     fixtures::complement_op(2).apply1(r.tupleHi[0])));
}

TEST_CASE("monotonicity matches the definition-level oracle") {
  Poset c3 = fixtures::three_chain();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        OperationTable f = OperationTable::make(1, 3, {a, b, c});
        CHECK(is_monotone(c3, f).holds == oracle::naive_monotone(c3, f));
      }

  XorShift rng(7);
  Poset b4 = fixtures::bool4();
  Poset m3 = fixtures::m3();
  for (int trial = 0; trial < 300; ++trial) {
    const Poset& p = trial % 2 ? b4 : m3;
    OperationTable f = random_table(rng, 1 + trial % 2, p.size());
    auto mine = is_monotone(p, f);
    CHECK(mine.holds == oracle::naive_monotone(p, f));
    if (!mine.holds) {
      REQUIRE(mine.tupleLo.size() == std::size_t(f.arity));
      for (int j = 0; j < f.arity; ++j) CHECK(p.leq(mine.tupleLo[j], mine.tupleHi[j]));
      CHECK_FALSE(p.leq(f.apply(mine.tupleLo), f.apply(mine.tupleHi)));
    }
  }
}

TEST_CASE("complete additivity: identity is additive everywhere") {
  for (const Poset& p : {fixtures::two_chain(), fixtures::bool4(), fixtures::m3(),
                         fixtures::bowtie(), fixtures::bool8()})
    CHECK(is_completely_additive(p, fixtures::identity_op(p)).holds);
}

TEST_CASE("complete additivity: constant-to-top on the 2-chain, exact witness") {
  Poset c2 = fixtures::two_chain();
  auto r = is_completely_additive(c2, fixtures::const_to_top_op(c2));
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  const auto& w = *r.witness;
  REQUIRE(w.subsets.size() == 1);
  CHECK(w.subsets[0].empty());          // first bitmask is the empty set
  CHECK(w.sups == std::vector<int>{0});  // sup of the empty set is bottom
  REQUIRE(w.imageSup.exists);
  CHECK(w.imageSup.value == 0);
  CHECK(w.fOfSups == 1);
}

TEST_CASE("complete additivity: meet on M3 fails; witness is first in mask order") {
  Poset m = fixtures::m3();
  OperationTable meet = fixtures::meet_op(m);
  auto r = is_completely_additive(m, meet);
  REQUIRE_FALSE(r.holds);
  REQUIRE(r.witness.has_value());
  const auto& w = *r.witness;
  // ids: 0,p=1,q=2,r=3,1=4. Ascending masks with X1 outermost first hit
  // X1={p}, X2={q,r}: meet(p, q∨r)=p but the image {p∧q, p∧r} sups to 0.
  CHECK(w.subsets[0] == std::vector<int>{1});
  CHECK(w.subsets[1] == std::vector<int>{2, 3});
  CHECK(w.sups == std::vector<int>{1, 4});
  REQUIRE(w.imageSup.exists);
  CHECK(w.imageSup.value == 0);
  CHECK(w.fOfSups == 1);

  // The configuration X1={r}, X2={p,q} is a genuine violation too.
  int s2 = oracle::naive_sup(m, {1, 2});
  CHECK(s2 == 4);
  CHECK(meet.apply2(3, s2) == 3);
  CHECK(oracle::naive_sup(m, {meet.apply2(3, 1), meet.apply2(3, 2)}) == 0);
}

TEST_CASE("additivity checker matches the definition-level oracle") {
  SUBCASE("all unary tables on the 3-chain") {
    Poset c3 = fixtures::three_chain();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c) {
          OperationTable f = OperationTable::make(1, 3, {a, b, c});
          CHECK(is_completely_additive(c3, f).holds == oracle::naive_additive(c3, f, true));
          CHECK(is_quasi_complete(c3, f).holds == oracle::naive_additive(c3, f, false));
        }
  }
  SUBCASE("all binary tables on the 2-chain") {
    Poset c2 = fixtures::two_chain();
    for (int t = 0; t < 16; ++t) {
      OperationTable f =
          OperationTable::make(2, 2, {t & 1, (t >> 1) & 1, (t >> 2) & 1, (t >> 3) & 1});
      CHECK(is_completely_additive(c2, f).holds == oracle::naive_additive(c2, f, true));
      CHECK(is_quasi_complete(c2, f).holds == oracle::naive_additive(c2, f, false));
    }
  }
  SUBCASE("sampled tables on harder posets") {
    XorShift rng(2024);
    Poset b4 = fixtures::bool4();
    Poset m3 = fixtures::m3();
    Poset bt = fixtures::bowtie();
    for (int trial = 0; trial < 200; ++trial) {
      const Poset& p = trial % 3 == 0 ? b4 : (trial % 3 == 1 ? m3 : bt);
      OperationTable f = random_table(rng, 1 + trial % 2, p.size());
      CHECK(is_completely_additive(p, f).holds == oracle::naive_additive(p, f, true));
      CHECK(is_quasi_complete(p, f).holds == oracle::naive_additive(p, f, false));
    }
  }
}

TEST_CASE("additive implies monotone and quasi-complete on sampled tables") {
  XorShift rng(31337);
  for (int trial = 0; trial < 400; ++trial) {
    Poset p = trial % 2 ? fixtures::bool4() : fixtures::three_chain();
    OperationTable f = random_table(rng, 1 + trial % 2, p.size());
    if (is_completely_additive(p, f).holds) {
      CHECK(is_monotone(p, f).holds);
      CHECK(is_quasi_complete(p, f).holds);
    }
  }
}

TEST_CASE("quasi-completeness: anchors") {
  Poset c2 = fixtures::two_chain();
  CHECK(is_quasi_complete(c2, fixtures::const_to_top_op(c2)).holds);
  CHECK_FALSE(is_completely_additive(c2, fixtures::const_to_top_op(c2)).holds);
  CHECK(is_quasi_complete(c2, fixtures::identity_op(c2)).holds);
  CHECK_FALSE(is_quasi_complete(fixtures::bool4(), fixtures::complement_op(2)).holds);
}

TEST_CASE("caps: additivity enumeration limits") {
  auto big = [](int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
    return Poset::validate(labels, {});
  };
  Poset p13 = big(13);
  CHECK(thrown_kind([&] { is_completely_additive(p13, fixtures::identity_op(p13)); }) ==
        ErrorKind::CapExceeded);
  Poset p9 = big(9);
  XorShift rng(1);
  OperationTable f9 = random_table(rng, 2, 9);
  CHECK(thrown_kind([&] { is_completely_additive(p9, f9); }) == ErrorKind::CapExceeded);
  Poset p2 = big(2);
  std::vector<int> t(16, 0);
  CHECK(thrown_kind([&] {
          is_completely_additive(p2, OperationTable::make(4, 2, std::move(t)));
        }) == ErrorKind::CapExceeded);
}

TEST_CASE("caps: ULTRAPOSET_CAPS raises within ceilings") {
  auto big = [](int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i));
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i + 1 < n; ++i) pairs.emplace_back(i, i + 1);
    return Poset::validate(labels, pairs);
  };
  setenv("ULTRAPOSET_CAPS", "add1=14", 1);
  Poset p14 = big(14);
  CHECK(is_completely_additive(p14, fixtures::identity_op(p14)).holds);
  setenv("ULTRAPOSET_CAPS", "add1=5", 1);  // raise-only: default 12 stays
  Poset p12 = big(12);
  CHECK(is_completely_additive(p12, fixtures::identity_op(p12)).holds);
  setenv("ULTRAPOSET_CAPS", "add1=21", 1);  // above the hard ceiling
  CHECK(thrown_kind([&] { is_completely_additive(p12, fixtures::identity_op(p12)); }) ==
        ErrorKind::ConfigOutOfRange);
  setenv("ULTRAPOSET_CAPS", "bogus=3", 1);
  CHECK(thrown_kind([&] { is_completely_additive(p12, fixtures::identity_op(p12)); }) ==
        ErrorKind::ConfigOutOfRange);
  setenv("ULTRAPOSET_CAPS", "add1", 1);
  CHECK(thrown_kind([&] { is_completely_additive(p12, fixtures::identity_op(p12)); }) ==
        ErrorKind::ConfigOutOfRange);
  unsetenv("ULTRAPOSET_CAPS");
}

TEST_CASE("unary instances: table splices") {
  Poset b4 = fixtures::bool4();
  OperationTable join = fixtures::join_op(b4);
  CHECK(unary_instance(join, {1, {0}}).table == fixtures::identity_op(b4).table);
  CHECK(unary_instance(join, {1, {3}}).table == std::vector<int>{3, 3, 3, 3});

  OperationTable meet = fixtures::meet_op(fixtures::m3());
  CHECK(unary_instance(meet, {1, {3}}).table == std::vector<int>{0, 0, 0, 3, 3});

  CHECK(thrown_kind([&] { unary_instance(fixtures::identity_op(b4), {1, {}}); }) ==
        ErrorKind::PositionOutOfRange);
  CHECK(thrown_kind([&] { unary_instance(join, {3, {0}}); }) == ErrorKind::PositionOutOfRange);
  CHECK(thrown_kind([&] { unary_instance(join, {1, {9}}); }) == ErrorKind::UnknownElement);
  CHECK(thrown_kind([&] { unary_instance(join, {1, {0, 0}}); }) ==
        ErrorKind::ArityCarrierMismatch);
  // position splices on both sides
  OperationTable proj1 = OperationTable::make(2, 2, {0, 0, 1, 1});
  CHECK(unary_instance(proj1, {2, {1}}).table == std::vector<int>{1, 1});
  CHECK(unary_instance(proj1, {1, {1}}).table == std::vector<int>{0, 1});
}

TEST_CASE("instance-wise equivalence: anchors") {
  Poset b4 = fixtures::bool4();

  // Meet on a Boolean lattice is normal and distributes over sups, so it is
  // jointly additive with every instance additive.
  auto meetB4 = check_lemma_equivalence(b4, fixtures::meet_op(b4));
  CHECK(meetB4.jointVerdict);
  CHECK(meetB4.agree);
  CHECK(meetB4.perInstanceVerdicts.size() == 8);
  for (const auto& v : meetB4.perInstanceVerdicts) CHECK(v.additive);

  // Join is not normal — join(a, bottom) = a — so with empty subsets
  // quantified both the joint check and the non-bottom-fixed instances fail,
  // in agreement.
  auto joinReport = check_lemma_equivalence(b4, fixtures::join_op(b4));
  CHECK_FALSE(joinReport.jointVerdict);
  CHECK(joinReport.agree);
  CHECK(joinReport.perInstanceVerdicts.size() == 8);
  int additiveInstances = 0;
  for (const auto& v : joinReport.perInstanceVerdicts) {
    if (v.additive) {
      ++additiveInstances;
      CHECK(v.spec.fixedArgs == std::vector<int>{0});  // only bottom-fixed survive
    }
  }
  CHECK(additiveInstances == 2);

  auto meetReport = check_lemma_equivalence(fixtures::m3(), fixtures::meet_op(fixtures::m3()));
  CHECK_FALSE(meetReport.jointVerdict);
  CHECK(meetReport.agree);
  bool someInstanceFails = false;
  for (const auto& v : meetReport.perInstanceVerdicts)
    someInstanceFails = someInstanceFails || !v.additive;
  CHECK(someInstanceFails);

  CHECK(thrown_kind([&] { check_lemma_equivalence(b4, fixtures::identity_op(b4)); }) ==
        ErrorKind::PositionOutOfRange);
}

TEST_CASE("instance-wise equivalence holds across exhaustive and sampled sweeps") {
  // every binary table on the 2-chain
  Poset c2 = fixtures::two_chain();
  for (int t = 0; t < 16; ++t) {
    OperationTable f =
        OperationTable::make(2, 2, {t & 1, (t >> 1) & 1, (t >> 2) & 1, (t >> 3) & 1});
    CHECK(check_lemma_equivalence(c2, f).agree);
  }
  // sampled binary and ternary tables on assorted posets, carriers <= 5
  XorShift rng(555);
  for (int trial = 0; trial < 300; ++trial) {
    Poset p = trial % 3 == 0 ? fixtures::bool4()
              : trial % 3 == 1 ? fixtures::m3()
                               : fixtures::n5();
    OperationTable f = random_table(rng, 2 + (trial % 4 == 0 ? 1 : 0), p.size());
    CHECK(check_lemma_equivalence(p, f).agree);
  }
}

TEST_CASE("completion: chains and finite lattices are already complete") {
  auto c2 = dm_completion(fixtures::two_chain());
  CHECK(c2.lattice.size() == 2);
  CHECK(oracle::naive_order_isomorphic(c2.lattice, fixtures::two_chain()));

  auto m3c = dm_completion(fixtures::m3());
  CHECK(m3c.lattice.size() == 5);
  CHECK(oracle::naive_order_isomorphic(m3c.lattice, fixtures::m3()));

  auto n5c = dm_completion(fixtures::n5());
  CHECK(oracle::naive_order_isomorphic(n5c.lattice, fixtures::n5()));
}

TEST_CASE("completion: the 2-antichain completes to the 4-element Boolean lattice") {
  auto r = dm_completion(fixtures::two_antichain());
  REQUIRE(r.lattice.size() == 4);
  CHECK(r.cutMasks == std::vector<std::uint32_t>{0, 1, 2, 3});
  CHECK(oracle::naive_order_isomorphic(r.lattice, fixtures::bool4()));
}

TEST_CASE("completion: bowtie gains a bottom, a middle, and a top") {
  auto r = dm_completion(fixtures::bowtie());
  CHECK(r.lattice.size() == 7);
  CHECK(oracle::naive_complete_lattice(r.lattice));
}

TEST_CASE("completion invariants: embedding, sups, infs, double density") {
  for (const Poset& p : {fixtures::two_chain(), fixtures::two_antichain(), fixtures::m3(),
                         fixtures::n5(), fixtures::bowtie(), fixtures::three_chain()}) {
    auto r = dm_completion(p);
    const Poset& L = r.lattice;
    CHECK(is_complete_lattice(L));
    CHECK(oracle::naive_complete_lattice(L));
    CHECK(L.check_axioms());

    // order preserved and reflected
    for (int x = 0; x < p.size(); ++x)
      for (int y = 0; y < p.size(); ++y)
        CHECK(p.leq(x, y) == L.leq(r.embedding[x], r.embedding[y]));

    // existing sups and infs are preserved
    for (auto& xs : oracle::all_subsets(p.size(), true)) {
      std::vector<int> mapped;
      for (int x : xs) mapped.push_back(r.embedding[x]);
      int s = oracle::naive_sup(p, xs);
      if (s >= 0) CHECK(oracle::naive_sup(L, mapped) == r.embedding[s]);
      int i = oracle::naive_inf(p, xs);
      if (i >= 0) CHECK(oracle::naive_inf(L, mapped) == r.embedding[i]);
    }

    // double density
    for (int c = 0; c < L.size(); ++c) {
      std::vector<int> below, above;
      for (int x = 0; x < p.size(); ++x) {
        if (L.leq(r.embedding[x], c)) below.push_back(r.embedding[x]);
        if (L.leq(c, r.embedding[x])) above.push_back(r.embedding[x]);
      }
      CHECK(oracle::naive_sup(L, below) == c);
      CHECK(oracle::naive_inf(L, above) == c);
    }
  }
}

TEST_CASE("completion cap") {
  std::vector<std::string> labels;
  for (int i = 0; i < 13; ++i) labels.push_back("e" + std::to_string(i));
  Poset p = Poset::validate(labels, {});
  CHECK(thrown_kind([&] { dm_completion(p); }) == ErrorKind::CapExceeded);
}

TEST_CASE("product-sup law on pairwise products, brute force") {
  // componentwise-order product assembled by hand, independent of module product
  auto productOf = [](const Poset& a, const Poset& b) {
    const int n = a.size() * b.size();
    std::vector<std::string> labels(n);
    std::vector<ultraposet::Bitset> up(n, ultraposet::Bitset(n));
    for (int i = 0; i < n; ++i) {
      labels[i] = "(" + a.label(i / b.size()) + "," + b.label(i % b.size()) + ")";
      for (int j = 0; j < n; ++j)
        if (a.leq(i / b.size(), j / b.size()) && b.leq(i % b.size(), j % b.size()))
          up[i].set(j);
    }
    return Poset::from_closed(labels, up);
  };
  std::vector<Poset> small = {fixtures::two_chain(), fixtures::two_antichain(),
                              fixtures::bool4(), fixtures::three_chain()};
  for (const Poset& a : small)
    for (const Poset& b : small) {
      Poset prod = productOf(a, b);
      REQUIRE(prod.check_axioms());
      for (auto& xs : oracle::all_subsets(prod.size(), true)) {
        std::vector<int> xsA, xsB;
        for (int t : xs) {
          xsA.push_back(t / b.size());
          xsB.push_back(t % b.size());
        }
        int sA = oracle::naive_sup(a, xsA);
        int sB = oracle::naive_sup(b, xsB);
        int sP = oracle::naive_sup(prod, xs);
        if (sA >= 0 && sB >= 0)
          CHECK(sP == sA * b.size() + sB);
        else
          CHECK(sP == -1);
      }
    }
}

TEST_CASE("bottom, top, maximal elements, label rendering") {
  Poset m = fixtures::m3();
  CHECK(bottom(m).value() == 0);
  CHECK(top(m).value() == 4);
  CHECK_FALSE(bottom(fixtures::two_antichain()).has_value());
  CHECK(fixtures::bowtie().maximal_elements() == std::vector<int>{2, 3});
  CHECK(label_set(m, {1, 3}) == "{p, r}");
  CHECK(label_set(m, {}) == "{}");
  CHECK(label_tuple(m, {0, 4}) == "(0, 1)");
  CHECK(m.find_label("q") == 2);
  CHECK(m.find_label("zz") == -1);
}

TEST_CASE("is_complete_lattice agrees with brute force") {
  CHECK(is_complete_lattice(fixtures::bool8()));
  CHECK(is_complete_lattice(fixtures::m3()));
  CHECK(is_complete_lattice(fixtures::n5()));
  CHECK_FALSE(is_complete_lattice(fixtures::bowtie()));
  CHECK_FALSE(is_complete_lattice(fixtures::two_antichain()));
  for (const Poset& p : {fixtures::two_chain(), fixtures::two_antichain(), fixtures::bool4(),
                         fixtures::m3(), fixtures::n5(), fixtures::bowtie()})
    CHECK(is_complete_lattice(p) == oracle::naive_complete_lattice(p));
}
