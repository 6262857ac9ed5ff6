// Shared fixture structures. Operation tables are produced with the naive
// oracle sups so the library under test never feeds its own answers back.
#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "ultraposet/order.hpp"

namespace fixtures {

using ultraposet::OperationTable;
using ultraposet::Poset;

inline Poset chain(int k) {
  std::vector<std::string> labels;
  for (int i = 0; i < k; ++i) {
    if (i == 0)
      labels.push_back("0");
    else if (i == k - 1)
      labels.push_back("1");
    else
      labels.push_back(k == 3 ? "m" : "m" + std::to_string(i));
  }
  if (k == 1) labels = {"0"};
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i + 1 < k; ++i) pairs.emplace_back(i, i + 1);
  return Poset::validate(labels, pairs);
}

inline Poset two_chain() { return chain(2); }
inline Poset three_chain() { return chain(3); }

inline Poset two_antichain() { return Poset::validate({"a", "b"}, {}); }

// Powerset of k atoms (a, b, c, ...), element id = atom mask.
inline Poset bool_lattice(int k) {
  const int n = 1 << k;
  std::vector<std::string> labels(n);
  for (int m = 0; m < n; ++m) {
    if (m == 0) {
      labels[m] = "0";
    } else if (m == n - 1) {
      labels[m] = "1";
    } else {
      for (int i = 0; i < k; ++i)
        if (m & (1 << i)) labels[m] += char('a' + i);
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < k; ++i)
      if (!(m & (1 << i))) pairs.emplace_back(m, m | (1 << i));
  return Poset::validate(labels, pairs);
}

inline Poset bool4() { return bool_lattice(2); }
inline Poset bool8() { return bool_lattice(3); }

// Five-element modular, non-distributive lattice: three atoms under a top.
inline Poset m3() {
  return Poset::validate({"0", "p", "q", "r", "1"},
                         {{0, 1}, {0, 2}, {0, 3}, {1, 4}, {2, 4}, {3, 4}});
}

// Five-element non-modular lattice: 0 < a < c < 1 and 0 < b < 1.
inline Poset n5() {
  return Poset::validate({"0", "a", "b", "c", "1"}, {{0, 1}, {1, 3}, {3, 4}, {0, 2}, {2, 4}});
}

// Two minimal, two maximal, complete bipartite between them. Not a lattice.
inline Poset bowtie() {
  return Poset::validate({"a", "b", "c", "d"}, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

inline OperationTable identity_op(const Poset& p) {
  std::vector<int> t(p.size());
  for (int i = 0; i < p.size(); ++i) t[i] = i;
  return OperationTable::make(1, p.size(), std::move(t));
}

inline OperationTable constant_op(const Poset& p, int c) {
  return OperationTable::make(1, p.size(), std::vector<int>(p.size(), c));
}

inline OperationTable const_to_top_op(const Poset& p) {
  int t = oracle::naive_sup(p, [&] {
    std::vector<int> all(p.size());
    for (int i = 0; i < p.size(); ++i) all[i] = i;
    return all;
  }());
  return constant_op(p, t);
}

// Binary join/meet built from the oracle sups; only valid on lattices.
inline OperationTable join_op(const Poset& p) {
  const int n = p.size();
  std::vector<int> t(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[std::size_t(a) * n + b] = oracle::naive_sup(p, {a, b});
  return OperationTable::make(2, n, std::move(t));
}

inline OperationTable meet_op(const Poset& p) {
  const int n = p.size();
  std::vector<int> t(std::size_t(n) * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[std::size_t(a) * n + b] = oracle::naive_inf(p, {a, b});
  return OperationTable::make(2, n, std::move(t));
}

// Complement on bool_lattice(k) (ids are atom masks).
inline OperationTable complement_op(int k) {
  const int n = 1 << k;
  std::vector<int> t(n);
  for (int m = 0; m < n; ++m) t[m] = (n - 1) ^ m;
  return OperationTable::make(1, n, std::move(t));
}

}  // namespace fixtures
