#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace ultraposet {

/// Fixed-size dynamic bitset sized for poset rows (carriers up to a few
/// thousand elements). Word-parallel intersection/union is what the order
/// checks lean on; everything else is a convenience.
class Bitset {
public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), w_((n + 63) / 64, 0) {}

  int size() const { return n_; }

  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

  void set_all() {
    for (auto& w : w_) w = ~std::uint64_t(0);
    trim();
  }
  void clear() {
    for (auto& w : w_) w = 0;
  }

  int count() const {
    int c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool any() const {
    for (auto w : w_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  /// Index of the lowest set bit, or -1.
  int first() const {
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k]) return int(k * 64 + std::countr_zero(w_[k]));
    return -1;
  }

  /// Next set bit at index > i, or -1.
  int next(int i) const {
    int k = (i + 1) >> 6;
    if (k >= int(w_.size())) return -1;
    std::uint64_t w = w_[k] & (~std::uint64_t(0) << ((i + 1) & 63));
    while (true) {
      if (w) return k * 64 + std::countr_zero(w);
      if (++k >= int(w_.size())) return -1;
      w = w_[k];
    }
  }

  Bitset& operator&=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] &= o.w_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] |= o.w_[k];
    return *this;
  }

  bool is_subset_of(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & ~o.w_[k]) return false;
    return true;
  }

  bool intersects(const Bitset& o) const {
    assert(n_ == o.n_);
    for (std::size_t k = 0; k < w_.size(); ++k)
      if (w_[k] & o.w_[k]) return true;
    return false;
  }

  bool operator==(const Bitset&) const = default;

  std::vector<int> to_ids() const {
    std::vector<int> ids;
    for (int i = first(); i >= 0; i = next(i)) ids.push_back(i);
    return ids;
  }

  /// Low 32 bits as a mask; valid only when size() <= 32.
  std::uint32_t low_mask() const {
    assert(n_ <= 32);
    return w_.empty() ? 0u : std::uint32_t(w_[0]);
  }

private:
  void trim() {
    if (n_ & 63) w_.back() &= (~std::uint64_t(0)) >> (64 - (n_ & 63));
  }

  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

}  // namespace ultraposet
