#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ultraposet/order.hpp"

namespace ultraposet {

/// splitmix64: the 64-bit mixing generator from Steele/Lea/Flood's
/// "Fast splittable pseudorandom number generators" — tiny state, portable,
/// and byte-identical across platforms, which is what makes campaign reports
/// reproducible. `below` is Lemire's unbiased bounded-sampling reduction.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform draw from {0, ..., n-1}; n must be positive.
  std::uint32_t below(std::uint32_t n);

private:
  std::uint64_t state_;
};

/// Random poset: a DAG over 1 <= size <= 12 labeled elements (edges only from
/// smaller to larger index, density itself randomized), closed transitively.
/// Deterministic per seed. Throws SizeOutOfRange.
Poset gen_poset(std::uint64_t seed, int size);

/// The lattice of downward-closed subsets of a random base poset with
/// 1 <= baseSize <= 4 elements, ordered by inclusion — always a distributive
/// lattice. Deterministic per seed. Throws SizeOutOfRange.
Poset gen_downset_lattice(std::uint64_t seed, int baseSize);

/// Random completely additive operation (arity 1 or 2) on a distributive
/// lattice: join-irreducible tuples get random values, everything else is
/// forced by taking joins (empty join = bottom, so any empty coordinate maps
/// to bottom). The input must be a distributive lattice — in practice a
/// gen_downset_lattice output — because only there does the recipe provably
/// yield additive maps; anything else (e.g. M3) throws NotDownsetLattice.
OperationTable gen_additive_op(std::uint64_t seed, const Poset& lattice, int arity);

/// Random monotone operation on an arbitrary poset: values are cumulative
/// maxima of random draws taken along one random maximal chain, so
/// comparability of outputs is guaranteed by construction. Passes is_monotone
/// on every input. Throws SizeOutOfRange / CapExceeded.
OperationTable gen_monotone_op(std::uint64_t seed, const Poset& p, int arity);

enum class CampaignProperty { Theorem1, Lemma1, Quasi, Los, Givant };

const char* to_string(CampaignProperty p);
std::optional<CampaignProperty> campaign_property_from_name(std::string_view name);

struct CampaignConfig {
  std::uint64_t masterSeed = 0;
  int trials = 0;     // >= 0
  int maxCarrier = 8; // 2..8
  int maxIndex = 4;   // 1..4
  int maxArity = 2;   // 1..2
  std::vector<CampaignProperty> properties;
};

struct CampaignFailure {
  CampaignProperty property{};
  int trial = -1;
  std::uint64_t seed = 0;
  std::string detail;  // human-readable witness, element labels included

  bool operator==(const CampaignFailure&) const = default;
};

struct PropertyStats {
  CampaignProperty property{};
  int trials = 0;
  int passes = 0;
  std::vector<CampaignFailure> failures;

  bool operator==(const PropertyStats&) const = default;
};

struct CampaignReport {
  std::vector<PropertyStats> perProperty;  // canonical order: theorem1, lemma1, quasi, los, givant
  double wallTimeSeconds = 0.0;
};

/// Runs `trials` independent trials per selected property. Every trial
/// derives its own seed from masterSeed (one splitmix64 stream per property,
/// salted by the property), builds a random family plus filter within the
/// caps, and asserts the property; failures carry full witnesses. On a
/// correct build every failure list is empty. Throws ConfigOutOfRange.
CampaignReport run_campaign(const CampaignConfig& cfg);

}  // namespace ultraposet
