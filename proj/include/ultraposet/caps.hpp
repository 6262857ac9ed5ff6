#pragma once

#include <cstdint>

namespace ultraposet {

/// Enumeration caps for the exhaustive checks. Defaults keep every check at
/// desk scale; the ULTRAPOSET_CAPS environment variable (comma-separated
/// key=value list, e.g. "add1=14,dm=14") may raise them up to hard ceilings.
/// Raised caps can be slow; they never lower a default.
struct Caps {
  int additivity1 = 12;  // key add1, ceiling 20
  int additivity2 = 8;   // key add2, ceiling 12
  int additivity3 = 5;   // key add3, ceiling 6
  int dmCompletion = 12;         // key dm, ceiling 20
  int productCarrier = 4096;     // key product, ceiling 200000
  int isoCarrier = 64;           // key iso, ceiling 256
  int complexCarrier = 6;        // key cm, ceiling 8
  long long tableEntries = 1 << 22;  // key table, ceiling 1<<26

  int additivity(int arity) const {
    switch (arity) {
      case 1: return additivity1;
      case 2: return additivity2;
      case 3: return additivity3;
      default: return 0;  // arity >= 4 is never enumerable
    }
  }

  /// Defaults merged with the ULTRAPOSET_CAPS environment variable.
  /// Re-reads the environment on every call; calls are cheap and all
  /// operations stay pure functions of input + environment.
  static Caps current();
};

}  // namespace ultraposet
