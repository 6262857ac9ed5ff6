#include "ultraposet/caps.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <string_view>

#include "ultraposet/error.hpp"

namespace ultraposet {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::AntisymmetryViolation: return "AntisymmetryViolation";
    case ErrorKind::DuplicateLabel: return "DuplicateLabel";
    case ErrorKind::UnknownElement: return "UnknownElement";
    case ErrorKind::ArityCarrierMismatch: return "ArityCarrierMismatch";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::PositionOutOfRange: return "PositionOutOfRange";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::UnboundName: return "UnboundName";
    case ErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ErrorKind::EmptyGenerator: return "EmptyGenerator";
    case ErrorKind::OutOfRangeIndex: return "OutOfRangeIndex";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::NotAtomic: return "NotAtomic";
    case ErrorKind::NotDownsetLattice: return "NotDownsetLattice";
    case ErrorKind::SizeOutOfRange: return "SizeOutOfRange";
    case ErrorKind::ConfigOutOfRange: return "ConfigOutOfRange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::UsageError: return "UsageError";
  }
  return "Error";
}

namespace {

// Hard ceilings; the env var can raise defaults but never past these.
constexpr int kMaxAdd1 = 20, kMaxAdd2 = 12, kMaxAdd3 = 6;
constexpr int kMaxDm = 20, kMaxIso = 256, kMaxComplex = 8;
constexpr int kMaxProduct = 200000;
constexpr long long kMaxTable = 1LL << 26;

long long parse_ll(std::string_view v, std::string_view key) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || out < 0)
    fail(ErrorKind::ConfigOutOfRange,
         "ULTRAPOSET_CAPS: bad value for '" + std::string(key) + "': " + std::string(v));
  return out;
}

void raise_to(int& slot, long long want, long long ceiling, std::string_view key) {
  if (want > ceiling)
    fail(ErrorKind::ConfigOutOfRange, "ULTRAPOSET_CAPS: " + std::string(key) + "=" +
                                          std::to_string(want) + " exceeds hard ceiling " +
                                          std::to_string(ceiling));
  if (want > slot) slot = int(want);
}

}  // namespace

Caps Caps::current() {
  Caps caps;
  const char* env = std::getenv("ULTRAPOSET_CAPS");
  if (!env || !*env) return caps;

  std::string_view rest(env);
  while (!rest.empty()) {
    size_t comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;

    size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      fail(ErrorKind::ConfigOutOfRange,
           "ULTRAPOSET_CAPS: expected key=value, got '" + std::string(item) + "'");
    std::string_view key = item.substr(0, eq);
    long long val = parse_ll(item.substr(eq + 1), key);

    if (key == "add1")
      raise_to(caps.additivity1, val, kMaxAdd1, key);
    else if (key == "add2")
      raise_to(caps.additivity2, val, kMaxAdd2, key);
    else if (key == "add3")
      raise_to(caps.additivity3, val, kMaxAdd3, key);
    else if (key == "dm")
      raise_to(caps.dmCompletion, val, kMaxDm, key);
    else if (key == "product")
      raise_to(caps.productCarrier, val, kMaxProduct, key);
    else if (key == "iso")
      raise_to(caps.isoCarrier, val, kMaxIso, key);
    else if (key == "cm")
      raise_to(caps.complexCarrier, val, kMaxComplex, key);
    else if (key == "table") {
      if (val > kMaxTable)
        fail(ErrorKind::ConfigOutOfRange, "ULTRAPOSET_CAPS: table exceeds hard ceiling");
      if (val > caps.tableEntries) caps.tableEntries = val;
    } else {
      fail(ErrorKind::ConfigOutOfRange,
           "ULTRAPOSET_CAPS: unknown key '" + std::string(key) + "'");
    }
  }
  return caps;
}

}  // namespace ultraposet
