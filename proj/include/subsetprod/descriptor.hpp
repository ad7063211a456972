#pragma once

#include <optional>
#include <string>
#include <variant>

#include "subsetprod/groups/classgroup.hpp"
#include "subsetprod/groups/curve.hpp"
#include "subsetprod/groups/gl2.hpp"
#include "subsetprod/groups/zn.hpp"

namespace subsetprod {

using AnyGroup = std::variant<ZnGroup, CurveGroup<u64>, CurveGroup<BigInt>, ClassGroup<i128>, ClassGroup<BigInt>, GL2Group>;

// Class groups with |D| below this use 128-bit form arithmetic.
inline const BigInt kSmallDiscriminantBound = BigInt(1) << 60;

// Parses `zn:<n>`, `curve:<p>`, `cl:<D>`, `gl2:<p>`. Integers accept a
// `2^e+c` shorthand. `order` overrides or supplies #G (e.g. class numbers
// past the enumeration bound).
inline AnyGroup parse_group(const std::string& desc, std::optional<BigInt> order = std::nullopt) {
  auto colon = desc.find(':');
  if (colon == std::string::npos) throw UsageError("group descriptor must look like kind:value, got '" + desc + "'");
  const std::string kind = desc.substr(0, colon);
  const BigInt value = parse_big(desc.substr(colon + 1));
  auto as_u64 = [&](const char* what) {
    if (value <= 0 || bit_length(value) > 64) throw UsageError(std::string(what) + " must be a positive 64-bit integer");
    return static_cast<u64>(value);
  };
  if (kind == "zn") return ZnGroup(as_u64("zn modulus"));
  if (kind == "gl2") return GL2Group(as_u64("gl2 prime"));
  if (kind == "curve") {
    if (value > 0 && bit_length(value) <= 62) {
      u64 p = static_cast<u64>(value);
      CurveGroup<u64> probe(p);  // validates p before the order computation
      return CurveGroup<u64>(p, order ? order : std::optional<BigInt>(BigInt(curve_order(p))));
    }
    return CurveGroup<BigInt>(value, order);
  }
  if (kind == "cl") {
    if (value >= 0) throw UsageError("cl: discriminant must be negative");
    if (!order && -value <= kClassNumberBound) order = BigInt(class_number(static_cast<i64>(value)));
    if (-value < kSmallDiscriminantBound) return ClassGroup<i128>(from_big<i128>(value), order);
    return ClassGroup<BigInt>(value, order);
  }
  throw UsageError("unknown group kind '" + kind + "' (expected zn, curve, cl, gl2)");
}

}  // namespace subsetprod
