#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subsetprod/integer.hpp"

namespace subsetprod::harness {

using subsetprod::to_string;

enum class RowFamily { Curve, ClassGroup, GL2 };

// One row of the published comparison table.
struct PublishedRow {
  RowFamily family;
  std::string label;       // display name
  std::string descriptor;  // group descriptor understood by parse_group
  double log2n;            // as printed (2 decimals)
  unsigned k;
  double d;
  double exp_c;
  double exp_rho;
  double obs_c;
  double obs_rho;
  std::optional<std::string> external_order;  // class numbers past the enumeration bound
};

namespace detail {

struct GroupSpec {
  RowFamily family;
  const char* label;
  const char* descriptor;
  double log2n;
  const char* external_order;
  struct Cell {
    unsigned k;
    double d, exp_c, exp_rho, obs_c, obs_rho;
  } cells[3];
};

// Class numbers of the orders of discriminant 1 - 2^e, e = 40 .. 80.
inline const GroupSpec kGroups[] = {
    {RowFamily::Curve, "E/F_{2^20+7}", "curve:1048583", 20.00, nullptr,
     {{40, 2.00, 3.00, 3144, 3.00, 3162}, {60, 3.00, 2.00, 2568, 2.01, 2581}, {80, 4.00, 2.00, 2567, 2.01, 2565}}},
    {RowFamily::Curve, "E/F_{2^24+43}", "curve:16777259", 24.00, nullptr,
     {{48, 2.00, 3.00, 12577, 3.02, 12790}, {72, 3.00, 2.00, 10269, 2.03, 10381}, {96, 4.00, 2.00, 10268, 2.00, 10257}}},
    {RowFamily::Curve, "E/F_{2^28+3}", "curve:268435459", 28.00, nullptr,
     {{56, 2.00, 3.00, 50300, 2.95, 49371}, {84, 3.00, 2.00, 41070, 2.02, 41837}, {112, 4.00, 2.00, 41069, 1.98, 40508}}},
    {RowFamily::Curve, "E/F_{2^32+15}", "curve:4294967311", 32.00, nullptr,
     {{64, 2.00, 3.00, 201196, 3.06, 205228},
      {96, 3.00, 2.00, 164276, 1.96, 160626},
      {128, 4.00, 2.00, 164276, 2.04, 169595}}},
    {RowFamily::Curve, "E/F_{2^36+31}", "curve:68719476767", 36.00, nullptr,
     {{72, 2.00, 3.00, 804776, 2.95, 796781},
      {108, 3.00, 2.00, 657097, 2.00, 655846},
      {144, 4.00, 2.00, 657097, 1.98, 657097}}},
    {RowFamily::Curve, "E/F_{2^40+15}", "curve:1099511627791", 40.00, nullptr,
     {{80, 2.00, 3.00, 3219106, 2.90, 3120102},
      {120, 3.00, 2.00, 2628390, 1.97, 2604591},
      {160, 4.00, 2.00, 2628390, 2.06, 2682827}}},
    {RowFamily::ClassGroup, "Cl(1-2^40)", "cl:-1099511627775", 19.07, "549632",
     {{40, 2.10, 2.52, 2088, 2.44, 2082}, {60, 3.15, 2.00, 1859, 2.02, 1845}, {80, 4.20, 2.00, 1858, 2.01, 1863}}},
    {RowFamily::ClassGroup, "Cl(1-2^48)", "cl:-281474976710655", 23.66, "13295104",
     {{48, 2.03, 2.79, 10800, 2.75, 10662}, {72, 3.04, 2.00, 9140, 1.97, 8938}, {96, 4.06, 2.00, 9140, 1.99, 9079}}},
    {RowFamily::ClassGroup, "Cl(1-2^56)", "cl:-72057594037927935", 27.54, "195810048",
     {{56, 2.03, 2.73, 40976, 2.69, 40512}, {84, 3.05, 2.00, 35076, 2.06, 36756}, {112, 4.07, 2.00, 35076, 1.98, 35342}}},
    {RowFamily::ClassGroup, "Cl(1-2^64)", "cl:-18446744073709551615", 30.91, "2020442112",
     {{64, 2.07, 2.47, 125233, 2.59, 131651},
      {96, 3.11, 2.00, 112671, 1.98, 111706},
      {128, 4.14, 2.00, 112671, 1.99, 111187}}},
    {RowFamily::ClassGroup, "Cl(1-2^72)", "cl:-4722366482869645213695", 35.38, "44644884480",
     {{72, 2.04, 2.65, 609616, 2.60, 598222},
      {108, 3.05, 2.00, 529634, 2.00, 534639},
      {144, 4.07, 2.00, 529634, 2.00, 532560}}},
    {RowFamily::ClassGroup, "Cl(1-2^80)", "cl:-1208925819614629174706175", 39.59, "830133697536",
     {{80, 2.02, 2.76, 2680464, 2.80, 2793750},
      {120, 3.03, 2.00, 2283831, 2.01, 2318165},
      {160, 4.04, 2.00, 2283831, 2.04, 2364724}}},
    {RowFamily::GL2, "GL2(F_37)", "gl2:37", 20.80, nullptr,
     {{42, 2.02, 2.87, 4053, 2.84, 4063}, {62, 2.98, 2.00, 3384, 1.99, 3358}, {84, 4.04, 2.00, 3384, 1.97, 3388}}},
    {RowFamily::GL2, "GL2(F_67)", "gl2:67", 24.24, nullptr,
     {{48, 1.98, 3.18, 14087, 3.08, 13804}, {72, 2.97, 2.00, 11168, 2.10, 11590}, {96, 3.96, 2.00, 11167, 2.01, 11167}}},
    {RowFamily::GL2, "GL2(F_131)", "gl2:131", 28.12, nullptr,
     {{56, 1.99, 3.09, 53251, 3.03, 52070}, {84, 2.99, 2.00, 42851, 1.94, 42019}, {112, 3.98, 2.00, 42851, 1.98, 42146}}},
    {RowFamily::GL2, "GL2(F_257)", "gl2:257", 32.02, nullptr,
     {{64, 2.00, 3.01, 202769, 3.03, 204827},
      {96, 3.00, 2.00, 165237, 2.02, 165742},
      {128, 4.00, 2.00, 165237, 2.00, 165619}}},
    // printed as F_511; 511 is not prime and p = 521 reproduces the row
    {RowFamily::GL2, "GL2(F_521)", "gl2:521", 36.10, nullptr,
     {{72, 1.99, 3.07, 842191, 3.18, 886141},
      {108, 2.99, 2.00, 679748, 1.97, 668416},
      {144, 3.99, 2.00, 679747, 2.04, 703877}}},
    {RowFamily::GL2, "GL2(F_1031)", "gl2:1031", 40.04, nullptr,
     {{80, 2.00, 3.03, 3276128, 2.99, 3243562},
      {120, 3.00, 2.00, 2663155, 2.02, 2677122},
      {160, 4.00, 2.00, 2663154, 2.08, 2708512}}},
};

}  // namespace detail

inline std::vector<PublishedRow> published_rows() {
  std::vector<PublishedRow> out;
  for (const auto& g : detail::kGroups) {
    for (const auto& c : g.cells) {
      PublishedRow r{g.family, g.label, g.descriptor, g.log2n, c.k, c.d, c.exp_c, c.exp_rho, c.obs_c, c.obs_rho,
                     std::nullopt};
      if (g.external_order) r.external_order = g.external_order;
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline const char* to_string(RowFamily f) {
  switch (f) {
    case RowFamily::Curve: return "curve";
    case RowFamily::ClassGroup: return "class";
    case RowFamily::GL2: return "gl2";
  }
  return "?";
}

}  // namespace subsetprod::harness
